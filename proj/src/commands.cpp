#include "diqkd/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "diqkd/postprocessing.hpp"
#include "diqkd/session.hpp"
#include "diqkd/stats_bounds.hpp"
#include "diqkd/transcript.hpp"
#include "json.hpp"

namespace diqkd::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Full-precision doubles so reports and CSVs round-trip and stay
// byte-stable across runs.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* status_name(security::KeyStatus s) {
  switch (s) {
    case security::KeyStatus::Feasible:
      return "feasible";
    case security::KeyStatus::ChshSampleInsufficient:
      return "chsh_sample_insufficient";
    case security::KeyStatus::Infeasible:
    default:
      return "infeasible";
  }
}

const char* reason_name(protocol::AbortReason r) {
  switch (r) {
    case protocol::AbortReason::ChshLow:
      return "chsh_low";
    case protocol::AbortReason::QberHigh:
      return "qber_high";
    case protocol::AbortReason::EtaLow:
      return "eta_low";
    case protocol::AbortReason::None:
    default:
      return "none";
  }
}

json budget_json(const security::EpsilonBudget& b) {
  return json{{"eps_q", b.eps_q},
              {"eps_ucr", b.eps_ucr},
              {"eps_pa", b.eps_pa},
              {"eps_cstar", b.eps_cstar},
              {"eps_chsh", b.eps_chsh}};
}

json params_json(const security::ProtocolParams& p) {
  json j{{"m_x", p.m_x},       {"m_z", p.m_z},         {"m_j", p.m_j},
         {"S_tol", p.s_tol},   {"Q_tol", p.q_tol},     {"eta_tol", p.eta_tol},
         {"eps_sec", p.eps_sec}, {"eps_cor", p.eps_cor}, {"ell", p.ell}};
  j["leak_EC"] = p.leak_ec ? json(*p.leak_ec) : json("auto");
  if (p.eta_observed) j["eta_observed"] = *p.eta_observed;
  return j;
}

json report_json(const security::SecurityReport& rep) {
  return json{{"status", status_name(rep.status)},
              {"key_length", rep.key_length},
              {"secret_fraction", rep.secret_fraction},
              {"raw_bits", rep.raw_bits},
              {"xi", rep.xi},
              {"zeta", rep.zeta},
              {"mu", rep.mu},
              {"S_hat", rep.s_hat},
              {"Q_hat", rep.q_hat},
              {"leak_EC", rep.leak_ec},
              {"penalty_bits", rep.penalty_bits},
              {"zeta_eta", rep.zeta_eta},
              {"budget", budget_json(rep.budget)}};
}

void print_report(const security::SecurityReport& rep, std::ostream& out) {
  out << "status           " << status_name(rep.status) << "\n";
  out << "key_length       " << rep.key_length << "\n";
  out << "secret_fraction  " << fmt(rep.secret_fraction) << "\n";
  out << "raw_bits         " << fmt(rep.raw_bits) << "\n";
  out << "xi               " << fmt(rep.xi) << "\n";
  out << "zeta             " << fmt(rep.zeta) << "\n";
  out << "mu               " << fmt(rep.mu) << "\n";
  out << "S_hat            " << fmt(rep.s_hat) << "\n";
  out << "Q_hat            " << fmt(rep.q_hat) << "\n";
  out << "leak_EC          " << fmt(rep.leak_ec) << "\n";
  out << "penalty_bits     " << fmt(rep.penalty_bits) << "\n";
  out << "zeta_eta         " << fmt(rep.zeta_eta) << "\n";
  out << "budget           eps_q=" << fmt(rep.budget.eps_q)
      << " eps_ucr=" << fmt(rep.budget.eps_ucr) << " eps_pa=" << fmt(rep.budget.eps_pa)
      << " eps_cstar=" << fmt(rep.budget.eps_cstar)
      << " eps_chsh=" << fmt(rep.budget.eps_chsh) << "\n";
}

bool write_text_file(const fs::path& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "cannot write " << path.string() << "\n";
    return false;
  }
  f << text;
  f.flush();
  if (!f) {
    err << "write failed on " << path.string() << "\n";
    return false;
  }
  return true;
}

security::EpsilonBudget pick_budget(const RunConfig& cfg) {
  if (cfg.budget == BudgetMode::Optimize) {
    Rng root(cfg.seed);
    Rng search = root.stream("budget_search");
    return security::optimize_budget(cfg.params,
                                     static_cast<int>(cfg.budget_iterations), search);
  }
  return security::uniform_budget(cfg.params.eps_sec);
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::size_t c1 = text.find(':');
  std::size_t c2 = (c1 == std::string::npos) ? std::string::npos : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos ||
      text.find(':', c2 + 1) != std::string::npos) {
    throw std::invalid_argument("grid: expected start:stop:steps, got \"" + text + "\"");
  }
  try {
    std::size_t used = 0;
    g.start = std::stod(text.substr(0, c1), &used);
    if (used != c1) throw std::invalid_argument("");
    std::string stop_s = text.substr(c1 + 1, c2 - c1 - 1);
    g.stop = std::stod(stop_s, &used);
    if (used != stop_s.size()) throw std::invalid_argument("");
    std::string steps_s = text.substr(c2 + 1);
    g.steps = std::stoll(steps_s, &used);
    if (used != steps_s.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("grid: cannot parse \"" + text + "\"");
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop)) {
    throw std::invalid_argument("grid: bounds must be finite");
  }
  if (g.steps < 1) throw std::invalid_argument("grid: steps must be >= 1");
  return g;
}

std::vector<double> grid_points(const GridSpec& grid) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(grid.steps));
  if (grid.steps == 1) {
    pts.push_back(grid.start);
    return pts;
  }
  for (std::int64_t i = 0; i < grid.steps; ++i) {
    double f = static_cast<double>(i) / static_cast<double>(grid.steps - 1);
    pts.push_back(grid.start + f * (grid.stop - grid.start));
  }
  return pts;
}

int cmd_rate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  security::SecurityReport rep;
  try {
    rep = security::key_length(cfg.params, pick_budget(cfg), cfg.eta_source);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  print_report(rep, out);
  if (!cfg.out_path.empty()) {
    json doc = report_json(rep);
    doc["params"] = params_json(cfg.params);
    if (!write_text_file(cfg.out_path, doc.dump(2) + "\n", err)) return kExitUsage;
  }
  return rep.status == security::KeyStatus::Feasible ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const RunConfig& cfg, const GridSpec& grid, std::ostream& out,
              std::ostream& err) {
  std::vector<double> etas = grid_points(grid);
  for (double eta : etas) {
    if (!(eta > 0 && eta <= 1)) {
      err << "grid: eta_tol values must lie in (0, 1], got " << fmt(eta) << "\n";
      return kExitUsage;
    }
  }
  std::vector<security::SweepPoint> points;
  try {
    points = security::sweep_eta(cfg.params, security::uniform_budget(cfg.params.eps_sec),
                                 etas);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  std::string csv = "eta_tol,fraction_asymptotic,fraction_finite,key_length,xi,zeta,mu\n";
  for (const auto& p : points) {
    csv += fmt(p.eta_tol);
    csv += ',';
    csv += fmt(p.fraction_asymptotic);
    csv += ',';
    csv += fmt(p.fraction_finite);
    csv += ',';
    csv += std::to_string(p.key_length);
    csv += ',';
    csv += fmt(p.xi);
    csv += ',';
    csv += fmt(p.zeta);
    csv += ',';
    csv += fmt(p.mu);
    csv += '\n';
  }
  if (cfg.out_path.empty()) {
    out << csv;
  } else {
    if (!write_text_file(cfg.out_path, csv, err)) return kExitUsage;
    out << "wrote " << cfg.out_path << " (" << points.size() << " rows)\n";
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace pp = postprocessing;
  fs::path dir = cfg.out_path.empty() ? fs::path(".") : fs::path(cfg.out_path);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "cannot create output directory " << dir.string() << "\n";
    return kExitUsage;
  }

  SessionOutcome res;
  try {
    res = run_session(cfg);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << e.what() << "\n";
    return kExitInfeasible;
  }

  {
    std::ofstream tf(dir / "transcript.txt", std::ios::binary);
    if (!tf) {
      err << "cannot write " << (dir / "transcript.txt").string() << "\n";
      return kExitUsage;
    }
    protocol::write_transcript(res.sift.transcript, tf);
  }

  json doc;
  doc["seed"] = cfg.seed;
  doc["seed_fp"] = seed_fingerprint(cfg.seed);
  doc["rounds_run"] = res.sift.rounds_run;
  doc["counts"] = json{{"x", res.sift.sets.x.size()},
                       {"z", res.sift.sets.z.size()},
                       {"j", res.sift.sets.j.size()},
                       {"x_tilde", res.sift.sets.x_tilde.size()}};
  doc["estimate"] = json{{"S_test", res.estimate.s_test},
                         {"Q_test", res.estimate.q_test},
                         {"eta", res.estimate.eta},
                         {"abort", res.estimate.abort},
                         {"reason", reason_name(res.estimate.reason)}};
  doc["params"] = params_json(cfg.params);

  out << "rounds_run  " << res.sift.rounds_run << "\n";
  out << "S_test      " << fmt(res.estimate.s_test) << "\n";
  out << "Q_test      " << fmt(res.estimate.q_test) << "\n";
  out << "eta         " << fmt(res.estimate.eta) << "\n";

  if (res.estimate.abort) {
    doc["result"] = "abort";
    if (!write_text_file(dir / "report.json", doc.dump(2) + "\n", err)) return kExitUsage;
    out << "abort       " << reason_name(res.estimate.reason) << "\n";
    return kExitInfeasible;
  }

  doc["security"] = report_json(res.report);
  doc["ell_used"] = res.ell_used;

  if (res.ell_used < 1) {
    doc["result"] = "zero_key";
    if (!write_text_file(dir / "report.json", doc.dump(2) + "\n", err)) return kExitUsage;
    out << "key_length  0 (bound " << status_name(res.report.status) << ")\n";
    return kExitInfeasible;
  }

  doc["verified"] = res.verified;
  doc["leaked_bits"] = res.leaked_bits;

  if (!write_text_file(dir / "key_alice.txt", pp::format_key(res.key_alice, cfg.seed), err) ||
      !write_text_file(dir / "key_bob.txt", pp::format_key(res.key_bob, cfg.seed), err)) {
    return kExitUsage;
  }
  doc["result"] = "key";
  doc["files"] = json{{"transcript", "transcript.txt"},
                      {"key_alice", "key_alice.txt"},
                      {"key_bob", "key_bob.txt"}};
  if (!write_text_file(dir / "report.json", doc.dump(2) + "\n", err)) return kExitUsage;

  out << "verified    " << (res.verified ? "pass" : "fail") << "\n";
  out << "key_length  " << res.ell_used << "\n";
  const auto fp_len = std::min<std::size_t>(res.key_alice.size(), 16);
  out << "key_fp      "
      << pp::to_hex(pp::Bits(res.key_alice.begin(), res.key_alice.begin() + fp_len))
      << "\n";
  return res.verified ? kExitOk : kExitInfeasible;
}

namespace {

struct CheckTally {
  int failures = 0;
  int checks = 0;
};

void report_check(std::ostream& out, CheckTally& tally, const std::string& name,
                  double observed, double threshold, bool pass) {
  ++tally.checks;
  if (!pass) ++tally.failures;
  out << (pass ? "pass  " : "FAIL  ") << name << " observed=" << fmt(observed)
      << " threshold=" << fmt(threshold) << "\n";
}

// observed violation rate must not exceed the bound by more than 3 Monte
// Carlo standard errors of the bound itself
bool coverage_ok(double observed, double bound, std::int64_t trials) {
  double sigma = std::sqrt(std::max(bound * (1.0 - bound), 1e-12) /
                           static_cast<double>(trials));
  return observed <= bound + 3.0 * sigma;
}

}  // namespace

int cmd_verify_bounds(std::int64_t trials, std::uint64_t seed, std::ostream& out,
                      std::ostream& err) {
  namespace pp = postprocessing;
  (void)err;
  if (trials < 10000) {
    out << "insufficient statistics: need at least 10000 trials, got " << trials
        << "; no checks run\n";
    return kExitOk;
  }
  Rng root(seed);
  CheckTally tally;

  {
    // iid Bernoulli(1/2) means over n draws against exp(-2 delta^2 n)
    Rng rng = root.stream("hoeffding");
    const int n = 100;
    for (double delta : {0.05, 0.1}) {
      std::int64_t hits = 0;
      for (std::int64_t t = 0; t < trials; ++t) {
        int sum = 0;
        for (int i = 0; i < n; ++i) sum += rng.bernoulli(0.5) ? 1 : 0;
        if (static_cast<double>(sum) / n - 0.5 >= delta) ++hits;
      }
      double observed = static_cast<double>(hits) / static_cast<double>(trials);
      double bound = bounds::hoeffding_tail(n, delta);
      report_check(out, tally,
                   "hoeffding n=100 delta=" + fmt(delta), observed, bound,
                   coverage_ok(observed, bound, trials));
    }
  }

  {
    // sampling without replacement from a fixed 0/1 list
    Rng rng = root.stream("serfling");
    const std::size_t n = 200;
    const std::size_t k = 100;
    pp::Bits list = pp::random_bits(static_cast<std::int64_t>(n), rng);
    double mean = 0;
    for (auto b : list) mean += b;
    mean /= static_cast<double>(n);
    for (double delta : {0.05, 0.1}) {
      std::int64_t hits = 0;
      for (std::int64_t t = 0; t < trials; ++t) {
        auto idx = sample_without_replacement(n, k, rng);
        double s = 0;
        for (auto i : idx) s += list[i];
        if (s / static_cast<double>(k) - mean >= delta) ++hits;
      }
      double observed = static_cast<double>(hits) / static_cast<double>(trials);
      double bound = bounds::serfling_tail(static_cast<std::int64_t>(n),
                                           static_cast<std::int64_t>(k), delta, 0.0, 1.0);
      report_check(out, tally, "serfling n=200 k=100 delta=" + fmt(delta), observed,
                   bound, coverage_ok(observed, bound, trials));
    }
  }

  {
    // complement mean vs sample mean at complement_deviation's radius
    Rng rng = root.stream("complement");
    const std::size_t n = 200;
    const std::size_t t_size = 100;
    pp::Bits list = pp::random_bits(static_cast<std::int64_t>(n), rng);
    for (double eps : {0.25, 0.05}) {
      double delta = bounds::complement_deviation(static_cast<std::int64_t>(n),
                                                  static_cast<std::int64_t>(t_size), eps);
      std::int64_t hits = 0;
      for (std::int64_t t = 0; t < trials; ++t) {
        auto idx = sample_without_replacement(n, t_size, rng);
        std::vector<bool> in_t(n, false);
        double sum_t = 0;
        for (auto i : idx) {
          in_t[i] = true;
          sum_t += list[i];
        }
        double sum_k = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!in_t[i]) sum_k += list[i];
        }
        double mu_t = sum_t / static_cast<double>(t_size);
        double mu_k = sum_k / static_cast<double>(n - t_size);
        if (mu_k - mu_t >= delta) ++hits;
      }
      double observed = static_cast<double>(hits) / static_cast<double>(trials);
      report_check(out, tally, "complement n=200 t=100 eps=" + fmt(eps), observed, eps,
                   coverage_ok(observed, eps, trials));
    }
  }

  {
    // CHSH estimate overshoot: S_obs - S_true >= xi happens with
    // probability at most eps for iid rounds
    Rng rng = root.stream("chsh_xi");
    const std::int64_t m_j = 500;
    const double win = 0.8535533905932737;  // cos^2(pi/8)
    const double s_true = 8.0 * win - 4.0;
    const double eps = 0.01;
    const double xi = bounds::xi(m_j, eps);
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
      std::int64_t wins = 0;
      for (std::int64_t i = 0; i < m_j; ++i) wins += rng.bernoulli(win) ? 1 : 0;
      double s_obs = 8.0 * static_cast<double>(wins) / static_cast<double>(m_j) - 4.0;
      if (s_obs - s_true >= xi) ++hits;
    }
    double observed = static_cast<double>(hits) / static_cast<double>(trials);
    report_check(out, tally, "chsh_sampling m_j=500 eps=0.01", observed, eps,
                 coverage_ok(observed, eps, trials));
  }

  {
    // exhaustive two-universality at n=10, ell=4: every nonzero difference
    // collides for at most a 2^-ell fraction of all seeds
    const std::int64_t n = 10;
    const std::int64_t ell = 4;
    const std::int64_t seed_bits = n + ell - 1;
    const std::uint64_t seed_count = std::uint64_t{1} << seed_bits;
    const pp::Bits zero(static_cast<std::size_t>(ell), 0);
    double worst = 0;
    for (std::uint64_t d = 1; d < (std::uint64_t{1} << n); ++d) {
      pp::Bits diff(static_cast<std::size_t>(n));
      for (std::int64_t i = 0; i < n; ++i) diff[static_cast<std::size_t>(i)] = (d >> i) & 1;
      std::int64_t collisions = 0;
      pp::ToeplitzSeed ts;
      ts.n_in = n;
      ts.n_out = ell;
      ts.bits.assign(static_cast<std::size_t>(seed_bits), 0);
      for (std::uint64_t s = 0; s < seed_count; ++s) {
        for (std::int64_t i = 0; i < seed_bits; ++i) {
          ts.bits[static_cast<std::size_t>(i)] = (s >> i) & 1;
        }
        if (pp::toeplitz_hash(diff, ts) == zero) ++collisions;
      }
      worst = std::max(worst,
                       static_cast<double>(collisions) / static_cast<double>(seed_count));
    }
    double bound = std::ldexp(1.0, -static_cast<int>(ell));
    report_check(out, tally, "toeplitz_exhaustive n=10 ell=4", worst, bound,
                 worst <= bound);
  }

  {
    Rng rng = root.stream("toeplitz_mc");
    const std::int64_t ell = 8;
    double rate = pp::two_universality_estimate(32, ell, trials, rng);
    double bound = std::ldexp(1.0, -static_cast<int>(ell));
    report_check(out, tally, "toeplitz_mc n=32 ell=8", rate, bound,
                 coverage_ok(rate, bound, trials));
  }

  if (tally.failures == 0) {
    out << "all bounds hold (" << tally.checks << " checks, " << trials << " trials)\n";
    return kExitOk;
  }
  out << tally.failures << " of " << tally.checks << " bound checks failed\n";
  return kExitBoundViolation;
}

}  // namespace diqkd::cli
