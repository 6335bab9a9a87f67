#include "diqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diqkd/stats_bounds.hpp"

namespace diqkd::security {

EpsilonBudget uniform_budget(double eps_sec) {
  if (!(eps_sec > 0.0) || eps_sec >= 1.0)
    throw std::invalid_argument("uniform_budget: eps_sec outside (0, 1)");
  const double e = eps_sec / 9.0;
  return {e, e, e, e, e};
}

double budget_weighted_sum(const EpsilonBudget& b) {
  return 4.0 * b.eps_q + 2.0 * b.eps_ucr + b.eps_pa + b.eps_cstar + b.eps_chsh;
}

void validate_budget(const EpsilonBudget& b, double eps_sec) {
  for (double e : {b.eps_q, b.eps_ucr, b.eps_pa, b.eps_cstar, b.eps_chsh})
    if (!(e > 0.0) || e >= 1.0)
      throw std::invalid_argument("budget: every component must lie in (0, 1)");
  if (budget_weighted_sum(b) > eps_sec * (1.0 + 1e-12))
    throw std::invalid_argument("budget: weighted sum exceeds eps_sec");
}

void ProtocolParams::validate() const {
  if (m_x < 1 || m_z < 1 || m_j < 1)
    throw std::invalid_argument("params: block sizes must be positive");
  if (!(s_tol >= 2.0) || s_tol > kMaxChsh + 1e-12)
    throw std::invalid_argument("params: s_tol outside [2, 2*sqrt(2)]");
  if (!(q_tol >= 0.0) || q_tol >= 0.5)
    throw std::invalid_argument("params: q_tol outside [0, 1/2)");
  if (!(eta_tol > 0.0) || eta_tol > 1.0)
    throw std::invalid_argument("params: eta_tol outside (0, 1]");
  for (double e : {eps_sec, eps_cor})
    if (!(e > 0.0) || e >= 1.0)
      throw std::invalid_argument("params: eps_sec and eps_cor must lie in (0, 1)");
  if (leak_ec && *leak_ec < 0.0)
    throw std::invalid_argument("params: leak_ec must be nonnegative");
  if (ell < 0) throw std::invalid_argument("params: ell must be nonnegative");
  if (eta_observed && (!(*eta_observed > 0.0) || *eta_observed > 1.0))
    throw std::invalid_argument("params: eta_observed outside (0, 1]");
}

double binary_entropy(double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("binary_entropy: q outside [0, 1]");
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

namespace {

// sqrt(8 - s^2) with a floor: s = 2*sqrt(2) squares to just above 8 in
// binary floating point.
double root_eight_minus_sq(double s) { return std::sqrt(std::max(0.0, 8.0 - s * s)); }

}  // namespace

double chsh_to_overlap(double s) {
  if (s > kMaxChsh + 1e-12)
    throw std::invalid_argument("chsh_to_overlap: value above the Tsirelson bound");
  if (s < 2.0) return 1.0;
  return 0.5 + s / 8.0 * root_eight_minus_sq(s);
}

double overlap_efficiency_correction(double c_tilde, double eta) {
  if (!(eta > 0.0) || eta > 1.0)
    throw std::invalid_argument("overlap_efficiency_correction: eta outside (0, 1]");
  if (c_tilde < 0.5 || c_tilde > 1.0 + 1e-12)
    throw std::invalid_argument("overlap_efficiency_correction: overlap outside [1/2, 1]");
  return std::min(1.0, 0.5 + (c_tilde - 0.5) / eta);
}

SecurityReport key_length(const ProtocolParams& params, const EpsilonBudget& budget,
                          EtaSource eta_source) {
  params.validate();
  validate_budget(budget, params.eps_sec);
  if (eta_source == EtaSource::Observed && !params.eta_observed)
    throw std::invalid_argument("key_length: no observed eta available");

  SecurityReport rep;
  rep.budget = budget;
  rep.xi = bounds::xi(params.m_j, budget.eps_chsh);
  rep.mu = bounds::mu(params.m_x, params.m_z, budget.eps_q);
  rep.zeta_eta =
      eta_source == EtaSource::Observed ? *params.eta_observed : params.eta_tol;
  rep.zeta = bounds::zeta(params.m_x, params.m_j, rep.zeta_eta, budget.eps_cstar);
  rep.s_hat = params.s_tol - rep.xi;
  rep.q_hat = params.q_tol + rep.mu;
  rep.penalty_bits = -(2.0 * std::log2(budget.eps_ucr) + 2.0 * std::log2(budget.eps_pa) +
                       std::log2(params.eps_cor));
  rep.leak_ec = params.leak_ec
                    ? *params.leak_ec
                    : std::ceil(1.1 * static_cast<double>(params.m_x) *
                                binary_entropy(std::min(rep.q_hat, 0.5)));

  if (rep.s_hat < 2.0) {
    rep.status = KeyStatus::ChshSampleInsufficient;
    return rep;
  }

  const double log_term = std::log2(1.0 + rep.s_hat / (4.0 * params.eta_tol) *
                                              root_eight_minus_sq(rep.s_hat) +
                                    rep.zeta);
  // q_hat past 1/2 would make h() shrink again; clamp so the bound only
  // degrades
  const double h_q = binary_entropy(std::min(rep.q_hat, 0.5));
  rep.raw_bits = static_cast<double>(params.m_x) * (1.0 - log_term - h_q) -
                 rep.leak_ec - rep.penalty_bits;
  rep.key_length = rep.raw_bits > 0.0 ? static_cast<std::int64_t>(std::floor(rep.raw_bits)) : 0;
  rep.secret_fraction =
      static_cast<double>(rep.key_length) / static_cast<double>(params.m_x);
  rep.status = rep.key_length >= 1 ? KeyStatus::Feasible : KeyStatus::Infeasible;
  return rep;
}

double asymptotic_fraction(double s, double eta, double q) {
  if (!(s >= 2.0) || s > kMaxChsh + 1e-12)
    throw std::invalid_argument("asymptotic_fraction: s outside [2, 2*sqrt(2)]");
  if (!(eta > 0.0) || eta > 1.0)
    throw std::invalid_argument("asymptotic_fraction: eta outside (0, 1]");
  if (!(q >= 0.0) || q >= 0.5)
    throw std::invalid_argument("asymptotic_fraction: q outside [0, 1/2)");
  return 1.0 - std::log2(1.0 + s / (4.0 * eta) * root_eight_minus_sq(s)) -
         2.0 * binary_entropy(q);
}

std::optional<double> min_transmission(double s_tol, double q_tol,
                                       const std::function<double(double)>& eta_of_t,
                                       double tol) {
  if (!eta_of_t) throw std::invalid_argument("min_transmission: missing efficiency model");
  const auto fraction_at = [&](double t) {
    const double eta = eta_of_t(t);
    if (!(eta > 0.0) || eta > 1.0)
      throw std::invalid_argument("min_transmission: efficiency model left (0, 1]");
    return asymptotic_fraction(s_tol, eta, q_tol);
  };
  double lo = 1e-9, hi = 1.0;
  if (fraction_at(hi) < 0.0) return std::nullopt;
  if (fraction_at(lo) >= 0.0) return 0.0;  // positive all the way down
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (fraction_at(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<SweepPoint> sweep_eta(ProtocolParams base, const EpsilonBudget& budget,
                                  const std::vector<double>& eta_grid) {
  std::vector<SweepPoint> points;
  points.reserve(eta_grid.size());
  for (const double eta : eta_grid) {
    base.eta_tol = eta;
    const SecurityReport rep = key_length(base, budget);
    SweepPoint p;
    p.eta_tol = eta;
    p.fraction_asymptotic = asymptotic_fraction(base.s_tol, eta, base.q_tol);
    p.fraction_finite = rep.secret_fraction;
    p.key_length = rep.key_length;
    p.xi = rep.xi;
    p.zeta = rep.zeta;
    p.mu = rep.mu;
    points.push_back(p);
  }
  return points;
}

EpsilonBudget optimize_budget(const ProtocolParams& params, int iterations, Rng& rng) {
  params.validate();
  if (iterations < 0) throw std::invalid_argument("optimize_budget: negative iterations");

  EpsilonBudget best = uniform_budget(params.eps_sec);
  double best_raw = key_length(params, best).raw_bits;

  for (int i = 0; i < iterations; ++i) {
    // tilt each component by up to three decades, then rescale so the
    // weighted sum meets eps_sec with equality
    double w[5];
    for (double& v : w) v = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
    const double scale =
        params.eps_sec / (4.0 * w[0] + 2.0 * w[1] + w[2] + w[3] + w[4]);
    EpsilonBudget cand{w[0] * scale, w[1] * scale, w[2] * scale, w[3] * scale,
                       w[4] * scale};
    const double raw = key_length(params, cand).raw_bits;
    if (raw > best_raw) {
      best_raw = raw;
      best = cand;
    }
  }
  return best;
}

}  // namespace diqkd::security
