#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "diqkd/chsh.hpp"
#include "diqkd/commands.hpp"
#include "diqkd/postprocessing.hpp"
#include "diqkd/run_config.hpp"
#include "diqkd/session.hpp"
#include "diqkd/stats_bounds.hpp"

namespace py = pybind11;
using namespace diqkd;

namespace {

const char* status_name(security::KeyStatus s) {
  switch (s) {
    case security::KeyStatus::Feasible:
      return "feasible";
    case security::KeyStatus::ChshSampleInsufficient:
      return "chsh_sample_insufficient";
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
    default:
      return "none";
  }
}

py::dict report_dict(const security::SecurityReport& rep) {
  py::dict budget;
  budget["eps_q"] = rep.budget.eps_q;
  budget["eps_ucr"] = rep.budget.eps_ucr;
  budget["eps_pa"] = rep.budget.eps_pa;
  budget["eps_cstar"] = rep.budget.eps_cstar;
  budget["eps_chsh"] = rep.budget.eps_chsh;
  py::dict d;
  d["status"] = status_name(rep.status);
  d["key_length"] = rep.key_length;
  d["secret_fraction"] = rep.secret_fraction;
  d["raw_bits"] = rep.raw_bits;
  d["xi"] = rep.xi;
  d["zeta"] = rep.zeta;
  d["mu"] = rep.mu;
  d["S_hat"] = rep.s_hat;
  d["Q_hat"] = rep.q_hat;
  d["leak_EC"] = rep.leak_ec;
  d["penalty_bits"] = rep.penalty_bits;
  d["zeta_eta"] = rep.zeta_eta;
  d["budget"] = budget;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-key calculator and simulator for relay-based "
            "device-independent QKD with a local CHSH test";
  m.attr("__version__") = "0.1.0";

  // tail bounds and deviation terms
  m.def("hoeffding_tail", &bounds::hoeffding_tail, py::arg("n"), py::arg("delta"),
        "exp(-2 delta^2 n), tail of an iid mean over [0,1] samples");
  m.def("serfling_tail", &bounds::serfling_tail, py::arg("n"), py::arg("k"),
        py::arg("delta"), py::arg("a") = 0.0, py::arg("b") = 1.0,
        "tail of a without-replacement sample mean");
  m.def("complement_deviation", &bounds::complement_deviation, py::arg("n"),
        py::arg("t"), py::arg("eps"),
        "deviation between a random subset mean and its complement mean");
  m.def("xi", &bounds::xi, py::arg("m_j"), py::arg("eps"),
        "CHSH estimate deviation sqrt((32/m_j) ln(1/eps))");
  m.def("zeta", &bounds::zeta, py::arg("m_x"), py::arg("m_j"), py::arg("eta"),
        py::arg("eps"), "overlap estimate deviation");
  m.def("mu", &bounds::mu, py::arg("m_x"), py::arg("m_z"), py::arg("eps"),
        "error-rate estimate deviation");

  // key-length math
  m.def("binary_entropy", &security::binary_entropy, py::arg("q"));
  m.def("chsh_to_overlap", &security::chsh_to_overlap, py::arg("s"),
        "overlap certified by a CHSH value: 1/2 + (s/8) sqrt(8 - s^2)");
  m.def("overlap_efficiency_correction", &security::overlap_efficiency_correction,
        py::arg("c_tilde"), py::arg("eta"));
  m.def("asymptotic_fraction", &security::asymptotic_fraction, py::arg("s"),
        py::arg("eta"), py::arg("q"),
        "infinite-key secret fraction 1 - log2(1 + (s/(4 eta)) sqrt(8-s^2)) - 2 h(q)");

  py::enum_<security::KeyStatus>(m, "KeyStatus")
      .value("Feasible", security::KeyStatus::Feasible)
      .value("Infeasible", security::KeyStatus::Infeasible)
      .value("ChshSampleInsufficient", security::KeyStatus::ChshSampleInsufficient);
  py::enum_<security::EtaSource>(m, "EtaSource")
      .value("Tolerated", security::EtaSource::Tolerated)
      .value("Observed", security::EtaSource::Observed);

  py::class_<security::EpsilonBudget>(m, "EpsilonBudget")
      .def(py::init<>())
      .def_readwrite("eps_q", &security::EpsilonBudget::eps_q)
      .def_readwrite("eps_ucr", &security::EpsilonBudget::eps_ucr)
      .def_readwrite("eps_pa", &security::EpsilonBudget::eps_pa)
      .def_readwrite("eps_cstar", &security::EpsilonBudget::eps_cstar)
      .def_readwrite("eps_chsh", &security::EpsilonBudget::eps_chsh);
  m.def("uniform_budget", &security::uniform_budget, py::arg("eps_sec"),
        "the eps_sec/9 split used by the closed-form bound");

  py::class_<security::ProtocolParams>(m, "ProtocolParams")
      .def(py::init([](std::int64_t m_x, std::int64_t m_z, std::int64_t m_j,
                       double s_tol, double q_tol, double eta_tol, double eps_sec,
                       double eps_cor, std::optional<double> leak_ec, std::int64_t ell,
                       std::optional<double> eta_observed) {
             security::ProtocolParams p;
             p.m_x = m_x;
             p.m_z = m_z;
             p.m_j = m_j;
             p.s_tol = s_tol;
             p.q_tol = q_tol;
             p.eta_tol = eta_tol;
             p.eps_sec = eps_sec;
             p.eps_cor = eps_cor;
             p.leak_ec = leak_ec;
             p.ell = ell;
             p.eta_observed = eta_observed;
             return p;
           }),
           py::arg("m_x"), py::arg("m_z"), py::arg("m_j"), py::arg("S_tol"),
           py::arg("Q_tol"), py::arg("eta_tol"), py::arg("eps_sec"), py::arg("eps_cor"),
           py::arg("leak_EC") = std::nullopt, py::arg("ell") = 0,
           py::arg("eta_observed") = std::nullopt)
      .def_readwrite("m_x", &security::ProtocolParams::m_x)
      .def_readwrite("m_z", &security::ProtocolParams::m_z)
      .def_readwrite("m_j", &security::ProtocolParams::m_j)
      .def_readwrite("S_tol", &security::ProtocolParams::s_tol)
      .def_readwrite("Q_tol", &security::ProtocolParams::q_tol)
      .def_readwrite("eta_tol", &security::ProtocolParams::eta_tol)
      .def_readwrite("eps_sec", &security::ProtocolParams::eps_sec)
      .def_readwrite("eps_cor", &security::ProtocolParams::eps_cor)
      .def_readwrite("leak_EC", &security::ProtocolParams::leak_ec)
      .def_readwrite("ell", &security::ProtocolParams::ell)
      .def_readwrite("eta_observed", &security::ProtocolParams::eta_observed)
      .def("validate", &security::ProtocolParams::validate);

  py::class_<security::SecurityReport>(m, "SecurityReport")
      .def_readonly("status", &security::SecurityReport::status)
      .def_readonly("key_length", &security::SecurityReport::key_length)
      .def_readonly("secret_fraction", &security::SecurityReport::secret_fraction)
      .def_readonly("raw_bits", &security::SecurityReport::raw_bits)
      .def_readonly("xi", &security::SecurityReport::xi)
      .def_readonly("zeta", &security::SecurityReport::zeta)
      .def_readonly("mu", &security::SecurityReport::mu)
      .def_readonly("S_hat", &security::SecurityReport::s_hat)
      .def_readonly("Q_hat", &security::SecurityReport::q_hat)
      .def_readonly("leak_EC", &security::SecurityReport::leak_ec)
      .def_readonly("penalty_bits", &security::SecurityReport::penalty_bits)
      .def_readonly("zeta_eta", &security::SecurityReport::zeta_eta)
      .def("as_dict", &report_dict);

  m.def(
      "key_length",
      [](const security::ProtocolParams& params,
         std::optional<security::EpsilonBudget> budget, security::EtaSource eta_source) {
        return security::key_length(
            params, budget ? *budget : security::uniform_budget(params.eps_sec),
            eta_source);
      },
      py::arg("params"), py::arg("budget") = std::nullopt,
      py::arg("eta_source") = security::EtaSource::Tolerated,
      "finite-key length report for the given tolerances");

  m.def(
      "sweep_eta",
      [](const security::ProtocolParams& base, const std::vector<double>& etas) {
        auto points = security::sweep_eta(base, security::uniform_budget(base.eps_sec),
                                          etas);
        py::list out;
        for (const auto& p : points) {
          py::dict d;
          d["eta_tol"] = p.eta_tol;
          d["fraction_asymptotic"] = p.fraction_asymptotic;
          d["fraction_finite"] = p.fraction_finite;
          d["key_length"] = p.key_length;
          d["xi"] = p.xi;
          d["zeta"] = p.zeta;
          d["mu"] = p.mu;
          out.append(d);
        }
        return out;
      },
      py::arg("params"), py::arg("etas"));

  // small quantum helpers, as plain matrices
  m.def(
      "bell_state",
      [](int bit_flip, int phase_flip) {
        quantum::BellOutcome g{bit_flip != 0, phase_flip != 0};
        return quantum::bell_state(quantum::bell_kind(g)).mat();
      },
      py::arg("bit_flip") = 0, py::arg("phase_flip") = 0,
      "density matrix of the Bell state labeled by relay announcement bits");
  m.def(
      "werner_state",
      [](double visibility) { return quantum::werner_state(visibility).mat(); },
      py::arg("visibility"));
  m.def(
      "chsh_value",
      [](const Eigen::MatrixXcd& rho) {
        return quantum::chsh_value(quantum::DensityMatrix(rho, 2),
                                   quantum::ChshObservables::tsirelson_optimal());
      },
      py::arg("rho"),
      "CHSH value of a two-qubit state under the Tsirelson-optimal settings");

  // hashing
  m.def("verification_hash_length", &postprocessing::verification_hash_length,
        py::arg("eps_cor"));
  m.def(
      "toeplitz_hash",
      [](const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& seed_bits,
         std::int64_t n_out) {
        postprocessing::ToeplitzSeed seed;
        seed.n_in = static_cast<std::int64_t>(x.size());
        seed.n_out = n_out;
        seed.bits = seed_bits;
        return postprocessing::toeplitz_hash(x, seed);
      },
      py::arg("x"), py::arg("seed_bits"), py::arg("n_out"),
      "GF(2) Toeplitz hash; seed_bits has length len(x) + n_out - 1");

  // config-driven entry points, mirroring the command line tool
  m.def(
      "rate_report",
      [](const std::string& config_json) {
        RunConfig cfg = parse_run_config(config_json);
        security::EpsilonBudget budget;
        if (cfg.budget == BudgetMode::Optimize) {
          Rng search = Rng(cfg.seed).stream("budget_search");
          budget = security::optimize_budget(cfg.params,
                                             static_cast<int>(cfg.budget_iterations),
                                             search);
        } else {
          budget = security::uniform_budget(cfg.params.eps_sec);
        }
        return report_dict(security::key_length(cfg.params, budget, cfg.eta_source));
      },
      py::arg("config_json"), "key-length report from a JSON config string");

  m.def(
      "run_simulation",
      [](const std::string& config_json) {
        RunConfig cfg = parse_run_config(config_json);
        SessionOutcome res = run_session(cfg);
        py::dict d;
        d["rounds_run"] = res.sift.rounds_run;
        py::dict counts;
        counts["x"] = res.sift.sets.x.size();
        counts["z"] = res.sift.sets.z.size();
        counts["j"] = res.sift.sets.j.size();
        counts["x_tilde"] = res.sift.sets.x_tilde.size();
        d["counts"] = counts;
        d["S_test"] = res.estimate.s_test;
        d["Q_test"] = res.estimate.q_test;
        d["eta"] = res.estimate.eta;
        d["abort"] = res.estimate.abort;
        d["reason"] = reason_name(res.estimate.reason);
        if (!res.estimate.abort) {
          d["security"] = report_dict(res.report);
          d["ell_used"] = res.ell_used;
          if (res.ell_used >= 1) {
            d["verified"] = res.verified;
            d["leaked_bits"] = res.leaked_bits;
            d["key_alice"] = postprocessing::to_hex(res.key_alice);
            d["key_bob"] = postprocessing::to_hex(res.key_bob);
          }
        }
        return d;
      },
      py::arg("config_json"),
      "run one seeded protocol session from a JSON config string");
}
