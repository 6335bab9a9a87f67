#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "diqkd/rng.hpp"

namespace diqkd::security {

/// CHSH value ceiling used for parameter validation, 2*sqrt(2).
inline constexpr double kMaxChsh = 2.8284271247461903;

/// Failure-probability split across the proof steps. The security level
/// they compose to is 4 eps_q + 2 eps_ucr + eps_pa + eps_cstar + eps_chsh.
struct EpsilonBudget {
  double eps_q = 0;      // error-rate estimation
  double eps_ucr = 0;    // entropic uncertainty smoothing
  double eps_pa = 0;     // privacy amplification
  double eps_cstar = 0;  // overlap estimation
  double eps_chsh = 0;   // CHSH estimation
};

/// eps_sec / 9 for every component; the weighted sum then equals eps_sec.
EpsilonBudget uniform_budget(double eps_sec);

double budget_weighted_sum(const EpsilonBudget& b);

/// Throws std::invalid_argument unless every component is in (0, 1) and the
/// weighted sum stays within eps_sec (tiny relative slack for rounding).
void validate_budget(const EpsilonBudget& b, double eps_sec);

/// Protocol-level inputs of the finite-key bound and the simulator.
struct ProtocolParams {
  std::int64_t m_x = 0;  // key generation block
  std::int64_t m_z = 0;  // error estimation block
  std::int64_t m_j = 0;  // CHSH test block
  double s_tol = 0;      // CHSH abort threshold
  double q_tol = 0;      // error-rate abort threshold
  double eta_tol = 0;    // heralding-efficiency abort threshold
  double eps_sec = 0;
  double eps_cor = 0;
  std::optional<double> leak_ec;       // absent: ceil(1.1 m_x h(q_tol + mu))
  std::int64_t ell = 0;                // requested key length for simulation runs
  std::optional<double> eta_observed;  // measured pass rate, for the zeta term

  void validate() const;  // throws std::invalid_argument
};

/// h(q) = -q log2 q - (1-q) log2(1-q), h(0) = h(1) = 0.
double binary_entropy(double q);

/// Overlap certified by a CHSH value: 1/2 + (s/8) sqrt(8 - s^2). Decreasing
/// on [2, 2*sqrt(2)]; values below 2 certify nothing and clamp to 1; values
/// above 2*sqrt(2) are rejected.
double chsh_to_overlap(double s);

/// Overlap correction for rounds lost to heralding:
/// 1/2 + (c_tilde - 1/2) / eta, capped at 1.
double overlap_efficiency_correction(double c_tilde, double eta);

enum class KeyStatus {
  Feasible,
  Infeasible,
  /// s_tol - xi dropped below 2: the CHSH sample is too small (or s_tol too
  /// low) for the estimate to certify anything. Distinct from a negative
  /// key length.
  ChshSampleInsufficient,
};

enum class EtaSource { Tolerated, Observed };

struct SecurityReport {
  KeyStatus status = KeyStatus::Infeasible;
  std::int64_t key_length = 0;  // floor of the bound, clamped at 0
  double secret_fraction = 0;   // key_length / m_x
  double raw_bits = 0;          // bound before flooring (may be negative)
  double xi = 0, zeta = 0, mu = 0;
  double s_hat = 0, q_hat = 0;
  double leak_ec = 0;
  double penalty_bits = 0;  // log2(1 / (eps_ucr^2 eps_pa^2 eps_cor))
  double zeta_eta = 0;      // efficiency the zeta term was evaluated at
  EpsilonBudget budget;
};

/// Longest extractable key for the given tolerances and budget:
/// floor of m_x (1 - log2(1 + (s_hat/(4 eta_tol)) sqrt(8 - s_hat^2) + zeta)
///               - h(q_hat))
///          - leak_ec - log2(1/(eps_ucr^2 eps_pa^2 eps_cor)),
/// with s_hat = s_tol - xi and q_hat = q_tol + mu. The zeta term is
/// evaluated at eta_tol, or at params.eta_observed when eta_source says so.
SecurityReport key_length(const ProtocolParams& params, const EpsilonBudget& budget,
                          EtaSource eta_source = EtaSource::Tolerated);

/// Infinite-key secret fraction:
/// 1 - log2(1 + (s/(4 eta)) sqrt(8 - s^2)) - 2 h(q).
double asymptotic_fraction(double s, double eta, double q);

/// Smallest transmission t in (0, 1] with nonnegative asymptotic fraction,
/// given the efficiency model eta(t). Bisection to within tol. Returns 0
/// when the fraction is positive down to t ~ 0 and nullopt when it is
/// negative across the whole bracket.
std::optional<double> min_transmission(double s_tol, double q_tol,
                                       const std::function<double(double)>& eta_of_t,
                                       double tol = 1e-4);

struct SweepPoint {
  double eta_tol = 0;
  double fraction_asymptotic = 0;
  double fraction_finite = 0;
  std::int64_t key_length = 0;
  double xi = 0, zeta = 0, mu = 0;
};

/// Evaluates asymptotic and finite fractions across an eta grid, holding
/// the other parameters of `base` fixed.
std::vector<SweepPoint> sweep_eta(ProtocolParams base, const EpsilonBudget& budget,
                                  const std::vector<double>& eta_grid);

/// Log-space random search over budget splits, keeping the weighted-sum
/// constraint tight. Includes the uniform split as a candidate, so the
/// result is never worse than uniform_budget(params.eps_sec).
EpsilonBudget optimize_budget(const ProtocolParams& params, int iterations, Rng& rng);

}  // namespace diqkd::security
