#pragma once

#include <cstdint>

namespace diqkd::bounds {

/// P[sample mean exceeds expectation by delta] for n iid samples in [0, 1]:
/// exp(-2 delta^2 n). Evaluated in log space; may underflow to exactly 0.
double hoeffding_tail(std::int64_t n, double delta);

/// Same tail for the mean of k draws without replacement from a fixed list
/// of n values in [a, b]: exp(-2 delta^2 k n / ((n - k + 1) (b - a))).
double serfling_tail(std::int64_t n, std::int64_t k, double delta, double a, double b);

/// Deviation between the mean over a uniformly random size-t subset and the
/// mean over its complement that is exceeded with probability at most eps,
/// for n binary values: sqrt(n (t + 1) / (2 (n - t) t^2) * ln(1/eps)).
/// Defined for 1 <= t <= n - 1; the bound blows up (vacuously) as t -> n-1
/// with small complements, which is returned as computed rather than capped.
double complement_deviation(std::int64_t n, std::int64_t t, double eps);

/// CHSH estimate deviation: xi = sqrt((32 / m_j) ln(1/eps)).
double xi(std::int64_t m_j, double eps);

/// Alias of xi under the name the estimation step uses.
double chsh_sampling_deviation(std::int64_t m_j, double eps);

/// Overlap estimate deviation:
/// zeta = sqrt(2 (m_x + m_j eta)(m_j + 1) / (m_x m_j^2) * ln(1/eps)).
double zeta(std::int64_t m_x, std::int64_t m_j, double eta, double eps);

/// Error-rate estimate deviation:
/// mu = sqrt((m_x + m_z)(m_z + 1) / (m_x m_z^2) * ln(1/eps)).
double mu(std::int64_t m_x, std::int64_t m_z, double eps);

}  // namespace diqkd::bounds
