#include "diqkd/stats_bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace diqkd::bounds {

namespace {

double ln_inv(double eps) {
  if (!(eps > 0.0) || eps >= 1.0)
    throw std::invalid_argument("failure probability must lie in (0, 1)");
  return -std::log(eps);
}

void check_positive(std::int64_t v, const char* what) {
  if (v <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double hoeffding_tail(std::int64_t n, double delta) {
  check_positive(n, "hoeffding_tail: n");
  if (delta < 0.0) throw std::invalid_argument("hoeffding_tail: delta must be nonnegative");
  return std::exp(-2.0 * delta * delta * static_cast<double>(n));
}

double serfling_tail(std::int64_t n, std::int64_t k, double delta, double a, double b) {
  check_positive(n, "serfling_tail: n");
  if (k < 1 || k > n) throw std::invalid_argument("serfling_tail: k outside [1, n]");
  if (delta < 0.0) throw std::invalid_argument("serfling_tail: delta must be nonnegative");
  if (!(b > a)) throw std::invalid_argument("serfling_tail: need b > a");
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return std::exp(-2.0 * delta * delta * kk * nn / ((nn - kk + 1.0) * (b - a)));
}

double complement_deviation(std::int64_t n, std::int64_t t, double eps) {
  check_positive(n, "complement_deviation: n");
  if (t < 1 || t > n - 1)
    throw std::invalid_argument("complement_deviation: t outside [1, n-1]");
  const double nn = static_cast<double>(n);
  const double tt = static_cast<double>(t);
  return std::sqrt(nn * (tt + 1.0) / (2.0 * (nn - tt) * tt * tt) * ln_inv(eps));
}

double xi(std::int64_t m_j, double eps) {
  check_positive(m_j, "xi: m_j");
  return std::sqrt(32.0 / static_cast<double>(m_j) * ln_inv(eps));
}

double chsh_sampling_deviation(std::int64_t m_j, double eps) { return xi(m_j, eps); }

double zeta(std::int64_t m_x, std::int64_t m_j, double eta, double eps) {
  check_positive(m_x, "zeta: m_x");
  check_positive(m_j, "zeta: m_j");
  if (!(eta > 0.0) || eta > 1.0) throw std::invalid_argument("zeta: eta outside (0, 1]");
  const double mx = static_cast<double>(m_x);
  const double mj = static_cast<double>(m_j);
  return std::sqrt(2.0 * (mx + mj * eta) * (mj + 1.0) / (mx * mj * mj) * ln_inv(eps));
}

double mu(std::int64_t m_x, std::int64_t m_z, double eps) {
  check_positive(m_x, "mu: m_x");
  check_positive(m_z, "mu: m_z");
  const double mx = static_cast<double>(m_x);
  const double mz = static_cast<double>(m_z);
  return std::sqrt((mx + mz) * (mz + 1.0) / (mx * mz * mz) * ln_inv(eps));
}

}  // namespace diqkd::bounds
