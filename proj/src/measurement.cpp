#include "diqkd/measurement.hpp"

#include <cmath>
#include <stdexcept>

namespace diqkd::quantum {

namespace {
constexpr double kOpTol = 1e-9;
}

Observable Observable::from_bloch(double nx, double ny, double nz) {
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("Observable::from_bloch: direction is not unit length");
  Observable o;
  o.op = nx * pauli_x() + ny * pauli_y() + nz * pauli_z();
  return o;
}

Observable Observable::from_xz_angle(double theta) {
  return from_bloch(std::sin(theta), 0.0, std::cos(theta));
}

void Observable::validate() const {
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > kOpTol)
    throw std::invalid_argument("Observable: not hermitian");
  if ((op * op - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kOpTol)
    throw std::invalid_argument("Observable: square is not the identity");
}

BinaryMeasurement BinaryMeasurement::of(const Observable& o) {
  o.validate();
  BinaryMeasurement m;
  m.proj0 = 0.5 * (Eigen::Matrix2cd::Identity() + o.op);
  m.proj1 = 0.5 * (Eigen::Matrix2cd::Identity() - o.op);
  return m;
}

void BinaryMeasurement::validate() const {
  for (const auto* p : {&proj0, &proj1}) {
    if ((*p - p->adjoint()).cwiseAbs().maxCoeff() > kOpTol)
      throw std::invalid_argument("BinaryMeasurement: projector not hermitian");
    if ((*p * *p - *p).cwiseAbs().maxCoeff() > kOpTol)
      throw std::invalid_argument("BinaryMeasurement: operator is not a projector");
  }
  if ((proj0 + proj1 - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kOpTol)
    throw std::invalid_argument("BinaryMeasurement: projectors do not sum to identity");
  if ((proj0 * proj1).cwiseAbs().maxCoeff() > kOpTol)
    throw std::invalid_argument("BinaryMeasurement: projectors not orthogonal");
}

BinaryMeasurement basis_measurement(Basis b) {
  Observable o;
  o.op = (b == Basis::X) ? pauli_x() : pauli_z();
  return BinaryMeasurement::of(o);
}

BellKind bell_kind(BellOutcome g) {
  if (g.bit_flip) return g.phase_flip ? BellKind::PsiMinus : BellKind::PsiPlus;
  return g.phase_flip ? BellKind::PhiMinus : BellKind::PhiPlus;
}

Vec bell_vector(BellOutcome g) { return bell_vector(bell_kind(g)); }

double outcome_probability(const DensityMatrix& rho, const BinaryMeasurement& m,
                           int qubit, int bit) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("outcome_probability: bad bit");
  const Mat p = embed(m.proj(bit), qubit, rho.qubits());
  double prob = (p * rho.mat()).trace().real();
  if (prob < 0.0) prob = 0.0;
  if (prob > 1.0) prob = 1.0;
  return prob;
}

MeasureResult measure_binary(const DensityMatrix& rho, const BinaryMeasurement& m,
                             int qubit, Rng& rng) {
  if (qubit < 0 || qubit >= rho.qubits())
    throw std::invalid_argument("measure_binary: bad qubit");
  const double p0 = outcome_probability(rho, m, qubit, 0);
  const int bit = rng.uniform() < p0 ? 0 : 1;
  const Mat proj = embed(m.proj(bit), qubit, rho.qubits());
  Mat collapsed = proj * rho.mat() * proj;
  const double tr = collapsed.trace().real();
  if (tr <= 0.0)
    throw std::domain_error("measure_binary: realized outcome has zero weight");
  collapsed /= tr;
  return {bit, bit == 0 ? p0 : 1.0 - p0, DensityMatrix(std::move(collapsed), rho.qubits())};
}

namespace {

std::vector<int> remaining_qubits(int n, int qa, int qb) {
  std::vector<int> keep;
  for (int q = 0; q < n; ++q)
    if (q != qa && q != qb) keep.push_back(q);
  return keep;
}

Eigen::Matrix4cd bell_projector(BellOutcome g) {
  const Vec v = bell_vector(g);
  return (v * v.adjoint()).eval();
}

}  // namespace

std::pair<double, DensityMatrix> bsm_project(const DensityMatrix& rho, int qa, int qb,
                                             BellOutcome g) {
  const int n = rho.qubits();
  if (qa == qb || qa < 0 || qb < 0 || qa >= n || qb >= n)
    throw std::invalid_argument("bsm_project: bad qubit pair");
  const std::vector<int> keep = remaining_qubits(n, qa, qb);
  const Mat proj = embed_pair(bell_projector(g), qa, qb, n);
  const Mat collapsed = proj * rho.mat() * proj;
  double p = collapsed.trace().real();
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  if (p <= 0.0)
    return {0.0, DensityMatrix::maximally_mixed(static_cast<int>(keep.size()))};
  const DensityMatrix normalized(collapsed / p, n);
  return {p, partial_trace(normalized, keep)};
}

BsmResult bsm(const DensityMatrix& rho, int qa, int qb, double success_prob,
              BsmMode mode, Rng& rng) {
  const int n = rho.qubits();
  if (qa == qb || qa < 0 || qb < 0 || qa >= n || qb >= n)
    throw std::invalid_argument("bsm: bad qubit pair");
  const std::vector<int> keep = remaining_qubits(n, qa, qb);
  const bool heralded = rng.bernoulli(success_prob);
  if (!heralded) return {false, {}, partial_trace(rho, keep)};

  const std::vector<BellOutcome> allowed =
      mode == BsmMode::Full
          ? std::vector<BellOutcome>{{false, false}, {false, true}, {true, false}, {true, true}}
          : std::vector<BellOutcome>{{true, false}, {true, true}};

  double total = 0.0;
  std::vector<std::pair<double, DensityMatrix>> branches;
  branches.reserve(allowed.size());
  for (const BellOutcome g : allowed) {
    branches.push_back(bsm_project(rho, qa, qb, g));
    total += branches.back().first;
  }
  if (total <= 1e-15) return {false, {}, partial_trace(rho, keep)};

  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < allowed.size(); ++i) {
    acc += branches[i].first;
    if (u < acc || i + 1 == allowed.size())
      return {true, allowed[i], std::move(branches[i].second)};
  }
  return {true, allowed.back(), std::move(branches.back().second)};  // unreachable
}

DensityMatrix apply_correction(const DensityMatrix& rho, BellOutcome g, int qubit) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  if (g.bit_flip) u = pauli_x() * u;
  if (g.phase_flip) u = pauli_z() * u;  // applied after X: U = Z^z X^x
  const Mat full = embed(u, qubit, rho.qubits());
  return DensityMatrix(full * rho.mat() * full.adjoint(), rho.qubits());
}

bool correction_flips_outcome(BellOutcome g, Basis a) {
  return a == Basis::Z ? g.bit_flip : g.phase_flip;
}

}  // namespace diqkd::quantum
