#include "diqkd/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diqkd::quantum {

ChshObservables ChshObservables::tsirelson_optimal() {
  const double quarter_pi = std::atan(1.0);
  ChshObservables obs;
  obs.a0 = Observable::from_xz_angle(0.0);
  obs.a1 = Observable::from_xz_angle(2.0 * quarter_pi);
  obs.t0 = Observable::from_xz_angle(quarter_pi);
  obs.t1 = Observable::from_xz_angle(-quarter_pi);
  return obs;
}

void ChshObservables::validate() const {
  a0.validate();
  a1.validate();
  t0.validate();
  t1.validate();
}

Mat chsh_operator(const ChshObservables& obs) {
  obs.validate();
  return kron(obs.a0.op, obs.t0.op) + kron(obs.a0.op, obs.t1.op) +
         kron(obs.a1.op, obs.t0.op) - kron(obs.a1.op, obs.t1.op);
}

double chsh_value(const DensityMatrix& rho, const ChshObservables& obs) {
  if (rho.qubits() != 2) throw std::invalid_argument("chsh_value: need a two-qubit state");
  return (chsh_operator(obs) * rho.mat()).trace().real();
}

double effective_overlap(const BinaryMeasurement& m, const BinaryMeasurement& n,
                         const DensityMatrix& rho) {
  m.validate();
  n.validate();
  if (rho.qubits() != 1)
    throw std::invalid_argument("effective_overlap: need a one-qubit state");
  (void)rho;  // single block on a qubit, weight 1
  double best = 0.0;
  for (int x = 0; x < 2; ++x) {
    const Eigen::Matrix2cd dephased = n.proj0 * m.proj(x) * n.proj0 +
                                      n.proj1 * m.proj(x) * n.proj1;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(dephased, Eigen::EigenvaluesOnly);
    best = std::max(best, es.eigenvalues().maxCoeff());
  }
  return best;
}

}  // namespace diqkd::quantum
