#pragma once

#include "diqkd/measurement.hpp"

namespace diqkd::quantum {

/// Largest CHSH value quantum mechanics allows: 2*sqrt(2).
inline constexpr double kTsirelson = 2.8284271247461903;

/// The four observables of one CHSH pairing: a0, a1 on the key side,
/// t0, t1 on the test side.
struct ChshObservables {
  Observable a0, a1, t0, t1;

  /// a0 = Z, a1 = X, t0 = (Z+X)/sqrt(2), t1 = (Z-X)/sqrt(2); saturates the
  /// Tsirelson bound on Phi+.
  static ChshObservables tsirelson_optimal();

  void validate() const;
};

/// a0 (x) t0 + a0 (x) t1 + a1 (x) t0 - a1 (x) t1 on two qubits.
Mat chsh_operator(const ChshObservables& obs);

/// Tr(rho * chsh_operator) for rho on exactly two qubits, key side first.
double chsh_value(const DensityMatrix& rho, const ChshObservables& obs);

/// Largest overlap the two binary measurements admit: max over outcomes x
/// of the spectral norm of sum_z N_z M_x N_z. For projective qubit
/// measurements whose Bloch axes subtend angle theta this equals
/// (1 + |cos theta|) / 2. rho (one qubit) is accepted for symmetry with the
/// block-decomposed generalization; a qubit carries a single block, so the
/// value does not depend on it.
double effective_overlap(const BinaryMeasurement& m, const BinaryMeasurement& n,
                         const DensityMatrix& rho);

}  // namespace diqkd::quantum
