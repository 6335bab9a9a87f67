#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace diqkd::quantum {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Eigenvalues may dip this far below zero before a state is rejected.
inline constexpr double kPsdFloor = 1e-9;
/// Allowed distance of the trace from 1, and hermiticity slack.
inline constexpr double kStateTol = 1e-9;

/// Density operator on up to four qubits, stored dense. Qubit 0 is the
/// leftmost tensor factor, i.e. the most significant bit of the basis
/// index, matching the ordering kron(A, B) produces.
class DensityMatrix {
 public:
  /// Takes ownership of the matrix. Shape is always checked; physicality
  /// (hermitian, unit trace, spectrum above -kPsdFloor) is checked in
  /// debug builds and on explicit validate().
  DensityMatrix(Mat m, int num_qubits);

  static DensityMatrix pure(const Vec& psi);
  static DensityMatrix maximally_mixed(int num_qubits);

  int qubits() const { return qubits_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const Mat& mat() const { return mat_; }

  /// Throws std::domain_error when the stored matrix is not a state.
  void validate() const;

 private:
  Mat mat_;
  int qubits_;
};

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

Vec bell_vector(BellKind kind);
DensityMatrix bell_state(BellKind kind = BellKind::PhiPlus);

/// v * PhiPlus + (1 - v) * I/4. Physical for -1/3 <= v <= 1.
DensityMatrix werner_state(double visibility);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// With probability p the target qubit is replaced by the maximally mixed
/// state; equivalently a uniform Pauli twirl of weight p.
DensityMatrix depolarize(const DensityMatrix& rho, double p, int qubit);

/// Reduced state on the listed qubits (ascending positions kept in order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

Mat kron(const Mat& a, const Mat& b);

/// Lift a single-qubit operator to `num_qubits` qubits, acting on `qubit`.
Mat embed(const Eigen::Matrix2cd& op, int qubit, int num_qubits);

/// Lift a two-qubit operator so its more significant factor acts on qa and
/// the other on qb (qa != qb, any order relative to each other).
Mat embed_pair(const Eigen::Matrix4cd& op, int qa, int qb, int num_qubits);

const Eigen::Matrix2cd& pauli_x();
const Eigen::Matrix2cd& pauli_y();
const Eigen::Matrix2cd& pauli_z();
const Eigen::Matrix2cd& id2();

}  // namespace diqkd::quantum
