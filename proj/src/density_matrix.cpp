#include "diqkd/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diqkd::quantum {

namespace {

bool dims_match(Eigen::Index dim, int num_qubits) {
  return num_qubits >= 0 && num_qubits <= 4 && dim == (Eigen::Index{1} << num_qubits);
}

// qubit 0 is the most significant bit of the basis index
int bit_of(Eigen::Index index, int qubit, int num_qubits) {
  return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1);
}

}  // namespace

DensityMatrix::DensityMatrix(Mat m, int num_qubits)
    : mat_(std::move(m)), qubits_(num_qubits) {
  if (mat_.rows() != mat_.cols() || !dims_match(mat_.rows(), qubits_))
    throw std::invalid_argument("DensityMatrix: dimension is not 2^n for 0 <= n <= 4");
#ifndef NDEBUG
  validate();
#endif
}

DensityMatrix DensityMatrix::pure(const Vec& psi) {
  int n = 0;
  while ((Eigen::Index{1} << n) < psi.size() && n <= 4) ++n;
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("DensityMatrix::pure: vector is not normalized");
  return DensityMatrix(psi * psi.adjoint(), n);
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return DensityMatrix(Mat::Identity(d, d) / static_cast<double>(d), num_qubits);
}

void DensityMatrix::validate() const {
  if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kStateTol)
    throw std::domain_error("DensityMatrix: not hermitian");
  if (std::abs(mat_.trace().real() - 1.0) > kStateTol ||
      std::abs(mat_.trace().imag()) > kStateTol)
    throw std::domain_error("DensityMatrix: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdFloor)
    throw std::domain_error("DensityMatrix: negative eigenvalue beyond tolerance");
}

Vec bell_vector(BellKind kind) {
  const double r = 1.0 / std::sqrt(2.0);
  Vec v = Vec::Zero(4);
  switch (kind) {
    case BellKind::PhiPlus:  v(0) = r; v(3) = r;  break;
    case BellKind::PhiMinus: v(0) = r; v(3) = -r; break;
    case BellKind::PsiPlus:  v(1) = r; v(2) = r;  break;
    case BellKind::PsiMinus: v(1) = r; v(2) = -r; break;
  }
  return v;
}

DensityMatrix bell_state(BellKind kind) { return DensityMatrix::pure(bell_vector(kind)); }

DensityMatrix werner_state(double visibility) {
  if (visibility < -1.0 / 3.0 - 1e-12 || visibility > 1.0 + 1e-12)
    throw std::invalid_argument("werner_state: visibility outside [-1/3, 1]");
  const Vec phi = bell_vector(BellKind::PhiPlus);
  Mat m = visibility * (phi * phi.adjoint()) + (1.0 - visibility) / 4.0 * Mat::Identity(4, 4);
  return DensityMatrix(std::move(m), 2);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.qubits() + b.qubits() > 4)
    throw std::invalid_argument("tensor: more than 4 qubits");
  return DensityMatrix(kron(a.mat(), b.mat()), a.qubits() + b.qubits());
}

DensityMatrix depolarize(const DensityMatrix& rho, double p, int qubit) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarize: p outside [0, 1]");
  if (qubit < 0 || qubit >= rho.qubits()) throw std::invalid_argument("depolarize: bad qubit");
  const int n = rho.qubits();
  const Mat x = embed(pauli_x(), qubit, n);
  const Mat y = embed(pauli_y(), qubit, n);
  const Mat z = embed(pauli_z(), qubit, n);
  Mat m = (1.0 - 0.75 * p) * rho.mat() +
          0.25 * p * (x * rho.mat() * x + y * rho.mat() * y + z * rho.mat() * z);
  return DensityMatrix(std::move(m), n);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.qubits();
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n) throw std::invalid_argument("partial_trace: bad qubit");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep list must be strictly ascending");
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

  const int k = static_cast<int>(keep.size());
  const int m = n - k;
  const Eigen::Index dk = Eigen::Index{1} << k;
  const Eigen::Index dm = Eigen::Index{1} << m;

  auto compose = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
    Eigen::Index full = 0;
    for (int b = 0; b < k; ++b)
      full |= ((kept_bits >> (k - 1 - b)) & 1) << (n - 1 - keep[b]);
    for (int b = 0; b < m; ++b)
      full |= ((traced_bits >> (m - 1 - b)) & 1) << (n - 1 - traced[b]);
    return full;
  };

  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (Eigen::Index t = 0; t < dm; ++t) sum += rho.mat()(compose(i, t), compose(j, t));
      out(i, j) = sum;
    }
  return DensityMatrix(std::move(out), k);
}

Mat embed(const Eigen::Matrix2cd& op, int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) throw std::invalid_argument("embed: bad qubit");
  Mat out = op;
  if (qubit > 0) out = kron(Mat::Identity(Eigen::Index{1} << qubit, Eigen::Index{1} << qubit), out);
  const int right = num_qubits - 1 - qubit;
  if (right > 0) out = kron(out, Mat::Identity(Eigen::Index{1} << right, Eigen::Index{1} << right));
  return out;
}

Mat embed_pair(const Eigen::Matrix4cd& op, int qa, int qb, int num_qubits) {
  if (qa == qb || qa < 0 || qb < 0 || qa >= num_qubits || qb >= num_qubits)
    throw std::invalid_argument("embed_pair: bad qubit pair");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  const Eigen::Index rest_mask =
      (d - 1) & ~((Eigen::Index{1} << (num_qubits - 1 - qa)) | (Eigen::Index{1} << (num_qubits - 1 - qb)));
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      if ((i & rest_mask) != (j & rest_mask)) continue;
      const int r = (bit_of(i, qa, num_qubits) << 1) | bit_of(i, qb, num_qubits);
      const int c = (bit_of(j, qa, num_qubits) << 1) | bit_of(j, qb, num_qubits);
      out(i, j) = op(r, c);
    }
  return out;
}

namespace {
Eigen::Matrix2cd make_pauli(char which) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  const Complex i{0.0, 1.0};
  switch (which) {
    case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 'y': m(0, 1) = -i;  m(1, 0) = i;   break;
    case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default:  m.setIdentity(); break;
  }
  return m;
}
}  // namespace

const Eigen::Matrix2cd& pauli_x() { static const Eigen::Matrix2cd m = make_pauli('x'); return m; }
const Eigen::Matrix2cd& pauli_y() { static const Eigen::Matrix2cd m = make_pauli('y'); return m; }
const Eigen::Matrix2cd& pauli_z() { static const Eigen::Matrix2cd m = make_pauli('z'); return m; }
const Eigen::Matrix2cd& id2() { static const Eigen::Matrix2cd m = make_pauli('i'); return m; }

}  // namespace diqkd::quantum
