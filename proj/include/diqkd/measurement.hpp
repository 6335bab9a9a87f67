#pragma once

#include <utility>

#include "diqkd/density_matrix.hpp"
#include "diqkd/rng.hpp"

namespace diqkd::quantum {

/// Two-outcome qubit observable: hermitian with O^2 = I. Outcome bit b
/// corresponds to eigenvalue (-1)^b.
struct Observable {
  Eigen::Matrix2cd op;

  static Observable from_bloch(double nx, double ny, double nz);
  /// cos(theta) Z + sin(theta) X. All protocol measurements live in the
  /// X-Z plane; theta = 0 is Z, theta = pi/2 is X.
  static Observable from_xz_angle(double theta);

  void validate() const;  // throws std::invalid_argument
};

/// Projective binary measurement {P_0, P_1} with P_b = (I + (-1)^b O) / 2.
struct BinaryMeasurement {
  Eigen::Matrix2cd proj0, proj1;

  static BinaryMeasurement of(const Observable& o);
  const Eigen::Matrix2cd& proj(int bit) const { return bit ? proj1 : proj0; }

  void validate() const;  // projective, orthogonal, complete
};

enum class Basis { X, Z };
BinaryMeasurement basis_measurement(Basis b);

/// Bell measurement outcome, two classical bits.
struct BellOutcome {
  bool bit_flip = false;    // X byproduct
  bool phase_flip = false;  // Z byproduct
};

/// |beta_g> = (I (x) X^bit_flip Z^phase_flip) |Phi+>, so (0,0) is Phi+,
/// (1,0) is Psi+, (0,1) is Phi-, (1,1) is Psi-.
Vec bell_vector(BellOutcome g);
BellKind bell_kind(BellOutcome g);

struct MeasureResult {
  int bit;
  double prob;         // Born probability of the realized outcome
  DensityMatrix post;  // renormalized, same register
};

double outcome_probability(const DensityMatrix& rho, const BinaryMeasurement& m,
                           int qubit, int bit);

MeasureResult measure_binary(const DensityMatrix& rho, const BinaryMeasurement& m,
                             int qubit, Rng& rng);

enum class BsmMode { Full, LinearOptics };

/// Project qubits (qa, qb) onto the Bell state labelled g. Returns the
/// outcome probability and the renormalized state on the remaining qubits
/// (a trivial zero-qubit state when the pair was the whole register). A
/// zero-probability outcome comes back with a maximally mixed placeholder.
std::pair<double, DensityMatrix> bsm_project(const DensityMatrix& rho, int qa, int qb,
                                             BellOutcome g);

struct BsmResult {
  bool success = false;
  BellOutcome g;
  DensityMatrix post;  // remaining qubits; on failure the traced-out marginal
};

/// Heralded Bell state measurement on qubits (qa, qb). With probability
/// success_prob the measurement succeeds and g is drawn by the Born rule
/// over the allowed outcomes: all four in Full mode, only the two
/// linear-optics-distinguishable ones (Psi+, Psi-) otherwise.
BsmResult bsm(const DensityMatrix& rho, int qa, int qb, double success_prob,
              BsmMode mode, Rng& rng);

/// Undo the teleportation byproduct: the Pauli on `qubit` that maps the
/// Bell state labelled g back to Phi+.
DensityMatrix apply_correction(const DensityMatrix& rho, BellOutcome g, int qubit);

/// Classical form of apply_correction for a party who already measured in
/// basis a: true when the recorded outcome bit must be flipped. Z outcomes
/// flip on the X byproduct, X outcomes flip on the Z byproduct.
bool correction_flips_outcome(BellOutcome g, Basis a);

}  // namespace diqkd::quantum
