#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "diqkd/density_matrix.hpp"
#include "diqkd/measurement.hpp"
#include "diqkd/rng.hpp"

using namespace diqkd;
using namespace diqkd::quantum;

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

bool close(const Mat& a, const Mat& b, double tol = 1e-12) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a - b).cwiseAbs().maxCoeff() <= tol;
}

Vec ket0() {
  Vec v(2);
  v << 1.0, 0.0;
  return v;
}

Vec ket_plus() {
  Vec v(2);
  v << kInvSqrt2, kInvSqrt2;
  return v;
}

}  // namespace

TEST_CASE("observable from bloch vector") {
  Observable z = Observable::from_bloch(0.0, 0.0, 1.0);
  CHECK(close(z.op, pauli_z()));
  Observable x = Observable::from_bloch(1.0, 0.0, 0.0);
  CHECK(close(x.op, pauli_x()));
  Observable y = Observable::from_bloch(0.0, 1.0, 0.0);
  CHECK(close(y.op, pauli_y()));

  // Any unit direction gives a valid +-1 observable.
  Observable tilted = Observable::from_bloch(0.6, 0.0, 0.8);
  tilted.validate();
  CHECK(close(tilted.op * tilted.op, id2()));

  CHECK_THROWS_AS(Observable::from_bloch(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Observable::from_bloch(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("observable from xz angle") {
  CHECK(close(Observable::from_xz_angle(0.0).op, pauli_z()));
  CHECK(close(Observable::from_xz_angle(M_PI / 2).op, pauli_x()));

  double theta = M_PI / 4;
  Mat want = std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x();
  CHECK(close(Observable::from_xz_angle(theta).op, want));
  Observable::from_xz_angle(theta).validate();
}

TEST_CASE("binary measurement is projective and complete") {
  for (double theta : {0.0, 0.3, M_PI / 4, M_PI / 2, 2.0}) {
    BinaryMeasurement m = BinaryMeasurement::of(Observable::from_xz_angle(theta));
    m.validate();
    CHECK(close(m.proj0 + m.proj1, id2()));
    CHECK(close(m.proj0 * m.proj0, m.proj0));
    CHECK(close(m.proj1 * m.proj1, m.proj1));
    CHECK(close(m.proj0 * m.proj1, Mat::Zero(2, 2)));
    CHECK(close(m.proj(0), m.proj0));
    CHECK(close(m.proj(1), m.proj1));
  }
}

TEST_CASE("basis measurements project onto eigenstates") {
  BinaryMeasurement z = basis_measurement(Basis::Z);
  CHECK(close(z.proj0, ket0() * ket0().adjoint()));

  BinaryMeasurement x = basis_measurement(Basis::X);
  CHECK(close(x.proj0, ket_plus() * ket_plus().adjoint()));
}

TEST_CASE("born probabilities on known states") {
  BinaryMeasurement z = basis_measurement(Basis::Z);
  BinaryMeasurement x = basis_measurement(Basis::X);

  DensityMatrix zero = DensityMatrix::pure(ket0());
  CHECK(outcome_probability(zero, z, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(outcome_probability(zero, z, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(outcome_probability(zero, x, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));

  DensityMatrix phi = bell_state(BellKind::PhiPlus);
  for (int qubit : {0, 1}) {
    for (int bit : {0, 1}) {
      CHECK(outcome_probability(phi, z, qubit, bit) ==
            doctest::Approx(0.5).epsilon(1e-12));
      CHECK(outcome_probability(phi, x, qubit, bit) ==
            doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  // Probabilities over the two outcomes always sum to one.
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    double theta = 2.0 * M_PI * rng.uniform();
    BinaryMeasurement m = BinaryMeasurement::of(Observable::from_xz_angle(theta));
    DensityMatrix w = werner_state(rng.uniform());
    double p0 = outcome_probability(w, m, 1, 0);
    double p1 = outcome_probability(w, m, 1, 1);
    CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p0 >= -1e-12);
    CHECK(p1 >= -1e-12);
  }
}

TEST_CASE("measurement collapses the state") {
  BinaryMeasurement z = basis_measurement(Basis::Z);
  Rng rng(11);

  DensityMatrix zero = DensityMatrix::pure(ket0());
  MeasureResult r = measure_binary(zero, z, 0, rng);
  CHECK(r.bit == 0);
  CHECK(r.prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(close(r.post.mat(), zero.mat()));
  CHECK(r.post.qubits() == 1);
}

TEST_CASE("Phi+ gives perfectly correlated Z and X outcomes") {
  Rng rng(23);
  for (Basis basis : {Basis::Z, Basis::X}) {
    BinaryMeasurement m = basis_measurement(basis);
    for (int trial = 0; trial < 200; ++trial) {
      DensityMatrix phi = bell_state(BellKind::PhiPlus);
      MeasureResult first = measure_binary(phi, m, 0, rng);
      CHECK(first.prob == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(first.post.qubits() == 2);
      MeasureResult second = measure_binary(first.post, m, 1, rng);
      CHECK(second.bit == first.bit);
      CHECK(second.prob == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("bell vectors match the byproduct convention") {
  CHECK(bell_kind({false, false}) == BellKind::PhiPlus);
  CHECK(bell_kind({true, false}) == BellKind::PsiPlus);
  CHECK(bell_kind({false, true}) == BellKind::PhiMinus);
  CHECK(bell_kind({true, true}) == BellKind::PsiMinus);

  for (bool bf : {false, true}) {
    for (bool pf : {false, true}) {
      BellOutcome g{bf, pf};
      Vec direct = bell_vector(g);
      // (I (x) X^bit Z^phase) |Phi+> built from primitive gates.
      Mat gate = id2();
      if (pf) gate = pauli_z() * gate;
      if (bf) gate = pauli_x() * gate;
      Vec want = kron(Mat(id2()), gate) * bell_vector({false, false});
      CHECK((direct - want).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(close(bell_state(bell_kind(g)).mat(), (want * want.adjoint()).eval()));
    }
  }
}

TEST_CASE("bsm projection swaps entanglement onto the outer pair") {
  // Register (A0, A1, B0, B1) holding Phi+ on (A0,A1) and Phi+ on (B0,B1).
  DensityMatrix joint =
      tensor(bell_state(BellKind::PhiPlus), bell_state(BellKind::PhiPlus));
  REQUIRE(joint.qubits() == 4);

  double total = 0.0;
  for (bool bf : {false, true}) {
    for (bool pf : {false, true}) {
      BellOutcome g{bf, pf};
      auto [prob, post] = bsm_project(joint, 1, 2, g);
      total += prob;
      CHECK(prob == doctest::Approx(0.25).epsilon(1e-12));
      REQUIRE(post.qubits() == 2);
      // Remaining pair (A0, B1) lands in the Bell state labelled g.
      CHECK(close(post.mat(), bell_state(bell_kind(g)).mat()));
      // The correction on either remaining qubit restores Phi+.
      DensityMatrix fixed = apply_correction(post, g, 1);
      CHECK(close(fixed.mat(), bell_state(BellKind::PhiPlus).mat()));
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bsm projection handles a bare pair and invalid qubits") {
  DensityMatrix phi = bell_state(BellKind::PhiPlus);
  auto [prob, post] = bsm_project(phi, 0, 1, {false, false});
  CHECK(prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(post.qubits() == 0);

  auto [p_psi, post_psi] = bsm_project(phi, 0, 1, {true, false});
  CHECK(p_psi == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(post_psi.qubits() == 0);

  CHECK_THROWS_AS(bsm_project(phi, 0, 0, {false, false}), std::invalid_argument);
  CHECK_THROWS_AS(bsm_project(phi, 0, 2, {false, false}), std::invalid_argument);
}

TEST_CASE("classical correction matches the quantum one") {
  // After a swap with outcome g the outer pair is in bell_state(g). Both
  // parties then measure the same basis; the flip rule must reconcile the
  // recorded bits for every outcome and both bases.
  for (Basis basis : {Basis::Z, Basis::X}) {
    BinaryMeasurement m = basis_measurement(basis);
    for (bool bf : {false, true}) {
      for (bool pf : {false, true}) {
        BellOutcome g{bf, pf};
        DensityMatrix pair = DensityMatrix::pure(bell_vector(g));
        Rng rng(100 + 2 * int(bf) + int(pf));
        for (int trial = 0; trial < 100; ++trial) {
          MeasureResult alice = measure_binary(pair, m, 0, rng);
          MeasureResult bob = measure_binary(alice.post, m, 1, rng);
          int corrected = alice.bit ^ int(correction_flips_outcome(g, basis));
          CHECK(corrected == bob.bit);
        }
      }
    }
  }
}

TEST_CASE("flip rule only reacts to the relevant byproduct") {
  // Z readouts flip with the X byproduct, X readouts with the Z byproduct.
  CHECK_FALSE(correction_flips_outcome({false, false}, Basis::Z));
  CHECK(correction_flips_outcome({true, false}, Basis::Z));
  CHECK_FALSE(correction_flips_outcome({false, true}, Basis::Z));
  CHECK(correction_flips_outcome({true, true}, Basis::Z));

  CHECK_FALSE(correction_flips_outcome({false, false}, Basis::X));
  CHECK_FALSE(correction_flips_outcome({true, false}, Basis::X));
  CHECK(correction_flips_outcome({false, true}, Basis::X));
  CHECK(correction_flips_outcome({true, true}, Basis::X));
}

TEST_CASE("linear optics bsm announces only the psi outcomes") {
  // The intrinsic 1/2 efficiency of the linear optics setup is part of
  // success_prob; given a herald, the outcome is one of the two psi states.
  DensityMatrix joint =
      tensor(bell_state(BellKind::PhiPlus), bell_state(BellKind::PhiPlus));
  Rng rng(5);
  int psi_minus = 0;
  for (int trial = 0; trial < 400; ++trial) {
    BsmResult r = bsm(joint, 1, 2, 1.0, BsmMode::LinearOptics, rng);
    REQUIRE(r.success);
    CHECK(r.g.bit_flip);  // Psi+ or Psi-, never a Phi outcome
    CHECK(r.post.qubits() == 2);
    CHECK(close(r.post.mat(), bell_state(bell_kind(r.g)).mat()));
    if (r.g.phase_flip) ++psi_minus;
  }
  // Both psi outcomes have equal weight for Phi+ (x) Phi+.
  CHECK(psi_minus > 120);
  CHECK(psi_minus < 280);
}

TEST_CASE("full bsm heralds every outcome by Born weight") {
  DensityMatrix joint =
      tensor(bell_state(BellKind::PhiPlus), bell_state(BellKind::PhiPlus));
  Rng rng(6);
  int counts[4] = {0, 0, 0, 0};
  const int trials = 2000;
  for (int trial = 0; trial < trials; ++trial) {
    BsmResult r = bsm(joint, 1, 2, 1.0, BsmMode::Full, rng);
    REQUIRE(r.success);
    ++counts[2 * int(r.g.bit_flip) + int(r.g.phase_flip)];
  }
  for (int c : counts) {
    // Each outcome has weight 1/4; allow ~5 sigma.
    CHECK(c > trials / 4 - 100);
    CHECK(c < trials / 4 + 100);
  }
}

TEST_CASE("bsm success probability gates the announcement") {
  DensityMatrix joint =
      tensor(bell_state(BellKind::PhiPlus), bell_state(BellKind::PhiPlus));
  Rng rng(9);

  int heralded = 0;
  const int trials = 4000;
  for (int trial = 0; trial < trials; ++trial) {
    BsmResult r = bsm(joint, 1, 2, 0.3, BsmMode::Full, rng);
    if (r.success) ++heralded;
    if (!r.success) CHECK(r.post.qubits() == 2);
  }
  double rate = double(heralded) / trials;
  CHECK(rate == doctest::Approx(0.3).epsilon(0.15));

  Rng rng2(10);
  BsmResult never = bsm(joint, 1, 2, 0.0, BsmMode::Full, rng2);
  CHECK_FALSE(never.success);
}
