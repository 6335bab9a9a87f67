#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "diqkd/chsh.hpp"
#include "diqkd/measurement.hpp"
#include "diqkd/security.hpp"

namespace diqkd::protocol {

using quantum::Basis;
using quantum::BellOutcome;
using quantum::BinaryMeasurement;
using quantum::BsmMode;
using quantum::DensityMatrix;

/// Round type: local CHSH test in Alice's lab, or key generation through
/// the relay.
enum class Mode { Chsh, Qkd };

struct SelectionProbs {
  double p_s = 0;  // probability of a CHSH round
  double p_x = 0;  // probability of the X basis in key rounds
};

/// Biases that balance the expected fill times of the three blocks:
/// p_s = eta m_j / (eta m_j + (sqrt(m_x) + sqrt(m_z))^2),
/// p_x = 1 / (1 + sqrt(m_z / m_x)).
SelectionProbs selection_probabilities(std::int64_t m_x, std::int64_t m_z,
                                       std::int64_t m_j, double eta_tol);

/// One protocol round. CHSH rounds carry u, v, s, t; key rounds carry
/// a, b, y, y_prime, f, and g when the relay heralded. y is already
/// corrected for the announced Bell outcome.
struct RoundRecord {
  std::int64_t index = 0;
  Mode mode = Mode::Qkd;
  std::optional<int> u, v, s, t;
  std::optional<Basis> a, b;
  std::optional<int> y, y_prime;
  std::optional<bool> f;
  std::optional<BellOutcome> g;
};

struct Transcript {
  std::vector<RoundRecord> rounds;
};

/// Round index sets produced by sifting. x: key rounds, both X, heralded.
/// z: both Z, heralded. j: CHSH rounds. x_tilde: both X regardless of
/// heralding (the denominator of the efficiency estimate).
struct SiftedSets {
  std::vector<std::int64_t> x, z, j, x_tilde;
};

/// Recompute the sets from a transcript by the membership predicates.
SiftedSets sift(const Transcript& transcript);

enum class AbortReason { None, ChshLow, QberHigh, EtaLow };

struct EstimationResult {
  double s_test = 0;
  double q_test = 0;
  double eta = 0;
  bool abort = false;
  AbortReason reason = AbortReason::None;
};

/// S_test = 8 (wins / |j|) - 4 with win: s xor t = u and v;
/// Q_test = mean of y xor y' over z; eta = |x| / |x_tilde|.
/// Aborts when s_test < s_tol, q_test > q_tol, or eta < eta_tol, with the
/// reason reported in that priority order.
EstimationResult estimate(const Transcript& transcript, const SiftedSets& sets,
                          const security::ProtocolParams& params);

/// Source and channel model for one party's link to the relay.
struct ChannelModel {
  double visibility = 1.0;    // source visibility (werner weight)
  double transmission = 1.0;  // line transmission to the relay, per party
  double depolarize_p = 0.0;  // depolarization of the transmitted half
  BsmMode bsm_mode = BsmMode::LinearOptics;
  std::optional<double> success_prob;  // heralding override

  /// Heralding probability: the override when set, otherwise
  /// t_A t_B p_bsm with p_bsm = 1/2 for a linear-optics relay (two of the
  /// four Bell states are distinguishable) and 1 for a full measurement.
  double resolved_success_prob() const;
};

/// One party's devices. The source emits a fresh pair each round, kept
/// half first; `source_sent` is the same pair after the channel acted on
/// the transmitted half (key rounds), while CHSH rounds measure `source`
/// directly since both halves stay in the lab.
struct DeviceSet {
  DensityMatrix source;
  DensityMatrix source_sent;
  BinaryMeasurement key_x, key_z;
  BinaryMeasurement test_u, test_v;

  /// Werner source of the channel's visibility, ideal X/Z key
  /// measurements, test directions at the given X-Z plane angles
  /// (defaults: the Tsirelson-optimal pair).
  static DeviceSet honest(const ChannelModel& channel,
                          double test_angle_u = 0.7853981633974483,
                          double test_angle_v = -0.7853981633974483);
};

/// What the relay does each key round.
struct CharlieStrategy {
  enum class Kind { Honest, AlwaysPass, Selective };
  Kind kind = Kind::Honest;
  double success_prob = 1.0;                // Honest only
  BsmMode bsm_mode = BsmMode::LinearOptics;  // Honest and AlwaysPass
  /// Selective: the relay measures with perfect heralding (full
  /// measurement), then decides what to announce from what it legitimately
  /// holds: the round index and its own outcome.
  std::function<bool(std::int64_t index, BellOutcome g, Rng& rng)> announce;

  static CharlieStrategy honest(double success_prob,
                                BsmMode mode = BsmMode::LinearOptics);
  static CharlieStrategy always_pass(BsmMode mode = BsmMode::LinearOptics);
  static CharlieStrategy selective_coin(double pass_fraction);
};

/// Per-subsystem random streams, split once from the session seed so that
/// extending a run never perturbs earlier draws.
struct SessionRngs {
  Rng mode, alice_basis, alice_meas, bob_basis, bob_meas, charlie, post;
  static SessionRngs from_seed(std::uint64_t seed);
};

/// Play one round: sample the mode, run the devices and the relay, record
/// everything announced. Fresh source states each round.
RoundRecord run_round(std::int64_t index, const DeviceSet& alice, const DeviceSet& bob,
                      const CharlieStrategy& charlie, const SelectionProbs& probs,
                      SessionRngs& rngs);

struct SiftResult {
  Transcript transcript;
  SiftedSets sets;
  std::int64_t rounds_run = 0;
};

/// Run rounds until |x| >= m_x, |z| >= m_z and |j| >= m_j. Throws
/// std::runtime_error when round_budget rounds do not get there (e.g. a
/// channel that never heralds).
SiftResult run_until_sifted(const security::ProtocolParams& params, const DeviceSet& alice,
                            const DeviceSet& bob, const CharlieStrategy& charlie,
                            SessionRngs& rngs, std::int64_t round_budget = 100000000);

/// Canned demonstration: ideal devices, but the relay only announces a
/// biased coin's worth of its (always successful) measurements. Honest
/// parties see perfect correlations yet the heralding rate collapses, so
/// runs abort on the efficiency threshold.
EstimationResult attack_demo_selective_charlie(const security::ProtocolParams& params,
                                               Rng& rng, double pass_fraction = 0.1);

}  // namespace diqkd::protocol
