#include "diqkd/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace diqkd::protocol {

using quantum::basis_measurement;
using quantum::bsm;
using quantum::correction_flips_outcome;
using quantum::depolarize;
using quantum::measure_binary;
using quantum::Observable;
using quantum::partial_trace;
using quantum::tensor;
using quantum::werner_state;

SelectionProbs selection_probabilities(std::int64_t m_x, std::int64_t m_z,
                                       std::int64_t m_j, double eta_tol) {
  if (m_x < 1 || m_z < 1 || m_j < 1)
    throw std::invalid_argument("selection_probabilities: block sizes must be positive");
  if (!(eta_tol > 0.0) || eta_tol > 1.0)
    throw std::invalid_argument("selection_probabilities: eta_tol outside (0, 1]");
  const double mx = static_cast<double>(m_x);
  const double mz = static_cast<double>(m_z);
  const double mj = static_cast<double>(m_j);
  const double root_sum = std::sqrt(mx) + std::sqrt(mz);
  SelectionProbs p;
  p.p_s = eta_tol * mj / (eta_tol * mj + root_sum * root_sum);
  p.p_x = 1.0 / (1.0 + std::sqrt(mz / mx));
  return p;
}

double ChannelModel::resolved_success_prob() const {
  if (success_prob) {
    if (*success_prob < 0.0 || *success_prob > 1.0)
      throw std::invalid_argument("channel: success_prob outside [0, 1]");
    return *success_prob;
  }
  if (transmission < 0.0 || transmission > 1.0)
    throw std::invalid_argument("channel: transmission outside [0, 1]");
  const double p_bsm = bsm_mode == BsmMode::LinearOptics ? 0.5 : 1.0;
  return transmission * transmission * p_bsm;
}

DeviceSet DeviceSet::honest(const ChannelModel& channel, double test_angle_u,
                            double test_angle_v) {
  DensityMatrix source = werner_state(channel.visibility);
  DensityMatrix sent = depolarize(source, channel.depolarize_p, 1);
  return DeviceSet{std::move(source),
                   std::move(sent),
                   basis_measurement(Basis::X),
                   basis_measurement(Basis::Z),
                   quantum::BinaryMeasurement::of(Observable::from_xz_angle(test_angle_u)),
                   quantum::BinaryMeasurement::of(Observable::from_xz_angle(test_angle_v))};
}

CharlieStrategy CharlieStrategy::honest(double success_prob, BsmMode mode) {
  if (success_prob < 0.0 || success_prob > 1.0)
    throw std::invalid_argument("charlie: success_prob outside [0, 1]");
  CharlieStrategy c;
  c.kind = Kind::Honest;
  c.success_prob = success_prob;
  c.bsm_mode = mode;
  return c;
}

CharlieStrategy CharlieStrategy::always_pass(BsmMode mode) {
  CharlieStrategy c;
  c.kind = Kind::AlwaysPass;
  c.success_prob = 1.0;
  c.bsm_mode = mode;
  return c;
}

CharlieStrategy CharlieStrategy::selective_coin(double pass_fraction) {
  if (pass_fraction < 0.0 || pass_fraction > 1.0)
    throw std::invalid_argument("charlie: pass_fraction outside [0, 1]");
  CharlieStrategy c;
  c.kind = Kind::Selective;
  c.bsm_mode = BsmMode::Full;
  c.announce = [pass_fraction](std::int64_t, BellOutcome, Rng& rng) {
    return rng.bernoulli(pass_fraction);
  };
  return c;
}

SessionRngs SessionRngs::from_seed(std::uint64_t seed) {
  const Rng root(seed);
  return SessionRngs{root.stream("mode"),      root.stream("alice_basis"),
                     root.stream("alice_meas"), root.stream("bob_basis"),
                     root.stream("bob_meas"),   root.stream("charlie"),
                     root.stream("post")};
}

RoundRecord run_round(std::int64_t index, const DeviceSet& alice, const DeviceSet& bob,
                      const CharlieStrategy& charlie, const SelectionProbs& probs,
                      SessionRngs& rngs) {
  RoundRecord rec;
  rec.index = index;
  rec.mode = rngs.mode.bernoulli(probs.p_s) ? Mode::Chsh : Mode::Qkd;

  // Bob cannot see Alice's mode choice; his devices fire every round.
  const bool bob_x = rngs.bob_basis.bernoulli(probs.p_x);
  auto bob_meas = measure_binary(bob.source_sent, bob_x ? bob.key_x : bob.key_z, 0,
                                 rngs.bob_meas);

  if (rec.mode == Mode::Chsh) {
    // both halves measured locally; the relay sees a lone photon from Bob
    // and cannot herald
    const int u = rngs.alice_basis.bernoulli(0.5) ? 1 : 0;
    const int v = rngs.alice_basis.bernoulli(0.5) ? 1 : 0;
    auto first = measure_binary(alice.source, u ? alice.key_x : alice.key_z, 0,
                                rngs.alice_meas);
    auto second = measure_binary(first.post, v ? alice.test_v : alice.test_u, 1,
                                 rngs.alice_meas);
    rec.u = u;
    rec.v = v;
    rec.s = first.bit;
    rec.t = second.bit;
    return rec;
  }

  const bool alice_x = rngs.alice_basis.bernoulli(probs.p_x);
  auto alice_meas = measure_binary(alice.source_sent, alice_x ? alice.key_x : alice.key_z,
                                   0, rngs.alice_meas);
  rec.a = alice_x ? Basis::X : Basis::Z;
  rec.b = bob_x ? Basis::X : Basis::Z;
  rec.y_prime = bob_meas.bit;

  // conditional states of the two transmitted halves
  const DensityMatrix joint = tensor(partial_trace(alice_meas.post, {1}),
                                     partial_trace(bob_meas.post, {1}));

  bool pass = false;
  BellOutcome g;
  switch (charlie.kind) {
    case CharlieStrategy::Kind::Honest: {
      auto res = bsm(joint, 0, 1, charlie.success_prob, charlie.bsm_mode, rngs.charlie);
      pass = res.success;
      g = res.g;
      break;
    }
    case CharlieStrategy::Kind::AlwaysPass: {
      auto res = bsm(joint, 0, 1, 1.0, charlie.bsm_mode, rngs.charlie);
      pass = res.success;
      g = res.g;
      break;
    }
    case CharlieStrategy::Kind::Selective: {
      auto res = bsm(joint, 0, 1, 1.0, BsmMode::Full, rngs.charlie);
      pass = res.success && charlie.announce &&
             charlie.announce(index, res.g, rngs.charlie);
      g = res.g;
      break;
    }
  }

  int y = alice_meas.bit;
  if (pass && correction_flips_outcome(g, *rec.a)) y ^= 1;
  rec.y = y;
  rec.f = pass;
  if (pass) rec.g = g;
  return rec;
}

SiftedSets sift(const Transcript& transcript) {
  SiftedSets sets;
  for (const RoundRecord& r : transcript.rounds) {
    if (r.mode == Mode::Chsh) {
      sets.j.push_back(r.index);
      continue;
    }
    const bool pass = r.f.value_or(false);
    if (r.a == Basis::X && r.b == Basis::X) {
      sets.x_tilde.push_back(r.index);
      if (pass) sets.x.push_back(r.index);
    } else if (r.a == Basis::Z && r.b == Basis::Z && pass) {
      sets.z.push_back(r.index);
    }
  }
  return sets;
}

EstimationResult estimate(const Transcript& transcript, const SiftedSets& sets,
                          const security::ProtocolParams& params) {
  if (sets.j.empty() || sets.z.empty() || sets.x_tilde.empty())
    throw std::invalid_argument("estimate: empty test set");
  const auto record_at = [&](std::int64_t idx) -> const RoundRecord& {
    if (idx < 0 || idx >= static_cast<std::int64_t>(transcript.rounds.size()) ||
        transcript.rounds[static_cast<std::size_t>(idx)].index != idx)
      throw std::invalid_argument("estimate: sets refer to rounds missing from the transcript");
    return transcript.rounds[static_cast<std::size_t>(idx)];
  };

  std::int64_t wins = 0;
  for (const std::int64_t idx : sets.j) {
    const RoundRecord& r = record_at(idx);
    if (!r.u || !r.v || !r.s || !r.t)
      throw std::invalid_argument("estimate: CHSH round missing fields");
    if ((*r.s ^ *r.t) == (*r.u & *r.v)) ++wins;
  }
  std::int64_t errors = 0;
  for (const std::int64_t idx : sets.z) {
    const RoundRecord& r = record_at(idx);
    if (!r.y || !r.y_prime)
      throw std::invalid_argument("estimate: key round missing outcomes");
    errors += *r.y ^ *r.y_prime;
  }

  EstimationResult res;
  res.s_test = 8.0 * static_cast<double>(wins) / static_cast<double>(sets.j.size()) - 4.0;
  res.q_test = static_cast<double>(errors) / static_cast<double>(sets.z.size());
  res.eta = static_cast<double>(sets.x.size()) / static_cast<double>(sets.x_tilde.size());
  if (res.s_test < params.s_tol) {
    res.abort = true;
    res.reason = AbortReason::ChshLow;
  } else if (res.q_test > params.q_tol) {
    res.abort = true;
    res.reason = AbortReason::QberHigh;
  } else if (res.eta < params.eta_tol) {
    res.abort = true;
    res.reason = AbortReason::EtaLow;
  }
  return res;
}

SiftResult run_until_sifted(const security::ProtocolParams& params, const DeviceSet& alice,
                            const DeviceSet& bob, const CharlieStrategy& charlie,
                            SessionRngs& rngs, std::int64_t round_budget) {
  params.validate();
  const SelectionProbs probs =
      selection_probabilities(params.m_x, params.m_z, params.m_j, params.eta_tol);

  SiftResult out;
  std::int64_t nx = 0, nz = 0, nj = 0;
  while (nx < params.m_x || nz < params.m_z || nj < params.m_j) {
    if (out.rounds_run >= round_budget)
      throw std::runtime_error(
          "run_until_sifted: round budget exhausted before the blocks filled; "
          "the channel cannot sustain the requested block sizes");
    RoundRecord rec = run_round(out.rounds_run, alice, bob, charlie, probs, rngs);
    if (rec.mode == Mode::Chsh) {
      out.sets.j.push_back(rec.index);
      ++nj;
    } else {
      const bool pass = rec.f.value_or(false);
      if (rec.a == Basis::X && rec.b == Basis::X) {
        out.sets.x_tilde.push_back(rec.index);
        if (pass) {
          out.sets.x.push_back(rec.index);
          ++nx;
        }
      } else if (rec.a == Basis::Z && rec.b == Basis::Z && pass) {
        out.sets.z.push_back(rec.index);
        ++nz;
      }
    }
    out.transcript.rounds.push_back(std::move(rec));
    ++out.rounds_run;
  }
  return out;
}

EstimationResult attack_demo_selective_charlie(const security::ProtocolParams& params,
                                               Rng& rng, double pass_fraction) {
  SessionRngs rngs = SessionRngs::from_seed(rng.next_u64());
  const ChannelModel ideal;
  const DeviceSet alice = DeviceSet::honest(ideal);
  const DeviceSet bob = DeviceSet::honest(ideal);
  const CharlieStrategy charlie = CharlieStrategy::selective_coin(pass_fraction);
  const SiftResult run = run_until_sifted(params, alice, bob, charlie, rngs);
  return estimate(run.transcript, run.sets, params);
}

}  // namespace diqkd::protocol
