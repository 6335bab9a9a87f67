#include "diqkd/session.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace diqkd {

namespace pp = postprocessing;

SessionOutcome run_session(const RunConfig& cfg) {
  if (!cfg.seed_set) {
    throw std::invalid_argument("simulate requires a seed (config key \"seed\" or --seed)");
  }
  if (cfg.params.ell > cfg.params.m_x) {
    throw std::invalid_argument("ell exceeds the block size m_x");
  }

  protocol::SessionRngs rngs = protocol::SessionRngs::from_seed(cfg.seed);
  protocol::DeviceSet alice =
      protocol::DeviceSet::honest(cfg.channel, cfg.test_angle_u, cfg.test_angle_v);
  protocol::DeviceSet bob =
      protocol::DeviceSet::honest(cfg.channel, cfg.test_angle_u, cfg.test_angle_v);
  protocol::CharlieStrategy charlie = cfg.make_charlie();

  SessionOutcome outcome;
  outcome.sift =
      protocol::run_until_sifted(cfg.params, alice, bob, charlie, rngs, cfg.round_budget);
  outcome.estimate = protocol::estimate(outcome.sift.transcript, outcome.sift.sets,
                                        cfg.params);
  if (outcome.estimate.abort) return outcome;

  security::ProtocolParams params = cfg.params;
  if (cfg.eta_source == security::EtaSource::Observed) {
    params.eta_observed = outcome.estimate.eta;
  }

  // step 5: a random m_x-subset of the heralded X rounds becomes the raw key
  const auto& x_rounds = outcome.sift.sets.x;
  std::vector<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(params.m_x));
  if (static_cast<std::int64_t>(x_rounds.size()) == params.m_x) {
    chosen = x_rounds;
  } else {
    std::vector<std::size_t> pick = sample_without_replacement(
        x_rounds.size(), static_cast<std::size_t>(params.m_x), rngs.post);
    std::sort(pick.begin(), pick.end());
    for (std::size_t idx : pick) chosen.push_back(x_rounds[idx]);
  }
  pp::Bits x_a, x_b;
  x_a.reserve(chosen.size());
  x_b.reserve(chosen.size());
  for (std::int64_t r : chosen) {
    const auto& rec = outcome.sift.transcript.rounds[static_cast<std::size_t>(r)];
    x_a.push_back(static_cast<std::uint8_t>(*rec.y));
    x_b.push_back(static_cast<std::uint8_t>(*rec.y_prime));
  }

  security::EpsilonBudget budget;
  if (cfg.budget == BudgetMode::Optimize) {
    Rng search = Rng(cfg.seed).stream("budget_search");
    budget = security::optimize_budget(params, static_cast<int>(cfg.budget_iterations),
                                       search);
  } else {
    budget = security::uniform_budget(params.eps_sec);
  }
  outcome.report = security::key_length(params, budget, cfg.eta_source);
  outcome.ell_used = params.ell > 0 ? params.ell : outcome.report.key_length;
  if (outcome.ell_used < 1) {
    outcome.ell_used = 0;
    return outcome;
  }

  auto recon =
      pp::reconcile(x_a, x_b, static_cast<std::int64_t>(std::llround(outcome.report.leak_ec)));
  outcome.leaked_bits = recon.leaked_bits;
  outcome.verified = pp::verify(x_a, recon.corrected, params.eps_cor, rngs.post);

  pp::ToeplitzSeed pa_seed = pp::sample_toeplitz_seed(params.m_x, outcome.ell_used,
                                                      rngs.post);
  outcome.key_alice = pp::privacy_amplify(x_a, pa_seed);
  outcome.key_bob = pp::privacy_amplify(recon.corrected, pa_seed);
  return outcome;
}

}  // namespace diqkd
