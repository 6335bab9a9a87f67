#pragma once

#include <cstdint>

#include "diqkd/postprocessing.hpp"
#include "diqkd/run_config.hpp"

namespace diqkd {

/// Everything one seeded protocol session produces: the round transcript,
/// the estimation step, and, when the run survives estimation and the key
/// length is positive, the post-processed key pair.
struct SessionOutcome {
  protocol::SiftResult sift;
  protocol::EstimationResult estimate;

  security::SecurityReport report;  // meaningful only when !estimate.abort
  std::int64_t ell_used = 0;        // configured ell, or the computed bound
  std::int64_t leaked_bits = 0;
  bool verified = false;
  postprocessing::Bits key_alice, key_bob;
};

/// Run the protocol end to end for one config: rounds until the blocks
/// fill, estimation, then reconciliation, verification and privacy
/// amplification on a random m_x-subset of the heralded X rounds.
/// Deterministic given the config (including its seed). Throws
/// std::invalid_argument on unusable configs (missing seed, ell > m_x) and
/// std::runtime_error when the round budget runs out.
SessionOutcome run_session(const RunConfig& cfg);

}  // namespace diqkd
