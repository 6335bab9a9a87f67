#pragma once

#include <cstdint>
#include <string>

#include "diqkd/protocol.hpp"
#include "diqkd/security.hpp"

namespace diqkd {

/// How the epsilon budget is chosen: the uniform eps_sec/9 split, or a
/// randomized search over splits satisfying the same total.
enum class BudgetMode { Uniform, Optimize };

/// Which relay the simulation faces.
enum class AdversaryKind { HonestRelay, AlwaysPass, Selective };

/// Everything a subcommand needs, parsed from one JSON file. Protocol
/// parameters use the same key names the reports print (m_x, m_z, m_j,
/// S_tol, Q_tol, eta_tol, leak_EC, eps_sec, eps_cor, ell); the channel
/// block holds t, V, depolarize_p, bsm_mode, success_prob.
struct RunConfig {
  security::ProtocolParams params;
  protocol::ChannelModel channel;

  AdversaryKind adversary = AdversaryKind::HonestRelay;
  double pass_fraction = 0.1;  // Selective relay only

  double test_angle_u = 0.7853981633974483;
  double test_angle_v = -0.7853981633974483;

  std::uint64_t seed = 0;
  bool seed_set = false;

  security::EtaSource eta_source = security::EtaSource::Tolerated;
  BudgetMode budget = BudgetMode::Uniform;
  std::int64_t budget_iterations = 2000;
  std::int64_t round_budget = 100000000;

  /// Output location; a file path for rate/sweep, a directory for simulate.
  std::string out_path;

  protocol::CharlieStrategy make_charlie() const;
};

/// Parse a config document. Unknown keys are rejected so typos fail loudly.
/// Throws std::invalid_argument with a key-specific message.
RunConfig parse_run_config(const std::string& json_text);

RunConfig load_run_config(const std::string& path);

}  // namespace diqkd
