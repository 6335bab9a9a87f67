#include "diqkd/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace diqkd {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      bad("unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

double get_number(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) bad("\"" + key + "\" must be a number");
  return v.get<double>();
}

std::int64_t get_count(const json& obj, const std::string& key) {
  // Counts like m_x are often written 1e8; accept any integral number.
  double x = get_number(obj, key);
  if (!(x >= 0) || x != std::floor(x) || x > 9.2e18) {
    bad("\"" + key + "\" must be a nonnegative integer");
  }
  return static_cast<std::int64_t>(x);
}

}  // namespace

protocol::CharlieStrategy RunConfig::make_charlie() const {
  switch (adversary) {
    case AdversaryKind::AlwaysPass:
      return protocol::CharlieStrategy::always_pass(channel.bsm_mode);
    case AdversaryKind::Selective:
      return protocol::CharlieStrategy::selective_coin(pass_fraction);
    case AdversaryKind::HonestRelay:
    default:
      return protocol::CharlieStrategy::honest(channel.resolved_success_prob(),
                                               channel.bsm_mode);
  }
}

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) bad("top level must be an object");

  check_keys(doc, "top level",
             {"m_x", "m_z", "m_j", "S_tol", "Q_tol", "eta_tol", "leak_EC", "eps_sec",
              "eps_cor", "ell", "eta_observed", "channel", "adversary", "test_angles",
              "seed", "eta_source", "budget", "budget_iterations", "round_budget",
              "out"});

  RunConfig cfg;
  for (const char* key : {"m_x", "S_tol", "Q_tol", "eta_tol", "eps_sec", "eps_cor"}) {
    if (!doc.contains(key)) bad(std::string("missing required key \"") + key + "\"");
  }

  cfg.params.m_x = get_count(doc, "m_x");
  cfg.params.m_z = doc.contains("m_z") ? get_count(doc, "m_z") : cfg.params.m_x;
  cfg.params.m_j = doc.contains("m_j") ? get_count(doc, "m_j") : cfg.params.m_x;
  cfg.params.s_tol = get_number(doc, "S_tol");
  cfg.params.q_tol = get_number(doc, "Q_tol");
  cfg.params.eta_tol = get_number(doc, "eta_tol");
  cfg.params.eps_sec = get_number(doc, "eps_sec");
  cfg.params.eps_cor = get_number(doc, "eps_cor");

  if (doc.contains("leak_EC")) {
    const json& v = doc.at("leak_EC");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") bad("\"leak_EC\" must be a number or \"auto\"");
    } else if (v.is_number()) {
      double leak = v.get<double>();
      if (leak < 0) bad("\"leak_EC\" must be nonnegative");
      cfg.params.leak_ec = leak;
    } else {
      bad("\"leak_EC\" must be a number or \"auto\"");
    }
  }
  if (doc.contains("ell")) cfg.params.ell = get_count(doc, "ell");
  if (doc.contains("eta_observed")) {
    cfg.params.eta_observed = get_number(doc, "eta_observed");
  }

  if (doc.contains("channel")) {
    const json& ch = doc.at("channel");
    if (!ch.is_object()) bad("\"channel\" must be an object");
    check_keys(ch, "channel", {"t", "V", "depolarize_p", "bsm_mode", "success_prob"});
    if (ch.contains("t")) cfg.channel.transmission = get_number(ch, "t");
    if (ch.contains("V")) cfg.channel.visibility = get_number(ch, "V");
    if (ch.contains("depolarize_p")) cfg.channel.depolarize_p = get_number(ch, "depolarize_p");
    if (ch.contains("bsm_mode")) {
      std::string mode = ch.at("bsm_mode").is_string() ? ch.at("bsm_mode").get<std::string>() : "";
      if (mode == "linear_optics") {
        cfg.channel.bsm_mode = quantum::BsmMode::LinearOptics;
      } else if (mode == "full") {
        cfg.channel.bsm_mode = quantum::BsmMode::Full;
      } else {
        bad("\"bsm_mode\" must be \"linear_optics\" or \"full\"");
      }
    }
    if (ch.contains("success_prob")) {
      cfg.channel.success_prob = get_number(ch, "success_prob");
    }
  }

  if (doc.contains("adversary")) {
    const json& adv = doc.at("adversary");
    if (!adv.is_object()) bad("\"adversary\" must be an object");
    check_keys(adv, "adversary", {"charlie", "pass_fraction"});
    std::string kind =
        adv.contains("charlie") && adv.at("charlie").is_string()
            ? adv.at("charlie").get<std::string>()
            : "honest";
    if (kind == "honest") {
      cfg.adversary = AdversaryKind::HonestRelay;
    } else if (kind == "always_pass") {
      cfg.adversary = AdversaryKind::AlwaysPass;
    } else if (kind == "selective") {
      cfg.adversary = AdversaryKind::Selective;
    } else {
      bad("\"adversary.charlie\" must be honest, always_pass, or selective");
    }
    if (adv.contains("pass_fraction")) {
      cfg.pass_fraction = get_number(adv, "pass_fraction");
      if (!(cfg.pass_fraction >= 0 && cfg.pass_fraction <= 1)) {
        bad("\"pass_fraction\" must be in [0, 1]");
      }
    }
  }

  if (doc.contains("test_angles")) {
    const json& ta = doc.at("test_angles");
    if (!ta.is_array() || ta.size() != 2 || !ta[0].is_number() || !ta[1].is_number()) {
      bad("\"test_angles\" must be an array of two numbers");
    }
    cfg.test_angle_u = ta[0].get<double>();
    cfg.test_angle_v = ta[1].get<double>();
  }

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (s.is_number_unsigned()) {
      cfg.seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    } else {
      bad("\"seed\" must be a nonnegative integer");
    }
    cfg.seed_set = true;
  }

  if (doc.contains("eta_source")) {
    std::string src =
        doc.at("eta_source").is_string() ? doc.at("eta_source").get<std::string>() : "";
    if (src == "tol") {
      cfg.eta_source = security::EtaSource::Tolerated;
    } else if (src == "observed") {
      cfg.eta_source = security::EtaSource::Observed;
    } else {
      bad("\"eta_source\" must be \"tol\" or \"observed\"");
    }
  }

  if (doc.contains("budget")) {
    std::string b = doc.at("budget").is_string() ? doc.at("budget").get<std::string>() : "";
    if (b == "uniform") {
      cfg.budget = BudgetMode::Uniform;
    } else if (b == "optimize") {
      cfg.budget = BudgetMode::Optimize;
    } else {
      bad("\"budget\" must be \"uniform\" or \"optimize\"");
    }
  }
  if (doc.contains("budget_iterations")) {
    cfg.budget_iterations = get_count(doc, "budget_iterations");
    if (cfg.budget_iterations < 1) bad("\"budget_iterations\" must be positive");
  }
  if (doc.contains("round_budget")) {
    cfg.round_budget = get_count(doc, "round_budget");
    if (cfg.round_budget < 1) bad("\"round_budget\" must be positive");
  }
  if (doc.contains("out")) {
    if (!doc.at("out").is_string()) bad("\"out\" must be a string");
    cfg.out_path = doc.at("out").get<std::string>();
  }

  cfg.params.validate();
  if (!(cfg.channel.visibility >= -1.0 / 3.0 && cfg.channel.visibility <= 1.0)) {
    bad("\"channel.V\" out of range");
  }
  if (!(cfg.channel.transmission >= 0 && cfg.channel.transmission <= 1)) {
    bad("\"channel.t\" must be in [0, 1]");
  }
  if (!(cfg.channel.depolarize_p >= 0 && cfg.channel.depolarize_p <= 1)) {
    bad("\"channel.depolarize_p\" must be in [0, 1]");
  }
  if (cfg.channel.success_prob &&
      !(*cfg.channel.success_prob >= 0 && *cfg.channel.success_prob <= 1)) {
    bad("\"channel.success_prob\" must be in [0, 1]");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace diqkd
