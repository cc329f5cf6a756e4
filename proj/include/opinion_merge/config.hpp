#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "opinion_merge/engine.hpp"
#include "opinion_merge/errors.hpp"
#include "opinion_merge/io.hpp"

namespace opinion_merge {

inline constexpr const char* kSeedEnvVar = "OPINION_MERGE_SEED";

struct RunConfig {
  // [run]
  ProtocolKind protocol = ProtocolKind::competitive;
  std::size_t horizon = 100;
  std::size_t outcomes = 2;
  std::uint64_t seed = 1;
  std::string transcript;  // output path; empty writes nothing
  std::string report;

  // [scenario]
  std::string regime = "drift";  // agree, drift, singular, zero_mixed, timid, fixed
  double c = 2.0;
  std::vector<double> p_I;  // fixed regime
  std::vector<double> p_II;
  std::string reality = "sample_I";  // sample_I, sample_II, max_ratio, min_ratio, fixed
  std::size_t reality_outcome = 0;

  // [sceptics]
  std::string sceptic_I = "constant";
  std::string sceptic_II = "constant";
  double alpha = 0.0;
  std::size_t c_max = 64;
  std::size_t k_max = 16;
  bool set_aside = false;

  // [checks]
  std::vector<std::string> checks;
  double epsilon = 0.0;  // eps_growth_lower; 0 means N^-1/2
};

inline const std::set<std::string>& sceptic_I_names() {
  static const std::set<std::string> names{
      "constant",           "alpha_pair",           "big_alpha",         "ratio_tracker",
      "criterion",          "growth_joint_fixed",   "growth_joint_anytime", "growth_solo_fixed",
      "growth_solo_anytime", "random"};
  return names;
}

inline const std::set<std::string>& sceptic_II_names() {
  static const std::set<std::string> names{"constant", "alpha_pair", "growth_joint_fixed",
                                           "growth_joint_anytime", "random"};
  return names;
}

inline const std::set<std::string>& check_names() {
  static const std::set<std::string> names{
      "small_alpha",           "big_alpha",           "fixed_growth_lower",       "fixed_growth_upper",
      "eps_growth_lower",     "anytime_growth_lower",  "anytime_growth_upper", "agreement"};
  return names;
}

namespace detail {

inline std::size_t to_count(const std::string& key, const std::string& v) {
  const double x = parse_number(trim(v));
  if (!(x >= 0.0) || x != std::floor(x) || x > 1e15) {
    throw Error(ErrorCode::parse_error, key + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(x);
}

inline bool to_bool(const std::string& key, const std::string& v) {
  const std::string_view s = trim(v);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorCode::parse_error, key + " must be true or false");
}

inline std::uint64_t to_seed(const std::string& key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::parse_error, key + " must be an unsigned 64-bit integer");
  }
  return out;
}

}  // namespace detail

/// Rejects configurations no strategy could run with.
inline void validate_config(const RunConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_parameter, msg); };
  if (cfg.horizon < 1) fail("run.horizon must be >= 1");
  if (cfg.outcomes < 2) fail("run.outcomes must be >= 2");
  if (!std::isfinite(cfg.alpha)) fail("sceptics.alpha must be finite");
  if (cfg.alpha == 1.0 || cfg.alpha == -1.0) fail("sceptics.alpha must differ from -1 and 1");
  if (!sceptic_I_names().contains(cfg.sceptic_I)) fail("unknown sceptics.sceptic_I '" + cfg.sceptic_I + "'");
  if (!sceptic_II_names().contains(cfg.sceptic_II)) fail("unknown sceptics.sceptic_II '" + cfg.sceptic_II + "'");
  if (cfg.sceptic_I == "big_alpha" && !(cfg.alpha < -1.0)) fail("big_alpha needs sceptics.alpha < -1");
  if (cfg.sceptic_I == "criterion" && !(cfg.alpha > -1.0 && cfg.alpha < 1.0)) {
    fail("criterion needs sceptics.alpha in (-1, 1)");
  }
  const bool joint_fixed = cfg.sceptic_I == "growth_joint_fixed" || cfg.sceptic_II == "growth_joint_fixed";
  if (joint_fixed && cfg.horizon < 2) fail("growth_joint_fixed needs run.horizon >= 2");
  if (cfg.c_max < 1) fail("sceptics.c_max must be >= 1");
  if (cfg.k_max < 2) fail("sceptics.k_max must be >= 2");
  if (!(cfg.c > 1.0) || !std::isfinite(cfg.c)) fail("scenario.c must exceed 1");

  static const std::set<std::string> regimes{"agree", "drift", "singular", "zero_mixed", "timid", "fixed"};
  if (!regimes.contains(cfg.regime)) fail("unknown scenario.regime '" + cfg.regime + "'");
  if (cfg.regime == "fixed") {
    if (cfg.p_I.size() != cfg.outcomes || cfg.p_II.size() != cfg.outcomes) {
      fail("scenario.p_I and scenario.p_II need run.outcomes entries");
    }
    (void)Distribution(cfg.p_I);
    (void)Distribution(cfg.p_II);
  }
  static const std::set<std::string> realities{"sample_I", "sample_II", "max_ratio", "min_ratio", "fixed"};
  if (!realities.contains(cfg.reality)) fail("unknown scenario.reality '" + cfg.reality + "'");
  if (cfg.reality == "fixed" && cfg.reality_outcome >= cfg.outcomes) {
    fail("scenario.reality_outcome out of range");
  }
  for (const std::string& c : cfg.checks) {
    if (!check_names().contains(c)) fail("unknown check '" + c + "'");
  }
  if (cfg.epsilon != 0.0 && !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) fail("checks.epsilon must be in (0, 1)");
}

/// Parses the INI text. Unknown sections or keys are errors. The seed
/// environment variable, when set, replaces run.seed.
inline RunConfig parse_config(std::istream& is, bool apply_env = true) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }

  RunConfig cfg;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, std::map<std::string, Setter>> schema{
      {"run",
       {{"protocol",
         [&](auto& k, auto& v) {
           if (v == "competitive") cfg.protocol = ProtocolKind::competitive;
           else if (v == "modified") cfg.protocol = ProtocolKind::modified;
           else throw Error(ErrorCode::parse_error, k + " must be competitive or modified");
         }},
        {"horizon", [&](auto& k, auto& v) { cfg.horizon = detail::to_count(k, v); }},
        {"outcomes", [&](auto& k, auto& v) { cfg.outcomes = detail::to_count(k, v); }},
        {"seed", [&](auto& k, auto& v) { cfg.seed = detail::to_seed(k, v); }},
        {"transcript", [&](auto&, auto& v) { cfg.transcript = v; }},
        {"report", [&](auto&, auto& v) { cfg.report = v; }}}},
      {"scenario",
       {{"regime", [&](auto&, auto& v) { cfg.regime = v; }},
        {"c", [&](auto&, auto& v) { cfg.c = parse_number(trim(v)); }},
        {"p_I", [&](auto&, auto& v) { cfg.p_I = parse_vector(v); }},
        {"p_II", [&](auto&, auto& v) { cfg.p_II = parse_vector(v); }},
        {"reality", [&](auto&, auto& v) { cfg.reality = v; }},
        {"reality_outcome", [&](auto& k, auto& v) { cfg.reality_outcome = detail::to_count(k, v); }}}},
      {"sceptics",
       {{"sceptic_I", [&](auto&, auto& v) { cfg.sceptic_I = v; }},
        {"sceptic_II", [&](auto&, auto& v) { cfg.sceptic_II = v; }},
        {"alpha", [&](auto&, auto& v) { cfg.alpha = parse_number(trim(v)); }},
        {"c_max", [&](auto& k, auto& v) { cfg.c_max = detail::to_count(k, v); }},
        {"k_max", [&](auto& k, auto& v) { cfg.k_max = detail::to_count(k, v); }},
        {"set_aside", [&](auto& k, auto& v) { cfg.set_aside = detail::to_bool(k, v); }}}},
      {"checks",
       {{"list",
         [&](auto&, auto& v) {
           cfg.checks.clear();
           for (std::string_view s : split(v, ',')) {
             if (!trim(s).empty()) cfg.checks.emplace_back(trim(s));
           }
         }},
        {"epsilon", [&](auto&, auto& v) { cfg.epsilon = parse_number(trim(v)); }}}},
  };

  for (const auto& [section, body] : tree) {
    auto sec = schema.find(section);
    if (sec == schema.end()) throw Error(ErrorCode::parse_error, "unknown section [" + section + "]");
    if (!body.data().empty()) throw Error(ErrorCode::parse_error, "key outside a section: " + section);
    for (const auto& [key, node] : body) {
      auto setter = sec->second.find(key);
      if (setter == sec->second.end()) {
        throw Error(ErrorCode::parse_error, "unknown key " + section + "." + key);
      }
      setter->second(section + "." + key, std::string(trim(node.data())));
    }
  }
  if (cfg.regime == "fixed" && !cfg.p_I.empty()) cfg.outcomes = cfg.p_I.size();

  if (apply_env) {
    if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
      cfg.seed = detail::to_seed(kSeedEnvVar, env);
    }
  }
  validate_config(cfg);
  return cfg;
}

inline RunConfig parse_config_string(const std::string& text, bool apply_env = true) {
  std::istringstream is(text);
  return parse_config(is, apply_env);
}

}  // namespace opinion_merge
