#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "opinion_merge/config.hpp"
#include "opinion_merge/engine.hpp"
#include "opinion_merge/scenarios.hpp"
#include "opinion_merge/strategies.hpp"
#include "opinion_merge/verify.hpp"

namespace opinion_merge {

/// Independent sub-stream seed (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::unique_ptr<ForecastPair> make_forecasts(const RunConfig& cfg) {
  if (cfg.regime == "fixed") {
    return std::make_unique<FixedForecasts>(Distribution(cfg.p_I), Distribution(cfg.p_II));
  }
  return std::make_unique<ScenarioForecasts>(cfg.seed, cfg.outcomes, parse_regime(cfg.regime), cfg.c);
}

inline std::unique_ptr<Reality> make_reality(const RunConfig& cfg) {
  const std::uint64_t seed = derive_seed(cfg.seed, 1);
  if (cfg.reality == "sample_I") return std::make_unique<SamplingReality>(Side::I, seed);
  if (cfg.reality == "sample_II") return std::make_unique<SamplingReality>(Side::II, seed);
  if (cfg.reality == "max_ratio") return std::make_unique<AdversarialReality>(RealityObjective::max_ratio);
  if (cfg.reality == "min_ratio") return std::make_unique<AdversarialReality>(RealityObjective::min_ratio);
  return std::make_unique<AdversarialReality>(RealityObjective::fixed, cfg.reality_outcome);
}

/// The alpha the selected strategies actually play, used by the identity
/// and bound checks and the cumulative divergence column.
inline double effective_alpha(const RunConfig& cfg) {
  if (cfg.sceptic_I == "growth_joint_fixed" || cfg.sceptic_II == "growth_joint_fixed") {
    return -1.0 + 2.0 * fixed_horizon_epsilon(cfg.horizon);
  }
  if (cfg.sceptic_I == "growth_solo_fixed") return -1.0 - 2.0 * fixed_horizon_epsilon(cfg.horizon);
  return cfg.alpha;
}

inline std::unique_ptr<ScepticStrategy> make_sceptic(const RunConfig& cfg, Side side) {
  const std::string& name = side == Side::I ? cfg.sceptic_I : cfg.sceptic_II;
  std::unique_ptr<ScepticStrategy> s;
  if (name == "constant") {
    s = std::make_unique<ConstantStrategy<CompetitiveContext>>();
  } else if (name == "alpha_pair") {
    s = std::make_unique<AlphaSceptic>(AlphaParam(cfg.alpha), side);
  } else if (name == "growth_joint_fixed") {
    s = std::make_unique<AlphaSceptic>(AlphaParam(-1.0 + 2.0 * fixed_horizon_epsilon(cfg.horizon)), side);
  } else if (name == "growth_joint_anytime") {
    AnytimePair pair = growth_joint_anytime(cfg.k_max);
    s = side == Side::I ? std::move(pair.sceptic_I) : std::move(pair.sceptic_II);
  } else if (name == "random") {
    s = std::make_unique<RandomSceptic<CompetitiveContext>>(derive_seed(cfg.seed, side == Side::I ? 2 : 3));
  } else if (name == "big_alpha") {
    s = big_alpha_sceptic_I(cfg.alpha);
  } else if (name == "ratio_tracker") {
    s = std::make_unique<RatioTracker>();
  } else if (name == "criterion") {
    s = criterion_sceptic_I(cfg.alpha, cfg.c_max);
  } else if (name == "growth_solo_fixed") {
    s = growth_sceptic_I_fixed(cfg.horizon);
  } else if (name == "growth_solo_anytime") {
    s = growth_sceptic_I_anytime(cfg.k_max);
  } else {
    throw Error(ErrorCode::invalid_parameter, "unknown strategy '" + name + "'");
  }
  if (side == Side::I && cfg.set_aside) s = set_aside_transform(std::move(s));
  return s;
}

inline std::vector<CheckReport> run_checks(const RunConfig& cfg, const Transcript& t) {
  std::vector<CheckReport> out;
  const double alpha = effective_alpha(cfg);
  GrowthParams prm;
  prm.c = cfg.c;
  prm.horizon = cfg.horizon;
  prm.k_max = cfg.k_max;
  prm.epsilon = cfg.epsilon > 0.0 ? cfg.epsilon : fixed_horizon_epsilon(cfg.horizon);
  for (const std::string& name : cfg.checks) {
    if (name == "small_alpha") {
      out.push_back(check_small_alpha_identity(t, AlphaParam(alpha)));
    } else if (name == "big_alpha") {
      out.push_back(check_big_alpha_bound(t, alpha));
    } else if (name == "fixed_growth_lower") {
      out.push_back(check_growth_bounds(t, GrowthVariant::fixed_growth_lower, prm));
    } else if (name == "fixed_growth_upper") {
      out.push_back(check_growth_bounds(t, GrowthVariant::fixed_growth_upper, prm));
    } else if (name == "eps_growth_lower") {
      out.push_back(check_growth_bounds(t, GrowthVariant::eps_growth_lower, prm));
    } else if (name == "anytime_growth_lower") {
      out.push_back(check_growth_bounds(t, GrowthVariant::anytime_growth_lower, prm));
    } else if (name == "anytime_growth_upper") {
      out.push_back(check_growth_bounds(t, GrowthVariant::anytime_growth_upper, prm));
    } else if (name == "agreement") {
      CheckReport rep = make_report("agreement", 0.0);
      if (t.kind != ProtocolKind::modified) {
        rep.status = CheckStatus::skipped;
        rep.detail = "competitive protocol has no exceptional pairs";
      } else {
        for (const auto& r : t.rounds) rep.record(r.hit_exceptional() ? 1.0 : 0.0, 0.0, r.hit_exceptional() ? 1.0 : 0.0);
        rep.finish();
      }
      out.push_back(std::move(rep));
    }
  }
  return out;
}

struct RunResult {
  Transcript transcript;
  std::vector<CheckReport> reports;
};

inline RunResult execute(const RunConfig& cfg) {
  validate_config(cfg);
  auto forecasts = make_forecasts(cfg);
  auto reality = make_reality(cfg);
  auto sceptic_I = make_sceptic(cfg, Side::I);
  auto sceptic_II = make_sceptic(cfg, Side::II);
  RunResult result;
  result.transcript = cfg.protocol == ProtocolKind::modified
                          ? run_modified(*forecasts, *sceptic_I, *sceptic_II, *reality, cfg.horizon)
                          : run_competitive(*forecasts, *sceptic_I, *sceptic_II, *reality, cfg.horizon);
  result.reports = run_checks(cfg, result.transcript);
  return result;
}

}  // namespace opinion_merge
