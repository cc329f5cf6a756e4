// Acceptance criteria AC1-AC13. Prints one [PASS]/[FAIL] line per criterion
// and exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "opinion_merge/config.hpp"
#include "opinion_merge/io.hpp"
#include "opinion_merge/runner.hpp"
#include "opinion_merge/suites.hpp"

namespace om = opinion_merge;

namespace {

int failures = 0;

void report(const char* id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %s %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  if (!ok) ++failures;
}

void report(const char* id, const char* title, const om::CheckReport& r, const std::string& extra = "") {
  std::string detail = "max_violation=" + om::format_number(r.max_violation) +
                       " tol=" + om::format_number(r.tolerance) + " status=" + om::status_name(r.status);
  if (!r.detail.empty()) detail += " (" + r.detail + ")";
  if (!extra.empty()) detail += " " + extra;
  report(id, title, r.status == om::CheckStatus::pass, detail);
}

// Reproducibility: each config run twice through the full pipeline.
om::CheckReport reproducibility() {
  om::Aggregate agg("reproducibility", 0.0);
  const char* configs[] = {
      "[run]\nhorizon = 200\nseed = 3\n[sceptics]\nsceptic_I = alpha_pair\nsceptic_II = alpha_pair\nalpha = 0.5\n",
      "[run]\nhorizon = 200\noutcomes = 4\nseed = 8\n[scenario]\nregime = zero_mixed\n"
      "[sceptics]\nsceptic_I = criterion\nsceptic_II = random\nalpha = 0.2\n",
      "[run]\nprotocol = modified\nhorizon = 200\noutcomes = 3\nseed = 21\n[scenario]\nregime = timid\n"
      "reality = sample_II\n[sceptics]\nsceptic_I = growth_solo_anytime\nsceptic_II = random\n",
  };
  for (const char* text : configs) {
    const om::RunConfig cfg = om::parse_config_string(text, false);
    const om::AlphaParam alpha(om::effective_alpha(cfg));
    const std::string first = om::transcript_csv(om::execute(cfg).transcript, alpha);
    const std::string second = om::transcript_csv(om::execute(cfg).transcript, alpha);
    agg.add_value(first == second ? 0.0 : 1.0, "seed=" + std::to_string(cfg.seed));
  }
  return agg.finish();
}

}  // namespace

int main() {
  const auto seeds = om::seed_range(1, 10);

  const auto t0 = std::chrono::steady_clock::now();
  const om::CheckReport ac1 = om::suite_small_alpha_identity(seeds);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char timing[64];
  std::snprintf(timing, sizeof timing, "runtime=%.3fs", seconds);
  om::CheckReport ac1_timed = ac1;
  if (seconds >= 5.0) ac1_timed.status = om::CheckStatus::fail;
  report("AC1", "power-strategy identity", ac1_timed, timing);

  report("AC2", "one-round anchor", om::suite_one_round_anchor());
  report("AC3", "big-alpha upper bound", om::suite_big_alpha_bound(seeds));
  report("AC4", "fixed-horizon growth bounds", om::suite_fixed_growth(seeds));
  report("AC5", "anytime growth inequalities", om::suite_anytime_growth(om::seed_range(1, 3)));
  report("AC6", "quadratic forcer closed form", om::suite_forcer());
  report("AC7", "set-aside reserve", om::suite_set_aside());
  report("AC8", "mixture capital", om::suite_mixture());
  report("AC9", "large-ratio probability bound", om::suite_large_ratio());
  report("AC10", "truncated-log inequality", om::suite_truncated_log());

  om::Aggregate relations("divergence_relations", 0.0);
  for (const auto& r : om::suite_divergence()) {
    relations.add_value(r.pass() ? 0.0 : 1.0, r.name + " max_violation=" + om::format_number(r.max_violation));
  }
  report("AC11", "divergence relations", relations.finish());

  report("AC12", "exceptional paths", om::suite_exceptional_paths());
  report("AC13", "byte-identical transcripts", reproducibility());

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
