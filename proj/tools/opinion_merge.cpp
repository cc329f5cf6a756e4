// Command-line front end: run a configured game, run a verification suite,
// or print divergences between two forecasts.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opinion_merge/config.hpp"
#include "opinion_merge/divergence.hpp"
#include "opinion_merge/io.hpp"
#include "opinion_merge/runner.hpp"
#include "opinion_merge/suites.hpp"

namespace om = opinion_merge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEngine = 3;

bool all_pass(const std::vector<om::CheckReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass()) return false;
  }
  return true;
}

void emit_reports(const std::vector<om::CheckReport>& reports, const std::string& path) {
  if (path.empty()) {
    om::write_reports(std::cout, reports);
    return;
  }
  std::ofstream os(path);
  if (!os) throw om::Error(om::ErrorCode::invalid_parameter, "cannot write " + path);
  om::write_reports(os, reports);
}

int cmd_run(const std::string& config_path) {
  om::RunConfig cfg;
  try {
    std::ifstream is(config_path);
    if (!is) throw om::Error(om::ErrorCode::parse_error, "cannot open " + config_path);
    cfg = om::parse_config(is);
  } catch (const om::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  om::RunResult result;
  try {
    result = om::execute(cfg);
  } catch (const om::Error& e) {
    std::cerr << "engine error: " << e.what() << '\n';
    return kExitEngine;
  }

  try {
    if (!cfg.transcript.empty()) {
      std::ofstream os(cfg.transcript);
      if (!os) throw om::Error(om::ErrorCode::invalid_parameter, "cannot write " + cfg.transcript);
      om::write_transcript_csv(os, result.transcript, om::AlphaParam(om::effective_alpha(cfg)));
    }
    if (!result.reports.empty() || !cfg.report.empty()) emit_reports(result.reports, cfg.report);
  } catch (const om::Error& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitConfig;
  }

  const auto& t = result.transcript;
  std::cerr << t.size() << " rounds, logK_I=" << om::format_number(t.log_K_I().log_value().value())
            << " logK_II=" << om::format_number(t.log_K_II().log_value().value()) << '\n';
  return all_pass(result.reports) ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& report) {
  std::vector<om::CheckReport> reports;
  try {
    reports = om::run_suite(suite, seed);
    emit_reports(reports, report);
  } catch (const om::Error& e) {
    std::cerr << "verify error: " << e.what() << '\n';
    return kExitConfig;
  }
  for (const auto& r : reports) {
    std::cerr << (r.pass() ? "ok   " : "FAIL ") << r.name << '\n';
  }
  return all_pass(reports) ? kExitOk : kExitCheckFailed;
}

int cmd_divergence(const std::string& p_I_text, const std::string& p_II_text,
                   const std::vector<double>& alphas) {
  try {
    const om::Distribution p_I(om::parse_vector(p_I_text));
    const om::Distribution p_II(om::parse_vector(p_II_text));
    const om::DensityPair dp = om::mixture_densities(p_I, p_II);
    const om::ExtReal kl = om::kl_divergence(dp);
    const om::ExtReal chi2 = om::chi2_divergence(dp);
    std::cout << "alpha,hellinger_integral,div_paren,div_bracket,kl,chi2\n";
    for (double a : alphas) {
      const om::AlphaParam alpha(a);
      std::cout << om::format_number(a) << ',' << om::format_number(om::hellinger_integral(dp, alpha).value())
                << ',' << om::format_number(om::div_paren(dp, alpha).value()) << ','
                << om::format_number(om::div_bracket(dp, alpha).value()) << ','
                << om::format_number(kl.value()) << ',' << om::format_number(chi2.value()) << '\n';
    }
  } catch (const om::Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and verify merging of opinions between two forecasters"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Play a configured game and write its transcript");
  run->add_option("--config,config", config_path, "INI configuration file")->required();

  std::string suite = "all";
  std::uint64_t seed = 1;
  std::string report;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "all, divergence, theorem2, lemmas or growth")
      ->check(CLI::IsMember({"all", "divergence", "theorem2", "lemmas", "growth"}));
  verify->add_option("--seed", seed, "Seed for the randomized cases");
  verify->add_option("--report", report, "Report file (default: standard output)");

  std::string p_I;
  std::string p_II;
  std::vector<double> alphas;
  auto* div = app.add_subcommand("divergence", "Print divergences between two forecasts");
  div->add_option("--p-I", p_I, "First forecast, comma separated")->required();
  div->add_option("--p-II", p_II, "Second forecast, comma separated")->required();
  div->add_option("--alpha", alphas, "Divergence order (repeatable)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config_path);
  if (*verify) return cmd_verify(suite, seed, report);
  return cmd_divergence(p_I, p_II, alphas);
}
