#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "opinion_merge/divergence.hpp"
#include "opinion_merge/engine.hpp"
#include "opinion_merge/errors.hpp"
#include "opinion_merge/extmath.hpp"
#include "opinion_merge/measures.hpp"
#include "opinion_merge/verify.hpp"

namespace opinion_merge {

/// Shortest-safe decimal form: 17 significant digits, "inf" and "-inf".
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_number(std::string_view s) {
  if (s == "inf" || s == "+inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::parse_error, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// "0.5,0.5" -> vector.
inline std::vector<double> parse_vector(std::string_view s) {
  std::vector<double> out;
  for (std::string_view part : split(trim(s), ',')) out.push_back(parse_number(trim(part)));
  return out;
}

// ---------------------------------------------------------------------------
// Transcript CSV

namespace detail {

inline std::string format_set(const OutcomeSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(set[i]);
  }
  return out;
}

inline OutcomeSet parse_set(std::string_view s) {
  OutcomeSet out;
  if (s.empty()) return out;
  for (std::string_view part : split(s, ';')) {
    out.push_back(static_cast<std::size_t>(parse_number(part)));
  }
  return out;
}

}  // namespace detail

/// Columns n, p_I[i], p_II[i], f_I[i], f_II[i], omega, logK_I, logK_II,
/// D_bracket_alpha_cum, D_kl_cum. Transcripts of the modified protocol add
/// E_I and E_II as ';'-separated outcome lists.
inline void write_transcript_csv(std::ostream& os, const Transcript& t, AlphaParam alpha) {
  const std::size_t m = t.empty() ? 0 : t.rounds.front().p_I.size();
  const bool modified = t.kind == ProtocolKind::modified;
  os << "n";
  for (const char* name : {"p_I", "p_II", "f_I", "f_II"}) {
    for (std::size_t i = 0; i < m; ++i) os << ',' << name << '[' << i << ']';
  }
  os << ",omega,logK_I,logK_II,D_bracket_alpha_cum,D_kl_cum";
  if (modified) os << ",E_I,E_II";
  os << '\n';

  const std::vector<ExtReal> bracket = cumulative_bracket(t, alpha);
  const std::vector<ExtReal> kl = cumulative_kl(t);
  for (std::size_t n = 0; n < t.size(); ++n) {
    const RoundRecord& r = t.rounds[n];
    if (r.p_I.size() != m) throw Error(ErrorCode::dimension_mismatch, "outcome space changed");
    os << r.index;
    for (double v : r.p_I.probs()) os << ',' << format_number(v);
    for (double v : r.p_II.probs()) os << ',' << format_number(v);
    for (ExtReal v : r.f_I.payoff()) os << ',' << format_number(v.value());
    for (ExtReal v : r.f_II.payoff()) os << ',' << format_number(v.value());
    os << ',' << r.outcome << ',' << format_number(r.log_K_I.log_value().value()) << ','
       << format_number(r.log_K_II.log_value().value()) << ',' << format_number(bracket[n].value())
       << ',' << format_number(kl[n].value());
    if (modified) {
      os << ',' << detail::format_set(r.exceptional->e_I) << ','
         << detail::format_set(r.exceptional->e_II);
    }
    os << '\n';
  }
}

inline std::string transcript_csv(const Transcript& t, AlphaParam alpha) {
  std::ostringstream os;
  write_transcript_csv(os, t, alpha);
  return os.str();
}

/// Reads a transcript written by write_transcript_csv. Density pairs are
/// recomputed from the stored forecasts.
inline Transcript read_transcript_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::parse_error, "empty transcript");
  const std::vector<std::string_view> header = split(trim(line), ',');
  std::size_t m = 0;
  for (std::string_view h : header) {
    if (h.starts_with("p_I[")) ++m;
  }
  const std::size_t base = 1 + 4 * m + 5;
  if (m < 2 || header.size() < base) throw Error(ErrorCode::parse_error, "bad transcript header");
  Transcript t;
  t.kind = header.size() == base + 2 ? ProtocolKind::modified : ProtocolKind::competitive;

  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string_view> cells = split(trim(line), ',');
    if (cells.size() != header.size()) throw Error(ErrorCode::parse_error, "ragged transcript row");
    auto column = [&](std::size_t offset) {
      std::vector<double> v(m);
      for (std::size_t i = 0; i < m; ++i) v[i] = parse_number(cells[offset + i]);
      return v;
    };
    auto bet = [&](std::size_t offset) {
      std::vector<ExtReal> v;
      for (double x : column(offset)) v.push_back(x);
      return BettingFunction(std::move(v));
    };
    Distribution p_I = Distribution::exact(column(1));
    Distribution p_II = Distribution::exact(column(1 + m));
    DensityPair dp = mixture_densities(p_I, p_II);
    std::optional<ExceptionalPair> exceptional;
    if (t.kind == ProtocolKind::modified) {
      exceptional = ExceptionalPair{detail::parse_set(cells[base]), detail::parse_set(cells[base + 1])};
    }
    const std::size_t k = 1 + 4 * m;
    t.rounds.push_back(RoundRecord{static_cast<std::size_t>(parse_number(cells[0])), std::move(p_I),
                                   std::move(p_II), std::move(dp), std::move(exceptional),
                                   bet(1 + 2 * m), bet(1 + 3 * m),
                                   static_cast<std::size_t>(parse_number(cells[k])),
                                   LogCapital::from_log(parse_number(cells[k + 1])),
                                   LogCapital::from_log(parse_number(cells[k + 2]))});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Reports

/// One record per check: name, status, max_violation, tolerance, detail.
inline void write_reports(std::ostream& os, const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports) {
    os << "[" << r.name << "]\n"
       << "status = " << status_name(r.status) << '\n'
       << "pass = " << (r.pass() ? "true" : "false") << '\n'
       << "max_violation = " << format_number(r.max_violation) << '\n'
       << "tolerance = " << format_number(r.tolerance) << '\n';
    if (!r.detail.empty()) os << "detail = " << r.detail << '\n';
    os << '\n';
  }
}

}  // namespace opinion_merge
