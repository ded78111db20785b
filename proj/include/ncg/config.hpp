#pragma once

// Flat key-value text form of ModelConfig:
//   # comment
//   L1 = 24
//   ...

#include <array>
#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncg/error.hpp"
#include "ncg/format.hpp"
#include "ncg/models.hpp"

namespace ncg {

inline constexpr std::array<std::string_view, 11> kConfigKeys = {"L1", "L2",  "p",  "q",      "t",      "W",
                                                                 "seed", "mu", "gap_lo", "gap_hi", "margin"};

/// Key-value pairs in the documented key order.
inline std::vector<std::pair<std::string, std::string>> to_key_values(const ModelConfig& c) {
  return {{"L1", std::to_string(c.geometry.L1)},
          {"L2", std::to_string(c.geometry.L2)},
          {"p", std::to_string(c.p)},
          {"q", std::to_string(c.q)},
          {"t", format_double(c.t)},
          {"W", format_double(c.W)},
          {"seed", std::to_string(c.seed)},
          {"mu", format_double(c.mu)},
          {"gap_lo", format_double(c.gap_lo)},
          {"gap_hi", format_double(c.gap_hi)},
          {"margin", format_double(c.margin)}};
}

inline std::string to_config_text(const ModelConfig& c) {
  std::string out;
  for (const auto& [k, v] : to_key_values(c)) out += k + " = " + v + "\n";
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw Error(ErrorCode::BadValue, std::string(key) + ": cannot parse '" + std::string(text) + "'");
  return value;
}

}  // namespace detail

/// Builds and validates a config from key-value pairs. Required: L1, L2, p, q,
/// mu, gap_lo, gap_hi. Defaults: t = 1, W = 0, seed = 0, margin = 0.25.
inline ModelConfig config_from_key_values(const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    bool known = false;
    for (auto key : kConfigKeys) known = known || key == k;
    if (!known) throw Error(ErrorCode::BadValue, k + ": unknown key");
  }
  for (std::string_view req : {"L1", "L2", "p", "q", "mu", "gap_lo", "gap_hi"})
    if (!kv.contains(std::string(req))) throw Error(ErrorCode::MissingKey, std::string(req) + ": required key missing");
  const auto get = [&](const char* k) -> std::string_view { return kv.at(k); };

  ModelConfig c;
  const int l1 = detail::parse_number<int>("L1", get("L1"));
  const int l2 = detail::parse_number<int>("L2", get("L2"));
  if (l1 < 1) throw Error(ErrorCode::BadValue, "L1: must be positive");
  if (l2 < 1) throw Error(ErrorCode::BadValue, "L2: must be positive");
  c.geometry = LatticeGeometry::torus(l1, l2);
  c.p = detail::parse_number<int>("p", get("p"));
  c.q = detail::parse_number<int>("q", get("q"));
  c.mu = detail::parse_number<double>("mu", get("mu"));
  c.gap_lo = detail::parse_number<double>("gap_lo", get("gap_lo"));
  c.gap_hi = detail::parse_number<double>("gap_hi", get("gap_hi"));
  if (kv.contains("t")) c.t = detail::parse_number<double>("t", get("t"));
  if (kv.contains("W")) c.W = detail::parse_number<double>("W", get("W"));
  if (kv.contains("seed")) c.seed = detail::parse_number<std::uint64_t>("seed", get("seed"));
  if (kv.contains("margin")) c.margin = detail::parse_number<double>("margin", get("margin"));
  c.validate();
  return c;
}

inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::BadValue, "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key(detail::trim(s.substr(0, eq)));
    const std::string value(detail::trim(s.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorCode::BadValue, "line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw Error(ErrorCode::BadValue, key + ": duplicate key");
  }
  return kv;
}

inline ModelConfig parse_config_text(std::string_view text) { return config_from_key_values(parse_key_values(text)); }

}  // namespace ncg
