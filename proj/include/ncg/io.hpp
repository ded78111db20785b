#pragma once

// Config files, run manifests and deterministic report emission. Requires
// linking OpenSSL::Crypto for the manifest hash.

#include <openssl/evp.h>

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncg/bulkedge.hpp"
#include "ncg/config.hpp"
#include "ncg/error.hpp"
#include "ncg/format.hpp"
#include "ncg/pairings.hpp"

namespace ncg {

inline constexpr std::string_view kVersion = "0.1.0";

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, path.string() + ": " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, path.string() + ": " + std::strerror(errno));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoError, path.string() + ": write failed");
}

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
};

inline ModelConfig apply_overrides(ModelConfig cfg, const ConfigOverrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

inline ModelConfig parse_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {}) {
  return apply_overrides(parse_config_text(read_file(path)), overrides);
}

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

/// Minimal ordered JSON object writer with 17-significant-digit numbers.
class JsonObject {
 public:
  JsonObject& raw(std::string_view key, std::string value) {
    fields_.emplace_back(std::string(key), std::move(value));
    return *this;
  }
  JsonObject& num(std::string_view key, double v) { return raw(key, std::isfinite(v) ? format_double(v) : "null"); }
  JsonObject& integer(std::string_view key, long long v) { return raw(key, std::to_string(v)); }
  JsonObject& str(std::string_view key, std::string_view v) { return raw(key, nlohmann::json(std::string(v)).dump()); }
  JsonObject& boolean(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonObject& object(std::string_view key, const JsonObject& o) { return raw(key, o.dump()); }

  std::string dump() const {
    std::string out = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      if (i) out += ",";
      out += nlohmann::json(fields_[i].first).dump() + ":" + fields_[i].second;
    }
    return out + "}";
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

inline JsonObject config_json(const ConfigSnapshot& config) {
  JsonObject o;
  for (const auto& [k, v] : config) o.str(k, v);
  return o;
}

inline JsonObject report_json(const PairingReport& r) {
  JsonObject o;
  o.num("value_re", r.value.real())
      .num("value_im", r.value.imag())
      .integer("constant_n", r.constant_n)
      .num("constant_re", r.constant.real())
      .num("constant_im", r.constant.imag())
      .integer("nearest_int", r.nearest_integer)
      .num("deviation", r.deviation)
      .num("imag_part", r.imag_part)
      .object("config", config_json(r.config));
  return o;
}

inline JsonObject bulk_edge_json(const BulkEdgeReport& r) {
  JsonObject o;
  o.object("bulk", report_json(r.bulk))
      .object("edge", report_json(r.edge))
      .num("discrepancy", r.discrepancy)
      .num("gap_lo", r.gap_used.first)
      .num("gap_hi", r.gap_used.second)
      .str("verdict", r.verdict ? "pass" : "fail");
  return o;
}

/// Parses a report object written by report_json.
inline PairingReport report_from_json(const nlohmann::ordered_json& j) {
  PairingReport r;
  r.value = Complex(j.at("value_re").get<double>(), j.at("value_im").get<double>());
  r.constant_n = j.at("constant_n").get<int>();
  r.constant = Complex(j.at("constant_re").get<double>(), j.at("constant_im").get<double>());
  r.nearest_integer = j.at("nearest_int").get<long>();
  r.deviation = j.at("deviation").get<double>();
  r.imag_part = j.at("imag_part").get<double>();
  for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
  return r;
}

inline std::string ensemble_csv(const EnsembleResult& e) {
  std::string out = "seed,bulk_re,bulk_im,edge_re,edge_im,discrepancy,verdict\n";
  for (std::size_t i = 0; i < e.reports.size(); ++i) {
    const auto& r = e.reports[i];
    out += std::to_string(e.seeds[i]) + "," + format_double(r.bulk.value.real()) + "," +
           format_double(r.bulk.value.imag()) + "," + format_double(r.edge.value.real()) + "," +
           format_double(r.edge.value.imag()) + "," + format_double(r.discrepancy) + "," +
           (r.verdict ? "pass" : "fail") + "\n";
  }
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  ModelConfig config;
  std::vector<std::pair<std::string, std::string>> parameters;  ///< command options that affect results
  std::string version = std::string(kVersion);
  std::string wall_clock;
  std::vector<std::string> outputs;

  /// Deterministic part: everything except the wall-clock and output names.
  std::string canonical() const {
    JsonObject params;
    for (const auto& [k, v] : parameters) params.str(k, v);
    JsonObject o;
    o.str("command", command).object("config", config_json(to_key_values(config))).object("parameters", params).str(
        "version", version);
    return o.dump();
  }

  std::string hash() const { return sha256_hex(canonical()); }

  std::string json() const {
    JsonObject params;
    for (const auto& [k, v] : parameters) params.str(k, v);
    std::string outs = "[";
    for (std::size_t i = 0; i < outputs.size(); ++i) outs += (i ? "," : "") + nlohmann::json(outputs[i]).dump();
    outs += "]";
    JsonObject o;
    o.str("command", command)
        .object("config", config_json(to_key_values(config)))
        .object("parameters", params)
        .str("version", version)
        .str("wall_clock", wall_clock)
        .raw("outputs", outs)
        .str("sha256", hash());
    return o.dump() + "\n";
  }
};

/// Serializes file emission for one run directory. Data files are named
/// <command>-<first 12 hex digits of the manifest hash>.<ext>.
class ReportWriter {
 public:
  explicit ReportWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, dir_.string() + ": " + ec.message());
  }

  std::filesystem::path data_path(const RunManifest& m, std::string_view ext) const {
    return dir_ / (m.command + "-" + m.hash().substr(0, 12) + "." + std::string(ext));
  }

  /// JSON data gets a manifest_sha256 field in front of the payload fields.
  std::filesystem::path write_json(RunManifest& m, const JsonObject& payload) {
    JsonObject o;
    o.str("manifest_sha256", m.hash());
    std::string body = payload.dump();
    std::string text = o.dump();
    text.pop_back();
    text += body.size() > 2 ? "," + body.substr(1) : "}";
    return write_data(m, "json", text + "\n");
  }

  std::filesystem::path write_csv(RunManifest& m, const std::string& csv) { return write_data(m, "csv", csv); }

  std::filesystem::path write_manifest(const RunManifest& m) {
    std::lock_guard lock(mutex_);
    const auto path = dir_ / ("manifest-" + m.hash().substr(0, 12) + ".json");
    write_file(path, m.json());
    return path;
  }

 private:
  std::filesystem::path write_data(RunManifest& m, std::string_view ext, const std::string& text) {
    std::lock_guard lock(mutex_);
    const auto path = data_path(m, ext);
    write_file(path, text);
    m.outputs.push_back(path.filename().string());
    return path;
  }

  std::filesystem::path dir_;
  std::mutex mutex_;
};

}  // namespace ncg
