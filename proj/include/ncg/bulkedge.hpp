#pragma once

// Bulk Chern number versus edge winding for the magnetic lattice model, plus
// disorder-ensemble and parameter-homotopy scans.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncg/config.hpp"
#include "ncg/error.hpp"
#include "ncg/models.hpp"
#include "ncg/operator_core.hpp"
#include "ncg/pairings.hpp"
#include "ncg/parallel.hpp"

namespace ncg {

struct BulkEdgeOptions {
  double min_gap_width = 0.1;      ///< smallest bulk gap around mu accepted by run_bulk
  double tolerance = 0.1;          ///< bound on |ch + xi|
  double integer_tolerance = 0.05; ///< bound on each deviation from an integer
  int edge_length_factor = 2;      ///< edge cylinder has factor * L1 sites along the edge
  int mask_shift = 0;              ///< moves the one-edge mask midline away from L2/2
};

/// Torus L1 x L2 carrying the bulk model of cfg.
inline ModelConfig bulk_config(const ModelConfig& cfg) {
  ModelConfig b = cfg;
  b.geometry = LatticeGeometry::torus(cfg.geometry.L1, cfg.geometry.L2);
  return b;
}

/// Cylinder (factor * L1) x L2, periodic along the edge, Dirichlet across it.
inline ModelConfig edge_config(const ModelConfig& cfg, const BulkEdgeOptions& opts = {}) {
  if (opts.edge_length_factor < 1) throw Error(ErrorCode::InvalidArgument, "edge length factor must be >= 1");
  ModelConfig e = cfg;
  e.geometry = LatticeGeometry::cylinder(opts.edge_length_factor * cfg.geometry.L1, cfg.geometry.L2);
  return e;
}

/// One-edge trace per unit length: sites from the shifted midline up to the
/// edge at x2 = L2 - 1.
inline TraceSpec edge_trace(const LatticeGeometry& g, int mask_shift = 0) {
  const int mid = g.L2 / 2 + mask_shift;
  if (mid <= 0 || mid >= g.L2) throw Error(ErrorCode::RegionMismatch, "mask midline outside the cylinder");
  return TraceSpec::per_unit_length_one_edge(g, mid, g.L2);
}

namespace detail {

inline void check_gap_at_mu(const RealVector& values, double mu, double min_width) {
  double below = -std::numeric_limits<double>::infinity();
  double above = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i) - mu) <= 1e-8)
      throw Error(ErrorCode::NoGapAtMu, "mu = " + format_double(mu) + " is an eigenvalue");
    if (values(i) < mu) below = std::max(below, values(i));
    if (values(i) > mu) above = std::min(above, values(i));
  }
  if (above - below < min_width)
    throw Error(ErrorCode::NoGapAtMu, "spectral gap around mu = " + format_double(mu) + " is (" + format_double(below) +
                                          ", " + format_double(above) + "), narrower than " +
                                          format_double(min_width));
}

inline void check_window(const RealVector& values, double lo, double hi) {
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) >= lo && values(i) <= hi)
      throw Error(ErrorCode::WindowNotInGap, "bulk eigenvalue " + format_double(values(i)) + " lies in the window [" +
                                                 format_double(lo) + ", " + format_double(hi) + "]");
}

inline PairingReport bulk_from(const ModelConfig& cfg, const EigenSystem& es, const BulkEdgeOptions& opts) {
  check_gap_at_mu(es.values, cfg.mu, opts.min_gap_width);
  const LatticeGeometry& g = cfg.geometry;
  const LatticeOperator p = spectral_projection(es, g, cfg.mu);
  const auto [x1, x2] = position_operators(g);
  return chern_pairing(p, x1, x2, TraceSpec::per_unit_volume(g), to_key_values(cfg));
}

inline PairingReport edge_from(const ModelConfig& cfg, const RealVector& bulk_values, const BulkEdgeOptions& opts) {
  const SwitchFunction switch_fn(cfg.gap_lo, cfg.gap_hi, cfg.margin);
  check_window(bulk_values, cfg.gap_lo, cfg.gap_hi);
  const ModelConfig ec = edge_config(cfg, opts);
  const LatticeOperator h = build_edge_hamiltonian(ec);
  const LatticeGeometry& g = ec.geometry;
  const EigenSystem es = hermitian_eig(h);
  const LatticeOperator u_general =
      functional_calculus(es, g, [&](double e) { return std::exp(-2.0 * kPi * kI * switch_fn(e)); });
  const LatticeOperator u = LatticeOperator::unitary(u_general.matrix(), g);
  const auto [x1, x2] = position_operators(g);
  return edge_pairing(u, x1, edge_trace(g, opts.mask_shift), to_key_values(cfg));
}

}  // namespace detail

/// Chern pairing of the Fermi projection of the bulk torus model.
inline PairingReport run_bulk(const ModelConfig& cfg, const BulkEdgeOptions& opts = {}) {
  const ModelConfig bc = bulk_config(cfg);
  return detail::bulk_from(bc, hermitian_eig(build_bulk_hamiltonian(bc)), opts);
}

/// Edge winding of U = exp(-2 pi i G(H_edge)) on the one-edge trace.
inline PairingReport run_edge(const ModelConfig& cfg, const BulkEdgeOptions& opts = {}) {
  const ModelConfig bc = bulk_config(cfg);
  if (!(cfg.gap_hi > cfg.gap_lo)) throw Error(ErrorCode::DegenerateGap, "gap window must have positive width");
  return detail::edge_from(cfg, hermitian_eig(build_bulk_hamiltonian(bc)).values, opts);
}

struct BulkEdgeReport {
  PairingReport bulk;
  PairingReport edge;
  double discrepancy = 0.0;  ///< |bulk + edge|
  std::pair<double, double> gap_used;
  bool verdict = false;
};

inline BulkEdgeReport compare_bulk_edge(const ModelConfig& cfg, const BulkEdgeOptions& opts = {}) {
  const ModelConfig bc = bulk_config(cfg);
  const EigenSystem es = hermitian_eig(build_bulk_hamiltonian(bc));
  BulkEdgeReport r;
  r.bulk = detail::bulk_from(bc, es, opts);
  r.edge = detail::edge_from(cfg, es.values, opts);
  r.discrepancy = std::abs(r.bulk.value + r.edge.value);
  r.gap_used = {cfg.gap_lo, cfg.gap_hi};
  r.verdict = r.discrepancy <= opts.tolerance && r.bulk.deviation <= opts.integer_tolerance &&
              r.edge.deviation <= opts.integer_tolerance;
  return r;
}

namespace detail {

inline double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace detail

struct EnsembleResult {
  std::vector<std::uint64_t> seeds;  ///< ascending
  std::vector<BulkEdgeReport> reports;
  double bulk_mean = 0.0;
  double bulk_std = 0.0;  ///< sample standard deviation of Re(bulk)
  double edge_mean = 0.0;
  double edge_std = 0.0;
  bool all_pass = false;
};

inline EnsembleResult ensemble_scan(const ModelConfig& cfg, std::vector<std::uint64_t> seeds,
                                    const BulkEdgeOptions& opts = {}) {
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "ensemble needs at least one seed");
  std::sort(seeds.begin(), seeds.end());
  std::vector<std::optional<BulkEdgeReport>> slots(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    ModelConfig c = cfg;
    c.seed = seeds[i];
    slots[i] = compare_bulk_edge(c, opts);
  });
  EnsembleResult out;
  out.seeds = seeds;
  std::vector<double> bulk, edge;
  out.all_pass = true;
  for (auto& s : slots) {
    bulk.push_back(s->bulk.value.real());
    edge.push_back(s->edge.value.real());
    out.all_pass = out.all_pass && s->verdict;
    out.reports.push_back(std::move(*s));
  }
  out.bulk_mean = detail::mean_of(bulk);
  out.bulk_std = detail::sample_std(bulk);
  out.edge_mean = detail::mean_of(edge);
  out.edge_std = detail::sample_std(edge);
  return out;
}

struct HomotopyResult {
  std::vector<PairingReport> reports;
  bool constant = false;
};

/// Bulk pairing at every config of a path sharing one geometry; constant iff
/// the nearest integer never changes.
inline HomotopyResult homotopy_scan(const std::vector<ModelConfig>& path, const BulkEdgeOptions& opts = {}) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, "homotopy path is empty");
  for (const auto& c : path)
    if (!(c.geometry == path.front().geometry))
      throw Error(ErrorCode::GeometryMismatch, "homotopy path configs must share one geometry");
  std::vector<std::optional<PairingReport>> slots(path.size());
  parallel_for(path.size(), [&](std::size_t i) {
    try {
      slots[i] = run_bulk(path[i], opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoGapAtMu) throw;
      throw Error(ErrorCode::NoGapAtMu, "path index " + std::to_string(i) + ": " + e.what());
    }
  });
  HomotopyResult out;
  out.constant = true;
  for (auto& s : slots) {
    if (!out.reports.empty() && s->nearest_integer != out.reports.front().nearest_integer) out.constant = false;
    out.reports.push_back(std::move(*s));
  }
  return out;
}

/// Configs interpolating the disorder amplitude from `from` to `to` in `steps` steps (steps + 1 configs).
inline std::vector<ModelConfig> disorder_ramp(const ModelConfig& cfg, double from, double to, int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "ramp needs at least one step");
  std::vector<ModelConfig> path;
  for (int i = 0; i <= steps; ++i) {
    ModelConfig c = cfg;
    c.W = from + (to - from) * static_cast<double>(i) / steps;
    path.push_back(c);
  }
  return path;
}

}  // namespace ncg
