#pragma once

// Magnetic tight-binding (Harper/Hofstadter) Hamiltonians on the torus and on
// the cylinder, with on-site disorder, position operators, magnetic
// translations, gap search and the smooth switch function.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncg/error.hpp"
#include "ncg/geometry.hpp"
#include "ncg/operator_core.hpp"

namespace ncg {

struct ModelConfig {
  LatticeGeometry geometry = LatticeGeometry::torus(24, 24);
  int p = 1;  ///< flux numerator, gamma = 2 pi p / q per plaquette
  int q = 3;
  double t = 1.0;
  double W = 0.0;  ///< disorder amplitude, V uniform on [-W/2, W/2]
  std::uint64_t seed = 0;
  double mu = 0.0;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  double margin = 0.25;

  double flux_angle() const { return 2.0 * kPi * static_cast<double>(p) / static_cast<double>(q); }

  /// Throws BadValue naming the offending field.
  void validate() const {
    if (q < 1) throw Error(ErrorCode::BadValue, "q: must be >= 1");
    if (std::gcd(p < 0 ? -p : p, q) != 1) throw Error(ErrorCode::BadValue, "p: gcd(p, q) must be 1");
    if (!std::isfinite(t)) throw Error(ErrorCode::BadValue, "t: must be finite");
    if (!(W >= 0.0) || !std::isfinite(W)) throw Error(ErrorCode::BadValue, "W: must be finite and >= 0");
    if (!std::isfinite(mu)) throw Error(ErrorCode::BadValue, "mu: must be finite");
    if (!(gap_lo < gap_hi)) throw Error(ErrorCode::BadValue, "gap_lo: must be below gap_hi");
    if (!(margin > 0.0 && margin < 0.5)) throw Error(ErrorCode::BadValue, "margin: must lie in (0, 1/2)");
    if (geometry.L1 % q != 0) throw Error(ErrorCode::BadValue, "L1: must be a multiple of q");
    if (geometry.L2 % q != 0) throw Error(ErrorCode::BadValue, "L2: must be a multiple of q");
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform [0, 1) variate attached to lattice point (x1, x2). Keyed by the
/// coordinates rather than the site index so that lattices of different
/// extent see the same disorder on the sites they share.
inline double site_uniform(std::uint64_t seed, int x1, int x2) {
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x1)) << 32) |
                            static_cast<std::uint32_t>(x2);
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ splitmix64(key));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline void check_flux(const ModelConfig& cfg) {
  const auto& g = cfg.geometry;
  if (g.L1 % cfg.q != 0)
    throw Error(ErrorCode::FluxIncommensurate, "L1 = " + std::to_string(g.L1) + " is not a multiple of q");
  if (g.axis2 == Boundary::periodic && g.L2 % cfg.q != 0)
    throw Error(ErrorCode::FluxIncommensurate, "L2 = " + std::to_string(g.L2) + " is not a multiple of q");
}

}  // namespace detail

/// On-site potential V_omega(x), one value per site in site-index order.
inline std::vector<double> disorder_potential(const ModelConfig& cfg) {
  const auto& g = cfg.geometry;
  std::vector<double> v(g.size(), 0.0);
  if (cfg.W == 0.0) return v;
  for (int x2 = 0; x2 < g.L2; ++x2)
    for (int x1 = 0; x1 < g.L1; ++x1)
      v[static_cast<std::size_t>(g.index(x1, x2))] = cfg.W * (detail::site_uniform(cfg.seed, x1, x2) - 0.5);
  return v;
}

/// The configuration shifted by xi: translated(V)(x) = V(x - xi).
inline std::vector<double> translate_potential(const LatticeGeometry& g, std::span<const double> v,
                                               std::array<int, 2> xi) {
  if (v.size() != g.size()) throw Error(ErrorCode::GeometryMismatch, "potential size does not match lattice");
  std::vector<double> out(v.size());
  for (int x2 = 0; x2 < g.L2; ++x2)
    for (int x1 = 0; x1 < g.L1; ++x1)
      out[static_cast<std::size_t>(g.index(x1, x2))] =
          v[static_cast<std::size_t>(g.index(wrap(x1 - xi[0], g.L1), wrap(x2 - xi[1], g.L2)))];
  return out;
}

/// Landau-gauge stencil: -t e^{-i gamma x2} on axis-1 hops, -t on axis-2 hops,
/// plus the diagonal potential. Dirichlet axes simply drop the wrap bonds.
inline Matrix magnetic_stencil(const LatticeGeometry& g, double gamma, double t, std::span<const double> potential) {
  if (potential.size() != g.size()) throw Error(ErrorCode::GeometryMismatch, "potential size does not match lattice");
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix h = Matrix::Zero(n, n);
  for (int x2 = 0; x2 < g.L2; ++x2) {
    const Complex hop1 = -t * std::exp(-kI * (gamma * x2));
    for (int x1 = 0; x1 < g.L1; ++x1) {
      const int i = g.index(x1, x2);
      if (x1 + 1 < g.L1 || g.axis1 == Boundary::periodic) {
        const int j = g.index(wrap(x1 + 1, g.L1), x2);
        h(j, i) += hop1;
        h(i, j) += std::conj(hop1);
      }
      if (x2 + 1 < g.L2 || g.axis2 == Boundary::periodic) {
        const int j = g.index(x1, wrap(x2 + 1, g.L2));
        h(j, i) += -t;
        h(i, j) += -t;
      }
      h(i, i) += potential[static_cast<std::size_t>(i)];
    }
  }
  return h;
}

inline LatticeOperator build_bulk_hamiltonian(const ModelConfig& cfg, std::span<const double> potential) {
  if (!cfg.geometry.is_torus()) throw Error(ErrorCode::GeometryMismatch, "bulk Hamiltonian requires a torus");
  detail::check_flux(cfg);
  return LatticeOperator::hermitian(magnetic_stencil(cfg.geometry, cfg.flux_angle(), cfg.t, potential),
                                    cfg.geometry);
}

inline LatticeOperator build_bulk_hamiltonian(const ModelConfig& cfg) {
  const auto v = disorder_potential(cfg);
  return build_bulk_hamiltonian(cfg, v);
}

inline LatticeOperator build_edge_hamiltonian(const ModelConfig& cfg, std::span<const double> potential) {
  if (!cfg.geometry.is_cylinder()) throw Error(ErrorCode::GeometryMismatch, "edge Hamiltonian requires a cylinder");
  detail::check_flux(cfg);
  return LatticeOperator::hermitian(magnetic_stencil(cfg.geometry, cfg.flux_angle(), cfg.t, potential),
                                    cfg.geometry);
}

inline LatticeOperator build_edge_hamiltonian(const ModelConfig& cfg) {
  const auto v = disorder_potential(cfg);
  return build_edge_hamiltonian(cfg, v);
}

/// Diagonal operators of the integer site coordinates.
inline std::pair<LatticeOperator, LatticeOperator> position_operators(const LatticeGeometry& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix x1 = Matrix::Zero(n, n);
  Matrix x2 = Matrix::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    x1(s, s) = g.x1_of(static_cast<int>(s));
    x2(s, s) = g.x2_of(static_cast<int>(s));
  }
  return {LatticeOperator::hermitian(std::move(x1), g), LatticeOperator::hermitian(std::move(x2), g)};
}

/// (U(xi) psi)(x) = e^{-i gamma xi2 (x - xi)_1} psi(x - xi) with periodic wrap.
/// On a cylinder only translations along the periodic axis are allowed.
inline LatticeOperator magnetic_translation(const LatticeGeometry& g, std::array<int, 2> xi, double gamma) {
  if (!g.is_torus() && !(g.is_cylinder() && xi[1] == 0))
    throw Error(ErrorCode::GeometryMismatch, "magnetic translation needs a torus (or xi2 = 0 on a cylinder)");
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix u = Matrix::Zero(n, n);
  for (int x2 = 0; x2 < g.L2; ++x2) {
    for (int x1 = 0; x1 < g.L1; ++x1) {
      const int y1 = wrap(x1 - xi[0], g.L1);
      const int y2 = wrap(x2 - xi[1], g.L2);
      u(g.index(x1, x2), g.index(y1, y2)) = std::exp(-kI * (gamma * xi[1] * y1));
    }
  }
  return LatticeOperator::unitary(std::move(u), g);
}

using EnergyInterval = std::pair<double, double>;

/// Open intervals between consecutive eigenvalues wider than min_width.
inline std::vector<EnergyInterval> find_gaps(const RealVector& eigenvalues, double min_width) {
  std::vector<EnergyInterval> gaps;
  for (Eigen::Index i = 0; i + 1 < eigenvalues.size(); ++i)
    if (eigenvalues(i + 1) - eigenvalues(i) > min_width) gaps.emplace_back(eigenvalues(i), eigenvalues(i + 1));
  return gaps;
}

inline std::vector<EnergyInterval> find_gaps(const LatticeOperator& h, double min_width) {
  return find_gaps(hermitian_eig(h).values, min_width);
}

/// Smooth monotone switch G: equal to 1 below its support, 0 above, with the
/// transition given by the normalized antiderivative of exp(-1/(1-u^2)) mapped
/// onto the gap shrunk by `margin` * width on each side.
class SwitchFunction {
 public:
  SwitchFunction(double gap_lo, double gap_hi, double margin) : gap_lo_(gap_lo), gap_hi_(gap_hi), margin_(margin) {
    if (!(gap_hi > gap_lo)) throw Error(ErrorCode::DegenerateGap, "gap must have positive width");
    if (!(margin > 0.0 && margin < 0.5)) throw Error(ErrorCode::InvalidArgument, "margin must lie in (0, 1/2)");
    const double w = gap_hi - gap_lo;
    support_lo_ = gap_lo + margin * w;
    support_hi_ = gap_hi - margin * w;
    center_ = 0.5 * (support_lo_ + support_hi_);
    half_width_ = 0.5 * (support_hi_ - support_lo_);
  }

  double operator()(double e) const {
    if (e <= support_lo_) return 1.0;
    if (e >= support_hi_) return 0.0;
    return 1.0 - ramp((e - center_) / half_width_);
  }

  double derivative(double e) const {
    if (e <= support_lo_ || e >= support_hi_) return 0.0;
    return -bump((e - center_) / half_width_) / (mass() * half_width_);
  }

  double gap_lo() const { return gap_lo_; }
  double gap_hi() const { return gap_hi_; }
  double margin() const { return margin_; }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }
  double midpoint() const { return center_; }

  static double bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

 private:
  // Integral of the bump from -1 to u, u <= 0.
  static double left_mass(double u) {
    if (u <= -1.0) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(bump, -1.0, u, 4, 1e-13);
  }
  static double mass() {
    static const double z = 2.0 * left_mass(0.0);
    return z;
  }
  // Normalized antiderivative, symmetric so that ramp(0) = 1/2 exactly.
  static double ramp(double u) {
    if (u <= 0.0) return left_mass(u) / mass();
    return 1.0 - left_mass(-u) / mass();
  }

  double gap_lo_, gap_hi_, margin_;
  double support_lo_ = 0.0, support_hi_ = 0.0, center_ = 0.0, half_width_ = 0.0;
};

inline SwitchFunction smooth_switch(EnergyInterval gap, double margin) {
  return SwitchFunction(gap.first, gap.second, margin);
}

}  // namespace ncg
