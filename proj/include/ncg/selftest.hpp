#pragma once

// Invariant suite run by the `selftest` command.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ncg/cyclic.hpp"
#include "ncg/models.hpp"
#include "ncg/operator_core.hpp"
#include "ncg/pairings.hpp"

namespace ncg {

struct CheckResult {
  std::string name;
  double measured;
  double threshold;
  bool passed;
};

/// Random matrix with entries of size about 1/sqrt(n), so products stay O(1).
inline Matrix scaled_random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  return random_matrix(n, n, rng) / std::sqrt(2.0 * static_cast<double>(n));
}

/// Commuting Hermitian generators: a random unitary frame with eigenvalues in [-1, 1].
inline std::vector<Matrix> random_commuting_generators(Eigen::Index n, int count, std::mt19937_64& rng) {
  const Matrix frame = random_unitary(n, rng);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Matrix> out;
  for (int j = 0; j < count; ++j) {
    RealVector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = u(rng);
    Matrix x = frame * d.cast<Complex>().asDiagonal() * frame.adjoint();
    out.push_back(0.5 * (x + x.adjoint()));
  }
  return out;
}

/// phi(A_0..A_n) = Tr(K_0 A_0 K_1 A_1 ... K_n A_n): a generic, non-cyclic cochain.
inline CyclicCochain<Matrix> random_cochain(int degree, Eigen::Index n, std::mt19937_64& rng) {
  std::vector<Matrix> k;
  for (int i = 0; i <= degree; ++i) k.push_back(scaled_random_matrix(n, rng));
  return CyclicCochain<Matrix>(degree, [k](std::span<const Matrix> a) {
    Matrix prod = Matrix::Identity(a[0].rows(), a[0].cols());
    for (std::size_t i = 0; i < a.size(); ++i) prod = prod * k[i] * a[i];
    return prod.trace();
  });
}

inline double covariance_residual(int trials, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.geometry = LatticeGeometry::torus(12, 12);
  cfg.p = 1;
  cfg.q = 3;
  cfg.W = 1.0;
  cfg.seed = seed;
  const auto v = disorder_potential(cfg);
  const Matrix h = build_bulk_hamiltonian(cfg, v).matrix();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d1(0, cfg.geometry.L1 - 1), d2(0, cfg.geometry.L2 - 1);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::array<int, 2> xi{d1(rng), d2(rng)};
    const Matrix u = magnetic_translation(cfg.geometry, xi, cfg.flux_angle()).matrix();
    const Matrix shifted = build_bulk_hamiltonian(cfg, translate_potential(cfg.geometry, v, xi)).matrix();
    worst = std::max(worst, max_norm(u * h * u.adjoint() - shifted));
  }
  return worst;
}

inline double appendix_residual(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rank(0, 8);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Matrix p = random_projector(8, rank(rng), rng);
    worst = std::max(worst, appendix_identity_check(p, random_matrix(8, 8, rng), random_matrix(8, 8, rng)));
  }
  return worst;
}

inline double boundary_squared_residual(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto sample = [](std::mt19937_64& r) { return scaled_random_matrix(4, r); };
  double worst = 0.0;
  for (int degree = 0; degree <= 2; ++degree) {
    const auto phi = random_cochain(degree, 4, rng);
    worst = std::max(worst, max_abs_on_samples(hochschild_boundary(hochschild_boundary(phi)), trials, sample, rng));
  }
  return worst;
}

struct CocycleResiduals {
  double boundary = 0.0;
  double cyclicity = 0.0;
};

/// |b eta| and cyclicity residual of inner-cycle characters of degree 1 and 2 on dim-6 matrices.
inline CocycleResiduals cocycle_residuals(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto sample = [](std::mt19937_64& r) { return scaled_random_matrix(6, r); };
  CocycleResiduals out;
  for (int n = 1; n <= 2; ++n) {
    const InnerCycle cycle = build_inner_cycle(random_commuting_generators(6, n, rng), 6);
    const auto eta = cycle.character();
    out.boundary = std::max(out.boundary, max_abs_on_samples(hochschild_boundary(eta), trials, sample, rng));
    out.cyclicity = std::max(out.cyclicity, cyclicity_residual(eta, trials, sample, rng));
  }
  return out;
}

/// Smooth random family F(h) = A + B sin(2h) + C cos(3h) on [0, 1].
inline std::vector<std::vector<Matrix>> smooth_families(const std::vector<std::array<Matrix, 3>>& coeffs,
                                                        const std::vector<double>& grid) {
  std::vector<std::vector<Matrix>> out;
  for (const auto& c : coeffs) {
    std::vector<Matrix> fam;
    for (double h : grid) fam.push_back(c[0] + std::sin(2.0 * h) * c[1] + std::cos(3.0 * h) * c[2]);
    out.push_back(std::move(fam));
  }
  return out;
}

inline std::vector<double> uniform_grid(double a, double b, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(a + (b - a) * i / (points - 1));
  return g;
}

/// Stokes residuals on grids of `coarse` and `fine` points; returns {coarse residual, fine residual}.
inline std::array<double, 2> stokes_residuals(int coarse, int fine, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const InnerCycle base = build_inner_cycle(random_commuting_generators(4, 1, rng), 4);
  std::vector<std::array<Matrix, 3>> coeffs;
  for (int j = 0; j < 2; ++j)
    coeffs.push_back({scaled_random_matrix(4, rng), scaled_random_matrix(4, rng), scaled_random_matrix(4, rng)});
  std::array<double, 2> out{};
  int slot = 0;
  for (int points : {coarse, fine}) {
    const auto grid = uniform_grid(0.0, 1.0, points);
    out[static_cast<std::size_t>(slot++)] = stokes_chain_check(base, grid, smooth_families(coeffs, grid)).residual;
  }
  return out;
}

inline std::vector<CheckResult> run_selftest() {
  std::vector<CheckResult> out;
  const auto add = [&](std::string name, double measured, double threshold) {
    out.push_back({std::move(name), measured, threshold, measured <= threshold});
  };
  add("covariance", covariance_residual(10, 4), 1e-12);
  add("appendix_identity", appendix_residual(100, 5), 1e-12);
  add("boundary_squared", boundary_squared_residual(100, 6), 1e-10);
  const auto cocycle = cocycle_residuals(100, 7);
  add("cocycle_boundary", cocycle.boundary, 1e-10);
  add("cyclicity", cocycle.cyclicity, 1e-10);
  double switch_err = 0.0;
  for (int k = 0; k <= 2; ++k) switch_err = std::max(switch_err, switch_integral_check(k, 100000).relative_error);
  add("switch_integral", switch_err, 1e-6);
  const auto stokes = stokes_residuals(16, 32, 8);
  const double ratio = stokes[0] / stokes[1];
  out.push_back({"stokes_order", ratio, 4.0, ratio >= 3.0 && ratio <= 5.0});
  return out;
}

}  // namespace ncg
