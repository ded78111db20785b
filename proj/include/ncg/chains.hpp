#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "ncg/error.hpp"
#include "ncg/graded.hpp"
#include "ncg/operator_core.hpp"

namespace ncg {

struct StokesResult {
  Complex lhs;
  Complex rhs;
  double residual;
};

namespace detail {

// d/dx of the quadratic through (x[i], 1 at i) evaluated at `at`.
inline std::array<double, 3> quadratic_derivative_weights(const std::array<double, 3>& x, double at) {
  std::array<double, 3> w{};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    w[static_cast<std::size_t>(i)] = ((at - x[static_cast<std::size_t>(j)]) + (at - x[static_cast<std::size_t>(k)])) /
                                     ((x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]) *
                                      (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(k)]));
  }
  return w;
}

}  // namespace detail

/// Second-order finite-difference derivative of a sampled family: centered in
/// the interior, one-sided three-point at the ends.
inline std::vector<Matrix> grid_derivative(std::span<const double> grid, std::span<const Matrix> values) {
  const std::size_t n = grid.size();
  if (n < 3) throw Error(ErrorCode::GridTooCoarse, "need at least 3 grid points, got " + std::to_string(n));
  if (values.size() != n) throw Error(ErrorCode::InvalidArgument, "family size does not match grid");
  std::vector<Matrix> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    const auto w = detail::quadratic_derivative_weights({grid[s], grid[s + 1], grid[s + 2]}, grid[i]);
    out.push_back(w[0] * values[s] + w[1] * values[s + 1] + w[2] * values[s + 2]);
  }
  return out;
}

/// Stokes' theorem for the chain over [h0, h1] built from a family of
/// matrices and a base cycle of degree k-1: d = delta_1 + delta_2 with
/// delta_1 F = dF/dh e_1 and delta_2 the base differential on e_2..e_k.
///   lhs = integral over h of the graded trace of dF_1 ... dF_k,
///   rhs = [integral of F_1 delta_2 F_2 ... delta_2 F_k] evaluated from h0 to h1.
inline StokesResult stokes_chain_check(const InnerCycle& base, std::span<const double> grid,
                                       const std::vector<std::vector<Matrix>>& families) {
  const int k = static_cast<int>(families.size());
  if (k != base.degree() + 1)
    throw Error(ErrorCode::DegreeMismatch, "chain of degree " + std::to_string(base.degree() + 1) + " needs " +
                                               std::to_string(base.degree() + 1) + " families, got " +
                                               std::to_string(k));
  const std::size_t n = grid.size();
  if (n < 3) throw Error(ErrorCode::GridTooCoarse, "need at least 3 grid points, got " + std::to_string(n));
  for (std::size_t i = 1; i < n; ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing");

  std::vector<std::vector<Matrix>> derivatives;
  for (const auto& fam : families) derivatives.push_back(grid_derivative(grid, fam));

  const auto total_differential = [&](int j, std::size_t i) {
    const auto& f = families[static_cast<std::size_t>(j)][i];
    GradedElement g(k, f.rows());
    g.add(1, derivatives[static_cast<std::size_t>(j)][i]);
    const GradedElement df = base.differential(f);
    for (const auto& [s, a] : df.terms()) g.add(s << 1, a);
    return g;
  };

  std::vector<Complex> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    GradedElement w = total_differential(0, i);
    for (int j = 1; j < k; ++j) w = w * total_differential(j, i);
    integrand[i] = base.trace(w.top());
  }
  Complex lhs = 0.0;
  for (std::size_t i = 1; i < n; ++i) lhs += 0.5 * (grid[i] - grid[i - 1]) * (integrand[i] + integrand[i - 1]);

  const auto boundary = [&](std::size_t i) {
    std::vector<Matrix> args;
    for (const auto& fam : families) args.push_back(fam[i]);
    return base.character()(args);
  };
  const Complex rhs = boundary(n - 1) - boundary(0);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

/// max-norm of P[[D,P],[M,P]]P + P[D,M]P - [PDP, PMP].
inline double appendix_identity_check(const Matrix& p, const Matrix& d, const Matrix& m, double tol = 1e-12) {
  if (p.rows() != p.cols() || d.rows() != p.rows() || d.cols() != p.cols() || m.rows() != p.rows() ||
      m.cols() != p.cols())
    throw Error(ErrorCode::InvalidArgument, "matrices must be square of equal size");
  const double herm = max_norm(p - p.adjoint());
  const double idem = max_norm(p * p - p);
  if (herm > tol || idem > tol)
    throw Error(ErrorCode::NotAProjector, "max|P - P^*| = " + std::to_string(herm) + ", max|P^2 - P| = " +
                                              std::to_string(idem));
  const auto comm = [](const Matrix& a, const Matrix& b) -> Matrix { return a * b - b * a; };
  const Matrix lhs = p * comm(comm(d, p), comm(m, p)) * p;
  const Matrix rhs = -p * comm(d, m) * p + comm(p * d * p, p * m * p);
  return max_norm(lhs - rhs);
}

}  // namespace ncg
