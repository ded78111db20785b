#pragma once

// Pairings of K-theory representatives with cyclic cocycles: the bulk Chern
// character, the edge winding functional, the generic even/odd formulas and
// the constants c_n.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ncg/cochain.hpp"
#include "ncg/error.hpp"
#include "ncg/geometry.hpp"
#include "ncg/models.hpp"
#include "ncg/operator_core.hpp"

namespace ncg {

using ConfigSnapshot = std::vector<std::pair<std::string, std::string>>;

struct PairingReport {
  Complex value;
  Complex constant;  ///< c_n
  int constant_n = 0;
  long nearest_integer = 0;
  double deviation = 0.0;  ///< |value - nearest_integer|
  double imag_part = 0.0;
  ConfigSnapshot config;
};

inline PairingReport make_report(Complex value, int constant_n, Complex constant, ConfigSnapshot config = {}) {
  PairingReport r;
  r.value = value;
  r.constant = constant;
  r.constant_n = constant_n;
  r.nearest_integer = std::lround(value.real());
  r.deviation = std::abs(value - Complex(static_cast<double>(r.nearest_integer), 0.0));
  r.imag_part = value.imag();
  r.config = std::move(config);
  return r;
}

/// c_{2k} = 1/((2 pi i)^k k!), c_{2k+1} = 1/((2 pi i)^{k+1} 2^{2k+1} (k+1/2)(k-1/2)...(1/2)).
inline Complex pairing_constant(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "pairing constant needs n >= 0");
  const Complex two_pi_i = 2.0 * kPi * kI;
  const int k = n / 2;
  if (n % 2 == 0) {
    Complex c = 1.0;
    for (int j = 1; j <= k; ++j) c /= two_pi_i * static_cast<double>(j);
    return c;
  }
  Complex c = 1.0 / two_pi_i;
  for (int j = 0; j < k; ++j) c /= two_pi_i;
  c /= std::pow(2.0, 2 * k + 1);
  for (int j = 0; j <= k; ++j) c /= static_cast<double>(j) + 0.5;
  return c;
}

/// [X_axis, A] with coordinate differences reduced to the nearest image on
/// periodic axes: entry (x, y) is (x_axis - y_axis) A(x, y).
inline Matrix position_commutator(const Matrix& a, const LatticeGeometry& g, int axis) {
  if (static_cast<std::size_t>(a.rows()) != g.size() || a.rows() != a.cols())
    throw Error(ErrorCode::GeometryMismatch, "operator does not match the lattice");
  const bool periodic = g.boundary(axis) == Boundary::periodic;
  const int extent = g.extent(axis);
  const Eigen::Index n = a.rows();
  std::vector<int> coord(static_cast<std::size_t>(n));
  for (Eigen::Index s = 0; s < n; ++s)
    coord[static_cast<std::size_t>(s)] = axis == 1 ? g.x1_of(static_cast<int>(s)) : g.x2_of(static_cast<int>(s));
  Matrix out(n, n);
  for (Eigen::Index y = 0; y < n; ++y)
    for (Eigen::Index x = 0; x < n; ++x) {
      int d = coord[static_cast<std::size_t>(x)] - coord[static_cast<std::size_t>(y)];
      if (periodic) d = nearest_image(d, extent);
      out(x, y) = static_cast<double>(d) * a(x, y);
    }
  return out;
}

namespace detail {

inline void check_position(const LatticeOperator& x, const LatticeGeometry& g, int axis) {
  if (!(x.geometry() == g)) throw Error(ErrorCode::GeometryMismatch, "position operator lives on another lattice");
  const auto [x1, x2] = position_operators(g);
  if (max_norm(x.matrix() - (axis == 1 ? x1 : x2).matrix()) != 0.0)
    throw Error(ErrorCode::InvalidArgument, "X" + std::to_string(axis) + " is not the position operator");
}

}  // namespace detail

/// ch = -2 pi i T(P([X1,P][X2,P] - [X2,P][X1,P])).
inline PairingReport chern_pairing(const LatticeOperator& p, const LatticeOperator& x1, const LatticeOperator& x2,
                                   const TraceSpec& spec, ConfigSnapshot config = {}) {
  if (!p.is_projector()) throw Error(ErrorCode::NotAProjector, "chern_pairing needs a projector");
  const LatticeGeometry& g = p.geometry();
  if (!g.is_torus()) throw Error(ErrorCode::GeometryMismatch, "chern_pairing needs a torus");
  detail::check_position(x1, g, 1);
  detail::check_position(x2, g, 2);
  const Matrix c1 = position_commutator(p.matrix(), g, 1);
  const Matrix c2 = position_commutator(p.matrix(), g, 2);
  Matrix curvature = c1 * c2;
  curvature.noalias() -= c2 * c1;
  const Complex t = traced_diagonal(product_diagonal(p.matrix(), curvature), spec);
  return make_report(-2.0 * kPi * kI * t, 2, pairing_constant(2), std::move(config));
}

/// xi = T^((U^* - 1)[X1, U - 1]).
inline PairingReport edge_pairing(const LatticeOperator& u, const LatticeOperator& x1, const TraceSpec& spec,
                                  ConfigSnapshot config = {}) {
  if (!u.is_unitary()) throw Error(ErrorCode::NotUnitary, "edge_pairing needs a unitary");
  const LatticeGeometry& g = u.geometry();
  if (!g.is_cylinder()) throw Error(ErrorCode::GeometryMismatch, "edge_pairing needs a cylinder");
  detail::check_position(x1, g, 1);
  const Matrix id = Matrix::Identity(u.dim(), u.dim());
  const Matrix a = u.matrix().adjoint() - id;
  const Matrix b = u.matrix() - id;
  const Complex value = traced_diagonal(product_diagonal(a, position_commutator(b, g, 1)), spec);
  return make_report(value, 1, pairing_constant(1), std::move(config));
}

/// c_n eta(p, .., p) for even n.
inline Complex pair_even(const CyclicCochain<Matrix>& eta, const Matrix& p, double tol = 1e-10) {
  if (eta.degree() % 2 != 0) throw Error(ErrorCode::DegreeMismatch, "pair_even needs an even cochain");
  if (max_norm(p - p.adjoint()) > tol || max_norm(p * p - p) > tol)
    throw Error(ErrorCode::NotAProjector, "pair_even needs a projector");
  const std::vector<Matrix> args(static_cast<std::size_t>(eta.arity()), p);
  return pairing_constant(eta.degree()) * eta(args);
}

/// c_n eta(a^*, a, a^*, ..) for odd n, where a = u - 1 and a_star = u^* - 1.
template <class E>
Complex pair_odd_from_shift(const CyclicCochain<E>& eta, const E& a_star, const E& a) {
  if (eta.degree() % 2 == 0) throw Error(ErrorCode::DegreeMismatch, "odd pairing needs an odd cochain");
  std::vector<E> args;
  for (int i = 0; i < eta.arity(); ++i) args.push_back(i % 2 == 0 ? a_star : a);
  return pairing_constant(eta.degree()) * eta(args);
}

/// c_n eta(u^* - 1, u - 1, ..) for odd n.
inline Complex pair_odd(const CyclicCochain<Matrix>& eta, const Matrix& u, double tol = 1e-10) {
  if (eta.degree() % 2 == 0) throw Error(ErrorCode::DegreeMismatch, "pair_odd needs an odd cochain");
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  if (max_norm(u.adjoint() * u - id) > tol) throw Error(ErrorCode::NotUnitary, "pair_odd needs a unitary");
  return pair_odd_from_shift<Matrix>(eta, u.adjoint() - id, u - id);
}

struct SwitchIntegral {
  Complex numeric;
  Complex exact;
  double relative_error;
};

/// Trapezoid value of the integral of g' g^{k+1} conj(g)^{k+2} over the line,
/// g = exp(2 pi i chi) - 1 with chi = 1 - G rising from 0 to 1, against
/// 2 pi i (2k+3)! / ((k+1)! (k+2)!).
inline SwitchIntegral switch_integral_check(int k, int grid, const SwitchFunction& profile = SwitchFunction(-1.0, 1.0, 0.25)) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "k must be non-negative");
  if (grid < 2) throw Error(ErrorCode::GridTooCoarse, "need at least 2 grid points");
  const double lo = profile.support_lo();
  const double hi = profile.support_hi();
  const double step = (hi - lo) / (grid - 1);
  Complex sum = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double s = lo + step * i;
    const double chi = 1.0 - profile(s);
    const double dchi = -profile.derivative(s);
    const Complex e = std::exp(2.0 * kPi * kI * chi);
    const Complex g = e - 1.0;
    const Complex dg = 2.0 * kPi * kI * dchi * e;
    const Complex term = dg * std::pow(g, k + 1) * std::pow(std::conj(g), k + 2);
    sum += (i == 0 || i == grid - 1 ? 0.5 : 1.0) * term;
  }
  const Complex numeric = step * sum;
  double ratio = 1.0;  // (2k+3)! / ((k+1)! (k+2)!)
  for (int j = 1; j <= 2 * k + 3; ++j) ratio *= j;
  for (int j = 1; j <= k + 1; ++j) ratio /= j;
  for (int j = 1; j <= k + 2; ++j) ratio /= j;
  const Complex exact = 2.0 * kPi * kI * ratio;
  return {numeric, exact, std::abs(numeric - exact) / std::abs(exact)};
}

}  // namespace ncg
