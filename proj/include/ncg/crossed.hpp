#pragma once

// Discretized crossed product of M_d(C) by an inner R-action, and the
// construction of a cocycle one degree higher from an invariant cycle.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncg/cochain.hpp"
#include "ncg/error.hpp"
#include "ncg/geometry.hpp"
#include "ncg/graded.hpp"
#include "ncg/operator_core.hpp"

namespace ncg {

/// Matrix-valued function on the grid {-N/2, .., N/2-1} * h. values[k] sits at
/// coordinate k - N/2.
struct CrossedElement {
  std::vector<Matrix> values;
};

class CrossedProduct {
 public:
  /// alpha_y = Ad(exp(i y xi)), sampled on the grid.
  CrossedProduct(Matrix xi, int n, double h) : xi_(std::move(xi)), n_(n), h_(h) {
    if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidArgument, "grid size must be even and >= 2");
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
    if (max_norm(xi_ - xi_.adjoint()) > 1e-12) throw Error(ErrorCode::NonHermitianInput, "action generator must be Hermitian");
    const EigenSystem es = hermitian_eig(LatticeOperator::hermitian(xi_, LatticeGeometry::sites(static_cast<int>(xi_.rows()))));
    phases_.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) phases_.push_back(unitary_exp(es, LatticeGeometry::sites(static_cast<int>(xi_.rows())), position(k)).matrix());
  }

  int size() const { return n_; }
  double spacing() const { return h_; }
  Eigen::Index dim() const { return xi_.rows(); }
  const Matrix& generator() const { return xi_; }

  int coordinate(int k) const { return k - n_ / 2; }
  /// Grid index of an integer coordinate, reduced to the nearest image in [-N/2, N/2).
  int index_of(int c) const { return wrap(c + n_ / 2, n_); }
  double position(int k) const { return h_ * coordinate(k); }
  int origin() const { return n_ / 2; }

  CrossedElement zero() const { return {std::vector<Matrix>(static_cast<std::size_t>(n_), Matrix::Zero(dim(), dim()))}; }

  Matrix act(int k, const Matrix& a) const {
    const Matrix& u = phases_[static_cast<std::size_t>(k)];
    return u * a * u.adjoint();
  }
  GradedElement act(int k, const GradedElement& a) const {
    return a.map([&](const Matrix& m) { return act(k, m); });
  }

  /// (fg)(x) = h sum_y f(y) alpha_y(g(x - y)).
  template <class V>
  std::vector<V> multiply(const std::vector<V>& f, const std::vector<V>& g) const {
    check(f.size());
    check(g.size());
    std::vector<V> out;
    out.reserve(f.size());
    for (int k = 0; k < n_; ++k) {
      std::optional<V> acc;
      for (int j = 0; j < n_; ++j) {
        const int m = index_of(coordinate(k) - coordinate(j));
        V term = f[static_cast<std::size_t>(j)] * act(j, g[static_cast<std::size_t>(m)]);
        if (acc)
          *acc += term;
        else
          acc.emplace(std::move(term));
      }
      out.push_back(Complex(h_) * *acc);
    }
    return out;
  }

  CrossedElement multiply(const CrossedElement& f, const CrossedElement& g) const {
    return {multiply(f.values, g.values)};
  }

  /// (fg)(0) without forming the full product.
  template <class V>
  V product_at_origin(const std::vector<V>& f, const std::vector<V>& g) const {
    check(f.size());
    check(g.size());
    std::optional<V> acc;
    for (int j = 0; j < n_; ++j) {
      const int m = index_of(-coordinate(j));
      V term = f[static_cast<std::size_t>(j)] * act(j, g[static_cast<std::size_t>(m)]);
      if (acc)
        *acc += term;
      else
        acc.emplace(std::move(term));
    }
    return Complex(h_) * *acc;
  }

  /// Dual derivation: (nabla f)(x) = i x f(x).
  CrossedElement nabla(const CrossedElement& f) const {
    check(f.values.size());
    CrossedElement out = f;
    for (int k = 0; k < n_; ++k) out.values[static_cast<std::size_t>(k)] *= kI * position(k);
    return out;
  }

  /// f*(x) = alpha_x(f(-x))^*.
  CrossedElement adjoint(const CrossedElement& f) const {
    check(f.values.size());
    CrossedElement out = zero();
    for (int k = 0; k < n_; ++k)
      out.values[static_cast<std::size_t>(k)] =
          act(k, f.values[static_cast<std::size_t>(index_of(-coordinate(k)))]).adjoint();
    return out;
  }

 private:
  void check(std::size_t n) const {
    if (n != static_cast<std::size_t>(n_))
      throw Error(ErrorCode::GeometryMismatch, "crossed element has " + std::to_string(n) + " samples, grid has " +
                                                   std::to_string(n_));
  }

  Matrix xi_;
  int n_;
  double h_;
  std::vector<Matrix> phases_;
};

/// The cocycle of degree n+1 on the crossed product built from the degree-n
/// cycle `cycle`:
///   #eta(f_0, .., f_{n+1}) = sum_{k=1}^{n+1} (-1)^k (Tr (x) iota)[(f_0 df_1 .. nabla f_k .. df_{n+1})(0)].
/// The cycle's trace and derivations must be invariant under the action.
inline CyclicCochain<CrossedElement> sharp_alpha_discrete(const InnerCycle& cycle, const CrossedProduct& algebra,
                                                          double tol = 1e-12) {
  const Matrix& xi = algebra.generator();
  if (xi.rows() != cycle.dim()) throw Error(ErrorCode::InvalidArgument, "action and cycle act on different spaces");
  for (std::size_t j = 0; j < cycle.generators().size(); ++j) {
    const Matrix& g = cycle.generators()[j];
    const double c = max_norm(g * xi - xi * g);
    if (c > tol) throw Error(ErrorCode::NotInvariant, "derivation " + std::to_string(j) + " is not invariant under the action");
  }
  if (cycle.density() && max_norm(*cycle.density() * xi - xi * *cycle.density()) > tol)
    throw Error(ErrorCode::NotInvariant, "trace density is not invariant under the action");

  const int n = cycle.degree();
  return CyclicCochain<CrossedElement>(n + 1, [cycle, algebra, n](std::span<const CrossedElement> f) {
    const auto lift = [&](const CrossedElement& e, bool differentiate) {
      std::vector<GradedElement> out;
      out.reserve(e.values.size());
      for (const Matrix& v : e.values) out.push_back(differentiate ? cycle.differential(v) : cycle.embed(v));
      return out;
    };
    std::vector<std::vector<GradedElement>> differentiated;
    for (int i = 0; i <= n + 1; ++i) {
      differentiated.push_back(i == 0 ? std::vector<GradedElement>{} : lift(f[static_cast<std::size_t>(i)], true));
    }
    Complex total = 0.0;
    const auto f0 = lift(f[0], false);
    for (int k = 1; k <= n + 1; ++k) {
      const auto nk = lift(algebra.nabla(f[static_cast<std::size_t>(k)]), false);
      std::vector<GradedElement> right = k == n + 1 ? nk : differentiated[static_cast<std::size_t>(n + 1)];
      for (int i = n; i >= 1; --i) right = algebra.multiply(i == k ? nk : differentiated[static_cast<std::size_t>(i)], right);
      const GradedElement at0 = algebra.product_at_origin(f0, right);
      total += (k % 2 == 0 ? 1.0 : -1.0) * cycle.integrate(at0);
    }
    return total;
  });
}

inline CyclicCochain<CrossedElement> crossed_boundary(const CyclicCochain<CrossedElement>& eta,
                                                      const CrossedProduct& algebra) {
  return hochschild_boundary(eta, [algebra](const CrossedElement& a, const CrossedElement& b) {
    return algebra.multiply(a, b);
  });
}

}  // namespace ncg
