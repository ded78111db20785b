#pragma once

// Grassmann-graded matrices and the cycles generated by commuting inner
// derivations.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "ncg/cochain.hpp"
#include "ncg/error.hpp"
#include "ncg/operator_core.hpp"

namespace ncg {

using Subset = std::uint32_t;

/// Sign of e_S e_T relative to the sorted monomial e_{S u T}; zero when S and T overlap.
inline int merge_sign(Subset s, Subset t) {
  if ((s & t) != 0) return 0;
  int swaps = 0;
  for (Subset rest = t; rest != 0; rest &= rest - 1) {
    const int b = std::countr_zero(rest);
    swaps += std::popcount(s >> (b + 1));
  }
  return swaps % 2 == 0 ? 1 : -1;
}

/// Matrix-valued element of the Grassmann algebra on m generators, stored
/// sparsely as subset -> coefficient.
class GradedElement {
 public:
  GradedElement(int generators, Eigen::Index dim) : generators_(generators), dim_(dim) {
    if (generators < 0 || generators > 31) throw Error(ErrorCode::InvalidArgument, "generator count out of range");
  }

  static GradedElement scalar(int generators, const Matrix& a) {
    GradedElement g(generators, a.rows());
    g.add(0, a);
    return g;
  }

  int generators() const { return generators_; }
  Eigen::Index dim() const { return dim_; }
  Subset top_subset() const { return generators_ == 0 ? 0 : static_cast<Subset>((1ULL << generators_) - 1); }
  const std::map<Subset, Matrix>& terms() const { return terms_; }

  void add(Subset s, const Matrix& a) {
    if ((s & ~top_subset()) != 0) throw Error(ErrorCode::InvalidArgument, "subset uses unknown generator");
    auto it = terms_.find(s);
    if (it == terms_.end())
      terms_.emplace(s, a);
    else
      it->second += a;
  }

  Matrix coefficient(Subset s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? Matrix::Zero(dim_, dim_) : it->second;
  }
  Matrix top() const { return coefficient(top_subset()); }

  /// |S| if every stored term has the same degree.
  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [s, a] : terms_) {
      const int k = std::popcount(s);
      if (d && *d != k) return std::nullopt;
      d = k;
    }
    return d.value_or(0);
  }

  template <class F>
  GradedElement map(F&& f) const {
    GradedElement out(generators_, dim_);
    for (const auto& [s, a] : terms_) out.terms_.emplace(s, f(a));
    return out;
  }

  GradedElement& operator+=(const GradedElement& o) {
    check_compatible(o);
    for (const auto& [s, a] : o.terms_) add(s, a);
    return *this;
  }
  friend GradedElement operator+(GradedElement a, const GradedElement& b) { return a += b; }
  friend GradedElement operator*(Complex c, const GradedElement& a) {
    return a.map([c](const Matrix& m) -> Matrix { return c * m; });
  }

  friend GradedElement operator*(const GradedElement& a, const GradedElement& b) {
    a.check_compatible(b);
    GradedElement out(a.generators_, a.dim_);
    for (const auto& [s, x] : a.terms_)
      for (const auto& [t, y] : b.terms_) {
        const int sign = merge_sign(s, t);
        if (sign != 0) out.add(s | t, static_cast<double>(sign) * (x * y));
      }
    return out;
  }

 private:
  void check_compatible(const GradedElement& o) const {
    if (o.generators_ != generators_ || o.dim_ != dim_)
      throw Error(ErrorCode::InvalidArgument, "graded elements live in different algebras");
  }

  int generators_;
  Eigen::Index dim_;
  std::map<Subset, Matrix> terms_;
};

/// Cycle on M_dim(C) from commuting Hermitian generators: derivations
/// nabla_j A = i[Xi_j, A], trace Tr(rho .), graded trace reading off the
/// coefficient of e_1...e_n. Generators come in blocks; each extension adds a
/// block through the graded tensor product.
class InnerCycle {
 public:
  InnerCycle(std::vector<Matrix> generators, Eigen::Index dim, std::optional<Matrix> density = std::nullopt,
             double tol = 1e-12)
      : InnerCycle(std::move(generators), dim, std::move(density), tol, {}) {}

  int degree() const { return static_cast<int>(xi_.size()); }
  Eigen::Index dim() const { return dim_; }
  const std::vector<Matrix>& generators() const { return xi_; }
  const std::vector<int>& blocks() const { return blocks_; }
  const std::optional<Matrix>& density() const { return density_; }

  Matrix nabla(int j, const Matrix& a) const { return kI * (xi_[static_cast<std::size_t>(j)] * a - a * xi_[static_cast<std::size_t>(j)]); }

  GradedElement embed(const Matrix& a) const { return GradedElement::scalar(degree(), a); }

  /// d(A e_S) block by block: delta_b(w (x) v) = (-1)^{deg w} sum_{j in b} nabla_j w (x) e_j v,
  /// with w the part of the monomial in earlier blocks.
  GradedElement differential(const GradedElement& x) const {
    GradedElement out(degree(), dim_);
    int offset = 0;
    for (int size : blocks_) {
      const Subset before = offset == 0 ? 0 : static_cast<Subset>((1ULL << offset) - 1);
      for (const auto& [s, a] : x.terms()) {
        const Subset w = s & before;
        const Subset v = s & ~before;
        const double wsign = std::popcount(w) % 2 == 0 ? 1.0 : -1.0;
        for (int j = offset; j < offset + size; ++j) {
          const Subset ej = Subset{1} << j;
          const int vsign = merge_sign(ej, v);
          if (vsign == 0) continue;
          out.add(s | ej, (wsign * vsign) * nabla(j, a));
        }
      }
      offset += size;
    }
    return out;
  }

  GradedElement differential(const Matrix& a) const { return differential(embed(a)); }

  Complex trace(const Matrix& a) const { return density_ ? (*density_ * a).trace() : a.trace(); }

  /// Closed graded trace: trace of the top coefficient.
  Complex integrate(const GradedElement& x) const { return trace(x.top()); }

  /// eta(A_0..A_n) = integral of A_0 dA_1 ... dA_n.
  CyclicCochain<Matrix> character() const {
    InnerCycle self = *this;
    return CyclicCochain<Matrix>(degree(), [self](std::span<const Matrix> a) {
      GradedElement w = self.embed(a[0]);
      for (std::size_t i = 1; i < a.size(); ++i) w = w * self.differential(a[i]);
      return self.integrate(w);
    });
  }

  /// Same character as an explicit signed sum over permutations.
  CyclicCochain<Matrix> character_by_permutations() const {
    InnerCycle self = *this;
    return CyclicCochain<Matrix>(degree(), [self](std::span<const Matrix> a) {
      const int n = self.degree();
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      Complex sum = 0.0;
      do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (perm[i] > perm[j]) ++inversions;
        Matrix prod = a[0];
        for (int i = 0; i < n; ++i) prod = prod * self.nabla(perm[i], a[i + 1]);
        sum += (inversions % 2 == 0 ? 1.0 : -1.0) * self.trace(prod);
      } while (std::next_permutation(perm.begin(), perm.end()));
      return sum;
    });
  }

  friend InnerCycle extend_cycle(const InnerCycle& base, std::vector<Matrix> extra, double tol);

 private:
  InnerCycle(std::vector<Matrix> generators, Eigen::Index dim, std::optional<Matrix> density, double tol,
             std::vector<int> blocks)
      : xi_(std::move(generators)), dim_(dim), density_(std::move(density)), blocks_(std::move(blocks)) {
    if (blocks_.empty()) blocks_.push_back(static_cast<int>(xi_.size()));
    for (const auto& x : xi_) {
      if (x.rows() != dim_ || x.cols() != dim_)
        throw Error(ErrorCode::InvalidArgument, "generator dimension does not match the cycle");
      if (max_norm(x - x.adjoint()) > tol) throw Error(ErrorCode::NonHermitianInput, "generators must be Hermitian");
    }
    for (std::size_t i = 0; i < xi_.size(); ++i)
      for (std::size_t j = i + 1; j < xi_.size(); ++j) {
        const double c = max_norm(xi_[i] * xi_[j] - xi_[j] * xi_[i]);
        if (c > tol)
          throw Error(ErrorCode::NonCommutingGenerators, "generators " + std::to_string(i) + " and " +
                                                             std::to_string(j) + " do not commute");
      }
    if (density_) {
      const Matrix& r = *density_;
      if (r.rows() != dim_ || r.cols() != dim_)
        throw Error(ErrorCode::InvalidArgument, "density dimension does not match the cycle");
      if (max_norm(r - r.adjoint()) > tol) throw Error(ErrorCode::InvalidArgument, "density must be Hermitian");
      Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() <= 0.0) throw Error(ErrorCode::InvalidArgument, "density must be positive");
      for (const auto& x : xi_)
        if (max_norm(r * x - x * r) > tol)
          throw Error(ErrorCode::NonCommutingGenerators, "density does not commute with the generators");
    }
  }

  std::vector<Matrix> xi_;
  Eigen::Index dim_;
  std::optional<Matrix> density_;
  std::vector<int> blocks_;
};

inline InnerCycle build_inner_cycle(std::vector<Matrix> generators, Eigen::Index dim,
                                    std::optional<Matrix> density = std::nullopt, double tol = 1e-12) {
  return InnerCycle(std::move(generators), dim, std::move(density), tol);
}

/// Graded tensor product of a cycle with the Grassmann cycle of extra commuting derivations.
inline InnerCycle extend_cycle(const InnerCycle& base, std::vector<Matrix> extra, double tol = 1e-12) {
  std::vector<Matrix> all = base.generators();
  const int added = static_cast<int>(extra.size());
  for (auto& x : extra) all.push_back(std::move(x));
  std::vector<int> blocks = base.blocks();
  if (added > 0) blocks.push_back(added);
  return InnerCycle(std::move(all), base.dim(), base.density(), tol, std::move(blocks));
}

}  // namespace ncg
