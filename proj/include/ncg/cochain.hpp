#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncg/error.hpp"
#include "ncg/operator_core.hpp"

namespace ncg {

/// Multilinear functional of n+1 arguments from an algebra with elements E.
template <class E>
class CyclicCochain {
 public:
  using Evaluator = std::function<Complex(std::span<const E>)>;

  CyclicCochain(int degree, Evaluator evaluate) : degree_(degree), evaluate_(std::move(evaluate)) {
    if (degree < 0) throw Error(ErrorCode::InvalidArgument, "cochain degree must be non-negative");
  }

  int degree() const { return degree_; }
  int arity() const { return degree_ + 1; }

  Complex operator()(std::span<const E> args) const {
    if (static_cast<int>(args.size()) != arity())
      throw Error(ErrorCode::DegreeMismatch, "degree-" + std::to_string(degree_) + " cochain takes " +
                                                 std::to_string(arity()) + " arguments, got " +
                                                 std::to_string(args.size()));
    return evaluate_(args);
  }
  Complex operator()(const std::vector<E>& args) const { return (*this)(std::span<const E>(args)); }
  Complex operator()(std::initializer_list<E> args) const { return (*this)(std::vector<E>(args)); }

 private:
  int degree_;
  Evaluator evaluate_;
};

/// Matrix trace as a degree-0 cochain.
inline CyclicCochain<Matrix> trace_cochain() {
  return CyclicCochain<Matrix>(0, [](std::span<const Matrix> a) { return a[0].trace(); });
}

/// b eta(A_0..A_{n+1}) = sum_{j=0}^{n} (-1)^j eta(.., A_j A_{j+1}, ..) + (-1)^{n+1} eta(A_{n+1} A_0, A_1, .., A_n).
template <class E, class Mul>
CyclicCochain<E> hochschild_boundary(const CyclicCochain<E>& eta, Mul mul) {
  const int n = eta.degree();
  return CyclicCochain<E>(n + 1, [eta, mul, n](std::span<const E> a) {
    Complex sum = 0.0;
    std::vector<E> args;
    args.reserve(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
      args.clear();
      for (int i = 0; i < j; ++i) args.push_back(a[i]);
      args.push_back(mul(a[j], a[j + 1]));
      for (int i = j + 2; i <= n + 1; ++i) args.push_back(a[i]);
      sum += (j % 2 == 0 ? 1.0 : -1.0) * eta(args);
    }
    args.clear();
    args.push_back(mul(a[n + 1], a[0]));
    for (int i = 1; i <= n; ++i) args.push_back(a[i]);
    sum += ((n + 1) % 2 == 0 ? 1.0 : -1.0) * eta(args);
    return sum;
  });
}

inline CyclicCochain<Matrix> hochschild_boundary(const CyclicCochain<Matrix>& eta) {
  return hochschild_boundary(eta, [](const Matrix& a, const Matrix& b) -> Matrix { return a * b; });
}

/// Largest |eta(A_1..A_n, A_0) - (-1)^n eta(A_0..A_n)| over random tuples,
/// relative to max(1, |values|).
template <class E, class Sampler>
double cyclicity_residual(const CyclicCochain<E>& eta, int trials, Sampler&& sample, std::mt19937_64& rng) {
  const int n = eta.degree();
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<E> args;
    for (int i = 0; i <= n; ++i) args.push_back(sample(rng));
    std::vector<E> rotated(args.begin() + 1, args.end());
    rotated.push_back(args.front());
    const Complex lhs = eta(rotated);
    const Complex rhs = sign * eta(args);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

template <class E, class Sampler>
bool cyclicity_check(const CyclicCochain<E>& eta, int trials, Sampler&& sample, std::mt19937_64& rng,
                     double tol = 1e-10) {
  return cyclicity_residual(eta, trials, std::forward<Sampler>(sample), rng) <= tol;
}

/// Largest |eta(A_0..A_n)| over random tuples.
template <class E, class Sampler>
double max_abs_on_samples(const CyclicCochain<E>& eta, int trials, Sampler&& sample, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<E> args;
    for (int i = 0; i <= eta.degree(); ++i) args.push_back(sample(rng));
    worst = std::max(worst, std::abs(eta(args)));
  }
  return worst;
}

/// Random complex matrix with standard normal real and imaginary parts.
inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

inline Matrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Orthogonal projection of rank k onto a random subspace.
inline Matrix random_projector(Eigen::Index n, Eigen::Index k, std::mt19937_64& rng) {
  const Matrix q = random_unitary(n, rng);
  const auto cols = q.leftCols(k);
  Matrix p = cols * cols.adjoint();
  return 0.5 * (p + p.adjoint());
}

}  // namespace ncg
