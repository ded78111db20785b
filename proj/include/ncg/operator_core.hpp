#pragma once

// Dense operators on a finite lattice together with the eigendecomposition
// based functional calculus every other module builds on.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ncg/error.hpp"
#include "ncg/geometry.hpp"

namespace ncg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Flag-validation thresholds. Defaults follow the operator contracts; all
/// call sites accept an override.
struct Tolerances {
  double hermitian = 1e-12;
  double unitary = 1e-10;
  double projector = 1e-10;
  double degeneracy = 1e-8;
};

inline double max_norm(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

/// Spectral (largest singular value) norm.
inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

/// Spectral norm of a Hermitian matrix via its eigenvalues.
inline double hermitian_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(a.rows() - 1)));
}

class LatticeOperator {
 public:
  static LatticeOperator general(Matrix data, const LatticeGeometry& geometry) {
    return LatticeOperator(std::move(data), geometry, false, false, false);
  }

  static LatticeOperator hermitian(Matrix data, const LatticeGeometry& geometry, const Tolerances& tol = {}) {
    const double err = max_norm(data - data.adjoint());
    if (err > tol.hermitian)
      throw Error(ErrorCode::NonHermitianInput, "max|A - A^*| = " + std::to_string(err));
    return LatticeOperator(std::move(data), geometry, true, false, false);
  }

  static LatticeOperator unitary(Matrix data, const LatticeGeometry& geometry, const Tolerances& tol = {}) {
    const Matrix id = Matrix::Identity(data.rows(), data.cols());
    const double err = max_norm(data.adjoint() * data - id);
    if (err > tol.unitary) throw Error(ErrorCode::NotUnitary, "max|U^*U - 1| = " + std::to_string(err));
    return LatticeOperator(std::move(data), geometry, false, true, false);
  }

  static LatticeOperator projector(Matrix data, const LatticeGeometry& geometry, const Tolerances& tol = {}) {
    const double herm = max_norm(data - data.adjoint());
    const double idem = max_norm(data * data - data);
    if (herm > tol.hermitian || idem > tol.projector)
      throw Error(ErrorCode::NotAProjector,
                  "max|P - P^*| = " + std::to_string(herm) + ", max|P^2 - P| = " + std::to_string(idem));
    return LatticeOperator(std::move(data), geometry, true, false, true);
  }

  static LatticeOperator identity(const LatticeGeometry& geometry) {
    const auto n = static_cast<Eigen::Index>(geometry.size());
    return LatticeOperator(Matrix::Identity(n, n), geometry, true, true, true);
  }

  static LatticeOperator zero(const LatticeGeometry& geometry) {
    const auto n = static_cast<Eigen::Index>(geometry.size());
    return LatticeOperator(Matrix::Zero(n, n), geometry, true, false, true);
  }

  const Matrix& matrix() const { return data_; }
  const LatticeGeometry& geometry() const { return geometry_; }
  Eigen::Index dim() const { return data_.rows(); }

  bool is_hermitian() const { return hermitian_; }
  bool is_unitary() const { return unitary_; }
  bool is_projector() const { return projector_; }

 private:
  LatticeOperator(Matrix data, const LatticeGeometry& geometry, bool herm, bool unit, bool proj)
      : data_(std::move(data)), geometry_(geometry), hermitian_(herm), unitary_(unit), projector_(proj) {
    if (data_.rows() != data_.cols())
      throw Error(ErrorCode::GeometryMismatch, "operator matrix must be square");
    if (static_cast<std::size_t>(data_.rows()) != geometry_.size())
      throw Error(ErrorCode::GeometryMismatch, "matrix dimension " + std::to_string(data_.rows()) +
                                                   " does not match lattice size " +
                                                   std::to_string(geometry_.size()));
  }

  Matrix data_;
  LatticeGeometry geometry_;
  bool hermitian_;
  bool unitary_;
  bool projector_;
};

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

/// Collects non-fatal observations (e.g. a chemical potential sitting on an
/// eigenvalue).
struct Diagnostics {
  std::vector<std::string> warnings;
};

inline EigenSystem hermitian_eig(const LatticeOperator& a) {
  if (!a.is_hermitian()) throw Error(ErrorCode::NonHermitianInput, "hermitian_eig requires a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// V f(Lambda) V^* for a precomputed eigensystem. Real-valued f yields a
/// Hermitian operator (symmetrized to remove rounding asymmetry); complex f
/// yields a general one.
template <class F>
LatticeOperator functional_calculus(const EigenSystem& es, const LatticeGeometry& geometry, F&& f) {
  using R = std::invoke_result_t<F&, double>;
  const Eigen::Index n = es.values.size();
  if constexpr (std::is_convertible_v<R, double> && !std::is_same_v<std::decay_t<R>, Complex>) {
    RealVector fv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      fv(i) = static_cast<double>(f(es.values(i)));
      if (!std::isfinite(fv(i))) throw Error(ErrorCode::InvalidArgument, "function not finite on the spectrum");
    }
    Matrix out = es.vectors * fv.asDiagonal() * es.vectors.adjoint();
    out = (0.5 * (out + out.adjoint())).eval();
    return LatticeOperator::hermitian(std::move(out), geometry);
  } else {
    ComplexVector fv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      fv(i) = Complex(f(es.values(i)));
      if (!std::isfinite(fv(i).real()) || !std::isfinite(fv(i).imag()))
        throw Error(ErrorCode::InvalidArgument, "function not finite on the spectrum");
    }
    return LatticeOperator::general(es.vectors * fv.asDiagonal() * es.vectors.adjoint(), geometry);
  }
}

template <class F>
LatticeOperator functional_calculus(const LatticeOperator& a, F&& f) {
  return functional_calculus(hermitian_eig(a), a.geometry(), std::forward<F>(f));
}

/// Orthogonal projection onto the eigenvectors with eigenvalue <= mu (closed
/// at mu). An eigenvalue within the degeneracy tolerance of mu is included and
/// reported through `diagnostics`.
inline LatticeOperator spectral_projection(const EigenSystem& es, const LatticeGeometry& geometry, double mu,
                                           Diagnostics* diagnostics = nullptr, const Tolerances& tol = {}) {
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) <= mu + tol.degeneracy) rank = i + 1;
    if (std::abs(es.values(i) - mu) <= tol.degeneracy && diagnostics != nullptr)
      diagnostics->warnings.push_back("chemical potential within " + std::to_string(tol.degeneracy) +
                                      " of eigenvalue " + std::to_string(es.values(i)));
  }
  const auto occupied = es.vectors.leftCols(rank);
  Matrix p = occupied * occupied.adjoint();
  p = (0.5 * (p + p.adjoint())).eval();
  return LatticeOperator::projector(std::move(p), geometry, tol);
}

inline LatticeOperator spectral_projection(const LatticeOperator& h, double mu, Diagnostics* diagnostics = nullptr,
                                           const Tolerances& tol = {}) {
  return spectral_projection(hermitian_eig(h), h.geometry(), mu, diagnostics, tol);
}

/// Replaces an almost-projection by the projection onto its spectrum above
/// the window (a, b); the window must be free of eigenvalues.
inline LatticeOperator spectral_flatten(const LatticeOperator& x, double a, double b) {
  if (!(0.0 < a && a < b && b < 1.0))
    throw Error(ErrorCode::InvalidArgument, "flattening window must satisfy 0 < a < b < 1");
  const EigenSystem es = hermitian_eig(x);
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) > a && es.values(i) < b)
      throw Error(ErrorCode::SpectrumInGap, "eigenvalue " + std::to_string(es.values(i)) + " inside (" +
                                                std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  const double cut = 0.5 * (a + b);
  Eigen::Index first = es.values.size();
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) > cut) {
      first = i;
      break;
    }
  }
  const auto upper = es.vectors.rightCols(es.values.size() - first);
  Matrix p = upper * upper.adjoint();
  p = (0.5 * (p + p.adjoint())).eval();
  return LatticeOperator::projector(std::move(p), x.geometry());
}

/// exp(i * scale * x) for Hermitian x.
inline LatticeOperator unitary_exp(const EigenSystem& es, const LatticeGeometry& geometry, double scale) {
  const Eigen::Index n = es.values.size();
  ComplexVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::exp(kI * (scale * es.values(i)));
  return LatticeOperator::unitary(es.vectors * phases.asDiagonal() * es.vectors.adjoint(), geometry);
}

inline LatticeOperator unitary_exp(const LatticeOperator& x, double scale) {
  if (!x.is_hermitian()) throw Error(ErrorCode::NonHermitianInput, "unitary_exp requires a Hermitian operator");
  return unitary_exp(hermitian_eig(x), x.geometry(), scale);
}

/// Normalized (optionally region-restricted) trace. Implements the trace per
/// unit volume on a torus and the trace per unit edge length on a cylinder.
struct TraceSpec {
  enum class Kind { full, per_unit_volume, per_unit_length_one_edge };

  Kind kind = Kind::full;
  std::optional<std::vector<bool>> region;
  double normalization = 1.0;

  static TraceSpec full() { return {}; }

  static TraceSpec per_unit_volume(const LatticeGeometry& g) {
    return {Kind::per_unit_volume, std::nullopt, static_cast<double>(g.size())};
  }

  /// Sites with midline_lo <= x2 < midline_hi, normalized by the edge length L1.
  static TraceSpec per_unit_length_one_edge(const LatticeGeometry& g, int x2_begin, int x2_end) {
    std::vector<bool> mask(g.size(), false);
    for (std::size_t s = 0; s < g.size(); ++s) {
      const int x2 = g.x2_of(static_cast<int>(s));
      mask[s] = x2 >= x2_begin && x2 < x2_end;
    }
    return {Kind::per_unit_length_one_edge, std::move(mask), static_cast<double>(g.L1)};
  }

  static TraceSpec lower_half(const LatticeGeometry& g) { return per_unit_length_one_edge(g, 0, g.L2 / 2); }
  static TraceSpec upper_half(const LatticeGeometry& g) { return per_unit_length_one_edge(g, g.L2 / 2, g.L2); }
};

/// Applies a trace spec to an already computed diagonal.
inline Complex traced_diagonal(const ComplexVector& diagonal, const TraceSpec& spec) {
  if (!(spec.normalization > 0.0)) throw Error(ErrorCode::InvalidArgument, "trace normalization must be positive");
  Complex sum = 0.0;
  if (spec.region) {
    if (spec.region->size() != static_cast<std::size_t>(diagonal.size()))
      throw Error(ErrorCode::RegionMismatch, "region mask has " + std::to_string(spec.region->size()) +
                                                 " entries, operator has " + std::to_string(diagonal.size()));
    for (Eigen::Index i = 0; i < diagonal.size(); ++i)
      if ((*spec.region)[static_cast<std::size_t>(i)]) sum += diagonal(i);
  } else {
    sum = diagonal.sum();
  }
  return sum / spec.normalization;
}

inline Complex traced(const LatticeOperator& a, const TraceSpec& spec) {
  return traced_diagonal(a.matrix().diagonal(), spec);
}

/// Diagonal of the product A*B without forming the product.
inline ComplexVector product_diagonal(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).rowwise().sum();
}

}  // namespace ncg
