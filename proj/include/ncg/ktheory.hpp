#pragma once

// Boundary maps at matrix scale: exponential, Bott and index maps, and the
// transport of a projection class along a field of algebras by lifting and
// spectral flattening.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncg/error.hpp"
#include "ncg/geometry.hpp"
#include "ncg/operator_core.hpp"
#include "ncg/parallel.hpp"

namespace ncg {

/// Unitaries sampled along [0, 1] with consecutive operator-norm distance at
/// most `step_bound`.
class UnitaryPath {
 public:
  UnitaryPath(std::vector<double> params, std::vector<LatticeOperator> samples, double step_bound = 0.5)
      : params_(std::move(params)), samples_(std::move(samples)), step_bound_(step_bound) {
    if (params_.size() != samples_.size() || samples_.empty())
      throw Error(ErrorCode::InvalidArgument, "path needs one parameter per sample");
    for (const auto& u : samples_)
      if (!u.is_unitary()) throw Error(ErrorCode::NotUnitary, "path samples must be unitary");
    for (std::size_t k = 1; k < samples_.size(); ++k) {
      const double step = operator_norm(samples_[k].matrix() - samples_[k - 1].matrix());
      steps_.push_back(step);
      if (step > step_bound_)
        throw Error(ErrorCode::PathStepTooLarge, "step " + std::to_string(k) + " has norm " + std::to_string(step) +
                                                     " > " + std::to_string(step_bound_));
    }
  }

  const std::vector<double>& params() const { return params_; }
  const std::vector<LatticeOperator>& samples() const { return samples_; }
  const std::vector<double>& step_norms() const { return steps_; }
  double step_bound() const { return step_bound_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<double> params_;
  std::vector<LatticeOperator> samples_;
  std::vector<double> steps_;
  double step_bound_;
};

/// Grid of operators over the deformation parameter in [0, 1].
struct FieldSection {
  using ProductRule = std::function<Matrix(double, const Matrix&, const Matrix&)>;

  std::vector<double> grid;
  std::vector<LatticeOperator> values;
  ProductRule product = [](double, const Matrix& a, const Matrix& b) -> Matrix { return a * b; };

  void validate() const {
    if (grid.size() < 2 || grid.size() != values.size())
      throw Error(ErrorCode::InvalidArgument, "section needs at least two grid points with one value each");
    if (grid.front() != 0.0 || grid.back() != 1.0)
      throw Error(ErrorCode::InvalidArgument, "section grid must start at 0 and end at 1");
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "section grid must be increasing");
  }
};

/// exp(2 pi i lift) for a self-adjoint lift of p.
inline LatticeOperator exp_boundary(const LatticeOperator& p, const LatticeOperator& lift) {
  if (!p.is_projector()) throw Error(ErrorCode::NotAProjector, "exp_boundary needs a projector class");
  if (!(p.geometry() == lift.geometry())) throw Error(ErrorCode::GeometryMismatch, "lift lives on another lattice");
  if (!lift.is_hermitian()) throw Error(ErrorCode::NonHermitianLift, "lift must be self-adjoint");
  return unitary_exp(lift, 2.0 * kPi);
}

/// Loop exp(2 pi i chi(t) p) = 1 + (exp(2 pi i chi(t)) - 1) p over samples chi in [0, 1].
inline UnitaryPath bott_loop(const LatticeOperator& p, const std::vector<double>& chi, double step_bound = 0.5) {
  if (!p.is_projector()) throw Error(ErrorCode::NotAProjector, "bott_loop needs a projector");
  if (chi.size() < 2 || chi.front() != 0.0 || chi.back() != 1.0)
    throw Error(ErrorCode::InvalidArgument, "switch samples must run from 0 to 1");
  for (std::size_t i = 1; i < chi.size(); ++i)
    if (chi[i] < chi[i - 1]) throw Error(ErrorCode::InvalidArgument, "switch samples must be monotone");
  const Matrix id = Matrix::Identity(p.dim(), p.dim());
  std::vector<LatticeOperator> samples;
  for (double c : chi) {
    const Complex phase = std::exp(2.0 * kPi * kI * c) - 1.0;
    samples.push_back(LatticeOperator::unitary(id + phase * p.matrix(), p.geometry()));
  }
  return UnitaryPath(chi, std::move(samples), step_bound);
}

struct IndexResult {
  LatticeOperator projector;
  long index;
  double raw;  ///< Tr P - rows(V)
};

/// W diag(1, 0) W^* for a unitary lift W whose upper-left block is V (rows m,
/// columns n); the index is Tr(P) - m.
inline IndexResult index_map(const Matrix& v, const Matrix& w, double tol = 1e-10) {
  const Eigen::Index m = v.rows();
  const Eigen::Index n = v.cols();
  if (w.rows() != m + n || w.cols() != m + n)
    throw Error(ErrorCode::LiftMismatch, "lift must be square of size rows(V) + cols(V)");
  const Matrix id = Matrix::Identity(w.rows(), w.cols());
  const double err = max_norm(w.adjoint() * w - id);
  if (err > tol) throw Error(ErrorCode::NonUnitaryLift, "max|W^*W - 1| = " + std::to_string(err));
  if (max_norm(w.topLeftCorner(m, n) - v) > tol)
    throw Error(ErrorCode::LiftMismatch, "upper-left block of the lift differs from V");
  const auto cols = w.leftCols(n);
  Matrix p = cols * cols.adjoint();
  p = (0.5 * (p + p.adjoint())).eval();
  const double raw = p.trace().real() - static_cast<double>(m);
  LatticeOperator proj = LatticeOperator::projector(std::move(p), LatticeGeometry::sites(static_cast<int>(m + n)));
  return {std::move(proj), std::lround(raw), raw};
}

/// [[v, 1 - v v^*], [1 - v^* v, v^*]]: unitary whenever v is a partial isometry.
inline Matrix partial_isometry_lift(const Matrix& v) {
  const Eigen::Index m = v.rows();
  const Eigen::Index n = v.cols();
  Matrix w(m + n, m + n);
  w.topLeftCorner(m, n) = v;
  w.topRightCorner(m, m) = Matrix::Identity(m, m) - v * v.adjoint();
  w.bottomLeftCorner(n, n) = Matrix::Identity(n, n) - v.adjoint() * v;
  w.bottomRightCorner(n, m) = v.adjoint();
  return w;
}

/// diag(V, 1) R diag(V^*, 1) R^{-1} with R the quarter rotation, for square V.
inline Matrix rotation_lift(const Matrix& v) {
  const Eigen::Index n = v.rows();
  if (v.cols() != n) throw Error(ErrorCode::InvalidArgument, "rotation lift needs a square V");
  const Matrix id = Matrix::Identity(n, n);
  Matrix a = Matrix::Identity(2 * n, 2 * n);
  a.topLeftCorner(n, n) = v;
  Matrix b = Matrix::Identity(2 * n, 2 * n);
  b.topLeftCorner(n, n) = v.adjoint();
  Matrix r = Matrix::Zero(2 * n, 2 * n);
  r.topRightCorner(n, n) = -id;
  r.bottomLeftCorner(n, n) = id;
  return a * r * b * r.adjoint();
}

struct TransportResult {
  LatticeOperator projector;  ///< flattened value at the end of the grid
  std::vector<double> step_norms;
  std::vector<long> ranks;
};

/// Flattens each section value on the window (a, b) and certifies that
/// consecutive projections are closer than 1, hence homotopic.
inline TransportResult enn_transport(const FieldSection& section, double a, double b, const Tolerances& tol = {}) {
  section.validate();
  const LatticeOperator& start = section.values.front();
  LatticeOperator::projector(start.matrix(), start.geometry(), tol);
  std::vector<std::optional<LatticeOperator>> flat(section.values.size());
  parallel_for(section.values.size(), [&](std::size_t i) {
    if (!section.values[i].is_hermitian())
      throw Error(ErrorCode::NonHermitianInput, "section value " + std::to_string(i) + " is not self-adjoint");
    flat[i].emplace(spectral_flatten(section.values[i], a, b));
  });
  TransportResult out{*flat.back(), {}, {}};
  for (std::size_t i = 0; i < flat.size(); ++i) {
    out.ranks.push_back(std::lround(flat[i]->matrix().trace().real()));
    if (i == 0) continue;
    const double step = hermitian_norm(flat[i]->matrix() - flat[i - 1]->matrix());
    out.step_norms.push_back(step);
    if (!(step < 1.0))
      throw Error(ErrorCode::HomotopyStepTooLarge, "step " + std::to_string(i) + " has norm " + std::to_string(step) +
                                                       " >= 1; refine the grid");
    if (out.ranks[i] != out.ranks[i - 1])
      throw Error(ErrorCode::HomotopyStepTooLarge, "rank changed at step " + std::to_string(i));
  }
  return out;
}

}  // namespace ncg
