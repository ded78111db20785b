#pragma once

// Momentum-space oracles for the flux p/q lattice model at W = 0. Written
// against Eigen only; shares no code with the real-space pipeline.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
constexpr double pi = 3.14159265358979323846;

/// Bloch Hamiltonian on the q-site magnetic cell stacked along x2:
/// phi(m + q) = e^{iK} phi(m), plane wave e^{i k1 x1} along x1.
inline Mat harper_cell(int p, int q, double t, double k1, double K) {
  const double gamma = 2.0 * pi * p / q;
  Mat h = Mat::Zero(q, q);
  for (int m = 0; m < q; ++m) {
    h(m, m) += -2.0 * t * std::cos(k1 + gamma * m);
    if (m + 1 < q) {
      h(m + 1, m) += -t;
      h(m, m + 1) += -t;
    } else {
      h(q - 1, 0) += -t * std::exp(cd(0, K));
      h(0, q - 1) += -t * std::exp(cd(0, -K));
    }
  }
  return h;
}

/// All eigenvalues of the L1 x L2 torus model, assembled from the Bloch
/// blocks on the allowed momenta. Sorted ascending.
inline std::vector<double> torus_spectrum(int p, int q, double t, int l1, int l2) {
  std::vector<double> out;
  const int cells = l2 / q;
  for (int a = 0; a < l1; ++a)
    for (int b = 0; b < cells; ++b) {
      Eigen::SelfAdjointEigenSolver<Mat> es(harper_cell(p, q, t, 2.0 * pi * a / l1, 2.0 * pi * b / cells));
      for (int i = 0; i < q; ++i) out.push_back(es.eigenvalues()(i));
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Plaquette (link-variable) Chern number of the lowest `bands` bands over an
/// n1 x n2 momentum mesh, k1 and K both in [0, 2 pi).
inline double fhs_chern(int p, int q, double t, int bands, int n1, int n2) {
  std::vector<Mat> frames(static_cast<std::size_t>(n1 * n2));
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      Eigen::SelfAdjointEigenSolver<Mat> es(harper_cell(p, q, t, 2.0 * pi * a / n1, 2.0 * pi * b / n2));
      frames[static_cast<std::size_t>(a * n2 + b)] = es.eigenvectors().leftCols(bands);
    }
  const auto at = [&](int a, int b) -> const Mat& {
    return frames[static_cast<std::size_t>(((a % n1 + n1) % n1) * n2 + (b % n2 + n2) % n2)];
  };
  const auto link = [&](int a, int b, int da, int db) {
    const cd d = (at(a, b).adjoint() * at(a + da, b + db)).determinant();
    return d / std::abs(d);
  };
  double total = 0.0;
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      const cd f = link(a, b, 1, 0) * link(a + 1, b, 0, 1) * std::conj(link(a, b + 1, 1, 0)) *
                   std::conj(link(a, b, 0, 1));
      total += std::arg(f);
    }
  return total / (2.0 * pi);
}

/// Tridiagonal strip Hamiltonian across the cylinder (x2 = 0..l2-1, open ends)
/// at momentum k along the edge.
inline Mat strip(int p, int q, double t, int l2, double k) {
  const double gamma = 2.0 * pi * p / q;
  Mat h = Mat::Zero(l2, l2);
  for (int y = 0; y < l2; ++y) {
    h(y, y) = -2.0 * t * std::cos(k + gamma * y);
    if (y + 1 < l2) h(y, y + 1) = h(y + 1, y) = -t;
  }
  return h;
}

/// Net number of upward crossings of the level e_star, as k runs once around
/// [0, 2 pi), by strip eigenstates inside the gap (lo, hi) carrying most of
/// their weight on x2 >= l2/2 (the edge at x2 = l2 - 1).
inline int upper_edge_crossings(int p, int q, double t, int l2, double lo, double hi, double e_star, int mesh) {
  const auto upper_levels = [&](double k) {
    Eigen::SelfAdjointEigenSolver<Mat> es(strip(p, q, t, l2, k));
    std::vector<double> levels;
    for (int i = 0; i < l2; ++i) {
      const double e = es.eigenvalues()(i);
      const double w = es.eigenvectors().col(i).tail(l2 - l2 / 2).squaredNorm();
      if (e > lo && e < hi && w > 0.5) levels.push_back(e);
    }
    return levels;
  };
  int net = 0;
  std::vector<double> prev = upper_levels(0.0);
  for (int i = 1; i <= mesh; ++i) {
    std::vector<double> cur = upper_levels(2.0 * pi * i / mesh);
    if (prev.size() == 1 && cur.size() == 1 && (prev[0] - e_star) * (cur[0] - e_star) < 0.0)
      net += cur[0] > prev[0] ? 1 : -1;
    prev = std::move(cur);
  }
  return net;
}

}  // namespace oracle
