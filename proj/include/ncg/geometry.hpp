#pragma once

#include <cstddef>

#include "ncg/error.hpp"

namespace ncg {

enum class Boundary { periodic, dirichlet };

/// Rectangular L1 x L2 lattice. Sites are numbered row-major with x1
/// running fastest: index = x1 + L1 * x2.
struct LatticeGeometry {
  int L1 = 1;
  int L2 = 1;
  Boundary axis1 = Boundary::periodic;
  Boundary axis2 = Boundary::periodic;

  static LatticeGeometry torus(int l1, int l2) {
    return checked({l1, l2, Boundary::periodic, Boundary::periodic});
  }
  static LatticeGeometry cylinder(int l1, int l2) {
    return checked({l1, l2, Boundary::periodic, Boundary::dirichlet});
  }
  /// Bare n-dimensional space, used for operators without lattice meaning.
  static LatticeGeometry sites(int n) { return torus(n, 1); }

  std::size_t size() const { return static_cast<std::size_t>(L1) * static_cast<std::size_t>(L2); }
  int index(int x1, int x2) const { return x1 + L1 * x2; }
  int x1_of(int site) const { return site % L1; }
  int x2_of(int site) const { return site / L1; }
  int extent(int axis) const { return axis == 1 ? L1 : L2; }
  Boundary boundary(int axis) const { return axis == 1 ? axis1 : axis2; }

  bool is_torus() const { return axis1 == Boundary::periodic && axis2 == Boundary::periodic; }
  bool is_cylinder() const { return axis1 == Boundary::periodic && axis2 == Boundary::dirichlet; }

  friend bool operator==(const LatticeGeometry&, const LatticeGeometry&) = default;

 private:
  static LatticeGeometry checked(LatticeGeometry g) {
    if (g.L1 < 1 || g.L2 < 1) throw Error(ErrorCode::InvalidArgument, "lattice extents must be positive");
    return g;
  }
};

/// Reduces a coordinate difference on a ring of length L into (-L/2, L/2].
inline int nearest_image(int d, int L) {
  int r = d % L;
  if (r < 0) r += L;
  if (2 * r > L) r -= L;
  return r;
}

inline int wrap(int x, int L) {
  int r = x % L;
  return r < 0 ? r + L : r;
}

}  // namespace ncg
