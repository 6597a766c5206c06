#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace dhls {

inline constexpr int kMaxDimension = 4;

enum class Convention { Unit, Centered };

/// A lattice point in Z^n, n <= kMaxDimension. Coordinates beyond the
/// grid's dimension are zero and ignored.
struct LatticePoint {
  std::array<int, kMaxDimension> c{};

  LatticePoint() = default;
  LatticePoint(std::initializer_list<int> coords) {
    int i = 0;
    for (int v : coords) c[static_cast<std::size_t>(i++)] = v;
  }

  int& operator[](int axis) { return c[static_cast<std::size_t>(axis)]; }
  int operator[](int axis) const { return c[static_cast<std::size_t>(axis)]; }

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// Exact squared Euclidean distance over the first `dimension` axes.
std::int64_t squared_distance(const LatticePoint& p, const LatticePoint& q,
                              int dimension);

/// Cube-shaped index box in Z^n.
/// Unit convention: coordinates 1..N per axis, L = N^n.
/// Centered convention: coordinates -N..N per axis, L = (2N+1)^n.
struct GridSpec {
  int dimension;
  Convention convention;
  int side;

  GridSpec(int dimension, int side, Convention convention = Convention::Unit);

  int coord_min() const { return convention == Convention::Unit ? 1 : -side; }
  int coord_max() const { return convention == Convention::Unit ? side : side; }
  /// Points per axis (the "side span"): N or 2N+1.
  int axis_points() const {
    return convention == Convention::Unit ? side : 2 * side + 1;
  }
  std::int64_t num_points() const;

  bool contains(const LatticePoint& p) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Row-major linearization, axis 0 slowest. Throws std::out_of_range for
/// points outside the box.
std::int64_t linear_index(const LatticePoint& p, const GridSpec& g);

/// Inverse of linear_index. Throws std::out_of_range for i outside [0, L).
LatticePoint point_of(std::int64_t i, const GridSpec& g);

/// A signed permutation of the axes: axis i of the image reads axis perm[i]
/// of the source, then reflects about the box center when flip[i] is set
/// (r -> N+1-r on Unit grids, r -> -r on Centered grids).
struct Isometry {
  std::array<int, kMaxDimension> perm{};
  std::array<bool, kMaxDimension> flip{};

  friend bool operator==(const Isometry&, const Isometry&) = default;
};

/// All 2^n * n! signed-permutation isometries of the box, no duplicates.
/// Enumeration order is deterministic.
std::vector<Isometry> isometry_group(const GridSpec& g);

/// Image of p under phi. The result lies in the box whenever p does.
LatticePoint apply_isometry(const Isometry& phi, const LatticePoint& p,
                            const GridSpec& g);

/// Composition: apply_isometry(compose(phi, psi), p) ==
/// apply_isometry(phi, apply_isometry(psi, p)).
Isometry compose(const Isometry& phi, const Isometry& psi, int dimension);

}  // namespace dhls
