#include "dhls/grid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dhls {

std::int64_t squared_distance(const LatticePoint& p, const LatticePoint& q,
                              int dimension) {
  std::int64_t s = 0;
  for (int i = 0; i < dimension; ++i) {
    const std::int64_t d = p[i] - q[i];
    s += d * d;
  }
  return s;
}

GridSpec::GridSpec(int dimension, int side, Convention convention)
    : dimension(dimension), convention(convention), side(side) {
  if (dimension < 1 || dimension > kMaxDimension)
    throw std::invalid_argument("GridSpec: dimension must be in [1, " +
                                std::to_string(kMaxDimension) + "], got " +
                                std::to_string(dimension));
  if (side < 1)
    throw std::invalid_argument("GridSpec: side must be positive, got " +
                                std::to_string(side));
}

std::int64_t GridSpec::num_points() const {
  std::int64_t L = 1;
  for (int i = 0; i < dimension; ++i) L *= axis_points();
  return L;
}

bool GridSpec::contains(const LatticePoint& p) const {
  for (int i = 0; i < dimension; ++i)
    if (p[i] < coord_min() || p[i] > coord_max()) return false;
  return true;
}

std::int64_t linear_index(const LatticePoint& p, const GridSpec& g) {
  if (!g.contains(p))
    throw std::out_of_range("linear_index: point outside grid box");
  std::int64_t idx = 0;
  for (int i = 0; i < g.dimension; ++i)
    idx = idx * g.axis_points() + (p[i] - g.coord_min());
  return idx;
}

LatticePoint point_of(std::int64_t i, const GridSpec& g) {
  if (i < 0 || i >= g.num_points())
    throw std::out_of_range("point_of: index " + std::to_string(i) +
                            " outside [0, " + std::to_string(g.num_points()) +
                            ")");
  LatticePoint p;
  for (int axis = g.dimension - 1; axis >= 0; --axis) {
    p[axis] = g.coord_min() + static_cast<int>(i % g.axis_points());
    i /= g.axis_points();
  }
  return p;
}

std::vector<Isometry> isometry_group(const GridSpec& g) {
  const int n = g.dimension;
  std::array<int, kMaxDimension> perm{};
  std::iota(perm.begin(), perm.begin() + n, 0);

  std::vector<Isometry> group;
  do {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Isometry phi;
      phi.perm = perm;
      for (int i = 0; i < n; ++i) phi.flip[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      group.push_back(phi);
    }
  } while (std::next_permutation(perm.begin(), perm.begin() + n));
  return group;
}

namespace {
int reflect_coord(int x, const GridSpec& g) {
  return g.convention == Convention::Unit ? g.side + 1 - x : -x;
}
}  // namespace

LatticePoint apply_isometry(const Isometry& phi, const LatticePoint& p,
                            const GridSpec& g) {
  LatticePoint q;
  for (int i = 0; i < g.dimension; ++i) {
    const int v = p[phi.perm[static_cast<std::size_t>(i)]];
    q[i] = phi.flip[static_cast<std::size_t>(i)] ? reflect_coord(v, g) : v;
  }
  return q;
}

Isometry compose(const Isometry& phi, const Isometry& psi, int dimension) {
  // phi(psi(p))[i] = flip1[i] o flip2[perm1[i]] applied to p[perm2[perm1[i]]];
  // reflections about the same axis center cancel pairwise, hence XOR.
  Isometry out;
  for (int i = 0; i < dimension; ++i) {
    const int j = phi.perm[static_cast<std::size_t>(i)];
    out.perm[static_cast<std::size_t>(i)] = psi.perm[static_cast<std::size_t>(j)];
    out.flip[static_cast<std::size_t>(i)] =
        phi.flip[static_cast<std::size_t>(i)] ^ psi.flip[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace dhls
