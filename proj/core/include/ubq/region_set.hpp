#pragma once

#include <vector>

#include "ubq/geometry.hpp"

namespace ubq {

// Finite union of interior-disjoint b-adic cubes, possibly at mixed levels.
struct RegionSet {
  int base = 2;
  std::size_t dim = 1;
  std::vector<BadicCube> cubes;

  static RegionSet unit(std::size_t d, int base);
  /// Checks base and dimension agreement; does not check disjointness.
  static RegionSet from_cubes(int base, std::size_t d, std::vector<BadicCube> cubes);

  bool empty() const { return cubes.empty(); }
  int max_level() const;
  Box hull() const;
  double volume() const;
  bool contains(const Point& x) const;
  bool intersects(const Box& box) const;
  bool interiors_intersect(const Box& box) const;
  /// Whether the closed box lies in the union of the closed cubes.
  bool covers(const Box& box) const;
  bool interior_disjoint() const;
  /// Sorted, with cubes covered by another cube dropped.
  RegionSet normalized() const;
};

/// Cubes of level <= max_level covering the closed region: every level-max_level
/// cube whose interior meets the region's interior, with subtrees lying fully
/// inside the region collapsed into one cube. The union is closed and contains
/// the open region, hence the closed one; cubes that merely touch the boundary
/// are left out, unlike badic_cover.
RegionSet region_cover(const Region& region, int base, int max_level);

/// region_cover semantics for a box clipped to [0,1]^d (no domain error).
RegionSet box_cover(const Box& box, int base, int max_level);

/// Union of the cubes of level <= max_level inside the closed region, as a
/// collapsed tree. The region may extend past [0,1]^d; it is clipped.
RegionSet region_inner(const Region& region, int base, int max_level);

/// Generation-k triadic Cantor intervals K_k (2^k cubes, base 3).
RegionSet cantor_set(int depth);

}  // namespace ubq
