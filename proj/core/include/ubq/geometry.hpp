#pragma once

// Regions of R^d under the sup-norm: closed balls, b-adic cubes and
// anisotropic rectangles, plus the cover type used by the content module.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ubq/error.hpp"

namespace ubq {

using Point = std::vector<double>;

/// Axis-aligned closed box [lo_i, hi_i]. Every region in this library reduces
/// to one of these for intersection tests.
struct Box {
  Point lo;
  Point hi;

  std::size_t dim() const { return lo.size(); }
  bool empty() const;
  double diameter() const;  // sup-norm: the longest side
  bool contains(const Point& x) const;
  bool contains(const Box& other) const;
  bool intersects(const Box& other) const;
  // Intersection of the open interiors is non-empty.
  bool interiors_intersect(const Box& other) const;
  Box intersection(const Box& other) const;
  double volume() const;
};

/// Closed sup-norm ball B(center, radius). Diameter is 2 * radius.
struct Ball {
  Point center;
  double radius = 0.0;

  std::size_t dim() const { return center.size(); }
  double diameter() const { return 2.0 * radius; }
  bool contains(const Point& x) const;
  bool contains(const Ball& other) const;
  bool intersects(const Ball& other) const;
  /// t * B: same center, radius scaled by t.
  Ball dilate(double t) const;
  Box box() const;
};

/// Cube prod_i [coords_i b^-k, (coords_i + 1) b^-k] of the level-k b-adic grid.
struct BadicCube {
  int base = 2;
  int level = 0;
  std::vector<std::int64_t> coords;

  std::size_t dim() const { return coords.size(); }
  double side() const;
  double diameter() const { return side(); }
  Box box() const;
  Ball as_ball() const;
  BadicCube parent() const;
  std::vector<BadicCube> children() const;
  /// Ancestor at `lvl` (lvl <= level).
  BadicCube ancestor(int lvl) const;
  bool is_ancestor_of(const BadicCube& other) const;

  friend bool operator==(const BadicCube&, const BadicCube&) = default;
  friend auto operator<=>(const BadicCube&, const BadicCube&) = default;
};

/// Index of the level-j ancestor among its parent's children (first axis most
/// significant, matching BadicCube::children order). Requires 1 <= j <= level.
int child_digit(const BadicCube& cube, int j);

/// Depth-first order of the b-adic tree: ancestors precede descendants and
/// siblings follow children() order.
bool path_less(const BadicCube& a, const BadicCube& b);

/// R_tau(x, r) = prod_i [x_i - r^{tau_i}/2, x_i + r^{tau_i}/2], 1 <= tau_1 <= ... <= tau_d.
struct AnisoRect {
  Point center;
  double r = 0.0;
  std::vector<double> tau;

  std::size_t dim() const { return center.size(); }
  double side(std::size_t i) const;
  Box box() const;
};

using Region = std::variant<Ball, AnisoRect>;

Box region_box(const Region& region);

/// A family of balls or cubes together with the exponent it is priced at.
struct Cover {
  std::vector<std::variant<Ball, BadicCube>> elements;
  double s = 0.0;

  /// sum |element|^s
  double cost() const;
};

/// b^k as an exact double (b^k < 2^53 is required).
double ipow(int base, int level);
std::int64_t ipow_int(int base, int level);

/// Validates radius > 0 and a consistent dimension; throws kInvalidArgument.
void validate(const Ball& ball);
void validate(const AnisoRect& rect);
void validate(const BadicCube& cube);

/// B^delta = B(center, radius^delta). Requires radius in (0, 1] when delta > 1.
Ball shrink_ball(const Ball& ball, double delta);

/// Level-`level` b-adic cubes whose closed cube meets the closed region,
/// lexicographic in coords. The region must lie inside [0,1]^d.
std::vector<BadicCube> badic_cover(const Region& region, int base, int level);

/// Level-`level` cubes contained in the closed region (an inner approximation).
std::vector<BadicCube> badic_inner(const Region& region, int base, int level);

/// Returns whether qB is contained in 5A. Throws kPrecondition unless A and B
/// intersect and A is not contained in qB.
bool engulf_check(const Ball& a, const Ball& b, double q);

/// sup-norm distance between points.
double sup_distance(const Point& x, const Point& y);

}  // namespace ubq
