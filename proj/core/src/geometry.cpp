#include "ubq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ubq {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

void require_unit_cube(const Box& box) {
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (box.lo[i] < 0.0 || box.hi[i] > 1.0) {
      std::ostringstream msg;
      msg << "region leaves [0,1]^d along axis " << i << " ([" << box.lo[i]
          << ", " << box.hi[i]
          << "]); clip it to the unit cube or rescale it first";
      throw Error(ErrorCode::kOutOfDomain, msg.str());
    }
  }
}

// Enumerates the cartesian product of per-axis index ranges in lexicographic
// order (first axis most significant).
std::vector<BadicCube> enumerate_grid(int base, int level,
                                      const std::vector<std::int64_t>& first,
                                      const std::vector<std::int64_t>& last) {
  std::vector<BadicCube> out;
  const std::size_t d = first.size();
  for (std::size_t i = 0; i < d; ++i) {
    if (first[i] > last[i]) return out;
  }
  std::vector<std::int64_t> cur = first;
  while (true) {
    out.push_back(BadicCube{base, level, cur});
    std::size_t axis = d;
    while (axis > 0) {
      --axis;
      if (cur[axis] < last[axis]) {
        ++cur[axis];
        for (std::size_t j = axis + 1; j < d; ++j) cur[j] = first[j];
        break;
      }
      if (axis == 0) return out;
    }
    if (d == 0) return out;
  }
}

}  // namespace

double ipow(int base, int level) {
  return static_cast<double>(ipow_int(base, level));
}

std::int64_t ipow_int(int base, int level) {
  std::int64_t v = 1;
  for (int i = 0; i < level; ++i) {
    if (v > (std::int64_t{1} << 53) / base) {
      throw Error(ErrorCode::kInvalidArgument,
                  "b-adic level too deep for exact arithmetic");
    }
    v *= base;
  }
  return v;
}

double sup_distance(const Point& x, const Point& y) {
  require_same_dim(x.size(), y.size(), "sup_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

// ---- Box ----

bool Box::empty() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (lo[i] > hi[i]) return true;
  }
  return false;
}

double Box::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) d = std::max(d, hi[i] - lo[i]);
  return d;
}

bool Box::contains(const Point& x) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
  }
  return true;
}

bool Box::intersects(const Box& other) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.hi[i] < lo[i] || other.lo[i] > hi[i]) return false;
  }
  return true;
}

bool Box::interiors_intersect(const Box& other) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.hi[i] <= lo[i] || other.lo[i] >= hi[i]) return false;
  }
  return true;
}

Box Box::intersection(const Box& other) const {
  Box out{lo, hi};
  for (std::size_t i = 0; i < dim(); ++i) {
    out.lo[i] = std::max(lo[i], other.lo[i]);
    out.hi[i] = std::min(hi[i], other.hi[i]);
  }
  return out;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

// ---- Ball ----

bool Ball::contains(const Point& x) const {
  return sup_distance(center, x) <= radius;
}

bool Ball::contains(const Ball& other) const {
  return sup_distance(center, other.center) + other.radius <= radius;
}

bool Ball::intersects(const Ball& other) const {
  return sup_distance(center, other.center) <= radius + other.radius;
}

Ball Ball::dilate(double t) const { return Ball{center, radius * t}; }

Box Ball::box() const {
  Box b{center, center};
  for (std::size_t i = 0; i < dim(); ++i) {
    b.lo[i] -= radius;
    b.hi[i] += radius;
  }
  return b;
}

// ---- BadicCube ----

double BadicCube::side() const { return 1.0 / ipow(base, level); }

Box BadicCube::box() const {
  const double scale = ipow(base, level);
  Box b{Point(dim()), Point(dim())};
  for (std::size_t i = 0; i < dim(); ++i) {
    b.lo[i] = static_cast<double>(coords[i]) / scale;
    b.hi[i] = static_cast<double>(coords[i] + 1) / scale;
  }
  return b;
}

Ball BadicCube::as_ball() const {
  const Box b = box();
  Ball out{Point(dim()), 0.5 * side()};
  for (std::size_t i = 0; i < dim(); ++i) out.center[i] = 0.5 * (b.lo[i] + b.hi[i]);
  return out;
}

BadicCube BadicCube::parent() const {
  if (level == 0) throw Error(ErrorCode::kInvalidArgument, "root cube has no parent");
  return ancestor(level - 1);
}

BadicCube BadicCube::ancestor(int lvl) const {
  if (lvl > level || lvl < 0) {
    throw Error(ErrorCode::kInvalidArgument, "ancestor level out of range");
  }
  const std::int64_t div = ipow_int(base, level - lvl);
  BadicCube out{base, lvl, coords};
  for (auto& c : out.coords) c /= div;
  return out;
}

bool BadicCube::is_ancestor_of(const BadicCube& other) const {
  if (other.base != base || other.dim() != dim() || other.level < level) return false;
  return other.ancestor(level) == *this;
}

std::vector<BadicCube> BadicCube::children() const {
  std::vector<std::int64_t> first(dim()), last(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    first[i] = coords[i] * base;
    last[i] = first[i] + base - 1;
  }
  return enumerate_grid(base, level + 1, first, last);
}

int child_digit(const BadicCube& cube, int j) {
  const std::int64_t div = ipow_int(cube.base, cube.level - j);
  int idx = 0;
  for (auto c : cube.coords) idx = idx * cube.base + static_cast<int>((c / div) % cube.base);
  return idx;
}

bool path_less(const BadicCube& a, const BadicCube& b) {
  const int common = std::min(a.level, b.level);
  for (int j = 1; j <= common; ++j) {
    const int da = child_digit(a, j);
    const int db = child_digit(b, j);
    if (da != db) return da < db;
  }
  return a.level < b.level;
}

// ---- AnisoRect ----

double AnisoRect::side(std::size_t i) const { return std::pow(r, tau.at(i)); }

Box AnisoRect::box() const {
  Box b{center, center};
  for (std::size_t i = 0; i < dim(); ++i) {
    const double h = 0.5 * side(i);
    b.lo[i] -= h;
    b.hi[i] += h;
  }
  return b;
}

Box region_box(const Region& region) {
  return std::visit([](const auto& r) { return r.box(); }, region);
}

double Cover::cost() const {
  double total = 0.0;
  for (const auto& e : elements) {
    const double diam = std::visit([](const auto& x) { return x.diameter(); }, e);
    total += std::pow(diam, s);
  }
  return total;
}

// ---- validation ----

void validate(const Ball& ball) {
  if (ball.center.empty()) throw Error(ErrorCode::kInvalidArgument, "ball has no coordinates");
  if (!(ball.radius > 0.0) || !std::isfinite(ball.radius)) {
    throw Error(ErrorCode::kInvalidArgument, "ball radius must be positive and finite");
  }
}

void validate(const AnisoRect& rect) {
  if (rect.center.empty()) throw Error(ErrorCode::kInvalidArgument, "rectangle has no coordinates");
  require_same_dim(rect.center.size(), rect.tau.size(), "AnisoRect");
  if (!(rect.r > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rectangle r must be positive");
  for (std::size_t i = 0; i < rect.tau.size(); ++i) {
    if (rect.tau[i] < 1.0 || (i > 0 && rect.tau[i] < rect.tau[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "tau must satisfy 1 <= tau_1 <= ... <= tau_d");
    }
  }
}

void validate(const BadicCube& cube) {
  if (cube.base < 2) throw Error(ErrorCode::kInvalidArgument, "base must be >= 2");
  if (cube.level < 0) throw Error(ErrorCode::kInvalidArgument, "level must be >= 0");
  const std::int64_t n = ipow_int(cube.base, cube.level);
  for (auto c : cube.coords) {
    if (c < 0 || c >= n) throw Error(ErrorCode::kOutOfDomain, "cube coordinate outside [0, b^k)");
  }
}

// ---- operations ----

Ball shrink_ball(const Ball& ball, double delta) {
  validate(ball);
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "shrink exponent delta must be >= 1");
  if (ball.radius > 1.0 && delta > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "radius > 1 cannot be contracted by raising it to delta > 1");
  }
  return Ball{ball.center, std::pow(ball.radius, delta)};
}

std::vector<BadicCube> badic_cover(const Region& region, int base, int level) {
  if (base < 2 || level < 0) throw Error(ErrorCode::kInvalidArgument, "need base >= 2, level >= 0");
  std::visit([](const auto& r) { validate(r); }, region);
  const Box b = region_box(region);
  require_unit_cube(b);
  const std::int64_t n = ipow_int(base, level);
  const double scale = static_cast<double>(n);
  std::vector<std::int64_t> first(b.dim()), last(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    // cell j meets [lo, hi] iff j <= hi * b^k and j + 1 >= lo * b^k
    first[i] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(b.lo[i] * scale)) - 1);
    last[i] = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::floor(b.hi[i] * scale)));
  }
  return enumerate_grid(base, level, first, last);
}

std::vector<BadicCube> badic_inner(const Region& region, int base, int level) {
  if (base < 2 || level < 0) throw Error(ErrorCode::kInvalidArgument, "need base >= 2, level >= 0");
  std::visit([](const auto& r) { validate(r); }, region);
  const Box b = region_box(region);
  const std::int64_t n = ipow_int(base, level);
  const double scale = static_cast<double>(n);
  std::vector<std::int64_t> first(b.dim()), last(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    first[i] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(b.lo[i] * scale)));
    last[i] = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::floor(b.hi[i] * scale)) - 1);
  }
  return enumerate_grid(base, level, first, last);
}

bool engulf_check(const Ball& a, const Ball& b, double q) {
  validate(a);
  validate(b);
  require_same_dim(a.dim(), b.dim(), "engulf_check");
  if (!(q >= 3.0)) throw Error(ErrorCode::kInvalidArgument, "engulf_check needs q >= 3");
  if (!a.intersects(b)) throw Error(ErrorCode::kPrecondition, "engulf_check: balls do not intersect");
  if (b.dilate(q).contains(a)) {
    throw Error(ErrorCode::kPrecondition, "engulf_check: A is contained in qB");
  }
  return a.dilate(5.0).contains(b.dilate(q));
}

}  // namespace ubq
