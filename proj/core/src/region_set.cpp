#include "ubq/region_set.hpp"

#include <algorithm>

namespace ubq {

RegionSet RegionSet::unit(std::size_t d, int base) {
  return RegionSet{base, d, {BadicCube{base, 0, std::vector<std::int64_t>(d, 0)}}};
}

RegionSet RegionSet::from_cubes(int base, std::size_t d, std::vector<BadicCube> cubes) {
  if (base < 2 || d == 0) throw Error(ErrorCode::kInvalidArgument, "region set needs base >= 2 and d >= 1");
  for (const auto& c : cubes) {
    if (c.base != base || c.dim() != d) {
      throw Error(ErrorCode::kInvalidArgument, "all cubes of a region set share base and dimension");
    }
    validate(c);
  }
  return RegionSet{base, d, std::move(cubes)};
}

int RegionSet::max_level() const {
  int m = 0;
  for (const auto& c : cubes) m = std::max(m, c.level);
  return m;
}

Box RegionSet::hull() const {
  if (cubes.empty()) throw Error(ErrorCode::kEmptyInput, "empty region set has no hull");
  Box h = cubes.front().box();
  for (const auto& c : cubes) {
    const Box b = c.box();
    for (std::size_t i = 0; i < dim; ++i) {
      h.lo[i] = std::min(h.lo[i], b.lo[i]);
      h.hi[i] = std::max(h.hi[i], b.hi[i]);
    }
  }
  return h;
}

double RegionSet::volume() const {
  double v = 0.0;
  for (const auto& c : cubes) v += c.box().volume();
  return v;
}

bool RegionSet::contains(const Point& x) const {
  return std::any_of(cubes.begin(), cubes.end(), [&](const BadicCube& c) { return c.box().contains(x); });
}

bool RegionSet::intersects(const Box& box) const {
  return std::any_of(cubes.begin(), cubes.end(), [&](const BadicCube& c) { return c.box().intersects(box); });
}

bool RegionSet::interiors_intersect(const Box& box) const {
  return std::any_of(cubes.begin(), cubes.end(),
                     [&](const BadicCube& c) { return c.box().interiors_intersect(box); });
}

bool RegionSet::covers(const Box& box) const {
  const double target = box.volume();
  if (target <= 0.0) return contains(box.lo) && contains(box.hi);
  double got = 0.0;
  for (const auto& c : cubes) got += c.box().intersection(box).volume();
  return got >= target * (1.0 - 1e-12);
}

bool RegionSet::interior_disjoint() const {
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const Box a = cubes[i].box();
    for (std::size_t j = i + 1; j < cubes.size(); ++j) {
      if (a.interiors_intersect(cubes[j].box())) return false;
    }
  }
  return true;
}

RegionSet RegionSet::normalized() const {
  std::vector<BadicCube> sorted = cubes;
  std::sort(sorted.begin(), sorted.end(), path_less);
  std::vector<BadicCube> out;
  for (auto& c : sorted) {
    if (!out.empty() && (out.back() == c || out.back().is_ancestor_of(c))) continue;
    out.push_back(std::move(c));
  }
  return RegionSet{base, dim, std::move(out)};
}

namespace {

void descend(const BadicCube& node, const Box& region, int max_level, bool inner,
             std::vector<BadicCube>& out) {
  const Box b = node.box();
  if (region.contains(b)) {
    out.push_back(node);
    return;
  }
  if (!region.interiors_intersect(b)) return;
  if (node.level >= max_level) {
    if (!inner) out.push_back(node);
    return;
  }
  for (const auto& c : node.children()) descend(c, region, max_level, inner, out);
}

}  // namespace

RegionSet region_cover(const Region& region, int base, int max_level) {
  // Reuse badic_cover's validation (domain, radius, base) on a level-0 grid.
  badic_cover(region, base, 0);
  return box_cover(region_box(region), base, max_level);
}

RegionSet box_cover(const Box& box, int base, int max_level) {
  if (base < 2 || max_level < 0) throw Error(ErrorCode::kInvalidArgument, "need base >= 2, max_level >= 0");
  const Box unit{Point(box.dim(), 0.0), Point(box.dim(), 1.0)};
  const Box b = box.intersection(unit);
  RegionSet out{base, box.dim(), {}};
  if (b.empty()) return out;
  descend(BadicCube{base, 0, std::vector<std::int64_t>(b.dim(), 0)}, b, max_level, false, out.cubes);
  return out;
}

RegionSet region_inner(const Region& region, int base, int max_level) {
  if (base < 2 || max_level < 0) throw Error(ErrorCode::kInvalidArgument, "need base >= 2, max_level >= 0");
  std::visit([](const auto& r) { validate(r); }, region);
  const Box b = region_box(region);
  RegionSet out{base, b.dim(), {}};
  descend(BadicCube{base, 0, std::vector<std::int64_t>(b.dim(), 0)}, b, max_level, true, out.cubes);
  return out;
}

RegionSet cantor_set(int depth) {
  if (depth < 0) throw Error(ErrorCode::kInvalidArgument, "depth must be >= 0");
  std::vector<std::int64_t> idx{0};
  for (int k = 0; k < depth; ++k) {
    std::vector<std::int64_t> next;
    next.reserve(idx.size() * 2);
    for (auto j : idx) {
      next.push_back(3 * j);
      next.push_back(3 * j + 2);
    }
    idx = std::move(next);
  }
  RegionSet out{3, 1, {}};
  out.cubes.reserve(idx.size());
  for (auto j : idx) out.cubes.push_back(BadicCube{3, depth, {j}});
  return out;
}

}  // namespace ubq
