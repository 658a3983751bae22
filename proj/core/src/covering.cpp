#include "ubq/covering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace ubq {

namespace {

bool closed_disjoint(const Ball& a, const Ball& b, double dilation) {
  return sup_distance(a.center, b.center) > dilation * (a.radius + b.radius);
}

bool in_open_interior(const Ball& ball, const Point& x) {
  return sup_distance(ball.center, x) < ball.radius;
}

// Pairwise-disjoint set of closed balls with an intersection query. Intervals
// in d = 1 are kept ordered; higher dimensions fall back to a scan.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t d) : d_(d) {}

  bool meets(const Ball& b) const {
    if (d_ == 1) {
      const double lo = b.center[0] - b.radius;
      const double hi = b.center[0] + b.radius;
      auto it = intervals_.upper_bound(hi);
      if (it == intervals_.begin()) return false;
      --it;
      return it->second >= lo;
    }
    return std::any_of(balls_.begin(), balls_.end(),
                       [&](const Ball& s) { return !closed_disjoint(s, b, 1.0); });
  }

  void insert(const Ball& b) {
    if (d_ == 1) {
      intervals_.emplace(b.center[0] - b.radius, b.center[0] + b.radius);
    } else {
      balls_.push_back(b);
    }
  }

 private:
  std::size_t d_;
  std::map<double, double> intervals_;
  std::vector<Ball> balls_;
};

std::vector<std::size_t> by_radius_desc(const BallFamily& family) {
  std::vector<std::size_t> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (family.balls[a].radius != family.balls[b].radius) return family.balls[a].radius > family.balls[b].radius;
    return family.indices[a] < family.indices[b];
  });
  return order;
}

// First-fit assignment of positions to families with disjoint dilates.
std::vector<std::vector<std::size_t>> first_fit(const BallFamily& family,
                                                const std::vector<std::size_t>& positions, double dilation) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t p : positions) {
    bool placed = false;
    for (auto& g : groups) {
      const bool fits = std::all_of(g.begin(), g.end(), [&](std::size_t q) {
        return closed_disjoint(family.balls[p], family.balls[q], dilation);
      });
      if (fits) {
        g.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({p});
  }
  return groups;
}

Selection select_with(const BallFamily& family, std::size_t g, const CylinderMeasure& mu,
                      double omega_mass, const std::function<bool(const Ball&)>& inside) {
  Selection sel;
  sel.omega_mass = omega_mass;
  if (!(omega_mass > 0.0) || family.empty()) return sel;
  struct Candidate {
    std::size_t pos;
    double mass;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family.indices[i] < g || !inside(family.balls[i])) continue;
    const double m = mu.ball_mass(family.balls[i]).lo;
    if (m > 0.0) cands.push_back({i, m});
  }
  std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return family.indices[a.pos] < family.indices[b.pos];
  });
  DisjointSet chosen(family.balls.front().dim());
  for (const auto& c : cands) {
    const Ball& b = family.balls[c.pos];
    if (chosen.meets(b)) continue;
    chosen.insert(b);
    sel.selected.push_back(family.indices[c.pos]);
    sel.selected_mass += c.mass;
  }
  sel.ratio = sel.selected_mass / omega_mass;
  return sel;
}

Box grown(const Ball& b) {
  // Slightly enlarged box: containment in Omega then implies containment in its interior.
  return b.dilate(1.0 + 1e-9).box();
}

}  // namespace

BallFamily BallFamily::from_balls(std::vector<Ball> balls) {
  BallFamily f;
  f.indices.resize(balls.size());
  std::iota(f.indices.begin(), f.indices.end(), 0);
  f.balls = std::move(balls);
  return f;
}

BallFamily BallFamily::slice(std::size_t first, std::size_t last) const {
  last = std::min(last, size());
  BallFamily f;
  f.radii_to_zero = radii_to_zero;
  for (std::size_t i = first; i < last; ++i) {
    f.balls.push_back(balls[i]);
    f.indices.push_back(indices[i]);
  }
  return f;
}

void BallFamily::validate() const {
  if (indices.size() != balls.size()) throw Error(ErrorCode::kInvalidArgument, "one index per ball is required");
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, "ball indices must be unique");
  }
  for (const auto& b : balls) ubq::validate(b);
}

std::vector<std::vector<std::size_t>> besicovitch_families(const BallFamily& family, double v) {
  if (!(v > 0.0 && v <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "v must lie in (0,1]");
  family.validate();
  std::vector<std::size_t> kept;
  for (std::size_t p : by_radius_desc(family)) {
    const bool covered = std::any_of(kept.begin(), kept.end(), [&](std::size_t q) {
      return in_open_interior(family.balls[q], family.balls[p].center);
    });
    if (!covered) kept.push_back(p);
  }
  auto groups = first_fit(family, kept, 1.0 / v);
  for (auto& g : groups) {
    for (auto& p : g) p = family.indices[p];
  }
  return groups;
}

BesicovitchCheck verify_besicovitch(const BallFamily& family,
                                    const std::vector<std::vector<std::size_t>>& families, double v) {
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < family.size(); ++i) pos[family.indices[i]] = i;
  BesicovitchCheck chk{true, true};
  std::vector<std::size_t> members;
  for (const auto& fam : families) {
    for (std::size_t a = 0; a < fam.size(); ++a) {
      members.push_back(pos.at(fam[a]));
      for (std::size_t b = a + 1; b < fam.size(); ++b) {
        const Ball& x = family.balls[pos.at(fam[a])];
        const Ball& y = family.balls[pos.at(fam[b])];
        if (x.dilate(1.0 / v).intersects(y.dilate(1.0 / v))) chk.dilates_disjoint = false;
      }
    }
  }
  for (const auto& b : family.balls) {
    const bool hit = std::any_of(members.begin(), members.end(),
                                 [&](std::size_t m) { return family.balls[m].contains(b.center); });
    if (!hit) chk.centers_covered = false;
  }
  return chk;
}

Selection disjoint_select(const BallFamily& family, const RegionSet* omega, std::size_t g,
                          const CylinderMeasure& mu) {
  family.validate();
  if (!omega) {
    return select_with(family, g, mu, 1.0, [](const Ball&) { return true; });
  }
  double hi = 0.0;
  for (const auto& c : omega->cubes) hi += mu.box_mass(c.box()).hi;
  return select_with(family, g, mu, std::min(hi, 1.0),
                     [&](const Ball& b) { return omega->covers(grown(b)); });
}

DistcovResult split_dilate_disjoint(const BallFamily& family, const std::vector<std::size_t>& selected,
                                    const CylinderMeasure& mu, double dilation) {
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < family.size(); ++i) pos[family.indices[i]] = i;
  std::vector<std::size_t> positions;
  for (auto idx : selected) positions.push_back(pos.at(idx));
  std::stable_sort(positions.begin(), positions.end(), [&](std::size_t a, std::size_t b) {
    return family.balls[a].radius > family.balls[b].radius;
  });
  DistcovResult out;
  for (auto& grp : first_fit(family, positions, dilation)) {
    double m = 0.0;
    std::vector<std::size_t> ids;
    for (auto p : grp) {
      m += mu.ball_mass(family.balls[p]).lo;
      ids.push_back(family.indices[p]);
    }
    out.families.push_back(std::move(ids));
    out.family_mass.push_back(m);
  }
  for (std::size_t i = 1; i < out.family_mass.size(); ++i) {
    if (out.family_mass[i] > out.family_mass[out.best]) out.best = i;
  }
  return out;
}

AcReport mu_ac_check(const BallFamily& family, const CylinderMeasure& mu,
                     const std::vector<RegionSet>& omegas, const std::vector<std::size_t>& gs, double C) {
  if (!(C > 0.0 && C <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "C must lie in (0,1]");
  AcReport rep;
  rep.C = C;
  rep.min_ratio = omegas.empty() || gs.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t o = 0; o < omegas.size(); ++o) {
    for (std::size_t g : gs) {
      AcProbe probe{o, g, disjoint_select(family, &omegas[o], g, mu)};
      rep.min_ratio = std::min(rep.min_ratio, probe.selection.ratio);
      rep.probes.push_back(std::move(probe));
    }
  }
  rep.pass = !rep.probes.empty() && rep.min_ratio >= C;
  return rep;
}

FullnessReport shrunk_fullness_check(const BallFamily& family, const CylinderMeasure& mu, double v,
                                     std::size_t first, std::size_t last, double threshold, int level) {
  if (!(v > 0.0 && v <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "v must lie in (0,1]");
  FullnessReport rep;
  last = std::min(last, family.size());
  if (first >= last) return rep;
  const std::size_t d = family.balls.front().dim();
  if (d == 1) {
    std::vector<std::pair<double, double>> iv;
    for (std::size_t i = first; i < last; ++i) {
      const Ball b = family.balls[i].dilate(v);
      iv.emplace_back(b.center[0] - b.radius, b.center[0] + b.radius);
    }
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& x : iv) {
      if (!merged.empty() && x.first <= merged.back().second) {
        merged.back().second = std::max(merged.back().second, x.second);
      } else {
        merged.push_back(x);
      }
    }
    for (const auto& m : merged) rep.value += mu.box_mass(Box{{m.first}, {m.second}}).lo;
  } else {
    RegionSet u{2, d, {}};
    for (std::size_t i = first; i < last; ++i) {
      const RegionSet part = region_inner(family.balls[i].dilate(v), 2, level);
      u.cubes.insert(u.cubes.end(), part.cubes.begin(), part.cubes.end());
    }
    for (const auto& c : u.normalized().cubes) rep.value += mu.box_mass(c.box()).lo;
  }
  rep.value = std::min(rep.value, 1.0);
  rep.pass = rep.value >= threshold;
  return rep;
}

}  // namespace ubq
