#include "ubq/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "ubq/content.hpp"
#include "ubq/stats.hpp"

namespace ubq {

namespace {

using Kind = GenerationNode::Kind;

Error insufficient(int p, const std::string& what) {
  return Error(ErrorCode::kInsufficientFamily, "generation " + std::to_string(p) + ": " + what);
}

double set_diameter(const RegionSet& U) { return U.hull().diameter(); }

std::vector<BadicCube> descendants_at(const BadicCube& c, int level) {
  const std::int64_t k = ipow_int(c.base, level - c.level);
  const std::size_t d = c.dim();
  std::vector<BadicCube> out;
  std::vector<std::int64_t> off(d, 0);
  for (;;) {
    BadicCube child{c.base, level, c.coords};
    for (std::size_t i = 0; i < d; ++i) child.coords[i] = c.coords[i] * k + off[i];
    out.push_back(std::move(child));
    std::size_t i = 0;
    for (; i < d; ++i) {
      const std::size_t ax = d - 1 - i;
      if (++off[ax] < k) break;
      off[ax] = 0;
    }
    if (i == d) break;
  }
  return out;
}

// Ball sequence view with the lookups the construction needs.
class Catalog {
 public:
  Catalog(const CylinderMeasure& mu, const BallFamily& balls, const std::vector<RegionSet>& U_of)
      : mu_(mu), balls_(balls), U_of_(U_of), lo_mass_(balls.size(), -1.0) {
    if (U_of.size() != balls.size()) throw Error(ErrorCode::kInvalidArgument, "one U per ball is required");
    by_center_.resize(balls.size());
    std::iota(by_center_.begin(), by_center_.end(), 0);
    std::sort(by_center_.begin(), by_center_.end(), [&](std::size_t a, std::size_t b) {
      return balls.balls[a].center < balls.balls[b].center;
    });
  }

  const BallFamily& family() const { return balls_; }
  const Ball& ball(std::size_t pos) const { return balls_.balls[pos]; }
  const RegionSet& U(std::size_t pos) const { return U_of_[pos]; }

  double lo_mass(std::size_t pos) {
    if (lo_mass_[pos] < 0.0) lo_mass_[pos] = mu_.ball_mass(balls_.balls[pos]).lo;
    return lo_mass_[pos];
  }

  // Upper essential content of U_n at s against mu_lo(B_n).
  bool passes(std::size_t pos, double s) {
    const auto key = std::make_pair(pos, s);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    bool ok = false;
    const double m = lo_mass(pos);
    if (m > 0.0 && !U_of_[pos].empty()) {
      const EssentialContent ec(U_of_[pos], mu_, std::max(1, U_of_[pos].max_level()));
      ok = ec.upper(s) >= m;
    }
    cache_.emplace(key, ok);
    return ok;
  }

  // Positions whose closed ball lies in the open ball B.
  std::vector<std::size_t> inside(const Ball& B) const {
    std::vector<std::size_t> out;
    auto fits = [&](std::size_t pos) {
      const Ball& b = balls_.balls[pos];
      return sup_distance(b.center, B.center) + b.radius < B.radius;
    };
    if (B.dim() == 1) {
      const double lo = B.center[0] - B.radius;
      const double hi = B.center[0] + B.radius;
      auto first = std::lower_bound(by_center_.begin(), by_center_.end(), lo,
                                    [&](std::size_t p, double v) { return balls_.balls[p].center[0] < v; });
      for (auto it = first; it != by_center_.end() && balls_.balls[*it].center[0] <= hi; ++it) {
        if (fits(*it)) out.push_back(*it);
      }
      std::sort(out.begin(), out.end());
    } else {
      for (std::size_t pos = 0; pos < balls_.size(); ++pos) {
        if (fits(pos)) out.push_back(pos);
      }
    }
    return out;
  }

 private:
  const CylinderMeasure& mu_;
  const BallFamily& balls_;
  const std::vector<RegionSet>& U_of_;
  std::vector<double> lo_mass_;
  std::vector<std::size_t> by_center_;
  std::map<std::pair<std::size_t, double>, bool> cache_;
};

// Closed balls with index >= g, for the E_U intersection test.
class FutureUnion {
 public:
  FutureUnion(const BallFamily& f, std::size_t g) {
    d_ = f.empty() ? 1 : f.balls.front().dim();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.indices[i] < g) continue;
      if (d_ == 1) {
        iv_.emplace_back(f.balls[i].center[0] - f.balls[i].radius, f.balls[i].center[0] + f.balls[i].radius);
      } else {
        boxes_.push_back(f.balls[i].box());
      }
    }
    std::sort(iv_.begin(), iv_.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& x : iv_) {
      if (!merged.empty() && x.first <= merged.back().second) {
        merged.back().second = std::max(merged.back().second, x.second);
      } else {
        merged.push_back(x);
      }
    }
    iv_ = std::move(merged);
  }

  bool meets(const Box& b) const {
    if (d_ == 1) {
      auto it = std::upper_bound(iv_.begin(), iv_.end(), std::make_pair(b.hi[0], std::numeric_limits<double>::infinity()));
      if (it == iv_.begin()) return false;
      --it;
      return it->second >= b.lo[0];
    }
    return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& x) { return x.intersects(b); });
  }

 private:
  std::size_t d_ = 1;
  std::vector<std::pair<double, double>> iv_;
  std::vector<Box> boxes_;
};

struct Chosen {
  std::vector<std::size_t> positions;
  double ratio = 0.0;
  std::size_t families = 0;
};

// disjoint_select followed by the 4-dilate split, keeping the heaviest family.
Chosen choose(Catalog& cat, const std::vector<std::size_t>& positions, std::size_t g, const CylinderMeasure& mu,
              double parent_mass) {
  Chosen out;
  if (positions.empty()) return out;
  std::vector<Ball> balls;
  std::vector<std::size_t> idx;
  std::map<std::size_t, std::size_t> pos_of;
  for (auto p : positions) {
    balls.push_back(cat.ball(p));
    idx.push_back(cat.family().indices[p]);
    pos_of[cat.family().indices[p]] = p;
  }
  BallFamily sub;
  sub.balls = std::move(balls);
  sub.indices = std::move(idx);
  const Selection sel = disjoint_select(sub, nullptr, g, mu);
  if (sel.selected.empty()) return out;
  const DistcovResult dc = split_dilate_disjoint(sub, sel.selected, mu, 4.0);
  out.families = dc.families.size();
  for (auto i : dc.families[dc.best]) out.positions.push_back(pos_of.at(i));
  out.ratio = dc.family_mass[dc.best] / parent_mass;
  return out;
}

std::size_t first_small_index(const BallFamily& f, double D) {
  std::size_t g = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.balls[i].radius > D) g = std::max(g, f.indices[i] + 1);
  }
  return g;
}

}  // namespace

void CantorParams::validate() const {
  if (eps.empty()) return;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps_p must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw Error(ErrorCode::kInvalidArgument, "eps_p must decrease");
  }
  if (!(eps[0] < target)) throw Error(ErrorCode::kInvalidArgument, "eps_1 must be below the target exponent");
  if (!(t > 5.0 && t < 6.0)) throw Error(ErrorCode::kInvalidArgument, "t must lie in (5,6)");
  if (!(select_ratio > 0.0 && select_ratio <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "select_ratio must lie in (0,1]");
  if (!(rho_factor > 0.0 && rho_factor <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "rho_factor must lie in (0,1]");
  if (frostman_extra < 1 || max_centers < 1) throw Error(ErrorCode::kInvalidArgument, "frostman_extra and max_centers must be positive");
}

std::vector<std::size_t> CantorTree::generation_nodes(int p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind == Kind::kSet && nodes[i].generation == p) out.push_back(i);
  }
  return out;
}

double CantorTree::conservation_error() const {
  double err = 0.0;
  for (const auto& n : nodes) {
    if (n.children.empty()) continue;
    double sum = 0.0;
    for (auto c : n.children) sum += nodes[c].eta;
    err = std::max(err, std::abs(sum - n.eta));
  }
  return err;
}

std::vector<RegionSet> shrunk_regions(const BallFamily& balls, double delta, int base, int max_level) {
  std::vector<RegionSet> out;
  out.reserve(balls.size());
  for (const auto& b : balls.balls) {
    const Ball s = shrink_ball(b, delta);
    const int level = std::min(max_level, std::max(1, static_cast<int>(std::ceil(std::log(8.0 / s.radius) / std::log(base)))));
    out.push_back(region_inner(s, base, level));
  }
  return out;
}

CantorTree build_cantor(const CylinderMeasure& mu, const BallFamily& balls, const std::vector<RegionSet>& U_of,
                        const CantorParams& params) {
  params.validate();
  balls.validate();
  const std::size_t d = mu.dim();
  if (params.target > static_cast<double>(d)) throw Error(ErrorCode::kInvalidArgument, "target exponent exceeds d");
  const int P = params.depth();
  const int base = U_of.empty() ? 2 : U_of.front().base;
  const double kappa = std::pow(2.0 * base, static_cast<double>(d));

  CantorTree tree;
  tree.params = params;
  tree.dim = d;
  GenerationNode root;
  root.U = RegionSet::unit(d, base);
  root.ball = Ball{Point(d, 0.5), 0.5};
  root.eta = 1.0;
  root.mu_ball = 1.0;
  tree.nodes.push_back(root);
  if (P == 0) return tree;

  Catalog cat(mu, balls, U_of);
  double q4 = 1.0;
  double q1 = 1.0;

  auto add_sets = [&](std::size_t parent, const Chosen& ch, int p) {
    double total = 0.0;
    for (auto pos : ch.positions) total += cat.lo_mass(pos);
    const double parent_eta = tree.nodes[parent].eta;
    for (auto pos : ch.positions) {
      GenerationNode n;
      n.kind = Kind::kSet;
      n.generation = p;
      n.seq_index = balls.indices[pos];
      n.U = cat.U(pos);
      n.ball = cat.ball(pos);
      n.mu_ball = cat.lo_mass(pos);
      n.eta = parent_eta * n.mu_ball / total;
      n.parent = parent;
      n.content_ok = cat.passes(pos, params.s(p));
      n.kernel_ok = n.mu_ball <= kappa * std::pow(set_diameter(n.U), params.s(p));
      tree.nodes[parent].children.push_back(tree.nodes.size());
      tree.nodes.push_back(std::move(n));
    }
  };

  // Generation 1 in the whole space.
  {
    std::vector<std::size_t> cand;
    for (std::size_t pos = 0; pos < balls.size(); ++pos) {
      if (cat.passes(pos, params.s(1))) cand.push_back(pos);
    }
    if (cand.empty()) throw insufficient(1, "no ball passes the essential-content test");
    const Chosen ch = choose(cat, cand, 0, mu, 1.0);
    if (ch.positions.empty() || ch.ratio < params.select_ratio) {
      throw insufficient(1, "selected mass " + std::to_string(ch.ratio) + " is below the required ratio");
    }
    q4 = std::max(q4, static_cast<double>(ch.families));
    add_sets(0, ch, 1);
    GenerationStats st;
    st.sets = ch.positions.size();
    st.min_select_ratio = ch.ratio;
    tree.generations.push_back(st);
  }

  for (int p = 1; p < P; ++p) {
    const int next = p + 1;
    const double s_next = params.s(next);
    const double eps_next = params.eps[static_cast<std::size_t>(next - 1)];
    const auto current = tree.generation_nodes(p);
    double min_diam = std::numeric_limits<double>::infinity();
    for (auto i : current) min_diam = std::min(min_diam, set_diameter(tree.nodes[i].U));
    const double D = min_diam / 3.0;
    const std::size_t g = first_small_index(balls, D);
    const FutureUnion future(balls, g);
    const double C = doubling_constant(static_cast<double>(d), eps_next);
    const double dim_mu = mu.dimension();

    GenerationStats st;
    st.min_select_ratio = std::numeric_limits<double>::infinity();

    for (auto ui : current) {
      const RegionSet U = tree.nodes[ui].U;
      const double diam_U = set_diameter(U);

      // E_U: cells of U carrying mass and meeting the later balls.
      int L = U.max_level() + params.frostman_extra;
      auto cell_count = [&](int level) {
        double n = 0.0;
        for (const auto& c : U.cubes) n += std::pow(static_cast<double>(base), static_cast<double>((level - c.level) * static_cast<int>(d)));
        return n;
      };
      while (L > U.max_level() + 1 && cell_count(L) > 65536.0) --L;
      RegionSet E{base, d, {}};
      for (const auto& c : U.cubes) {
        for (auto& cell : descendants_at(c, L)) {
          const Box b = cell.box();
          if (future.meets(b) && mu.open_box_mass(b).hi > 0.0) E.cubes.push_back(std::move(cell));
        }
      }
      if (E.empty()) throw insufficient(next, "E_U is empty for U_" + std::to_string(tree.nodes[ui].seq_index));
      const FrostmanMeasure m(E, s_next, L);
      if (!(m.total() > 0.0)) throw insufficient(next, "zero Frostman mass");

      std::vector<std::size_t> pick(E.cubes.size());
      std::iota(pick.begin(), pick.end(), 0);
      if (pick.size() > params.max_centers) {
        std::mt19937_64 rng(derive_seed(params.seed, tree.nodes[ui].seq_index));
        std::shuffle(pick.begin(), pick.end(), rng);
        pick.resize(params.max_centers);
        std::sort(pick.begin(), pick.end());
      }

      // rho_U: largest dyadic fraction of rho_factor |U| at which E_mu holds on half the mass.
      double rho = 0.0;
      std::vector<std::size_t> members;
      double picked_mass = 0.0;
      for (auto k : pick) picked_mass += m.cube_mass(E.cubes[k]);
      for (int j = 0; j <= 24 && rho == 0.0; ++j) {
        const double r = params.rho_factor * diam_U * std::ldexp(1.0, -j);
        const auto grid = geometric_radii(r, 0.5, 6);
        std::vector<std::size_t> ok;
        double ok_mass = 0.0;
        for (auto k : pick) {
          const Point x = E.cubes[k].as_ball().center;
          if (e_mu_member(mu, x, dim_mu, dim_mu, r, eps_next, grid)) {
            ok.push_back(k);
            ok_mass += m.cube_mass(E.cubes[k]);
          }
        }
        if (ok_mass >= 0.5 * picked_mass) {
          rho = r;
          members = std::move(ok);
        }
      }
      if (rho == 0.0) throw insufficient(next, "no scale rho_U with enough E_mu mass");

      // Radii r_x on the ladder r0 t^{-j}.
      std::vector<Ball> big;
      const double r0 = std::min(rho / 10.0, D) * (1.0 - 1e-9);
      for (auto k : members) {
        const Point x = E.cubes[k].as_ball().center;
        const double theta = local_dim_estimate(mu, x, geometric_radii(rho, 0.5, 6)).slope;
        for (int j = 0; j < 40; ++j) {
          const double r = r0 * std::pow(params.t, -j);
          const Ball b{x, r};
          if (!U.covers(b.dilate(1.0 + 1e-9).box())) continue;
          const MassInterval mb = mu.ball_mass(b);
          if (mb.lo < std::pow(r, theta + 2.0 * eps_next) || mb.hi > std::pow(r, theta - 2.0 * eps_next)) continue;
          if (m.box_mass(Ball{x, r / params.t}.box()) < C * m.box_mass(b.box())) continue;
          big.push_back(b);
          break;
        }
      }
      if (big.empty()) throw insufficient(next, "no intermediate ball fits in U_" + std::to_string(tree.nodes[ui].seq_index));
      const BallFamily bigf = BallFamily::from_balls(big);
      const auto groups = besicovitch_families(bigf, 1.0);
      q1 = std::max(q1, static_cast<double>(groups.size()));
      std::size_t best = 0;
      double best_mass = -1.0;
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        double w = 0.0;
        for (auto i : groups[gi]) w += m.box_mass(big[i].box());
        if (w > best_mass) {
          best_mass = w;
          best = gi;
        }
      }

      // G^U and, inside each of its balls, F^B.
      struct Inter {
        Ball ball;
        double weight;
        Chosen chosen;
      };
      std::vector<Inter> inters;
      for (auto i : groups[best]) {
        const Ball B{big[i].center, big[i].radius / params.t};
        const double w = m.box_mass(B.box());
        if (!(w > 0.0)) continue;
        std::vector<std::size_t> cand;
        for (auto pos : cat.inside(B)) {
          if (balls.indices[pos] >= g && cat.passes(pos, s_next)) cand.push_back(pos);
        }
        const double muB = mu.ball_mass(B).hi;
        Chosen ch = choose(cat, cand, g, mu, muB);
        if (ch.positions.empty()) continue;
        q4 = std::max(q4, static_cast<double>(ch.families));
        inters.push_back({B, w, std::move(ch)});
      }
      if (inters.empty()) throw insufficient(next, "no intermediate ball of U_" + std::to_string(tree.nodes[ui].seq_index) + " holds a selection");

      double wsum = 0.0;
      for (const auto& in : inters) wsum += in.weight;
      for (auto& in : inters) {
        GenerationNode n;
        n.kind = Kind::kIntermediate;
        n.generation = next;
        n.ball = in.ball;
        n.mu_ball = mu.ball_mass(in.ball).mid();
        n.eta = tree.nodes[ui].eta * in.weight / wsum;
        n.parent = ui;
        const std::size_t id = tree.nodes.size();
        tree.nodes[ui].children.push_back(id);
        tree.nodes.push_back(std::move(n));
        add_sets(id, in.chosen, next);
        st.min_select_ratio = std::min(st.min_select_ratio, in.chosen.ratio);
        st.sets += in.chosen.positions.size();
      }
      st.intermediates += inters.size();
    }
    tree.generations.push_back(st);
  }

  tree.q4 = params.q4 > 0.0 ? params.q4 : q4;
  tree.q1 = q1;
  for (int p = 1; p <= P; ++p) {
    auto& st = tree.generations[static_cast<std::size_t>(p - 1)];
    st.min_diameter = std::numeric_limits<double>::infinity();
    for (auto i : tree.generation_nodes(p)) st.min_diameter = std::min(st.min_diameter, set_diameter(tree.nodes[i].U));
  }
  for (auto& n : tree.nodes) {
    if (n.generation < 2) continue;
    const double e = params.eps[static_cast<std::size_t>(n.generation - 1)];
    if (n.kind == Kind::kSet) {
      const auto& B = tree.nodes[n.parent];
      n.majornani_ok = 2.0 * tree.q4 * B.eta / B.mu_ball <= std::pow(n.ball.diameter(), -e);
      if (!n.majornani_ok) ++tree.generations[static_cast<std::size_t>(n.generation - 1)].majornani_violations;
    } else {
      const auto& U = tree.nodes[n.parent];
      const double C = doubling_constant(static_cast<double>(d), e);
      const double rx = n.ball.radius * params.t;
      n.coupling_ok = std::pow(rx, -e) >= std::pow(5.0, static_cast<double>(d)) * 4.0 * tree.q1 / C * U.eta / U.mu_ball;
      if (!n.coupling_ok) ++tree.generations[static_cast<std::size_t>(n.generation - 1)].coupling_violations;
    }
  }
  return tree;
}

GaugeParams GaugeParams::from_tree(const CantorTree& tree) {
  GaugeParams g;
  g.q4 = tree.q4;
  g.ten_d = std::pow(10.0, static_cast<double>(tree.dim));
  for (std::size_t p = 0; p < tree.generations.size(); ++p) {
    g.s.push_back(tree.params.s(static_cast<int>(p + 1)));
    g.eps.push_back(tree.params.eps[p]);
    g.brackets.push_back(tree.generations[p].min_diameter / 3.0);
  }
  return g;
}

double gauge(double r, const GaugeParams& g) {
  if (r < 0.0) throw Error(ErrorCode::kInvalidArgument, "gauge needs r >= 0");
  if (r == 0.0) return 0.0;
  if (g.brackets.empty() || r >= g.brackets.front()) return 1.0;
  std::size_t p = 0;
  while (p + 1 < g.brackets.size() && r < g.brackets[p + 1]) ++p;
  return 2.0 * g.q4 * g.ten_d * std::pow(r, g.s[p] - 5.0 * g.eps[p]);
}

double eta_of(const CantorTree& tree, const CylinderMeasure& mu, const Ball& A) {
  const Box a = A.box();
  auto rec = [&](auto&& self, std::size_t id) -> double {
    const GenerationNode& n = tree.nodes[id];
    const Box hull = n.kind == Kind::kIntermediate ? n.ball.box() : n.U.hull();
    if (!a.intersects(hull)) return 0.0;
    if (a.contains(hull)) return n.eta;
    if (!n.children.empty()) {
      double sum = 0.0;
      for (auto c : n.children) sum += self(self, c);
      return sum;
    }
    double part = 0.0;
    double whole = 0.0;
    for (const auto& c : n.U.cubes) {
      const Box cb = c.box();
      whole += mu.box_mass(cb).mid();
      if (a.intersects(cb)) part += mu.box_mass(a.intersection(cb)).mid();
    }
    return whole > 0.0 ? n.eta * std::min(1.0, part / whole) : 0.0;
  };
  return rec(rec, 0);
}

MassReport mass_check(const CantorTree& tree, const CylinderMeasure& mu, std::size_t samples, std::uint64_t seed,
                      double tolerance, unsigned threads) {
  MassReport rep;
  rep.samples = samples;
  rep.tolerance = tolerance;
  rep.conservation_error = tree.conservation_error();
  const GaugeParams gp = GaugeParams::from_tree(tree);
  const std::size_t d = tree.dim;
  std::vector<std::size_t> leaves;
  double min_leaf = 1.0;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    if (n.kind == Kind::kSet && n.children.empty()) {
      leaves.push_back(i);
      min_leaf = std::min(min_leaf, n.U.hull().diameter());
    }
  }
  const double log_rmin = std::log(std::max(min_leaf * 1e-2, 1e-300));

  struct Partial {
    double ratio = 0.0;
    std::size_t index = 0;
    Ball ball;
    std::size_t violations = 0;
  };
  auto run = [&](std::size_t first, std::size_t last, Partial& out) {
    for (std::size_t i = first; i < last; ++i) {
      std::mt19937_64 rng(derive_seed(seed, i));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double r = std::exp(log_rmin + (0.0 - log_rmin) * unit(rng));
      Point c(d);
      if (i % 2 == 0 || leaves.empty()) {
        for (auto& x : c) x = unit(rng);
      } else {
        const auto& leaf = tree.nodes[leaves[static_cast<std::size_t>(unit(rng) * static_cast<double>(leaves.size())) % leaves.size()]];
        const Box h = leaf.U.hull();
        const double spread = r + 0.5 * h.diameter();
        for (std::size_t k = 0; k < d; ++k) c[k] = 0.5 * (h.lo[k] + h.hi[k]) + spread * (2.0 * unit(rng) - 1.0);
      }
      const Ball A{c, r};
      const double ratio = eta_of(tree, mu, A) / gauge(A.diameter(), gp);
      if (ratio > 1.0 + tolerance) ++out.violations;
      if (ratio > out.ratio) {
        out.ratio = ratio;
        out.index = i;
        out.ball = A;
      }
    }
  };

  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, samples)));
  std::vector<Partial> parts(n);
  std::vector<std::thread> pool;
  const std::size_t chunk = (samples + n - 1) / n;
  for (unsigned t = 0; t < n; ++t) {
    const std::size_t first = std::min(samples, t * chunk);
    const std::size_t last = std::min(samples, first + chunk);
    pool.emplace_back(run, first, last, std::ref(parts[t]));
  }
  for (auto& th : pool) th.join();
  for (const auto& p : parts) {
    rep.violations += p.violations;
    if (p.ratio > rep.max_ratio) {
      rep.max_ratio = p.ratio;
      rep.worst = p.ball;
    }
  }
  return rep;
}

}  // namespace ubq
