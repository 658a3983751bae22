#include "ubq/content.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ubq/stats.hpp"

namespace ubq {

namespace detail {

struct CubeTree {
  struct Node {
    BadicCube cube;
    std::vector<int> children;
    bool full = false;
    double weight = 0.0;  // sum of leaf weights below
  };

  int base = 2;
  std::size_t dim = 1;
  int max_level = 0;
  std::vector<Node> nodes;  // preorder, nodes[0] is the root

  CubeTree(const RegionSet& E, int max_level_in, const std::vector<double>* weights)
      : base(E.base), dim(E.dim), max_level(max_level_in) {
    if (max_level < 0) throw Error(ErrorCode::kInvalidArgument, "max_level must be >= 0");
    if (E.empty()) return;
    std::vector<std::size_t> order(E.cubes.size());
    std::iota(order.begin(), order.end(), 0);
    for (const auto& c : E.cubes) {
      if (c.level > max_level) {
        throw Error(ErrorCode::kInvalidArgument, "max_level is shallower than the deepest cube");
      }
      if (c.base != base || c.dim() != dim) {
        throw Error(ErrorCode::kInvalidArgument, "region set mixes bases or dimensions");
      }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return path_less(E.cubes[a], E.cubes[b]);
    });
    build(BadicCube{base, 0, std::vector<std::int64_t>(dim, 0)}, E, order, 0, order.size(), weights);
  }

  int build(const BadicCube& cube, const RegionSet& E, const std::vector<std::size_t>& order,
            std::size_t lo, std::size_t hi, const std::vector<double>* weights) {
    const int idx = static_cast<int>(nodes.size());
    nodes.push_back(Node{cube, {}, false, 0.0});
    double weight = 0.0;
    if (weights) {
      for (std::size_t i = lo; i < hi; ++i) weight += (*weights)[order[i]];
    }
    if (E.cubes[order[lo]].level == cube.level) {
      nodes[idx].full = true;
      nodes[idx].weight = weight;
      return idx;
    }
    const int next = cube.level + 1;
    std::size_t start = lo;
    while (start < hi) {
      const int digit = child_digit(E.cubes[order[start]], next);
      std::size_t end = start + 1;
      while (end < hi && child_digit(E.cubes[order[end]], next) == digit) ++end;
      const BadicCube child = E.cubes[order[start]].ancestor(next);
      const int c = build(child, E, order, start, end, weights);
      nodes[idx].children.push_back(c);
      start = end;
    }
    nodes[idx].weight = weight;
    return idx;
  }

  double side(int level) const { return 1.0 / ipow(base, level); }
};

}  // namespace detail

namespace {

using detail::CubeTree;

struct Costs {
  std::vector<double> cost;
  std::vector<char> own;
  std::vector<double> full_cost;  // per level, for full cubes
  std::vector<char> full_own;
};

Costs evaluate(const CubeTree& tree, double s, double cap) {
  if (!(s >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "exponent s must be >= 0");
  Costs c;
  const int L = tree.max_level;
  const double inf = std::numeric_limits<double>::infinity();
  const double fan = ipow(tree.base, static_cast<int>(tree.dim));
  auto own_cost = [&](int level) {
    const double side = tree.side(level);
    return side <= cap ? std::pow(side, s) : inf;
  };
  c.full_cost.assign(static_cast<std::size_t>(L) + 1, 0.0);
  c.full_own.assign(static_cast<std::size_t>(L) + 1, 1);
  c.full_cost[L] = std::pow(tree.side(L), s);
  for (int j = L - 1; j >= 0; --j) {
    const double own = own_cost(j);
    const double split = fan * c.full_cost[j + 1];
    c.full_own[j] = own <= split;
    c.full_cost[j] = std::min(own, split);
  }
  const std::size_t n = tree.nodes.size();
  c.cost.assign(n, 0.0);
  c.own.assign(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    const auto& node = tree.nodes[i];
    const int level = node.cube.level;
    if (node.full) {
      c.cost[i] = c.full_cost[level];
      c.own[i] = c.full_own[level];
      continue;
    }
    double sum = 0.0;
    for (int ch : node.children) sum += c.cost[ch];
    const double own = own_cost(level);
    c.own[i] = own <= sum;
    c.cost[i] = std::min(own, sum);
  }
  return c;
}

void emit_full(const BadicCube& cube, const Costs& c, int max_level, Cover& out) {
  int level = cube.level;
  while (level < max_level && !c.full_own[level]) ++level;
  std::vector<BadicCube> frontier{cube};
  for (int j = cube.level; j < level; ++j) {
    std::vector<BadicCube> next;
    for (const auto& q : frontier) {
      auto ch = q.children();
      next.insert(next.end(), ch.begin(), ch.end());
    }
    frontier = std::move(next);
  }
  for (auto& q : frontier) out.elements.emplace_back(std::move(q));
}

std::size_t full_count(int level, const Costs& c, int max_level, const CubeTree& tree) {
  int j = level;
  while (j < max_level && !c.full_own[j]) ++j;
  return static_cast<std::size_t>(ipow_int(tree.base, static_cast<int>(tree.dim) * (j - level)));
}

std::size_t witness(const CubeTree& tree, const Costs& c, Cover* out) {
  std::size_t count = 0;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes[i];
    if (node.full) {
      count += full_count(node.cube.level, c, tree.max_level, tree);
      if (out) emit_full(node.cube, c, tree.max_level, *out);
    } else if (c.own[i]) {
      ++count;
      if (out) out->elements.emplace_back(node.cube);
    } else {
      for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
    }
  }
  return count;
}

double kernel(int base, std::size_t d) { return std::pow(2.0 * base, static_cast<double>(d)); }

}  // namespace

// ---- content_upper / estimate ----

double content_upper(const RegionSet& E, double s, int max_level, double max_diameter) {
  if (!(s >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "exponent s must be >= 0");
  const CubeTree tree(E, max_level, nullptr);
  if (tree.nodes.empty()) return 0.0;
  return evaluate(tree, s, max_diameter).cost[0];
}

CoverEstimate content_estimate(const RegionSet& E, double s, int max_level, bool with_witness) {
  if (!(s >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "exponent s must be >= 0");
  CoverEstimate est;
  est.s = s;
  est.witness.s = s;
  est.certificate_constant = kernel(E.base, E.dim);
  const CubeTree tree(E, max_level, nullptr);
  if (tree.nodes.empty()) return est;
  const Costs c = evaluate(tree, s, std::numeric_limits<double>::infinity());
  est.upper = c.cost[0];
  est.witness_count = witness(tree, c, with_witness ? &est.witness : nullptr);
  est.certificate_mass = est.upper;
  est.lower = s <= static_cast<double>(E.dim) ? est.upper / est.certificate_constant : 0.0;
  return est;
}

// ---- Frostman ----

FrostmanMeasure::FrostmanMeasure(const RegionSet& E, double s, int max_level) : s_(s) {
  auto tree = std::make_shared<const CubeTree>(E, max_level, nullptr);
  tree_ = tree;
  if (tree->nodes.empty()) return;
  const Costs c = evaluate(*tree, s, std::numeric_limits<double>::infinity());
  mass_.assign(tree->nodes.size(), 0.0);
  mass_[0] = c.cost[0];
  total_ = c.cost[0];
  for (std::size_t i = 0; i < tree->nodes.size(); ++i) {
    const auto& node = tree->nodes[i];
    if (node.full || node.children.empty()) continue;
    double sum = 0.0;
    for (int ch : node.children) sum += c.cost[ch];
    if (sum <= 0.0) continue;
    for (int ch : node.children) mass_[ch] = mass_[i] * (c.cost[ch] / sum);
  }
}

double FrostmanMeasure::kernel_constant() const { return kernel(tree_->base, tree_->dim); }

double FrostmanMeasure::lower_bound() const {
  return s_ <= static_cast<double>(tree_->dim) ? total_ / kernel_constant() : 0.0;
}

double FrostmanMeasure::cube_mass(const BadicCube& cube) const {
  if (tree_->nodes.empty()) return 0.0;
  if (cube.base != tree_->base || cube.dim() != tree_->dim) {
    throw Error(ErrorCode::kInvalidArgument, "cube does not live on the measure's grid");
  }
  int i = 0;
  while (true) {
    const auto& node = tree_->nodes[i];
    if (node.cube == cube) return mass_[i];
    if (node.full) {
      const int extra = (cube.level - node.cube.level) * static_cast<int>(tree_->dim);
      return mass_[i] / ipow(tree_->base, extra);
    }
    int next = -1;
    for (int ch : node.children) {
      const auto& cc = tree_->nodes[ch].cube;
      if (cc.level <= cube.level && cube.ancestor(cc.level) == cc) {
        next = ch;
        break;
      }
    }
    if (next < 0) return 0.0;
    i = next;
  }
}

double FrostmanMeasure::box_mass(const Box& box) const {
  if (tree_->nodes.empty()) return 0.0;
  double total = 0.0;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const auto& node = tree_->nodes[i];
    const Box nb = node.cube.box();
    if (!nb.interiors_intersect(box)) continue;
    if (box.contains(nb)) {
      total += mass_[i];
    } else if (node.full) {
      total += mass_[i] * nb.intersection(box).volume() / nb.volume();
    } else {
      for (int ch : node.children) stack.push_back(ch);
    }
  }
  return total;
}

std::vector<std::pair<BadicCube, double>> FrostmanMeasure::node_masses() const {
  std::vector<std::pair<BadicCube, double>> out;
  out.reserve(mass_.size());
  for (std::size_t i = 0; i < mass_.size(); ++i) out.emplace_back(tree_->nodes[i].cube, mass_[i]);
  return out;
}

FrostmanMeasure frostman_lower(const RegionSet& E, double s, int max_level) {
  FrostmanMeasure m(E, s, max_level);
  if (!(m.total() > 0.0)) throw Error(ErrorCode::kEmptyInput, "frostman_lower: the set has zero content");
  return m;
}

// ---- rectangles ----

double g_tau(const std::vector<double>& tau, double s) {
  if (tau.empty()) throw Error(ErrorCode::kInvalidArgument, "tau must be non-empty");
  for (std::size_t i = 1; i < tau.size(); ++i) {
    if (tau[i] < tau[i - 1]) throw Error(ErrorCode::kInvalidArgument, "tau must be sorted ascending");
  }
  if (!(tau[0] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tau entries must be positive");
  const double t1 = tau[0];
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const double tk = tau[k] / t1;
    double v = s * tk;
    for (std::size_t i = 0; i <= k; ++i) v -= tk - tau[i] / t1;
    best = std::max(best, v);
  }
  return best;
}

SlopeReport rect_content_slope(const std::vector<double>& tau, double s,
                               const std::vector<double>& radii, int base, int max_level) {
  if (radii.size() < 2) throw Error(ErrorCode::kEmptyInput, "need at least two radii");
  SlopeReport rep;
  std::vector<double> lx, ly;
  for (double r : radii) {
    if (!(r > 0.0 && r <= 0.25)) throw Error(ErrorCode::kInvalidArgument, "radii must lie in (0, 1/4]");
    const AnisoRect rect{Point(tau.size(), 0.5), r, tau};
    const double c = content_upper(region_cover(rect, base, max_level), s, max_level);
    rep.radii.push_back(r);
    rep.contents.push_back(c);
    lx.push_back(std::log(r));
    ly.push_back(std::log(c));
  }
  const LinearFit fit = fit_line(lx, ly);
  rep.slope = fit.slope;
  rep.r2 = fit.r2;
  return rep;
}

// ---- essential content ----

namespace {

void prune(const BadicCube& cell, const CylinderMeasure& mu, int max_level,
           std::vector<BadicCube>& kept, std::vector<double>& weight) {
  const Box b = cell.box();
  if (mu.open_box_mass(b).hi == 0.0) return;
  if (cell.level >= max_level) {
    kept.push_back(cell);
    weight.push_back(mu.box_mass(b).hi);
    return;
  }
  for (const auto& c : cell.children()) prune(c, mu, max_level, kept, weight);
}

RegionSet ancestors_at(const RegionSet& E, int level) {
  RegionSet out{E.base, E.dim, {}};
  for (const auto& c : E.cubes) out.cubes.push_back(c.level > level ? c.ancestor(level) : c);
  return out.normalized();
}

}  // namespace

EssentialContent::EssentialContent(const RegionSet& A, const CylinderMeasure& mu, int max_level)
    : max_level_(max_level), measure_dim_(mu.dimension()), full_support_(mu.full_support()) {
  if (A.dim != mu.dim()) throw Error(ErrorCode::kInvalidArgument, "region and measure dimensions differ");
  const RegionSet norm = A.normalized();
  pruned_ = RegionSet{A.base, A.dim, {}};
  std::vector<double> weight;
  double lo = 0.0, hi = 0.0;
  for (const auto& cube : norm.cubes) {
    if (cube.level > max_level) {
      throw Error(ErrorCode::kInvalidArgument, "max_level is shallower than the deepest cube");
    }
    const MassInterval m = mu.box_mass(cube.box());
    lo += m.lo;
    hi += m.hi;
    if (full_support_) {
      pruned_.cubes.push_back(cube);
      weight.push_back(m.hi);
    } else {
      prune(cube, mu, max_level, pruned_.cubes, weight);
    }
  }
  mass_ = MassInterval{std::min(lo, 1.0), std::min(hi, 1.0)};
  tree_ = std::make_shared<const CubeTree>(pruned_, max_level, &weight);
}

double EssentialContent::upper(double s) const {
  if (tree_->nodes.empty()) return 0.0;
  return evaluate(*tree_, s, std::numeric_limits<double>::infinity()).cost[0];
}

double EssentialContent::lower(double s) const {
  if (!(s >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "exponent s must be >= 0");
  if (tree_->nodes.empty() || mass_.lo <= 0.0) return 0.0;
  if (s > static_cast<double>(tree_->dim)) return 0.0;
  double ratio = 0.0;
  for (const auto& node : tree_->nodes) {
    ratio = std::max(ratio, node.weight / std::pow(node.cube.side(), s));
  }
  if (!(ratio > 0.0)) return 0.0;
  const double grid = std::pow(2.0, static_cast<double>(tree_->dim)) * std::pow(tree_->base, s);
  return std::min(mass_.lo / (grid * ratio), upper(s));
}

CoverEstimate EssentialContent::at(double s) const {
  CoverEstimate est;
  est.s = s;
  est.witness.s = s;
  est.upper = upper(s);
  if (s > measure_dim_ + 1e-12) {
    est.decay_certificate = true;
    for (int lvl = std::max(0, max_level_ - 2); lvl <= max_level_; ++lvl) {
      est.decay_uppers.push_back(pruned_.empty() ? 0.0 : content_upper(ancestors_at(pruned_, lvl), s, lvl));
    }
    return est;
  }
  est.lower = lower(s);
  est.certificate_mass = mass_.lo;
  est.certificate_constant = est.lower > 0.0 ? mass_.lo / est.lower : 0.0;
  return est;
}

CoverEstimate essential_content(const RegionSet& A, const CylinderMeasure& mu, double s, int max_level) {
  return EssentialContent(A, mu, max_level).at(s);
}

ConcavityResult concavity_check(const RegionSet& A, const CylinderMeasure& mu, double s,
                                double delta, int max_level) {
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 1");
  const EssentialContent ec(A, mu, max_level);
  ConcavityResult r;
  r.upper_scaled = ec.upper(s / delta);
  r.lower_root = std::pow(ec.lower(s), 1.0 / delta);
  r.pass = r.upper_scaled >= r.lower_root * (1.0 - 1e-12);
  return r;
}

}  // namespace ubq
