#include "ubq/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ubq/stats.hpp"

namespace ubq {

namespace {

constexpr double kHullSlack = 1e-12;
// Relative guard against rounding in composed shifts (1/3 * 1/3 vs 1/9).
constexpr double kRoundGuard = 1e-9;

Box grow(const Box& b, double by) {
  Box out = b;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    out.lo[i] -= by;
    out.hi[i] += by;
  }
  return out;
}

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= kRoundGuard * std::max(1.0, std::abs(v)) ? r : v;
}

struct Node {
  double ratio;
  Point shift;
  std::vector<double> rot;  // empty when no map rotates
  double mass;
  int depth;
};

Box node_hull(const Node& n, std::size_t d) {
  Box b{Point(d), Point(d)};
  if (n.rot.empty()) {
    for (std::size_t i = 0; i < d; ++i) {
      b.lo[i] = n.shift[i];
      b.hi[i] = n.shift[i] + n.ratio;
    }
    return b;
  }
  for (std::size_t i = 0; i < d; ++i) {
    double center = n.shift[i];
    double half = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      center += 0.5 * n.ratio * n.rot[i * d + j];
      half += 0.5 * n.ratio * std::abs(n.rot[i * d + j]);
    }
    b.lo[i] = center - half;
    b.hi[i] = center + half;
  }
  return b;
}

std::vector<double> identity(std::size_t d) {
  std::vector<double> m(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
  return m;
}

std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b,
                           std::size_t d) {
  std::vector<double> c(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) c[i * d + j] += a[i * d + k] * b[k * d + j];
  return c;
}

// Child of node n along map f: f_w o f, i.e. ratio c_w c, rotation O_w O,
// shift c_w O_w t + t_w.
Node child(const Node& n, const SimilarityMap& f, double p, std::size_t d, bool rotating) {
  Node out{n.ratio * f.ratio, n.shift, {}, n.mass * p, n.depth + 1};
  if (!rotating) {
    for (std::size_t i = 0; i < d; ++i) out.shift[i] += n.ratio * f.translation[i];
    return out;
  }
  const std::vector<double> frot = f.orthogonal.empty() ? identity(d) : f.orthogonal;
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += n.rot[i * d + j] * f.translation[j];
    out.shift[i] += n.ratio * acc;
  }
  out.rot = matmul(n.rot, frot, d);
  return out;
}

// Number of grid cells [j, j+1]/n (0 <= j < n) along one axis that lie in
// [lo, hi], and that meet it (closed or open).
struct AxisCount {
  std::int64_t inside;
  std::int64_t meeting;
};

AxisCount axis_count(double lo, double hi, std::int64_t n, bool open) {
  const double a = snap(lo * static_cast<double>(n));
  const double b = snap(hi * static_cast<double>(n));
  auto clamp = [n](double v) {
    return static_cast<std::int64_t>(std::clamp(v, -1.0, static_cast<double>(n) + 1.0));
  };
  // inside: j >= a and j + 1 <= b
  const std::int64_t in_first = std::max<std::int64_t>(0, clamp(std::ceil(a)));
  const std::int64_t in_last = std::min<std::int64_t>(n - 1, clamp(std::floor(b)) - 1);
  AxisCount c{std::max<std::int64_t>(0, in_last - in_first + 1), 0};
  std::int64_t m_first, m_last;
  if (open) {
    // j < b and j + 1 > a
    m_first = std::max<std::int64_t>(0, clamp(std::floor(a)));
    m_last = std::min<std::int64_t>(n - 1, clamp(std::ceil(b)) - 1);
  } else {
    // j <= b and j + 1 >= a
    m_first = std::max<std::int64_t>(0, clamp(std::ceil(a)) - 1);
    m_last = std::min<std::int64_t>(n - 1, clamp(std::floor(b)));
  }
  c.meeting = std::max<std::int64_t>(0, m_last - m_first + 1);
  if (open && !(hi > lo)) c.meeting = 0;
  return c;
}

}  // namespace

// ---- SimilarityMap / IFS ----

Point SimilarityMap::apply(const Point& x) const {
  const std::size_t d = dim();
  Point y(translation);
  for (std::size_t i = 0; i < d; ++i) {
    if (orthogonal.empty()) {
      y[i] += ratio * x[i];
    } else {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += orthogonal[i * d + j] * x[j];
      y[i] += ratio * acc;
    }
  }
  return y;
}

IFS::IFS(std::vector<SimilarityMap> maps) : maps_(std::move(maps)) {
  if (maps_.size() < 2) throw Error(ErrorCode::kInvalidArgument, "an IFS needs at least two maps");
  dim_ = maps_.front().dim();
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "IFS maps need a translation vector");
  for (const auto& f : maps_) {
    if (f.dim() != dim_) throw Error(ErrorCode::kInvalidArgument, "IFS maps disagree on dimension");
    if (!(f.ratio > 0.0 && f.ratio < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "contraction ratios must lie in (0,1)");
    }
    if (!f.orthogonal.empty()) {
      if (f.orthogonal.size() != dim_ * dim_) {
        throw Error(ErrorCode::kInvalidArgument, "orthogonal part must be d x d");
      }
      for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
          double dot = 0.0;
          for (std::size_t k = 0; k < dim_; ++k) {
            dot += f.orthogonal[i * dim_ + k] * f.orthogonal[j * dim_ + k];
          }
          if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-9) {
            throw Error(ErrorCode::kInvalidArgument, "linear part is not orthogonal");
          }
        }
      }
      has_rotation_ = true;
    }
    Node root{1.0, Point(dim_, 0.0), {}, 1.0, 0};
    if (has_rotation_ || !f.orthogonal.empty()) root.rot = identity(dim_);
    const Box hull = node_hull(child(root, f, 1.0, dim_, !root.rot.empty()), dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (hull.lo[i] < -kHullSlack || hull.hi[i] > 1.0 + kHullSlack) {
        throw Error(ErrorCode::kOutOfDomain,
                    "every map must send [0,1]^d into itself; rescale the system first");
      }
    }
  }
}

std::vector<double> IFS::ratios() const {
  std::vector<double> r;
  r.reserve(maps_.size());
  for (const auto& f : maps_) r.push_back(f.ratio);
  return r;
}

double IFS::word_ratio(const Word& w) const {
  double c = 1.0;
  for (int letter : w) c *= maps_.at(static_cast<std::size_t>(letter)).ratio;
  return c;
}

Point IFS::apply(const Word& w, const Point& x) const {
  Point y = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) y = maps_.at(static_cast<std::size_t>(*it)).apply(y);
  return y;
}

Point IFS::fixed_point(std::size_t i) const {
  const SimilarityMap& f = maps_.at(i);
  Point x(dim_, 0.0);
  if (f.orthogonal.empty()) {
    for (std::size_t k = 0; k < dim_; ++k) x[k] = f.translation[k] / (1.0 - f.ratio);
    return x;
  }
  for (int it = 0; it < 4000; ++it) x = f.apply(x);
  return x;
}

IFS IFS::middle_third() {
  return IFS({SimilarityMap{1.0 / 3.0, {0.0}, {}}, SimilarityMap{1.0 / 3.0, {2.0 / 3.0}, {}}});
}

IFS IFS::triadic() {
  return IFS({SimilarityMap{1.0 / 3.0, {0.0}, {}}, SimilarityMap{1.0 / 3.0, {1.0 / 3.0}, {}},
              SimilarityMap{1.0 / 3.0, {2.0 / 3.0}, {}}});
}

IFS IFS::badic_grid(std::size_t d, int base) {
  if (base < 2 || d == 0) throw Error(ErrorCode::kInvalidArgument, "need base >= 2 and d >= 1");
  std::vector<SimilarityMap> maps;
  const std::int64_t count = ipow_int(base, static_cast<int>(d));
  for (std::int64_t idx = 0; idx < count; ++idx) {
    Point t(d);
    std::int64_t rest = idx;
    for (std::size_t i = d; i-- > 0;) {
      t[i] = static_cast<double>(rest % base) / base;
      rest /= base;
    }
    maps.push_back(SimilarityMap{1.0 / base, t, {}});
  }
  return IFS(std::move(maps));
}

// ---- dimensions ----

double similarity_dimension(const std::vector<double>& ratios) {
  if (ratios.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two ratios");
  for (double c : ratios) {
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::kInvalidArgument, "ratios must lie in (0,1)");
  }
  auto f = [&](double s) {
    double acc = -1.0;
    for (double c : ratios) acc += std::pow(c, s);
    return acc;
  };
  double lo = 0.0, hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  double deriv = 0.0;
  for (double c : ratios) deriv += std::pow(c, s) * std::log(c);
  if (deriv != 0.0) {
    const double polished = s - f(s) / deriv;
    if (std::abs(f(polished)) <= std::abs(f(s))) s = polished;
  }
  return s;
}

MeasureDimension measure_dimension(const std::vector<double>& weights,
                                   const std::vector<double>& ratios, std::size_t d) {
  if (weights.size() != ratios.size() || weights.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "weights and ratios must have equal length >= 2");
  }
  double entropy = 0.0, lyapunov = 0.0, total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "weights must be positive");
    if (!(ratios[i] > 0.0 && ratios[i] < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "ratios must lie in (0,1)");
    }
    entropy += weights[i] * std::log(weights[i]);
    lyapunov += weights[i] * std::log(ratios[i]);
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::kInvalidArgument, "weights must sum to 1");
  return MeasureDimension{std::min(static_cast<double>(d), entropy / lyapunov), true};
}

std::vector<Word> cylinders_at_scale(const IFS& ifs, double t, int k) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::kInvalidArgument, "t must lie in (0,1)");
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 0");
  const double scale = std::pow(t, k);
  std::vector<Word> out;
  if (1.0 <= scale) {
    out.push_back({});
    return out;
  }
  struct Frame {
    Word w;
    double c;
  };
  std::vector<Frame> stack{{{}, 1.0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    for (std::size_t i = ifs.size(); i-- > 0;) {
      Word w = f.w;
      w.push_back(static_cast<int>(i));
      const double c = f.c * ifs.map(i).ratio;
      if (c <= scale) {
        out.push_back(std::move(w));
      } else {
        stack.push_back({std::move(w), c});
      }
    }
  }
  // Depth-first emission above is in reverse sibling order per level; sort for determinism.
  std::sort(out.begin(), out.end());
  return out;
}

// ---- CylinderMeasure ----

CylinderMeasure::CylinderMeasure(IFS ifs, std::vector<double> weights, int depth_cap)
    : ifs_(std::move(ifs)), weights_(std::move(weights)), depth_cap_(depth_cap) {
  if (weights_.size() != ifs_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one weight per map is required");
  }
  double total = 0.0;
  for (double p : weights_) {
    if (!(p > 0.0)) throw Error(ErrorCode::kInvalidArgument, "weights must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::kInvalidArgument, "weights must sum to 1 within 1e-12");
  if (depth_cap_ < 0) throw Error(ErrorCode::kInvalidArgument, "depth_cap must be >= 0");

  const Point p0 = ifs_.fixed_point(0);
  bool shared = true;
  for (std::size_t i = 1; i < ifs_.size() && shared; ++i) {
    shared = sup_distance(p0, ifs_.fixed_point(i)) <= 1e-12;
  }
  if (shared) atom_ = p0;
}

CylinderMeasure CylinderMeasure::lebesgue(std::size_t d, int base, int depth_cap) {
  IFS grid = IFS::badic_grid(d, base);
  const std::size_t m = grid.size();
  CylinderMeasure mu(std::move(grid), std::vector<double>(m, 1.0 / static_cast<double>(m)), depth_cap);
  ipow_int(base, depth_cap);  // rejects grids too fine for exact cell indices
  mu.grid_base_ = base;
  return mu;
}

CylinderMeasure CylinderMeasure::cantor(int depth_cap, double p0) {
  return CylinderMeasure(IFS::middle_third(), {p0, 1.0 - p0}, depth_cap);
}

double CylinderMeasure::dimension() const {
  return measure_dimension(weights_, ifs_.ratios(), dim()).value;
}

Box CylinderMeasure::cylinder_hull(const Word& w) const {
  const std::size_t d = dim();
  Node n{1.0, Point(d, 0.0), {}, 1.0, 0};
  if (ifs_.has_rotation()) n.rot = identity(d);
  for (int letter : w) n = child(n, ifs_.map(static_cast<std::size_t>(letter)), 1.0, d, ifs_.has_rotation());
  return node_hull(n, d);
}

double CylinderMeasure::cylinder_mass(const Word& w) const {
  double m = 1.0;
  for (int letter : w) m *= weights_.at(static_cast<std::size_t>(letter));
  return m;
}

MassInterval CylinderMeasure::box_mass(const Box& box) const { return query(box, Touch::kClosed); }

MassInterval CylinderMeasure::open_box_mass(const Box& box) const { return query(box, Touch::kOpen); }

MassInterval CylinderMeasure::ball_mass(const Ball& ball) const {
  if (ball.dim() != dim()) throw Error(ErrorCode::kInvalidArgument, "ball dimension differs from the measure's");
  if (!(ball.radius >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "ball radius must be >= 0");
  if (ball.radius == 0.0) {
    const bool hit = atom_ && sup_distance(*atom_, ball.center) == 0.0;
    return MassInterval{0.0, hit ? 1.0 : 0.0};
  }
  return box_mass(ball.box());
}

MassInterval CylinderMeasure::grid_query(const Box& box, Touch touch) const {
  const std::int64_t n = ipow_int(grid_base_, depth_cap_);
  double inside = 1.0, meeting = 1.0;
  const double cell = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < dim(); ++i) {
    const AxisCount c = axis_count(box.lo[i], box.hi[i], n, touch == Touch::kOpen);
    inside *= static_cast<double>(c.inside) * cell;
    meeting *= static_cast<double>(c.meeting) * cell;
  }
  return MassInterval{inside, meeting};
}

MassInterval CylinderMeasure::query(const Box& box, Touch touch) const {
  if (box.dim() != dim()) throw Error(ErrorCode::kInvalidArgument, "box dimension differs from the measure's");
  if (grid_base_ > 0) return grid_query(box, touch);
  const std::size_t d = dim();
  const bool rotating = ifs_.has_rotation();
  MassInterval out;
  std::vector<Node> stack;
  Node root{1.0, Point(d, 0.0), {}, 1.0, 0};
  if (rotating) root.rot = identity(d);
  stack.push_back(std::move(root));
  while (!stack.empty()) {
    Node n = std::move(stack.back());
    stack.pop_back();
    const Box hull = node_hull(n, d);
    const double guard = kRoundGuard * n.ratio;
    const bool meets = touch == Touch::kOpen ? box.interiors_intersect(grow(hull, -guard))
                                             : box.intersects(grow(hull, guard));
    if (!meets) continue;
    if (box.contains(grow(hull, -guard))) {
      out.lo += n.mass;
      out.hi += n.mass;
      continue;
    }
    if (n.depth >= depth_cap_) {
      out.hi += n.mass;
      continue;
    }
    for (std::size_t i = 0; i < ifs_.size(); ++i) {
      stack.push_back(child(n, ifs_.map(i), weights_[i], d, rotating));
    }
  }
  out.hi = std::min(out.hi, 1.0);
  out.lo = std::min(out.lo, out.hi);
  return out;
}

// ---- diagnostics ----

LocalDimEstimate local_dim_estimate(const CylinderMeasure& mu, const Point& x,
                                    const std::vector<double>& radii) {
  if (radii.size() < 2) throw Error(ErrorCode::kEmptyInput, "need at least two radii");
  const double smallest = *std::min_element(radii.begin(), radii.end());
  if (mu.ball_mass(Ball{x, smallest}).hi == 0.0) {
    throw Error(ErrorCode::kNotInSupport, "point is outside the support at the smallest radius");
  }
  LocalDimEstimate est;
  std::vector<double> lx, ly;
  for (double r : radii) {
    const double m = mu.ball_mass(Ball{x, r}).mid();
    if (m <= 0.0) {
      est.excluded_radii.push_back(r);
      continue;
    }
    lx.push_back(std::log(r));
    ly.push_back(std::log(m));
  }
  const LinearFit fit = fit_line(lx, ly);
  est.slope = fit.slope;
  est.residual = fit.rms_residual;
  est.quality_warning = fit.rms_residual > 0.1;
  return est;
}

double doubling_constant(double beta, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  return 0.5 * std::pow(6.0, -beta / (2.0 * eps));
}

double doubling_fraction(const CylinderMeasure& mu, const Point& x, double t, int n,
                         double C, double rel_tol) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (!(t > 5.0 && t < 6.0)) throw Error(ErrorCode::kInvalidArgument, "t must lie in (5,6)");
  int hits = 0;
  double outer = mu.ball_mass(Ball{x, 1.0}).mid();
  for (int k = 0; k < n; ++k) {
    const double inner = mu.ball_mass(Ball{x, std::pow(t, -(k + 1))}).mid();
    if (inner >= C * outer * (1.0 - rel_tol)) ++hits;
    outer = inner;
  }
  return static_cast<double>(hits) / n;
}

bool e_mu_member(const CylinderMeasure& mu, const Point& x, double alpha, double beta,
                 double rho, double eps, const std::vector<double>& radii_grid,
                 double dim_tol) {
  if (radii_grid.size() < 2) throw Error(ErrorCode::kEmptyInput, "need at least two grid radii");
  for (double r : radii_grid) {
    if (!(r > 0.0 && r <= rho)) throw Error(ErrorCode::kInvalidArgument, "grid radii must lie in (0, rho]");
  }
  LocalDimEstimate est;
  try {
    est = local_dim_estimate(mu, x, radii_grid);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotInSupport) return false;
    throw;
  }
  if (est.slope < alpha - dim_tol || est.slope > beta + dim_tol) return false;
  for (double r : radii_grid) {
    if (mu.ball_mass(Ball{x, r}).hi > std::pow(r, est.slope - eps)) return false;
  }
  return true;
}

std::vector<double> geometric_radii(double r0, double q, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  double r = r0;
  for (int i = 0; i < count; ++i) {
    out.push_back(r);
    r *= q;
  }
  return out;
}

}  // namespace ubq
