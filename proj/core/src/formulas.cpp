#include "ubq/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ubq {

namespace {

const double kLog2Log3 = std::log(2.0) / std::log(3.0);

void check_sorted(const std::vector<double>& tau) {
  if (tau.empty()) throw Error(ErrorCode::kInvalidArgument, "tau must be non-empty");
  for (std::size_t i = 1; i < tau.size(); ++i) {
    if (tau[i] < tau[i - 1]) throw Error(ErrorCode::kInvalidArgument, "tau must be sorted ascending");
  }
  if (tau[0] < 1.0) throw Error(ErrorCode::kInvalidArgument, "tau_1 must be >= 1");
}

}  // namespace

const char* to_string(FormulaId id) {
  switch (id) {
    case FormulaId::kShrunkBall: return "shrunk_ball";
    case FormulaId::kRectangle: return "rectangle";
    case FormulaId::kTarget: return "target";
    case FormulaId::kMahler: return "mahler";
    case FormulaId::kJarnik: return "jarnik";
  }
  return "unknown";
}

BoundResult shrunk_ball_bound(double dim_mu, double delta) {
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 1");
  if (!(dim_mu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dim_mu must be positive");
  return BoundResult{dim_mu / delta, FormulaId::kShrunkBall, {{"dim_mu", dim_mu}, {"delta", delta}}, false, false};
}

BoundResult rect_bound(double dim_mu, const std::vector<double>& tau) {
  check_sorted(tau);
  if (!(dim_mu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dim_mu must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tau.size(); ++i) {
    double num = dim_mu;
    for (std::size_t j = 0; j <= i; ++j) num += tau[i] - tau[j];
    best = std::min(best, num / tau[i]);
  }
  BoundResult r{best, FormulaId::kRectangle, {{"dim_mu", dim_mu}}, false, false};
  for (std::size_t i = 0; i < tau.size(); ++i) r.inputs.emplace_back("tau" + std::to_string(i + 1), tau[i]);
  return r;
}

BoundResult target_bound(const std::vector<double>& ratios, double delta, std::size_t d) {
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 1");
  const double s = similarity_dimension(ratios);
  if (s > static_cast<double>(d) + 1e-12) {
    throw Error(ErrorCode::kPrecondition,
                "the shrinking-target formula assumes similarity dimension at most d");
  }
  return BoundResult{std::min(s, static_cast<double>(d)) / delta, FormulaId::kTarget,
                     {{"dim_sim", s}, {"delta", delta}, {"d", static_cast<double>(d)}}, true, false};
}

BoundResult mahler_bound(double delta) {
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 1");
  const double v = std::min(kLog2Log3, 1.0 / delta);
  return BoundResult{v, FormulaId::kMahler, {{"delta", delta}}, true, delta <= 1.0 / kLog2Log3};
}

BoundResult jarnik_bound(double delta) {
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 1");
  return BoundResult{1.0 / delta, FormulaId::kJarnik, {{"delta", delta}}, true, false};
}

CriticalExponent critical_exponent(const Ball& B, const RegionSet& U, const CylinderMeasure& mu,
                                   double tol, int max_level) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  const double target = mu.ball_mass(B).lo;
  if (!(target > 0.0)) throw Error(ErrorCode::kPrecondition, "the ball has zero lo-mass");
  const EssentialContent ec(U, mu, max_level);
  CriticalExponent out;
  auto holds = [&](double s) {
    ++out.evaluations;
    return ec.upper(s) >= target;
  };
  double lo = 0.0;
  double hi = static_cast<double>(mu.dim());
  if (!holds(lo)) {
    out.zero_content = true;
    out.hi = 0.0;
    return out;
  }
  if (holds(hi)) {
    out.lo = out.hi = out.value = hi;
    return out;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.value = 0.5 * (lo + hi);
  return out;
}

TExponent t_exponent(const CylinderMeasure& mu, const BallFamily& window, double delta, double eps,
                     double dim, int base, int max_level) {
  if (window.empty()) throw Error(ErrorCode::kEmptyInput, "t_exponent needs a non-empty window");
  if (!(eps > 0.0 && eps < dim)) throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, dim)");
  TExponent out;
  out.t_eps = out.t_half = -std::numeric_limits<double>::infinity();
  for (const auto& b : window.balls) {
    const Ball shrunk = shrink_ball(b, delta);
    const EssentialContent ec(box_cover(shrunk.box(), base, max_level), mu, max_level);
    const double logd = std::log(shrunk.diameter());
    const double a = std::log(ec.upper(dim - eps)) / logd;
    const double h = std::log(ec.upper(dim - 0.5 * eps)) / logd;
    out.per_ball.push_back(a);
    out.t_eps = std::max(out.t_eps, a);
    out.t_half = std::max(out.t_half, h);
  }
  out.t_limit = 2.0 * out.t_half - out.t_eps;
  out.s_delta = dim * dim / (delta * out.t_limit);
  return out;
}

}  // namespace ubq
