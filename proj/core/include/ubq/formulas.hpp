#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ubq/content.hpp"
#include "ubq/covering.hpp"
#include "ubq/ifs.hpp"

namespace ubq {

enum class FormulaId { kShrunkBall, kRectangle, kTarget, kMahler, kJarnik };

const char* to_string(FormulaId id);

struct BoundResult {
  double value = 0.0;
  FormulaId formula_id = FormulaId::kShrunkBall;
  std::vector<std::pair<std::string, double>> inputs;
  // Equality holds (not just the lower bound) for the target, Mahler and
  // Jarnik formulas only.
  bool equality_claimed = false;
  bool saturated = false;
};

/// dim_mu / delta.
BoundResult shrunk_ball_bound(double dim_mu, double delta);
/// min_i (dim_mu + sum_{j<=i} (tau_i - tau_j)) / tau_i.
BoundResult rect_bound(double dim_mu, const std::vector<double>& tau);
/// min{dim_sim, d} / delta; throws when dim_sim > d.
BoundResult target_bound(const std::vector<double>& ratios, double delta, std::size_t d);
/// min{log 2 / log 3, 1 / delta}; saturated when delta <= log 3 / log 2.
BoundResult mahler_bound(double delta);
/// 1 / delta.
BoundResult jarnik_bound(double delta);

struct CriticalExponent {
  double lo = 0.0;   // predicate holds
  double hi = 0.0;   // predicate fails
  double value = 0.0;
  bool zero_content = false;
  int evaluations = 0;
};

/// Bisection for sup{s : upper essential content of U at s >= mu_lo(B)} on [0, d].
CriticalExponent critical_exponent(const Ball& B, const RegionSet& U, const CylinderMeasure& mu,
                                   double tol, int max_level);

struct TExponent {
  double t_eps = 0.0;       // max over the window at eps
  double t_half = 0.0;      // same at eps / 2
  double t_limit = 0.0;     // 2 t_half - t_eps
  double s_delta = 0.0;     // dim^2 / (delta t_limit)
  std::vector<double> per_ball;  // ratios at eps
};

/// max over the window of log(upper essential content of the open B^delta at
/// dim - eps) / log |B^delta|, at eps and eps/2 with a linear extrapolation in eps.
TExponent t_exponent(const CylinderMeasure& mu, const BallFamily& window, double delta, double eps,
                     double dim, int base, int max_level);

}  // namespace ubq
