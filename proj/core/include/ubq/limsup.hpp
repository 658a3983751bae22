#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ubq/covering.hpp"
#include "ubq/ifs.hpp"
#include "ubq/region_set.hpp"

namespace ubq {

/// Balls B(p/q, q^{-2 delta}) for 1 <= q <= q_max, 0 <= p <= q, ordered by
/// (q, p). All pairs are kept, reduced or not.
BallFamily rational_balls(std::int64_t q_max, double delta);

/// Members of rational_balls with q_lo <= q <= q_hi, keeping their global indices.
BallFamily rational_window(std::int64_t q_lo, std::int64_t q_hi, double delta);

/// Sequence index of (p, q) in rational_balls.
std::size_t rational_index(std::int64_t p, std::int64_t q);

/// Balls B(f_w(x), c_w^delta) for 1 <= |w| <= depth, by length then lexicographically.
BallFamily shrinking_targets(const IFS& ifs, const Point& x, double delta, int depth);

struct DigitFreqSpec {
  std::function<double(std::int64_t)> eps;  // eps_q, positive and decreasing to 0

  /// eps_q = 1 / log(3 + q).
  static DigitFreqSpec standard();
};

struct MahlerTarget {
  std::int64_t p = 0;
  std::int64_t q = 0;
  int n_q = 0;         // generation of T
  BadicCube T;         // leftmost triadic interval of generation n_q in the ball
  int ones = 0;        // count of digit 1 among the digits of T
  double eps = 0.0;
  std::int64_t N = 0;  // extra generations needed for frequency <= eps
  int emitted = 0;     // extra generations actually emitted
  bool truncated = false;
  RegionSet region;    // F_T(Omega_emitted), base 3
};

struct MahlerStage {
  std::vector<MahlerTarget> targets;
  std::vector<std::pair<std::int64_t, std::int64_t>> skipped;  // (p, q) with no fitting T
};

/// floor(log_3(q^{2 delta})) + 1.
int mahler_generation(std::int64_t q, double delta);

/// Minimal N >= 0 with ones / (n + N) <= eps.
std::int64_t mahler_extra_generations(int ones, int n, double eps);

/// U_{p,q,delta}. Returns false when no generation-n_q triadic interval fits in
/// the ball. When N exceeds max_extra only max_extra generations are emitted,
/// which gives a superset of U with the same log2/log3-content.
bool mahler_target(std::int64_t p, std::int64_t q, double delta, const DigitFreqSpec& spec, int max_extra,
                   MahlerTarget& out);

MahlerStage mahler_targets(std::int64_t q_max, double delta, const DigitFreqSpec& spec = DigitFreqSpec::standard(),
                           int max_extra = 10);

/// Base-b digits of the cube's first coordinate, most significant first.
std::vector<int> cube_digits(const BadicCube& cube);

using StageRegion = std::variant<Ball, AnisoRect, RegionSet>;

struct LimsupStage {
  std::size_t first = 0;  // window of sequence indices [first, last)
  std::size_t last = 0;
  std::vector<StageRegion> regions;
  std::string generator_id;
  std::vector<std::pair<std::string, double>> params;

  std::size_t dim() const;
  std::vector<Box> boxes() const;
};

LimsupStage rational_stage(std::int64_t q_lo, std::int64_t q_hi, double delta);

struct BoxCount {
  std::vector<int> levels;
  std::vector<double> counts;
  double slope = 0.0;
  double r2 = 0.0;
};

/// Number of level-k cells of [0,1]^d whose interior meets the interior of some box.
std::uint64_t count_cells(const std::vector<Box>& boxes, int base, int level);

/// Least-squares slope of log N(k) against k log b over [level_lo, level_hi].
BoxCount boxcount_dimension(const std::vector<Box>& boxes, int base, int level_lo, int level_hi);
BoxCount boxcount_dimension(const LimsupStage& stage, int base, int level_lo, int level_hi);
BoxCount boxcount_dimension(const RegionSet& set, int level_lo, int level_hi);

/// log N(k) / (k log b) at a single level.
double matched_scale_dimension(const std::vector<Box>& boxes, int base, int level);

/// Level k with b^{-k} closest to q^{-2 delta}.
int matched_level(std::int64_t q, double delta, int base);

}  // namespace ubq
