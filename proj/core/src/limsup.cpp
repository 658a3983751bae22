#include "ubq/limsup.hpp"

#include <algorithm>
#include <cmath>

#include "ubq/stats.hpp"

namespace ubq {

namespace {

double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

// Half-open range of level cells whose interior meets (lo, hi), clipped to [0, n).
std::pair<std::int64_t, std::int64_t> cell_range(double lo, double hi, std::int64_t n) {
  const double a = snap(lo * static_cast<double>(n));
  const double b = snap(hi * static_cast<double>(n));
  if (!(b > a)) return {0, 0};
  const auto first = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(a)));
  const auto last = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::ceil(b)));
  if (last <= first) return {0, 0};
  return {first, last};
}

void words_of_length(std::size_t m, int len, Word& cur, std::vector<Word>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = 0; i < m; ++i) {
    cur.push_back(static_cast<int>(i));
    words_of_length(m, len, cur, out);
    cur.pop_back();
  }
}

}  // namespace

BallFamily rational_balls(std::int64_t q_max, double delta) {
  if (q_max < 1) throw Error(ErrorCode::kInvalidArgument, "q_max must be >= 1");
  return rational_window(1, q_max, delta);
}

BallFamily rational_window(std::int64_t q_lo, std::int64_t q_hi, double delta) {
  if (q_lo < 1 || q_hi < q_lo) throw Error(ErrorCode::kInvalidArgument, "need 1 <= q_lo <= q_hi");
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 1");
  BallFamily f;
  f.radii_to_zero = true;
  for (std::int64_t q = q_lo; q <= q_hi; ++q) {
    const double r = std::pow(static_cast<double>(q), -2.0 * delta);
    for (std::int64_t p = 0; p <= q; ++p) {
      f.balls.push_back(Ball{{static_cast<double>(p) / static_cast<double>(q)}, r});
      f.indices.push_back(rational_index(p, q));
    }
  }
  return f;
}

std::size_t rational_index(std::int64_t p, std::int64_t q) {
  return static_cast<std::size_t>((q - 1) * (q + 2) / 2 + p);
}

BallFamily shrinking_targets(const IFS& ifs, const Point& x, double delta, int depth) {
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 1");
  if (depth < 0) throw Error(ErrorCode::kInvalidArgument, "depth must be >= 0");
  if (x.size() != ifs.dim()) throw Error(ErrorCode::kInvalidArgument, "point dimension mismatch");
  std::vector<Ball> balls;
  for (int len = 1; len <= depth; ++len) {
    std::vector<Word> words;
    Word cur;
    words_of_length(ifs.size(), len, cur, words);
    for (const auto& w : words) balls.push_back(Ball{ifs.apply(w, x), std::pow(ifs.word_ratio(w), delta)});
  }
  BallFamily f = BallFamily::from_balls(std::move(balls));
  f.radii_to_zero = true;
  return f;
}

DigitFreqSpec DigitFreqSpec::standard() {
  return DigitFreqSpec{[](std::int64_t q) { return 1.0 / std::log(3.0 + static_cast<double>(q)); }};
}

int mahler_generation(std::int64_t q, double delta) {
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "q must be >= 1");
  return static_cast<int>(std::floor(2.0 * delta * std::log(static_cast<double>(q)) / std::log(3.0) + 1e-12)) + 1;
}

std::int64_t mahler_extra_generations(int ones, int n, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  if (ones == 0) return 0;
  auto N = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(ones / eps - n - 1e-12)));
  while (ones > eps * static_cast<double>(n + N)) ++N;
  while (N > 0 && ones <= eps * static_cast<double>(n + N - 1)) --N;
  return N;
}

bool mahler_target(std::int64_t p, std::int64_t q, double delta, const DigitFreqSpec& spec, int max_extra,
                   MahlerTarget& out) {
  if (q < 1 || p < 0 || p > q) throw Error(ErrorCode::kInvalidArgument, "need 0 <= p <= q, q >= 1");
  if (!(delta >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 1");
  if (max_extra < 0) throw Error(ErrorCode::kInvalidArgument, "max_extra must be >= 0");
  const int n = mahler_generation(q, delta);
  const std::int64_t L = ipow_int(3, n);
  const double c = static_cast<double>(p) / static_cast<double>(q);
  const double r = std::pow(static_cast<double>(q), -2.0 * delta);
  const double lo = std::max(0.0, c - r);
  const double hi = std::min(1.0, c + r);
  const auto j = static_cast<std::int64_t>(std::ceil(snap(lo * static_cast<double>(L))));
  if (j + 1 > L || static_cast<double>(j + 1) / static_cast<double>(L) > hi + 1e-12) return false;

  out = MahlerTarget{};
  out.p = p;
  out.q = q;
  out.n_q = n;
  out.T = BadicCube{3, n, {j}};
  for (int dgt : cube_digits(out.T)) out.ones += dgt == 1 ? 1 : 0;
  out.eps = spec.eps(q);
  out.N = mahler_extra_generations(out.ones, n, out.eps);
  out.emitted = static_cast<int>(std::min<std::int64_t>(out.N, max_extra));
  out.truncated = out.emitted < out.N;
  out.region = RegionSet{3, 1, {}};
  const std::int64_t scale = ipow_int(3, out.emitted);
  for (const auto& cell : cantor_set(out.emitted).cubes) {
    out.region.cubes.push_back(BadicCube{3, n + out.emitted, {j * scale + cell.coords[0]}});
  }
  return true;
}

MahlerStage mahler_targets(std::int64_t q_max, double delta, const DigitFreqSpec& spec, int max_extra) {
  if (q_max < 1) throw Error(ErrorCode::kInvalidArgument, "q_max must be >= 1");
  MahlerStage st;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    for (std::int64_t p = 0; p <= q; ++p) {
      MahlerTarget t;
      if (mahler_target(p, q, delta, spec, max_extra, t)) {
        st.targets.push_back(std::move(t));
      } else {
        st.skipped.emplace_back(p, q);
      }
    }
  }
  return st;
}

std::vector<int> cube_digits(const BadicCube& cube) {
  std::vector<int> d(static_cast<std::size_t>(cube.level));
  std::int64_t c = cube.coords.at(0);
  for (int i = cube.level - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<int>(c % cube.base);
    c /= cube.base;
  }
  return d;
}

std::size_t LimsupStage::dim() const {
  if (regions.empty()) return 0;
  return std::visit(
      [](const auto& r) -> std::size_t {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RegionSet>) {
          return r.dim;
        } else {
          return region_box(r).lo.size();
        }
      },
      regions.front());
}

std::vector<Box> LimsupStage::boxes() const {
  std::vector<Box> out;
  for (const auto& reg : regions) {
    std::visit(
        [&](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, RegionSet>) {
            for (const auto& c : r.cubes) out.push_back(c.box());
          } else {
            out.push_back(region_box(r));
          }
        },
        reg);
  }
  return out;
}

LimsupStage rational_stage(std::int64_t q_lo, std::int64_t q_hi, double delta) {
  const BallFamily f = rational_window(q_lo, q_hi, delta);
  LimsupStage st;
  st.first = f.indices.front();
  st.last = f.indices.back() + 1;
  st.generator_id = "rational_balls";
  st.params = {{"q_lo", static_cast<double>(q_lo)}, {"q_hi", static_cast<double>(q_hi)}, {"delta", delta}};
  st.regions.assign(f.balls.begin(), f.balls.end());
  return st;
}

std::uint64_t count_cells(const std::vector<Box>& boxes, int base, int level) {
  if (boxes.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to count");
  const std::size_t d = boxes.front().lo.size();
  const std::int64_t n = ipow_int(base, level);
  if (d == 1) {
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    ranges.reserve(boxes.size());
    for (const auto& b : boxes) {
      auto rg = cell_range(b.lo[0], b.hi[0], n);
      if (rg.second > rg.first) ranges.push_back(rg);
    }
    std::sort(ranges.begin(), ranges.end());
    std::uint64_t total = 0;
    std::int64_t reach = 0;
    for (const auto& [a, b] : ranges) {
      const std::int64_t from = std::max(a, reach);
      if (b > from) total += static_cast<std::uint64_t>(b - from);
      reach = std::max(reach, b);
    }
    return total;
  }
  std::vector<std::vector<std::int64_t>> cells;
  for (const auto& b : boxes) {
    std::vector<std::pair<std::int64_t, std::int64_t>> rg(d);
    bool empty = false;
    for (std::size_t i = 0; i < d; ++i) {
      rg[i] = cell_range(b.lo[i], b.hi[i], n);
      empty = empty || rg[i].second <= rg[i].first;
    }
    if (empty) continue;
    std::vector<std::int64_t> cur(d);
    for (std::size_t i = 0; i < d; ++i) cur[i] = rg[i].first;
    for (;;) {
      cells.push_back(cur);
      std::size_t i = 0;
      for (; i < d; ++i) {
        const std::size_t ax = d - 1 - i;
        if (++cur[ax] < rg[ax].second) break;
        cur[ax] = rg[ax].first;
      }
      if (i == d) break;
    }
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

BoxCount boxcount_dimension(const std::vector<Box>& boxes, int base, int level_lo, int level_hi) {
  if (boxes.empty()) throw Error(ErrorCode::kEmptyInput, "empty stage");
  if (level_hi - level_lo + 1 < 4) throw Error(ErrorCode::kInvalidArgument, "at least 4 levels are required");
  BoxCount out;
  std::vector<double> x, y;
  for (int k = level_lo; k <= level_hi; ++k) {
    const auto N = static_cast<double>(count_cells(boxes, base, k));
    out.levels.push_back(k);
    out.counts.push_back(N);
    x.push_back(k * std::log(static_cast<double>(base)));
    y.push_back(std::log(std::max(N, 1.0)));
  }
  const LinearFit fit = fit_line(x, y);
  out.slope = fit.slope;
  out.r2 = fit.r2;
  return out;
}

BoxCount boxcount_dimension(const LimsupStage& stage, int base, int level_lo, int level_hi) {
  return boxcount_dimension(stage.boxes(), base, level_lo, level_hi);
}

BoxCount boxcount_dimension(const RegionSet& set, int level_lo, int level_hi) {
  std::vector<Box> boxes;
  for (const auto& c : set.cubes) boxes.push_back(c.box());
  return boxcount_dimension(boxes, set.base, level_lo, level_hi);
}

double matched_scale_dimension(const std::vector<Box>& boxes, int base, int level) {
  if (level < 1) throw Error(ErrorCode::kInvalidArgument, "level must be >= 1");
  const auto N = static_cast<double>(count_cells(boxes, base, level));
  return std::log(N) / (level * std::log(static_cast<double>(base)));
}

int matched_level(std::int64_t q, double delta, int base) {
  return static_cast<int>(std::lround(2.0 * delta * std::log(static_cast<double>(q)) / std::log(static_cast<double>(base))));
}

}  // namespace ubq
