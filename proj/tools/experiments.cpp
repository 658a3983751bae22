#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <json.hpp>

#include "ubq/cantor.hpp"
#include "ubq/content.hpp"
#include "ubq/error.hpp"
#include "ubq/formulas.hpp"
#include "ubq/limsup.hpp"
#include "ubq/stats.hpp"

namespace ubq::app {

namespace {

const double kLog2Log3 = std::log(2.0) / std::log(3.0);

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

SummaryRow within(const std::string& q, double predicted, double measured, double tol) {
  return {q, predicted, measured, tol, std::abs(measured - predicted) <= tol};
}

std::uint64_t require_seed(const Config& cfg) {
  if (!cfg.has("experiment", "seed")) throw Error(ErrorCode::kInvalidArgument, "this experiment is randomized: [experiment] seed is required");
  return static_cast<std::uint64_t>(cfg.get_int("experiment", "seed", 0));
}

ExperimentResult jarnik(const Config& cfg) {
  const double delta = cfg.get_number("params", "delta", 2.0);
  const auto q_lo = cfg.get_int("params", "q_lo", 256);
  const auto q_hi = cfg.get_int("params", "q_hi", 512);
  const double tol = cfg.get_number("params", "tolerance", 0.1);
  ExperimentResult r;
  r.claim = "dim_H of the limsup of B(p/q, q^-2delta) equals 1/delta";
  r.params = {{"delta", format_number(delta)}, {"q_lo", std::to_string(q_lo)}, {"q_hi", std::to_string(q_hi)}, {"base", "2"}};
  r.table.columns = {"q_lo", "q_hi", "level", "count", "ratio"};
  double measured = 0.0;
  for (std::int64_t q = std::max<std::int64_t>(1, q_lo / 8); q <= q_lo; q *= 2) {
    const auto boxes = rational_stage(q, q == q_lo ? q_hi : 2 * q, delta).boxes();
    const int level = matched_level(q, delta, 2);
    const double n = static_cast<double>(count_cells(boxes, 2, level));
    const double ratio = std::log(n) / (level * std::log(2.0));
    r.table.rows.push_back({static_cast<double>(q), static_cast<double>(q == q_lo ? q_hi : 2 * q), static_cast<double>(level), n, ratio});
    if (q == q_lo) measured = ratio;
  }
  r.summary.push_back(within("matched_scale_dimension", jarnik_bound(delta).value, measured, tol));
  return r;
}

ExperimentResult mahler(const Config& cfg) {
  const double delta = cfg.get_number("params", "delta", 1.2);
  const auto q_max = cfg.get_int("params", "q_max", 200);
  const auto samples = cfg.get_int("params", "samples", 50);
  const double floor_c = cfg.get_number("params", "floor", 0.01);
  const int max_extra = static_cast<int>(cfg.get_int("params", "max_extra", 10));
  const std::uint64_t seed = require_seed(cfg);
  const BoundResult bound = mahler_bound(delta);
  ExperimentResult r;
  r.claim = "dim_H of the Mahler limsup set is min(log2/log3, 1/delta)";
  r.params = {{"delta", format_number(delta)},
              {"q_max", std::to_string(q_max)},
              {"samples", std::to_string(samples)},
              {"floor", format_number(floor_c)},
              {"max_extra", std::to_string(max_extra)},
              {"bound", format_number(bound.value)},
              {"saturated", bound.saturated ? "true" : "false"}};
  r.table.columns = {"p", "q", "n_q", "N", "emitted", "content", "content_q2"};
  std::vector<double> lx, ly;
  double worst = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const auto q = std::uniform_int_distribution<std::int64_t>(2, q_max)(rng);
    const auto p = std::uniform_int_distribution<std::int64_t>(0, q)(rng);
    MahlerTarget t;
    if (!mahler_target(p, q, delta, DigitFreqSpec::standard(), max_extra, t)) continue;
    const double c = content_upper(t.region, kLog2Log3, t.n_q + t.emitted);
    const double scaled = c * static_cast<double>(q) * static_cast<double>(q);
    worst = std::min(worst, scaled);
    lx.push_back(std::log(static_cast<double>(q)));
    ly.push_back(std::log(c));
    r.table.rows.push_back({static_cast<double>(p), static_cast<double>(q), static_cast<double>(t.n_q),
                            static_cast<double>(t.N), static_cast<double>(t.emitted), c, scaled});
  }
  if (lx.size() < 2) throw Error(ErrorCode::kEmptyInput, "too few Mahler targets were sampled");
  r.summary.push_back({"content_q2_floor", floor_c, worst, 0.0, worst >= floor_c});
  r.summary.push_back(within("content_q_slope", -2.0 * delta * kLog2Log3, fit_line(lx, ly).slope, 0.1));
  return r;
}

ExperimentResult rects(const Config& cfg) {
  const auto tau = cfg.get_list("params", "tau", {1.0, 2.0});
  const int level = static_cast<int>(cfg.get_int("params", "max_level", 14));
  const double tol = cfg.get_number("params", "tolerance", 0.05);
  const auto radii = geometric_radii(cfg.get_number("params", "r0", 0.125), 0.5, static_cast<int>(cfg.get_int("params", "radii", 4)));
  const double d = static_cast<double>(tau.size());
  ExperimentResult r;
  r.claim = "the limsup of rectangles R_tau has dim_H >= the rectangle bound (Lebesgue, full measure)";
  r.params = {{"tau", join(tau)}, {"max_level", std::to_string(level)}, {"radii", join(radii)}};
  r.table.columns = {"s", "slope"};
  double lo = 0.0, hi = d;
  for (int it = 0; it < 12; ++it) {
    const double s = 0.5 * (lo + hi);
    const double slope = rect_content_slope(tau, s, radii, 2, level).slope;
    r.table.rows.push_back({s, slope});
    (slope < d ? lo : hi) = s;
  }
  r.summary.push_back(within("content_slope_crossing", rect_bound(d, tau).value, 0.5 * (lo + hi), tol));
  return r;
}

ExperimentResult targets(const Config& cfg) {
  const double delta = cfg.get_number("params", "delta", 2.0);
  const int depth = static_cast<int>(cfg.get_int("params", "depth", 10));
  const double tol = cfg.get_number("params", "tolerance", 0.1);
  const IFS ifs = IFS::middle_third();
  ExperimentResult r;
  r.claim = "dim_H of the shrinking-target limsup around the middle-third Cantor set is dim_H(K)/delta";
  r.params = {{"ifs", "middle_third"}, {"x", "0"}, {"delta", format_number(delta)}, {"depth", std::to_string(depth)}};
  r.table.columns = {"length", "level", "count", "ratio"};
  const BallFamily all = shrinking_targets(ifs, Point{0.0}, delta, depth);
  double measured = 0.0;
  std::size_t start = 0;
  for (int len = 1; len <= depth; ++len) {
    const std::size_t n = std::size_t{1} << len;
    std::vector<Box> boxes;
    for (std::size_t i = start; i < start + n; ++i) boxes.push_back(all.balls[i].box());
    start += n;
    if (len < 3) continue;
    const int level = static_cast<int>(std::lround(len * delta));
    const double count = static_cast<double>(count_cells(boxes, 3, level));
    measured = std::log(count) / (level * std::log(3.0));
    r.table.rows.push_back({static_cast<double>(len), static_cast<double>(level), count, measured});
  }
  r.summary.push_back(within("matched_scale_dimension", target_bound(ifs.ratios(), delta, 1).value, measured, tol));
  return r;
}

ExperimentResult cantor(const Config& cfg, unsigned threads) {
  const auto q_max = cfg.get_int("params", "q_max", 400);
  const double ball_delta = cfg.get_number("params", "ball_delta", 1.0);
  const double delta = cfg.get_number("params", "delta", 2.0);
  const auto samples = static_cast<std::size_t>(cfg.get_int("params", "samples", 10000));
  const double tol = cfg.get_number("params", "tolerance", 0.05);
  const auto mu = CylinderMeasure::lebesgue(1, 2, 50);
  const CantorTree tree = cantor_from_config(cfg, mu);
  const CantorParams& cp = tree.params;
  const MassReport rep = mass_check(tree, mu, samples, cp.seed, tol, threads);
  ExperimentResult r;
  r.claim = "the Cantor pre-measure satisfies eta(A) <= zeta(|A|)";
  r.params = {{"q_max", std::to_string(q_max)}, {"ball_delta", format_number(ball_delta)}, {"delta", format_number(delta)},
              {"target", format_number(cp.target)}, {"eps", join(cp.eps)}, {"t", format_number(cp.t)},
              {"samples", std::to_string(samples)}, {"q4", format_number(tree.q4)}, {"q1", format_number(tree.q1)}};
  r.table.columns = {"generation", "sets", "intermediates", "min_diameter", "min_select_ratio", "majornani_violations", "coupling_violations"};
  for (std::size_t p = 0; p < tree.generations.size(); ++p) {
    const auto& g = tree.generations[p];
    r.table.rows.push_back({static_cast<double>(p + 1), static_cast<double>(g.sets), static_cast<double>(g.intermediates),
                            g.min_diameter, g.min_select_ratio, static_cast<double>(g.majornani_violations),
                            static_cast<double>(g.coupling_violations)});
  }
  r.summary.push_back({"max_eta_over_gauge", 1.0, rep.max_ratio, tol, rep.max_ratio <= 1.0 + tol});
  r.summary.push_back({"conservation_error", 0.0, rep.conservation_error, 1e-12, rep.conservation_error <= 1e-12});
  return r;
}

ExperimentResult content_slopes(const Config& cfg) {
  const int k_lo = static_cast<int>(cfg.get_int("params", "k_lo", 3));
  const int k_hi = static_cast<int>(cfg.get_int("params", "k_hi", 9));
  const int depth = static_cast<int>(cfg.get_int("params", "depth_cap", 18));
  const double tol = cfg.get_number("params", "tolerance", 0.05);
  const auto mu = CylinderMeasure::cantor(depth);
  const double s = mu.dimension();
  ExperimentResult r;
  r.claim = "the essential content of cylinder balls scales like |B|^dim(mu)";
  r.params = {{"measure", "cantor"}, {"k_lo", std::to_string(k_lo)}, {"k_hi", std::to_string(k_hi)}, {"depth_cap", std::to_string(depth)}};
  r.table.columns = {"k", "radius", "upper", "pointwise"};
  std::vector<double> lx, ly;
  for (int k = k_lo; k <= k_hi; ++k) {
    const Ball B{{0.0}, std::pow(3.0, -k)};
    const EssentialContent ec(box_cover(B.box(), 3, k + 2), mu, k + 2);
    const double up = ec.upper(s);
    lx.push_back(std::log(B.diameter()));
    ly.push_back(std::log(up));
    r.table.rows.push_back({static_cast<double>(k), B.radius, up, std::log(up) / std::log(B.diameter())});
  }
  r.summary.push_back(within("essential_content_slope", s, fit_line(lx, ly).slope, tol));
  return r;
}

}  // namespace

bool ExperimentResult::pass() const {
  return !summary.empty() && std::all_of(summary.begin(), summary.end(), [](const SummaryRow& r) { return r.pass; });
}

std::vector<std::string> experiment_ids() {
  return {"jarnik", "mahler", "rects", "targets", "cantor", "content-slopes"};
}

ExperimentResult run_experiment(const Config& cfg, unsigned threads) {
  const std::string id = cfg.get_string("experiment", "id");
  ExperimentResult r;
  if (id == "jarnik") {
    r = jarnik(cfg);
  } else if (id == "mahler") {
    r = mahler(cfg);
  } else if (id == "rects") {
    r = rects(cfg);
  } else if (id == "targets") {
    r = targets(cfg);
  } else if (id == "cantor") {
    r = cantor(cfg, threads);
  } else if (id == "content-slopes") {
    r = content_slopes(cfg);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown experiment id '" + id + "'");
  }
  r.id = id;
  if (cfg.has("experiment", "seed")) r.params.insert(r.params.begin(), {"seed", cfg.get_string("experiment", "seed")});
  return r;
}

CantorParams cantor_params(const Config& cfg) {
  CantorParams cp;
  cp.target = cfg.get_number("params", "target", cp.target);
  cp.eps = cfg.get_list("params", "eps", cp.eps);
  cp.t = cfg.get_number("params", "t", cp.t);
  cp.rho_factor = cfg.get_number("params", "rho_factor", cp.rho_factor);
  cp.select_ratio = cfg.get_number("params", "select_ratio", cp.select_ratio);
  cp.max_centers = static_cast<std::size_t>(cfg.get_int("params", "max_centers", static_cast<std::int64_t>(cp.max_centers)));
  cp.seed = require_seed(cfg);
  return cp;
}

CantorTree cantor_from_config(const Config& cfg, const CylinderMeasure& mu) {
  const BallFamily balls = rational_balls(cfg.get_int("params", "q_max", 400), cfg.get_number("params", "ball_delta", 1.0));
  return build_cantor(mu, balls, shrunk_regions(balls, cfg.get_number("params", "delta", 2.0), 2, 50), cantor_params(cfg));
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_artifacts(const ExperimentResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path base = std::filesystem::path(dir) / result.id;
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + p.string() + "'");
    return out;
  };

  auto csv = open(base.string() + ".csv");
  csv << "# experiment: " << result.id << "\n# claim: " << result.claim << "\n";
  for (const auto& [k, v] : result.params) csv << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < result.table.columns.size(); ++i) csv << (i ? "," : "") << result.table.columns[i];
  csv << "\n";
  for (const auto& row : result.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << format_number(row[i]);
    csv << "\n";
  }

  auto jl = open(base.string() + ".summary.jsonl");
  nlohmann::ordered_json header;
  header["experiment"] = result.id;
  header["claim"] = result.claim;
  for (const auto& [k, v] : result.params) header["params"][k] = v;
  jl << header.dump() << "\n";
  for (const auto& row : result.summary) {
    nlohmann::ordered_json j;
    j["quantity"] = row.quantity;
    j["predicted"] = row.predicted;
    j["measured"] = row.measured;
    j["tolerance"] = row.tolerance;
    j["pass"] = row.pass;
    jl << j.dump() << "\n";
  }

  std::ofstream log(base.string() + ".log", std::ios::app);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  log << stamp << " " << result.id << (result.pass() ? " pass" : " fail") << "\n";
}

}  // namespace ubq::app
