// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "generators.hpp"
#include "ubq/cantor.hpp"
#include "ubq/content.hpp"
#include "ubq/covering.hpp"
#include "ubq/formulas.hpp"
#include "ubq/ifs.hpp"
#include "ubq/limsup.hpp"
#include "ubq/stats.hpp"

namespace {

using namespace ubq;
using Clock = std::chrono::steady_clock;

const double kLog2Log3 = std::log(2.0) / std::log(3.0);

// Pinned tolerances and time budgets.
constexpr double kSimDimTol = 1e-10;
constexpr double kSimDimBudgetMs = 1.0;
constexpr double kCantorContentTol = 1e-9;
constexpr double kCantorContentBudgetS = 1.0;
constexpr double kRectSlopeTol = 0.05;
constexpr double kRectBudgetS = 30.0;
constexpr double kEssentialSlopeTol = 0.05;
constexpr double kEssentialBudgetS = 60.0;
constexpr double kJarnikTol = 0.1;
constexpr double kJarnikBudgetS = 120.0;
constexpr double kMahlerFloor = 0.01;
constexpr double kMahlerSlopeTol = 0.1;
constexpr double kMahlerBudgetS = 120.0;
constexpr double kCriticalTol = 1e-3;
constexpr double kCriticalProductTol = 2e-3;
constexpr double kCriticalBudgetS = 10.0;
constexpr double kMassRatioMax = 1.05;
constexpr double kConservationTol = 1e-12;
constexpr double kCantorBudgetS = 300.0;
constexpr double kPropertyBudgetS = 120.0;

constexpr std::uint64_t kMahlerSeed = 2024;
constexpr std::uint64_t kCantorSeed = 7;
constexpr std::uint64_t kMassSeed = 11;
constexpr std::uint64_t kPropertySeed = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome similarity_dimension_values() {
  struct Case {
    std::vector<double> ratios;
    double want;
  };
  const std::vector<Case> cases{{{1.0 / 3, 1.0 / 3}, kLog2Log3}, {{0.5, 0.25, 0.25}, 1.0}};
  Outcome out{true, ""};
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const double s = similarity_dimension(c.ratios);
    const double ms = seconds_since(t0) * 1e3;
    const double err = std::abs(s - c.want);
    out.pass = out.pass && err <= kSimDimTol && ms < kSimDimBudgetMs;
    out.detail += fmt("s=%.16g ", s) + fmt("err=%.2e ", err) + fmt("(%.3f ms) ", ms);
  }
  out.detail += fmt("tol=%.0e", kSimDimTol);
  return out;
}

Outcome cantor_content_identity() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) worst = std::max(worst, std::abs(content_upper(cantor_set(k), kLog2Log3, k) - 1.0));
  const double secs = seconds_since(t0);
  return {worst <= kCantorContentTol && secs < kCantorContentBudgetS,
          fmt("max|H-1|=%.2e ", worst) + fmt("tol=%.0e ", kCantorContentTol) + fmt("(%.3f s)", secs)};
}

Outcome rectangle_slope() {
  const std::vector<double> tau{1.0, 2.0};
  const double want = g_tau(tau, 1.5);
  const auto t0 = Clock::now();
  const auto rep = rect_content_slope(tau, 1.5, geometric_radii(0.25, 0.5, 6), 2, 14);
  const double secs = seconds_since(t0);
  // Same radii one level finer, shown for diagnosis only.
  const auto finer = rect_content_slope(tau, 1.5, geometric_radii(0.25, 0.5, 6), 2, 15);
  return {std::abs(rep.slope - want) <= kRectSlopeTol && secs < kRectBudgetS,
          fmt("slope=%.4f ", rep.slope) + fmt("g_tau=%.4f ", want) + fmt("tol=%.2f ", kRectSlopeTol) +
              fmt("(%.2f s) ", secs) + fmt("[level 15: %.4f]", finer.slope)};
}

Outcome essential_content_slope() {
  const auto mu = CylinderMeasure::cantor(18);
  const double s = mu.dimension();
  const auto t0 = Clock::now();
  std::vector<double> lx, ly;
  double pointwise = 0.0;
  for (int k = 3; k <= 9; ++k) {
    const Ball B{{0.0}, std::pow(3.0, -k)};
    const EssentialContent ec(box_cover(B.box(), 3, k + 2), mu, k + 2);
    const double up = ec.upper(s);
    lx.push_back(std::log(B.diameter()));
    ly.push_back(std::log(up));
    pointwise = std::log(up) / std::log(B.diameter());
  }
  const double slope = fit_line(lx, ly).slope;
  const double secs = seconds_since(t0);
  return {std::abs(slope - s) <= kEssentialSlopeTol && secs < kEssentialBudgetS,
          fmt("slope=%.6f ", slope) + fmt("dim=%.6f ", s) + fmt("tol=%.2f ", kEssentialSlopeTol) +
              fmt("(%.2f s) ", secs) + fmt("[log H/log|B| at r=3^-9: %.4f]", pointwise)};
}

Outcome jarnik_slope() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail;
  for (double delta : {1.5, 2.0}) {
    const auto boxes = rational_stage(256, 512, delta).boxes();
    const int level = matched_level(256, delta, 2);
    const double measured = matched_scale_dimension(boxes, 2, level);
    pass = pass && std::abs(measured - 1.0 / delta) <= kJarnikTol;
    detail += fmt("delta=%.1f: ", delta) + fmt("%.4f ", measured) + fmt("vs %.4f; ", 1.0 / delta);
  }
  const double secs = seconds_since(t0);
  return {pass && secs < kJarnikBudgetS, detail + fmt("tol=%.1f ", kJarnikTol) + fmt("(%.2f s)", secs)};
}

Outcome mahler_content() {
  const double delta = 1.3;
  const auto t0 = Clock::now();
  std::vector<double> lx, ly;
  double worst = std::numeric_limits<double>::infinity();
  int sampled = 0;
  for (std::uint64_t i = 0; sampled < 50; ++i) {
    std::mt19937_64 rng(derive_seed(kMahlerSeed, i));
    const auto q = std::uniform_int_distribution<std::int64_t>(2, 200)(rng);
    const auto p = std::uniform_int_distribution<std::int64_t>(0, q)(rng);
    MahlerTarget t;
    if (!mahler_target(p, q, delta, DigitFreqSpec::standard(), 10, t)) continue;
    ++sampled;
    const double c = content_upper(t.region, kLog2Log3, t.n_q + t.emitted);
    worst = std::min(worst, c * static_cast<double>(q * q));
    lx.push_back(std::log(static_cast<double>(q)));
    ly.push_back(std::log(c));
  }
  const double slope = fit_line(lx, ly).slope;
  const double secs = seconds_since(t0);
  const bool floor_ok = worst >= kMahlerFloor;
  const bool slope_ok = std::abs(slope + 2.0) <= kMahlerSlopeTol;
  return {floor_ok && slope_ok && secs < kMahlerBudgetS,
          fmt("min H*q^2=%.4f ", worst) + fmt(">= %.2f ", kMahlerFloor) + (floor_ok ? "ok; " : "FAILS; ") +
              fmt("slope=%.4f ", slope) + fmt("vs -2 tol=%.1f ", kMahlerSlopeTol) + (slope_ok ? "ok " : "FAILS ") +
              fmt("[-2 delta log2/log3 = %.4f] ", -2.0 * delta * kLog2Log3) + fmt("(%.2f s)", secs)};
}

Outcome critical_exponent_products() {
  const auto mu = CylinderMeasure::lebesgue(1, 2, 24);
  const Ball B{{0.0}, 1.0 / 16};
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail;
  for (double delta : {1.0, 1.5, 2.0, 3.0}) {
    const RegionSet U = box_cover(shrink_ball(B, delta).box(), 2, 16);
    const auto ce = critical_exponent(B, U, mu, kCriticalTol, 16);
    const double prod = ce.value * delta;
    pass = pass && std::abs(prod - 1.0) <= kCriticalProductTol;
    detail += fmt("%.5f ", prod);
  }
  const double secs = seconds_since(t0);
  return {pass && secs < kCriticalBudgetS,
          "s*delta = " + detail + fmt("tol=%.0e ", kCriticalProductTol) + fmt("(%.2f s)", secs)};
}

Outcome cantor_mass_bound() {
  const auto t0 = Clock::now();
  const auto mu = CylinderMeasure::lebesgue(1, 2, 50);
  const auto balls = rational_balls(400, 1.0);
  CantorParams params;
  params.seed = kCantorSeed;
  const CantorTree tree = build_cantor(mu, balls, shrunk_regions(balls, 2.0, 2, 50), params);
  const MassReport rep = mass_check(tree, mu, 10000, kMassSeed);
  double worst_generation = 0.0;
  for (int p = 1; p <= tree.params.depth(); ++p) {
    double total = 0.0;
    for (std::size_t i : tree.generation_nodes(p)) total += tree.nodes[i].eta;
    worst_generation = std::max(worst_generation, std::abs(total - 1.0));
  }
  const double conservation = std::max(rep.conservation_error, worst_generation);
  const double secs = seconds_since(t0);
  return {rep.max_ratio <= kMassRatioMax && conservation <= kConservationTol && secs < kCantorBudgetS,
          fmt("max eta/zeta=%.6f ", rep.max_ratio) + fmt("<= %.2f; ", kMassRatioMax) +
              fmt("conservation=%.1e ", conservation) + fmt("<= %.0e ", kConservationTol) +
              fmt("(%.1f s)", secs)};
}

Outcome property_suites() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(kPropertySeed);
  std::size_t failures = 0;

  // Content monotone in s and in inclusion, 1000 random pairs.
  for (int i = 0; i < 1000; ++i) {
    const int base = 2 + i % 2;
    const std::size_t d = 1 + i % 2;
    const RegionSet F = testgen::random_cells(rng, base, d, d == 1 ? 5 : 3, testgen::uniform(rng, 0.1, 0.6));
    const RegionSet E = testgen::random_subset(rng, F, testgen::uniform(rng, 0.2, 0.9));
    const double s = testgen::uniform(rng, 0.0, static_cast<double>(d));
    const double s2 = s + testgen::uniform(rng, 0.0, 1.0);
    const int L = F.max_level() + 1;
    if (content_upper(E, s, L) > content_upper(F, s, L) + 1e-12) ++failures;
    if (content_upper(F, s2, L) > content_upper(F, s, L) + 1e-12) ++failures;
  }
  const std::size_t monotone_failures = failures;

  // Frostman certificate on every cube of the tree down to max_level.
  for (int i = 0; i < 50; ++i) {
    const int base = 2 + i % 2;
    const RegionSet E = testgen::random_cells(rng, base, 1, 4, 0.3);
    const double s = testgen::uniform(rng, 0.05, 1.0);
    const int L = 6;
    const auto m = frostman_lower(E, s, L);
    std::int64_t side = 1;
    for (int k = 0; k <= L; ++k, side *= base)
      for (std::int64_t c = 0; c < side; ++c) {
        const BadicCube q{base, k, {c}};
        if (m.cube_mass(q) > std::pow(q.diameter(), s) * (1 + 1e-12)) ++failures;
      }
    for (const auto& [q, mass] : m.node_masses())
      if (mass > std::pow(q.diameter(), s) * (1 + 1e-12)) ++failures;
  }
  const std::size_t frostman_failures = failures - monotone_failures;

  // Besicovitch post-hoc verifier on 100 random families.
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 1 + i % 2;
    const auto f = testgen::random_family(rng, 20 + static_cast<std::size_t>(i), d, 0.002, 0.2);
    const double v = testgen::uniform(rng, 0.1, 1.0);
    if (!verify_besicovitch(f, besicovitch_families(f, v), v).ok()) ++failures;
  }
  const std::size_t besicovitch_failures = failures - monotone_failures - frostman_failures;

  // Concavity on 100 random (A, s, delta).
  const auto leb = CylinderMeasure::lebesgue(1, 2, 16);
  const auto cantor = CylinderMeasure::cantor(10);
  for (int i = 0; i < 100; ++i) {
    const bool use_cantor = i % 2 == 1;
    const CylinderMeasure& mu = use_cantor ? cantor : leb;
    const RegionSet A = testgen::random_cells(rng, use_cantor ? 3 : 2, 1, 4, testgen::uniform(rng, 0.2, 0.8));
    const double s = testgen::uniform(rng, 0.05, mu.dimension());
    const double delta = testgen::uniform(rng, 1.0, 3.0);
    if (!concavity_check(A, mu, s, delta, 8).pass) ++failures;
  }
  const std::size_t concavity_failures =
      failures - monotone_failures - frostman_failures - besicovitch_failures;

  // mu_ac_check monotone in C.
  const auto leb12 = CylinderMeasure::lebesgue(1, 2, 12);
  const std::vector<RegionSet> omegas{RegionSet::from_cubes(2, 1, {BadicCube{2, 1, {0}}}),
                                      RegionSet::from_cubes(2, 1, {BadicCube{2, 2, {3}}}),
                                      RegionSet::from_cubes(2, 1, {BadicCube{2, 3, {5}}})};
  for (int i = 0; i < 100; ++i) {
    const auto f = testgen::random_family(rng, 60, 1, 0.003, 0.05);
    const double C = testgen::uniform(rng, 0.05, 1.0);
    const double C2 = C * testgen::uniform(rng, 0.05, 1.0);
    const bool hi = mu_ac_check(f, leb12, omegas, {0, 15}, C).pass;
    const bool lo = mu_ac_check(f, leb12, omegas, {0, 15}, C2).pass;
    if (hi && !lo) ++failures;
  }
  const std::size_t muac_failures =
      failures - monotone_failures - frostman_failures - besicovitch_failures - concavity_failures;

  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "failures: monotonicity %zu, frostman %zu, besicovitch %zu, concavity %zu, mu-ac %zu (%.1f s)",
                monotone_failures, frostman_failures, besicovitch_failures, concavity_failures, muac_failures, secs);
  return {failures == 0 && secs < kPropertyBudgetS, buf};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"similarity-dimension", similarity_dimension_values},
      {"cantor-content-identity", cantor_content_identity},
      {"rectangle-content-exponent", rectangle_slope},
      {"essential-content-slope", essential_content_slope},
      {"jarnik-slope", jarnik_slope},
      {"mahler-content-bound", mahler_content},
      {"critical-exponent", critical_exponent_products},
      {"cantor-mass-bound", cantor_mass_bound},
      {"property-suites", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("criterion %zu %-28s %s  %s\n", i + 1, criteria[i].name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
