#pragma once

#include <cstdint>
#include <vector>

#include "ubq/covering.hpp"
#include "ubq/ifs.hpp"
#include "ubq/region_set.hpp"

namespace ubq {

struct CantorParams {
  double target = 0.5;                 // s_p = target - eps_p
  std::vector<double> eps{0.2, 0.15};  // one per generation, decreasing
  double select_ratio = 0.25;          // generation-1 selection must reach this mu-mass
  double t = 5.5;                      // intermediate shrink factor, in (5,6)
  double rho_factor = 0.2;
  int frostman_extra = 10;             // levels below U used for E_U
  std::size_t max_centers = 1024;
  double q4 = 0.0;                     // 0: use the largest family count observed
  std::uint64_t seed = 1;

  int depth() const { return static_cast<int>(eps.size()); }
  double s(int p) const { return target - eps.at(static_cast<std::size_t>(p - 1)); }
  void validate() const;
};

struct GenerationNode {
  enum class Kind { kRoot, kSet, kIntermediate };
  Kind kind = Kind::kRoot;
  int generation = 0;         // intermediates carry the generation built inside them
  std::size_t seq_index = 0;  // sequence index n of U_n (set nodes)
  RegionSet U;                // set nodes and root
  Ball ball;                  // B^[U] for set nodes, the ball itself for intermediates
  double eta = 0.0;
  double mu_ball = 0.0;       // midpoint mass of `ball`
  std::size_t parent = 0;
  std::vector<std::size_t> children;

  bool content_ok = true;    // upper essential content of U at s_p >= mu_lo(B^[U])
  bool kernel_ok = true;     // mu(B^[U]) <= kappa |U|^{s_p}
  bool majornani_ok = true;  // 2 Q4 eta(B) / mu(B) <= |B^[U]|^{-eps_p}
  bool coupling_ok = true;   // r_x^{-eps} >= 5^d 4 Q1 / C eta(U) / mu(B^[U])
};

struct GenerationStats {
  std::size_t sets = 0;
  std::size_t intermediates = 0;  // built inside the previous generation
  double min_diameter = 0.0;      // min |U| over the generation
  double min_select_ratio = 0.0;  // worst mu(union of chosen balls) / mu(parent)
  std::size_t majornani_violations = 0;
  std::size_t coupling_violations = 0;
};

struct CantorTree {
  std::vector<GenerationNode> nodes;  // nodes[0] is the root
  CantorParams params;
  std::vector<GenerationStats> generations;  // index p - 1
  double q4 = 1.0;
  double q1 = 1.0;
  std::size_t dim = 1;

  std::vector<std::size_t> generation_nodes(int p) const;
  /// Largest |sum of child eta - eta| over internal nodes.
  double conservation_error() const;
};

/// U_n for each ball: the inner b-adic approximation of the ball shrunk to
/// radius r^delta, at the level giving 8 cells per radius (capped at max_level).
std::vector<RegionSet> shrunk_regions(const BallFamily& balls, double delta, int base, int max_level);

/// Builds generations W_1..W_P. Throws kInsufficientFamily naming the generation
/// that could not be populated.
CantorTree build_cantor(const CylinderMeasure& mu, const BallFamily& balls, const std::vector<RegionSet>& U_of,
                        const CantorParams& params);

struct GaugeParams {
  std::vector<double> s;         // s_p
  std::vector<double> eps;       // eps_p
  std::vector<double> brackets;  // D_p = min |W_p| / 3
  double q4 = 1.0;
  double ten_d = 10.0;

  static GaugeParams from_tree(const CantorTree& tree);
};

/// 1 above D_1, 2 Q4 10^d r^{s_p - 5 eps_p} on [D_{p+1}, D_p), the last power
/// law below D_P, and 0 at 0.
double gauge(double r, const GaugeParams& g);

/// eta(A) by descent; partially covered leaves contribute mu-proportionally.
double eta_of(const CantorTree& tree, const CylinderMeasure& mu, const Ball& A);

struct MassReport {
  std::size_t samples = 0;
  double max_ratio = 0.0;  // max eta(A) / gauge(|A|)
  Ball worst;
  std::size_t violations = 0;  // ratio > 1 + tolerance
  double tolerance = 0.05;
  double conservation_error = 0.0;
  bool pass() const { return violations == 0 && conservation_error <= 1e-12; }
};

/// Random balls with log-uniform radius; half the centers uniform in [0,1]^d,
/// half near generation-P sets. Each sample has its own seeded stream.
MassReport mass_check(const CantorTree& tree, const CylinderMeasure& mu, std::size_t samples, std::uint64_t seed,
                      double tolerance = 0.05, unsigned threads = 0);

}  // namespace ubq
