#pragma once

#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "ubq/geometry.hpp"
#include "ubq/ifs.hpp"
#include "ubq/region_set.hpp"

namespace ubq {

struct CoverEstimate {
  double s = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  Cover witness;  // filled only when requested
  std::size_t witness_count = 0;
  // Total mass of the certifying measure and the constant it is divided by.
  double certificate_mass = 0.0;
  double certificate_constant = 0.0;
  // Set when s exceeds the measure's dimension: lower is 0 and decay_uppers
  // holds the upper bounds at max_level - 2, max_level - 1, max_level.
  bool decay_certificate = false;
  std::vector<double> decay_uppers;
};

/// Exact minimum of sum |Q|^s over b-adic antichain covers of E by cubes of
/// level <= max_level. Cubes larger than max_diameter are not used.
double content_upper(const RegionSet& E, double s, int max_level,
                     double max_diameter = std::numeric_limits<double>::infinity());

/// content_upper plus the Frostman lower bound, optionally with the optimal cover.
CoverEstimate content_estimate(const RegionSet& E, double s, int max_level, bool with_witness = false);

namespace detail {
struct CubeTree;
}

/// Mass distribution on E with m(Q) <= |Q|^s on every b-adic cube and total
/// mass content_upper(E, s). Mass inside a full cube of E is spread uniformly.
class FrostmanMeasure {
 public:
  FrostmanMeasure(const RegionSet& E, double s, int max_level);

  double s() const { return s_; }
  double total() const { return total_; }
  /// Grid-to-ball comparison constant (2b)^d.
  double kernel_constant() const;
  /// total / kernel_constant when s <= d, else 0 (every bounded set has zero content).
  double lower_bound() const;
  double cube_mass(const BadicCube& cube) const;
  double box_mass(const Box& box) const;
  /// Every explicit tree cube with its mass.
  std::vector<std::pair<BadicCube, double>> node_masses() const;

 private:
  std::shared_ptr<const detail::CubeTree> tree_;
  std::vector<double> mass_;
  double s_ = 0.0;
  double total_ = 0.0;
};

/// Throws kEmptyInput when the content is zero.
FrostmanMeasure frostman_lower(const RegionSet& E, double s, int max_level);

/// max_k s tau_k - sum_{i<=k}(tau_k - tau_i), after dividing tau by tau_1.
double g_tau(const std::vector<double>& tau, double s);

struct SlopeReport {
  double slope = 0.0;
  double r2 = 0.0;
  std::vector<double> radii;
  std::vector<double> contents;
};

/// Log-log slope of content_upper(R_tau(center, r)) against r, centered at (1/2, ..., 1/2).
SlopeReport rect_content_slope(const std::vector<double>& tau, double s,
                               const std::vector<double>& radii, int base, int max_level);

/// Essential content of A: the pruned set E of A (cells of open mass 0
/// removed) is built once and priced at any exponent.
class EssentialContent {
 public:
  EssentialContent(const RegionSet& A, const CylinderMeasure& mu, int max_level);

  CoverEstimate at(double s) const;
  double upper(double s) const;
  /// mu_lo(A) / (2^d b^s max_Q mu_hi(Q)/|Q|^s), the max over tree cubes down to
  /// max_level; 0 when mu(A) may vanish.
  double lower(double s) const;
  MassInterval mass() const { return mass_; }
  const RegionSet& pruned() const { return pruned_; }
  int max_level() const { return max_level_; }

 private:
  RegionSet pruned_;
  std::shared_ptr<const detail::CubeTree> tree_;
  MassInterval mass_;
  int max_level_ = 0;
  double measure_dim_ = 0.0;
  bool full_support_ = false;
};

CoverEstimate essential_content(const RegionSet& A, const CylinderMeasure& mu, double s, int max_level);

struct ConcavityResult {
  bool pass = false;
  double upper_scaled = 0.0;  // upper bound at s / delta
  double lower_root = 0.0;    // lower bound at s, raised to 1/delta
};

/// upper(s/delta) >= lower(s)^{1/delta}.
ConcavityResult concavity_check(const RegionSet& A, const CylinderMeasure& mu, double s,
                                double delta, int max_level);

}  // namespace ubq
