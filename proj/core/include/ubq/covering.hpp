#pragma once

#include <cstddef>
#include <vector>

#include "ubq/geometry.hpp"
#include "ubq/ifs.hpp"
#include "ubq/region_set.hpp"

namespace ubq {

/// Indexed sequence of balls; `indices[i]` is the sequence index of `balls[i]`.
struct BallFamily {
  std::vector<Ball> balls;
  std::vector<std::size_t> indices;
  bool radii_to_zero = false;

  /// Indices 0, 1, ..., n-1.
  static BallFamily from_balls(std::vector<Ball> balls);
  std::size_t size() const { return balls.size(); }
  bool empty() const { return balls.empty(); }
  /// Members with positions in [first, last).
  BallFamily slice(std::size_t first, std::size_t last) const;
  void validate() const;
};

/// Families are lists of sequence indices. Every center is covered by the
/// union of the families, and within a family the (1/v)-dilates are pairwise
/// disjoint.
std::vector<std::vector<std::size_t>> besicovitch_families(const BallFamily& family, double v);

struct BesicovitchCheck {
  bool centers_covered = false;
  bool dilates_disjoint = false;
  bool ok() const { return centers_covered && dilates_disjoint; }
};

/// Independent post-hoc check of besicovitch_families output.
BesicovitchCheck verify_besicovitch(const BallFamily& family,
                                    const std::vector<std::vector<std::size_t>>& families, double v);

struct Selection {
  std::vector<std::size_t> selected;  // sequence indices, in selection order
  double selected_mass = 0.0;         // sum of lo-masses
  double omega_mass = 0.0;            // hi-mass of Omega
  double ratio = 0.0;
};

/// Greedy pairwise-disjoint selection of balls with index >= g lying in the
/// interior of Omega, by lo-mass descending then index ascending. A null Omega
/// stands for the whole space (mass 1).
Selection disjoint_select(const BallFamily& family, const RegionSet* omega, std::size_t g,
                          const CylinderMeasure& mu);

struct DistcovResult {
  std::vector<std::vector<std::size_t>> families;
  std::vector<double> family_mass;  // lo-mass of each family
  std::size_t best = 0;             // family of largest mass
};

/// Splits a selection into families with pairwise disjoint 4-dilates.
DistcovResult split_dilate_disjoint(const BallFamily& family, const std::vector<std::size_t>& selected,
                                    const CylinderMeasure& mu, double dilation = 4.0);

struct AcProbe {
  std::size_t omega = 0;
  std::size_t g = 0;
  Selection selection;
};

struct AcReport {
  std::vector<AcProbe> probes;
  double min_ratio = 0.0;
  double C = 0.0;
  bool pass = false;
};

/// Runs disjoint_select on every (Omega, g) pair; passes iff every ratio >= C.
AcReport mu_ac_check(const BallFamily& family, const CylinderMeasure& mu,
                     const std::vector<RegionSet>& omegas, const std::vector<std::size_t>& gs, double C);

struct FullnessReport {
  double value = 0.0;  // lo-mass of the union of the shrunk balls
  bool pass = false;
};

/// Lo-mass of the union of v*B over positions [first, last). In d > 1 the union
/// is measured through its inner b-adic approximation at `level`.
FullnessReport shrunk_fullness_check(const BallFamily& family, const CylinderMeasure& mu, double v,
                                     std::size_t first, std::size_t last, double threshold = 0.9,
                                     int level = 12);

}  // namespace ubq
