#pragma once

#include <optional>
#include <vector>

#include "ubq/geometry.hpp"

namespace ubq {

/// f(x) = ratio * O x + translation, with O orthogonal (identity when empty).
struct SimilarityMap {
  double ratio = 0.5;
  Point translation;
  std::vector<double> orthogonal;  // row-major d x d

  std::size_t dim() const { return translation.size(); }
  Point apply(const Point& x) const;
};

/// Letters are 0-based indices into IFS::maps.
using Word = std::vector<int>;

class IFS {
 public:
  IFS() = default;
  /// Validates m >= 2, ratios in (0,1), orthogonality and f_i([0,1]^d) within [0,1]^d.
  explicit IFS(std::vector<SimilarityMap> maps);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return maps_.size(); }
  const SimilarityMap& map(std::size_t i) const { return maps_.at(i); }
  const std::vector<SimilarityMap>& maps() const { return maps_; }
  std::vector<double> ratios() const;
  bool has_rotation() const { return has_rotation_; }

  double word_ratio(const Word& w) const;
  /// f_{w_1} o ... o f_{w_k}(x)
  Point apply(const Word& w, const Point& x) const;
  /// Fixed point of f_i.
  Point fixed_point(std::size_t i) const;

  /// Two-map middle-third system {x/3, x/3 + 2/3}.
  static IFS middle_third();
  /// Three-map triadic system {x/3 + j/3 : j = 0,1,2}.
  static IFS triadic();
  /// The b^d maps x/b + j/b, j in {0..b-1}^d.
  static IFS badic_grid(std::size_t d, int base);

 private:
  std::vector<SimilarityMap> maps_;
  std::size_t dim_ = 0;
  bool has_rotation_ = false;
};

/// Root of sum c_i^s = 1. Throws kInvalidArgument for m < 2 or a ratio outside (0,1).
double similarity_dimension(const std::vector<double>& ratios);

struct MeasureDimension {
  double value = 0.0;
  // Dimension regularity is an input assumption; it is never checked.
  bool regularity_assumed = true;
};

/// min{d, sum p log p / sum p log c}.
MeasureDimension measure_dimension(const std::vector<double>& weights,
                                   const std::vector<double>& ratios, std::size_t d);

/// Words w with c_last * t^k < c_w <= t^k, in depth-first lexicographic order.
std::vector<Word> cylinders_at_scale(const IFS& ifs, double t, int k);

struct MassInterval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Self-similar measure sum p_i mu o f_i^{-1}, queried through its cylinder
/// tree truncated at depth_cap. Cylinder hulls are f_w([0,1]^d).
class CylinderMeasure {
 public:
  CylinderMeasure(IFS ifs, std::vector<double> weights, int depth_cap);

  /// Lebesgue measure on [0,1]^d as the uniform b-adic tree.
  static CylinderMeasure lebesgue(std::size_t d, int base, int depth_cap);
  /// Middle-third Cantor measure with weights (p0, 1 - p0).
  static CylinderMeasure cantor(int depth_cap, double p0 = 0.5);

  const IFS& ifs() const { return ifs_; }
  const std::vector<double>& weights() const { return weights_; }
  int depth_cap() const { return depth_cap_; }
  std::size_t dim() const { return ifs_.dim(); }
  /// Every open subset of [0,1]^d has positive mass.
  bool full_support() const { return grid_base_ > 0; }
  /// Base of the cylinder grid when the IFS is the b-adic grid system, else 0.
  int grid_base() const { return grid_base_; }
  double dimension() const;
  std::optional<Point> atom() const { return atom_; }

  Box cylinder_hull(const Word& w) const;
  double cylinder_mass(const Word& w) const;

  /// lo: mass of depth-cap cylinders whose hull lies in the closed box.
  /// hi: mass of depth-cap cylinders whose hull meets the closed box.
  MassInterval box_mass(const Box& box) const;
  /// As box_mass but hi counts cylinders whose hull meets the open box; hi = 0
  /// certifies that the open box is null.
  MassInterval open_box_mass(const Box& box) const;
  /// box_mass of the closed ball; radius 0 gives [0, atom mass].
  MassInterval ball_mass(const Ball& ball) const;

 private:
  enum class Touch { kClosed, kOpen };
  MassInterval query(const Box& box, Touch touch) const;
  MassInterval grid_query(const Box& box, Touch touch) const;

  IFS ifs_;
  std::vector<double> weights_;
  int depth_cap_ = 0;
  int grid_base_ = 0;
  std::optional<Point> atom_;
};

struct LocalDimEstimate {
  double slope = 0.0;
  double residual = 0.0;
  std::vector<double> excluded_radii;
  bool quality_warning = false;
};

/// Least-squares slope of log(mid mass) against log r. Throws kNotInSupport when
/// the hi-mass at the smallest radius is zero.
LocalDimEstimate local_dim_estimate(const CylinderMeasure& mu, const Point& x,
                                    const std::vector<double>& radii);

/// C_{beta,eps} = 6^{-beta/(2 eps)} / 2.
double doubling_constant(double beta, double eps);

/// Fraction of k < n with mu(B(x, t^{-k-1})) >= C mu(B(x, t^{-k})), on midpoint
/// masses. Equality is accepted up to rel_tol.
double doubling_fraction(const CylinderMeasure& mu, const Point& x, double t, int n,
                         double C, double rel_tol = 1e-6);

/// Finite-grid membership in the E_mu set: estimated local dimension within
/// [alpha - dim_tol, beta + dim_tol] and hi-mass(B(x,r)) <= r^{dim - eps} at each
/// grid radius.
bool e_mu_member(const CylinderMeasure& mu, const Point& x, double alpha, double beta,
                 double rho, double eps, const std::vector<double>& radii_grid,
                 double dim_tol = 0.01);

/// Geometric sequence r0, r0*q, ..., (count terms).
std::vector<double> geometric_radii(double r0, double q, int count);

}  // namespace ubq
