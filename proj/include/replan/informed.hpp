#pragma once

#include <vector>

#include "replan/costs.hpp"
#include "replan/geometry.hpp"
#include "replan/nominal.hpp"
#include "replan/rng.hpp"

namespace replan {

/// Lebesgue measure of a prolate hyperspheroid with transverse diameter
/// c_best and focal distance c_min in n dimensions:
///   c_best (c_best^2 - c_min^2)^((n-1)/2) / 2^n * pi^(n/2) / Gamma(n/2 + 1).
double phs_measure(double c_best, double c_min, int n);

/// Orthonormal matrix (det +1) whose first column is the given unit vector;
/// the remaining axes come from a deterministic Gram-Schmidt completion.
Eigen::MatrixXd rotation_from_axis(const StateVec& unit_dir);

/// Prolate hyperspheroid: the set of points whose summed distance to the two
/// foci is at most c_best. Degenerate c_best == c_min (the focal segment
/// itself) is allowed and has measure zero.
class ProlateHyperspheroid {
 public:
  ProlateHyperspheroid(StateVec focus_a, StateVec focus_b, double c_best);

  const StateVec& focus_a() const { return focus_a_; }
  const StateVec& focus_b() const { return focus_b_; }
  const StateVec& center() const { return center_; }
  double c_min() const { return c_min_; }
  double c_best() const { return c_best_; }
  const Eigen::MatrixXd& rotation() const { return rotation_; }
  int dim() const { return static_cast<int>(focus_a_.size()); }

  bool contains(const StateVec& x) const;
  double measure() const { return measure_; }

  /// Uniform sample: uniform point in the unit ball, scaled by the semi-axes
  /// (c_best/2 transverse, sqrt(c_best^2 - c_min^2)/2 conjugate), rotated
  /// into the world frame and translated to the center.
  StateVec sample(Rng& rng) const;

  /// Tight axis-aligned bounding box, useful for rejection estimators.
  Bounds aabb() const;

 private:
  StateVec focus_a_;
  StateVec focus_b_;
  StateVec center_;
  double c_min_ = 0.0;
  double c_best_ = 0.0;
  Eigen::MatrixXd rotation_;
  double measure_ = 0.0;
};

bool phs_contains(const ProlateHyperspheroid& phs, const StateVec& x);
StateVec phs_sample(const ProlateHyperspheroid& phs, Rng& rng);

enum class IntersectionMode { kZero, kMonteCarlo };

struct IntersectionConfig {
  IntersectionMode mode = IntersectionMode::kZero;
  int mc_samples = 100000;  // per consecutive pair, Monte Carlo mode only
};

/// Monte Carlo estimate of the intersection measure of two spheroids:
/// samples the smaller one and scales its measure by the hit fraction in
/// the other.
double phs_mc_intersection(const ProlateHyperspheroid& a,
                           const ProlateHyperspheroid& b, int samples,
                           Rng& rng);

/// The union-of-ellipsoids informed set: one spheroid per nominal segment,
/// sized from the current best deviation so that every point able to improve
/// it stays inside the union. Immutable once built.
class InformedUnion {
 public:
  const std::vector<ProlateHyperspheroid>& spheroids() const {
    return spheroids_;
  }
  const std::vector<double>& measures() const { return measures_; }
  double measure_estimate() const { return measure_estimate_; }
  const IntersectionConfig& intersection() const { return intersection_; }

  bool all_measures_zero() const { return total_measure_ <= 0.0; }
  int count_containing(const StateVec& x) const;
  bool contains(const StateVec& x) const { return count_containing(x) > 0; }

  /// Uniform sample over the set union: pick a spheroid in proportion to its
  /// measure, sample it, and accept with probability 1/(number of spheroids
  /// containing the point). A fully converged union (all measures zero)
  /// falls back to arc-length-uniform points on the nominal polyline.
  StateVec sample(Rng& rng) const;

 private:
  friend InformedUnion build_union(const NominalPath&,
                                   const std::vector<StateVec>&,
                                   const IntersectionConfig&, Rng*);

  std::vector<ProlateHyperspheroid> spheroids_;
  std::vector<double> measures_;
  std::vector<double> selection_cdf_;  // cumulative measures
  double total_measure_ = 0.0;
  double measure_estimate_ = 0.0;
  IntersectionConfig intersection_;

  // Nominal polyline, kept for the converged-union sampling fallback.
  std::vector<StateVec> nominal_states_;
  std::vector<double> nominal_cumlen_;
};

/// Rebuilds the informed set from the current deviation. For a two-state
/// nominal this is the single classic informed spheroid with c_best equal to
/// the deviation length. Otherwise each interior nominal state is matched to
/// its nearest deviation state (indices repaired to be monotone), the
/// deviation is split into the per-segment sub-paths rho_i stitched through
/// those shared states, and c_best_i = max(length(rho_i), c_min_i).
/// Preconditions: dev starts/ends at the nominal endpoints.
InformedUnion build_union(const NominalPath& nom,
                          const std::vector<StateVec>& dev,
                          const IntersectionConfig& cfg, Rng* mc_rng);

/// Zero-intersection-estimate convenience overload.
InformedUnion build_union(const NominalPath& nom,
                          const std::vector<StateVec>& dev);

double union_measure_estimate(const InformedUnion& u);
StateVec union_sample(const InformedUnion& u, Rng& rng);

/// Switching condition: the informed union is worth sampling only while its
/// measure estimate is strictly below the sampling rectangle's measure.
bool should_switch(const InformedUnion& u, double rect_measure);

/// Probability delta of drawing a nominal waypoint instead of a space sample.
struct BiasConfig {
  double delta = 0.0;  // in [0, 1]
};

/// Nominal-state bias: with probability delta returns a uniformly chosen
/// nominal state (the start state excluded), otherwise defers to the current
/// space sampler.
template <typename SpaceSampler>
StateVec biased_sample(SpaceSampler&& space_sampler, const NominalPath& nom,
                       const BiasConfig& bias, Rng& rng) {
  const double u = rng.u01_positive();
  if (bias.delta < u) return space_sampler();
  const auto& states = nom.states();
  const auto idx =
      1 + static_cast<std::size_t>(rng.below(states.size() - 1));
  return states[idx];
}

}  // namespace replan
