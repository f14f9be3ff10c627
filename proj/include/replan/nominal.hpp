#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "replan/geometry.hpp"

namespace replan {

/// Densifies a polyline so consecutive points are at most `epsilon` apart
/// (uniform spacing per segment, ceil(len/epsilon) subdivisions). Original
/// states are preserved in order; re-interpolating at the same epsilon is a
/// no-op. Throws on epsilon <= 0.
std::vector<StateVec> interpolate(const std::vector<StateVec>& path,
                                  double epsilon);

/// Deviation state nearest to x_nom and its index; ties break toward the
/// smallest index. Throws on an empty deviation.
std::pair<StateVec, int> nearest_deviation_state(
    const StateVec& x_nom, const std::vector<StateVec>& dev);

/// The piecewise-linear nominal path: m states, per-segment lengths, an
/// epsilon-interpolated cache and a grid index over the cached points.
/// Distance queries are exact; the index only prunes candidate segments.
class NominalPath {
 public:
  /// epsilon <= 0 selects the default resolution, total length / 100.
  explicit NominalPath(std::vector<StateVec> states, double epsilon = 0.0);

  const std::vector<StateVec>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  int dim() const { return static_cast<int>(states_.front().size()); }
  const StateVec& start() const { return states_.front(); }
  const StateVec& end() const { return states_.back(); }

  const std::vector<double>& segment_lengths() const {
    return segment_lengths_;
  }
  const std::vector<double>& cumulative_length() const {
    return cumulative_length_;
  }
  double total_length() const { return cumulative_length_.back(); }
  double epsilon() const { return epsilon_; }
  const std::vector<StateVec>& interp_cache() const { return interp_cache_; }

  /// Exact minimum distance from p to the nominal polyline.
  double min_distance(const StateVec& p) const;

  /// Point at arc length s from the start (clamped to [0, total]).
  StateVec point_at_arclength(double s) const;

 private:
  std::uint64_t cell_key(const StateVec& p) const;
  double grid_upper_bound(const StateVec& p) const;

  std::vector<StateVec> states_;
  std::vector<double> segment_lengths_;
  std::vector<double> cumulative_length_;
  double epsilon_ = 0.0;
  std::vector<StateVec> interp_cache_;

  // Uniform grid over the cache, used as an upper-bound prefilter.
  double cell_size_ = 1.0;
  std::unordered_map<std::uint64_t, std::vector<int>> grid_;
  std::vector<StateVec> seg_aabb_min_;
  std::vector<StateVec> seg_aabb_max_;
};

}  // namespace replan
