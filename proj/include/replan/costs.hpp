#pragma once

#include <vector>

#include "replan/nominal.hpp"

namespace replan {

/// Weight and resolution of the combined cost
///   c = (1 - omega) * c_d + omega * c_l.
/// Deviation terms are raw discrete sums over epsilon-spaced samples;
/// integral_mode scales them by epsilon instead (off by default, costs are
/// then comparable across resolutions).
struct CostConfig {
  double omega = 0.0;    // in [0, 1)
  double epsilon = 1.0;  // > 0
  bool integral_mode = false;
};

/// Euclidean length of a polyline; a single state has length 0.
double path_length(const std::vector<StateVec>& path);

/// Deviation cost: interpolates the path at cfg.epsilon and sums the minimum
/// distance to the nominal polyline over every interpolated state.
double deviation_cost(const std::vector<StateVec>& path, const NominalPath& nom,
                      const CostConfig& cfg);

/// Deviation sum over the half-open edge (parent excluded, child included),
/// sampled at ceil(len/epsilon) uniform steps.
double edge_deviation_term(const StateVec& parent, const StateVec& child,
                           const NominalPath& nom, const CostConfig& cfg);

/// Combined per-edge cost: (1-omega) * deviation term + omega * edge length.
/// Edge costs are additive: summing them along a path and adding the root
/// state's own deviation term reproduces the whole-path combined cost.
double edge_cost(const StateVec& parent, const StateVec& child,
                 const NominalPath& nom, const CostConfig& cfg);

/// (1-omega) * min-distance of the root state (the term edge sums exclude).
double root_deviation_term(const StateVec& root, const NominalPath& nom,
                           const CostConfig& cfg);

/// Whole-path combined cost via root term + edge sums.
double combined_cost(const std::vector<StateVec>& path, const NominalPath& nom,
                     const CostConfig& cfg);

}  // namespace replan
