#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "replan/costs.hpp"
#include "replan/informed.hpp"
#include "replan/scenario.hpp"

namespace replan {

struct PlannerConfig {
  int max_iterations = 1000;
  double steer_eta = 0.0;             // <= 0: bounds diagonal / 20
  double rewire_gamma = 0.0;          // <= 0: calibrated from the rectangle
  double goal_tolerance = -1.0;       // < 0: the cost epsilon
  double collision_resolution = 0.0;  // <= 0: bounds diagonal / 200
  BiasConfig bias{0.1};
  CostConfig cost{0.0, 0.0, false};  // epsilon <= 0: nominal length / 100
  bool informed_enabled = true;
  bool bias_after_switch = true;  // keep the nominal bias once informed
  int rebuild_cadence = 25;       // union rebuilds at most once per N iters
  std::uint64_t rng_seed = 0;
  IntersectionConfig intersection;
};

/// Fills the scenario-derived defaults (steer length, rewire gamma, cost
/// epsilon, goal tolerance, collision resolution).
PlannerConfig resolve_defaults(PlannerConfig cfg, const Scenario& scenario);

/// Search tree rooted at the nominal start. cost_to_come accumulates the
/// combined edge cost (plus the root's own deviation term);
/// length_to_come is the pure geometric length that maps to time.
struct Tree {
  std::vector<StateVec> nodes;
  std::vector<int> parent;  // root points at itself
  std::vector<double> cost_to_come;
  std::vector<double> length_to_come;
  std::vector<double> edge_cost_in;    // combined cost of edge parent->node
  std::vector<double> edge_length_in;  // geometric length of that edge
  std::vector<std::vector<int>> children;

  int add_node(const StateVec& x, int parent_index, double edge_cost,
               double edge_length);
  void reparent(int node, int new_parent, double new_edge_cost,
                double new_edge_length);
};

Tree make_tree(const Scenario& scenario, const PlannerConfig& resolved);

/// One RRT* iteration on an externally supplied sample: nearest, steer,
/// collision check, minimum-cost parent among the near set, insert, rewire.
/// Returns the new node index, or -1 when the sample was rejected (the tree
/// is then unchanged).
int rrt_star_extend(Tree& tree, const StateVec& x_rand,
                    const Scenario& scenario, const PlannerConfig& resolved);

template <typename Sampler>
int rrt_star_step(Tree& tree, Sampler&& sampler, const Scenario& scenario,
                  const PlannerConfig& resolved) {
  return rrt_star_extend(tree, sampler(), scenario, resolved);
}

/// Minimum-cost root chain ending within the goal tolerance (plus an exact
/// terminal connection), re-audited collision-free against the scenario with
/// the chain's own timing. Empty if no audited chain exists.
std::vector<StateVec> extract_best_path(const Tree& tree,
                                        const Scenario& scenario,
                                        const PlannerConfig& resolved);

/// Re-audits a whole path against the scenario, timing each edge by
/// cumulative length / own speed.
bool path_collision_free(const std::vector<StateVec>& path,
                         const Scenario& scenario, double resolution);

struct SampleCounts {
  long long rect = 0;
  long long informed = 0;
  long long bias = 0;
};

struct TracePoint {
  int iteration = 0;
  double cost = std::numeric_limits<double>::infinity();
  double seconds = 0.0;
};

struct PlanResult {
  std::vector<StateVec> best_path;  // empty when no solution was found
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<TracePoint> trace;  // one entry per iteration, non-increasing
  std::optional<int> informed_activated_at;
  SampleCounts sample_counts;
};

/// Anytime planner: runs max_iterations of RRT*, switching the sampling
/// space to the union-of-ellipsoids informed set once a solution exists and
/// the switching condition holds. Deterministic for a fixed seed.
PlanResult plan(const Scenario& scenario, const PlannerConfig& config);

}  // namespace replan
