#include "replan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace replan {

PlannerConfig resolve_defaults(PlannerConfig cfg, const Scenario& scenario) {
  const double diag = scenario.diagonal();
  if (cfg.steer_eta <= 0.0) cfg.steer_eta = diag / 20.0;
  if (cfg.cost.epsilon <= 0.0)
    cfg.cost.epsilon = scenario.nominal.total_length() / 100.0;
  if (cfg.goal_tolerance < 0.0) cfg.goal_tolerance = cfg.cost.epsilon;
  if (cfg.collision_resolution <= 0.0) cfg.collision_resolution = diag / 200.0;
  if (cfg.rewire_gamma <= 0.0) {
    const int n = scenario.bounds.dim();
    const double unit_ball = std::pow(3.14159265358979323846, 0.5 * n) /
                             std::tgamma(0.5 * n + 1.0);
    // Scaled below the theoretical RRT* bound so the near set stays small
    // (around 5-15 nodes at N=1000 on the bundled scenarios).
    cfg.rewire_gamma = 0.25 * 2.0 * std::pow(1.0 + 1.0 / n, 1.0 / n) *
                       std::pow(scenario.rect_measure() / unit_ball, 1.0 / n);
  }
  if (cfg.rebuild_cadence < 1) cfg.rebuild_cadence = 1;
  if (cfg.cost.omega < 0.0 || cfg.cost.omega >= 1.0)
    throw std::invalid_argument("PlannerConfig: omega must be in [0, 1)");
  if (cfg.bias.delta < 0.0 || cfg.bias.delta > 1.0)
    throw std::invalid_argument("PlannerConfig: delta must be in [0, 1]");
  return cfg;
}

int Tree::add_node(const StateVec& x, int parent_index, double edge_cost,
                   double edge_length) {
  const int idx = static_cast<int>(nodes.size());
  nodes.push_back(x);
  parent.push_back(parent_index);
  cost_to_come.push_back(cost_to_come[parent_index] + edge_cost);
  length_to_come.push_back(length_to_come[parent_index] + edge_length);
  edge_cost_in.push_back(edge_cost);
  edge_length_in.push_back(edge_length);
  children.emplace_back();
  children[parent_index].push_back(idx);
  return idx;
}

void Tree::reparent(int node, int new_parent, double new_edge_cost,
                    double new_edge_length) {
  auto& siblings = children[parent[node]];
  siblings.erase(std::find(siblings.begin(), siblings.end(), node));
  parent[node] = new_parent;
  children[new_parent].push_back(node);
  edge_cost_in[node] = new_edge_cost;
  edge_length_in[node] = new_edge_length;

  // Propagate the cost and length change through the subtree.
  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    cost_to_come[v] = cost_to_come[parent[v]] + edge_cost_in[v];
    length_to_come[v] = length_to_come[parent[v]] + edge_length_in[v];
    for (int c : children[v]) stack.push_back(c);
  }
}

Tree make_tree(const Scenario& scenario, const PlannerConfig& resolved) {
  Tree t;
  t.nodes.push_back(scenario.nominal.start());
  t.parent.push_back(0);
  t.cost_to_come.push_back(
      root_deviation_term(scenario.nominal.start(), scenario.nominal,
                          resolved.cost));
  t.length_to_come.push_back(0.0);
  t.edge_cost_in.push_back(0.0);
  t.edge_length_in.push_back(0.0);
  t.children.emplace_back();
  return t;
}

namespace {

bool is_ancestor(const Tree& tree, int candidate, int node) {
  int v = node;
  while (true) {
    if (v == candidate) return true;
    const int p = tree.parent[v];
    if (p == v) return false;
    v = p;
  }
}

std::vector<StateVec> chain_to_root(const Tree& tree, int node) {
  std::vector<StateVec> path;
  int v = node;
  while (true) {
    path.push_back(tree.nodes[v]);
    const int p = tree.parent[v];
    if (p == v) break;
    v = p;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

int rrt_star_extend(Tree& tree, const StateVec& x_rand,
                    const Scenario& scenario, const PlannerConfig& cfg) {
  const std::size_t n_nodes = tree.nodes.size();
  int nearest = 0;
  double nearest_d2 = (tree.nodes[0] - x_rand).squaredNorm();
  for (std::size_t i = 1; i < n_nodes; ++i) {
    const double d2 = (tree.nodes[i] - x_rand).squaredNorm();
    if (d2 < nearest_d2) {
      nearest_d2 = d2;
      nearest = static_cast<int>(i);
    }
  }
  if (nearest_d2 == 0.0) return -1;  // sample coincides with an existing node

  const double nearest_d = std::sqrt(nearest_d2);
  StateVec x_new = x_rand;
  if (nearest_d > cfg.steer_eta)
    x_new = tree.nodes[nearest] +
            (cfg.steer_eta / nearest_d) * (x_rand - tree.nodes[nearest]);

  const int dim = scenario.bounds.dim();
  double radius = cfg.steer_eta;
  if (n_nodes > 1) {
    const double shrink =
        cfg.rewire_gamma *
        std::pow(std::log(static_cast<double>(n_nodes)) / n_nodes, 1.0 / dim);
    radius = std::min(cfg.steer_eta, shrink);
  }

  struct Candidate {
    int idx;
    double edge_cost;
    double edge_length;
    double total;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double d = (tree.nodes[i] - x_new).norm();
    if (d <= radius || static_cast<int>(i) == nearest) {
      const double ec =
          edge_cost(tree.nodes[i], x_new, scenario.nominal, cfg.cost);
      candidates.push_back({static_cast<int>(i), ec, d,
                            tree.cost_to_come[i] + ec});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return a.total != b.total ? a.total < b.total : a.idx < b.idx;
            });

  int new_idx = -1;
  for (const auto& cand : candidates) {
    const double t_a = tree.length_to_come[cand.idx] / scenario.own_speed;
    const double t_b = t_a + cand.edge_length / scenario.own_speed;
    if (scenario.edge_collision_free({tree.nodes[cand.idx], x_new}, t_a, t_b,
                                     cfg.collision_resolution)) {
      new_idx = tree.add_node(x_new, cand.idx, cand.edge_cost,
                              cand.edge_length);
      break;
    }
  }
  if (new_idx < 0) return -1;

  // Rewire: reroute near nodes whose cost improves through the new node.
  for (const auto& cand : candidates) {
    if (cand.idx == tree.parent[new_idx]) continue;
    const double back_cost =
        edge_cost(x_new, tree.nodes[cand.idx], scenario.nominal, cfg.cost);
    const double alt = tree.cost_to_come[new_idx] + back_cost;
    if (alt >= tree.cost_to_come[cand.idx] - 1e-9) continue;
    if (is_ancestor(tree, cand.idx, new_idx)) continue;
    const double t_a = tree.length_to_come[new_idx] / scenario.own_speed;
    const double t_b = t_a + cand.edge_length / scenario.own_speed;
    if (!scenario.edge_collision_free({x_new, tree.nodes[cand.idx]}, t_a, t_b,
                                      cfg.collision_resolution))
      continue;
    tree.reparent(cand.idx, new_idx, back_cost, cand.edge_length);
  }
  return new_idx;
}

bool path_collision_free(const std::vector<StateVec>& path,
                         const Scenario& scenario, double resolution) {
  if (path.empty()) return false;
  double arc = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double len = (path[i + 1] - path[i]).norm();
    const double t_a = arc / scenario.own_speed;
    const double t_b = (arc + len) / scenario.own_speed;
    if (!scenario.edge_collision_free({path[i], path[i + 1]}, t_a, t_b,
                                      resolution))
      return false;
    arc += len;
  }
  return true;
}

std::vector<StateVec> extract_best_path(const Tree& tree,
                                        const Scenario& scenario,
                                        const PlannerConfig& cfg) {
  const StateVec& goal = scenario.nominal.end();
  struct GoalCandidate {
    int node;
    double terminal_cost;
    double terminal_dist;
    double total;
  };
  std::vector<GoalCandidate> cands;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const double d = (tree.nodes[i] - goal).norm();
    if (d > cfg.goal_tolerance) continue;
    const double tc =
        d > 0.0 ? edge_cost(tree.nodes[i], goal, scenario.nominal, cfg.cost)
                : 0.0;
    cands.push_back({static_cast<int>(i), tc, d,
                     tree.cost_to_come[i] + tc});
  }
  std::sort(cands.begin(), cands.end(),
            [](const GoalCandidate& a, const GoalCandidate& b) {
              return a.total != b.total ? a.total < b.total : a.node < b.node;
            });
  for (const auto& cand : cands) {
    std::vector<StateVec> path = chain_to_root(tree, cand.node);
    if (cand.terminal_dist > 0.0) path.push_back(goal);
    if (path_collision_free(path, scenario, cfg.collision_resolution))
      return path;
  }
  return {};
}

PlanResult plan(const Scenario& scenario, const PlannerConfig& config) {
  const PlannerConfig cfg = resolve_defaults(config, scenario);
  const StateVec& start = scenario.nominal.start();
  const StateVec& goal = scenario.nominal.end();
  if (!scenario.bounds.contains(start) || scenario.point_in_static(start))
    throw std::invalid_argument("plan: start state is not collision-free");
  if (!scenario.bounds.contains(goal) || scenario.point_in_static(goal))
    throw std::invalid_argument("plan: goal state is not collision-free");

  Rng rng(cfg.rng_seed);
  Tree tree = make_tree(scenario, cfg);
  PlanResult res;
  res.trace.reserve(cfg.max_iterations);

  if ((goal - start).norm() <= cfg.goal_tolerance) {
    res.best_path = {start};
    res.best_cost = tree.cost_to_come[0];
  }

  std::optional<InformedUnion> informed;
  bool use_informed = false;
  bool rebuild_pending = false;
  int last_rebuild = std::numeric_limits<int>::min() / 2;

  struct GoalCandidate {
    int node;
    double terminal_cost;
    double terminal_dist;
    double failed_audit_total;  // skip re-audits until the cost improves
  };
  std::vector<GoalCandidate> goal_cands;

  const int dim = scenario.bounds.dim();
  StateVec rect_point(dim);
  const auto t0 = std::chrono::steady_clock::now();

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (cfg.informed_enabled && rebuild_pending &&
        iter - last_rebuild >= cfg.rebuild_cadence &&
        res.best_path.size() >= 2) {
      informed = build_union(scenario.nominal, res.best_path,
                             cfg.intersection, &rng);
      last_rebuild = iter;
      rebuild_pending = false;
      use_informed = should_switch(*informed, scenario.rect_measure());
      if (use_informed && !res.informed_activated_at)
        res.informed_activated_at = iter;
    }

    bool space_called = false;
    auto space_sampler = [&]() -> StateVec {
      space_called = true;
      if (use_informed && informed) {
        ++res.sample_counts.informed;
        return informed->sample(rng);
      }
      ++res.sample_counts.rect;
      for (int d = 0; d < dim; ++d)
        rect_point[d] =
            rng.uniform(scenario.bounds.min[d], scenario.bounds.max[d]);
      return rect_point;
    };
    BiasConfig bias = cfg.bias;
    if (use_informed && !cfg.bias_after_switch) bias.delta = 0.0;
    const StateVec x_rand =
        biased_sample(space_sampler, scenario.nominal, bias, rng);
    if (!space_called) ++res.sample_counts.bias;

    const int new_idx = rrt_star_extend(tree, x_rand, scenario, cfg);
    if (new_idx >= 0) {
      const double d = (tree.nodes[new_idx] - goal).norm();
      if (d <= cfg.goal_tolerance) {
        const double tc =
            d > 0.0
                ? edge_cost(tree.nodes[new_idx], goal, scenario.nominal,
                            cfg.cost)
                : 0.0;
        goal_cands.push_back({new_idx, tc, d,
                              std::numeric_limits<double>::infinity()});
      }
    }

    // Accept the cheapest goal-connected chain that re-audits clean.
    std::vector<std::pair<double, std::size_t>> improvers;
    for (std::size_t i = 0; i < goal_cands.size(); ++i) {
      const auto& gc = goal_cands[i];
      const double total =
          tree.cost_to_come[gc.node] + gc.terminal_cost;
      if (total < res.best_cost - 1e-12 &&
          total < gc.failed_audit_total - 1e-12)
        improvers.push_back({total, i});
    }
    std::sort(improvers.begin(), improvers.end());
    for (const auto& [total, i] : improvers) {
      if (total >= res.best_cost - 1e-12) break;
      auto& gc = goal_cands[i];
      std::vector<StateVec> path = chain_to_root(tree, gc.node);
      if (gc.terminal_dist > 0.0) path.push_back(goal);
      if (path_collision_free(path, scenario, cfg.collision_resolution)) {
        res.best_path = std::move(path);
        res.best_cost = total;
        rebuild_pending = true;
      } else {
        gc.failed_audit_total = total;
      }
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    res.trace.push_back({iter, res.best_cost, seconds});
  }
  return res;
}

}  // namespace replan
