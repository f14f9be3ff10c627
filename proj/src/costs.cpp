#include "replan/costs.hpp"

#include <cmath>
#include <stdexcept>

namespace replan {

double path_length(const std::vector<StateVec>& path) {
  if (path.empty()) throw std::invalid_argument("path_length: empty path");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    total += (path[i + 1] - path[i]).norm();
  return total;
}

double deviation_cost(const std::vector<StateVec>& path, const NominalPath& nom,
                      const CostConfig& cfg) {
  if (path.empty()) throw std::invalid_argument("deviation_cost: empty path");
  const std::vector<StateVec> pts =
      path.size() >= 2 ? interpolate(path, cfg.epsilon) : path;
  double sum = 0.0;
  for (const auto& p : pts) sum += nom.min_distance(p);
  return cfg.integral_mode ? sum * cfg.epsilon : sum;
}

double edge_deviation_term(const StateVec& parent, const StateVec& child,
                           const NominalPath& nom, const CostConfig& cfg) {
  if (parent.size() != child.size())
    throw std::invalid_argument("edge_deviation_term: dimension mismatch");
  const double len = (child - parent).norm();
  // Same subdivision rule as interpolate() so edge sums reconcile exactly
  // with whole-path deviation costs.
  const int k =
      std::max(1, static_cast<int>(std::ceil(len / cfg.epsilon - 1e-9)));
  double sum = 0.0;
  for (int j = 1; j <= k; ++j)
    sum += nom.min_distance(parent +
                            (static_cast<double>(j) / k) * (child - parent));
  return cfg.integral_mode ? sum * cfg.epsilon : sum;
}

double edge_cost(const StateVec& parent, const StateVec& child,
                 const NominalPath& nom, const CostConfig& cfg) {
  return (1.0 - cfg.omega) * edge_deviation_term(parent, child, nom, cfg) +
         cfg.omega * (child - parent).norm();
}

double root_deviation_term(const StateVec& root, const NominalPath& nom,
                           const CostConfig& cfg) {
  const double d = nom.min_distance(root);
  return (1.0 - cfg.omega) * (cfg.integral_mode ? d * cfg.epsilon : d);
}

double combined_cost(const std::vector<StateVec>& path, const NominalPath& nom,
                     const CostConfig& cfg) {
  if (path.empty()) throw std::invalid_argument("combined_cost: empty path");
  double total = root_deviation_term(path.front(), nom, cfg);
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    total += edge_cost(path[i], path[i + 1], nom, cfg);
  return total;
}

}  // namespace replan
