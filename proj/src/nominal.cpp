#include "replan/nominal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace replan {

std::vector<StateVec> interpolate(const std::vector<StateVec>& path,
                                  double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("interpolate: epsilon <= 0");
  if (path.size() < 2) return path;
  std::vector<StateVec> out;
  out.reserve(path.size());
  out.push_back(path.front());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const StateVec& a = path[i];
    const StateVec& b = path[i + 1];
    const double len = (b - a).norm();
    // The 1e-9 slack forgives roundoff so exact multiples of epsilon do not
    // gain an extra subdivision and re-interpolation stays idempotent.
    const int k = std::max(1, static_cast<int>(std::ceil(len / epsilon - 1e-9)));
    for (int j = 1; j < k; ++j)
      out.push_back(a + (static_cast<double>(j) / k) * (b - a));
    out.push_back(b);
  }
  return out;
}

std::pair<StateVec, int> nearest_deviation_state(
    const StateVec& x_nom, const std::vector<StateVec>& dev) {
  if (dev.empty())
    throw std::invalid_argument("nearest_deviation_state: empty deviation");
  int best = 0;
  double best_d = (dev[0] - x_nom).norm();
  for (std::size_t i = 1; i < dev.size(); ++i) {
    const double d = (dev[i] - x_nom).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return {dev[best], best};
}

NominalPath::NominalPath(std::vector<StateVec> states, double epsilon)
    : states_(std::move(states)) {
  if (states_.size() < 2)
    throw std::invalid_argument("NominalPath: need at least 2 states");
  const auto n = states_.front().size();
  if (n < 2) throw std::invalid_argument("NominalPath: dimension must be >= 2");
  for (const auto& s : states_) {
    if (s.size() != n)
      throw std::invalid_argument("NominalPath: inconsistent dimensions");
    if (!s.allFinite())
      throw std::invalid_argument("NominalPath: non-finite state");
  }
  cumulative_length_.push_back(0.0);
  for (std::size_t i = 0; i + 1 < states_.size(); ++i) {
    const double len = (states_[i + 1] - states_[i]).norm();
    if (len <= 0.0)
      throw std::invalid_argument("NominalPath: consecutive duplicate states");
    segment_lengths_.push_back(len);
    cumulative_length_.push_back(cumulative_length_.back() + len);
  }

  epsilon_ = epsilon > 0.0 ? epsilon : total_length() / 100.0;
  interp_cache_ = interpolate(states_, epsilon_);

  cell_size_ = epsilon_;
  for (std::size_t i = 0; i < interp_cache_.size(); ++i)
    grid_[cell_key(interp_cache_[i])].push_back(static_cast<int>(i));

  for (std::size_t i = 0; i + 1 < states_.size(); ++i) {
    seg_aabb_min_.push_back(states_[i].cwiseMin(states_[i + 1]));
    seg_aabb_max_.push_back(states_[i].cwiseMax(states_[i + 1]));
  }
}

std::uint64_t NominalPath::cell_key(const StateVec& p) const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (int d = 0; d < p.size(); ++d) {
    auto q = static_cast<std::int64_t>(std::floor(p[d] / cell_size_));
    std::uint64_t z = static_cast<std::uint64_t>(q) + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    h = (h ^ (z ^ (z >> 31))) * 0x100000001b3ull;
  }
  return h;
}

double NominalPath::grid_upper_bound(const StateVec& p) const {
  // Any cached point gives a valid upper bound; the 3^n neighborhood of p's
  // cell tightens it when p is close to the path.
  double bound = (p - interp_cache_.front()).norm();
  bound = std::min(bound, (p - interp_cache_[interp_cache_.size() / 2]).norm());
  bound = std::min(bound, (p - interp_cache_.back()).norm());

  const int n = static_cast<int>(p.size());
  StateVec probe = p;
  const long combos = static_cast<long>(std::pow(3.0, n));
  if (combos > 243) return bound;  // skip neighborhood scan in high dimensions
  for (long c = 0; c < combos; ++c) {
    long rem = c;
    for (int d = 0; d < n; ++d) {
      probe[d] = p[d] + ((rem % 3) - 1) * cell_size_;
      rem /= 3;
    }
    auto it = grid_.find(cell_key(probe));
    if (it == grid_.end()) continue;
    for (int idx : it->second)
      bound = std::min(bound, (p - interp_cache_[idx]).norm());
  }
  return bound;
}

double NominalPath::min_distance(const StateVec& p) const {
  if (p.size() != states_.front().size())
    throw std::invalid_argument("min_distance: dimension mismatch");
  double best = grid_upper_bound(p);
  for (std::size_t i = 0; i < segment_lengths_.size(); ++i) {
    // Lower bound via the segment's axis-aligned box; prune if it cannot win.
    double lb2 = 0.0;
    for (int d = 0; d < p.size(); ++d) {
      const double lo = seg_aabb_min_[i][d] - p[d];
      const double hi = p[d] - seg_aabb_max_[i][d];
      const double gap = std::max({lo, hi, 0.0});
      lb2 += gap * gap;
    }
    if (lb2 > best * best) continue;
    best = std::min(best,
                    point_segment_distance(p, states_[i], states_[i + 1]));
  }
  return best;
}

StateVec NominalPath::point_at_arclength(double s) const {
  s = std::clamp(s, 0.0, total_length());
  auto it = std::upper_bound(cumulative_length_.begin(),
                             cumulative_length_.end(), s);
  std::size_t seg = std::min<std::size_t>(
      static_cast<std::size_t>(it - cumulative_length_.begin()) - 1,
      segment_lengths_.size() - 1);
  const double local = s - cumulative_length_[seg];
  const double f = local / segment_lengths_[seg];
  return states_[seg] + f * (states_[seg + 1] - states_[seg]);
}

}  // namespace replan
