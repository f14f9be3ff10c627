#include "replan/informed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace replan {

double phs_measure(double c_best, double c_min, int n) {
  const double gap2 = c_best * c_best - c_min * c_min;
  if (gap2 <= 0.0) return 0.0;
  const double conjugate = std::pow(gap2, 0.5 * (n - 1));
  const double unit_ball = std::pow(3.14159265358979323846, 0.5 * n) /
                           std::tgamma(0.5 * n + 1.0);
  return c_best * conjugate / std::pow(2.0, n) * unit_ball;
}

Eigen::MatrixXd rotation_from_axis(const StateVec& unit_dir) {
  const int n = static_cast<int>(unit_dir.size());
  Eigen::MatrixXd rot(n, n);
  rot.col(0) = unit_dir;
  int filled = 1;
  for (int k = 0; k < n && filled < n; ++k) {
    StateVec v = StateVec::Zero(n);
    v[k] = 1.0;
    for (int j = 0; j < filled; ++j) v -= rot.col(j).dot(v) * rot.col(j);
    const double norm = v.norm();
    if (norm < 1e-8) continue;  // candidate nearly parallel to the span
    rot.col(filled++) = v / norm;
  }
  if (filled < n)
    throw std::runtime_error("rotation_from_axis: basis completion failed");
  if (rot.determinant() < 0.0) rot.col(n - 1) *= -1.0;
  return rot;
}

ProlateHyperspheroid::ProlateHyperspheroid(StateVec focus_a, StateVec focus_b,
                                           double c_best)
    : focus_a_(std::move(focus_a)), focus_b_(std::move(focus_b)) {
  if (focus_a_.size() != focus_b_.size())
    throw std::invalid_argument("ProlateHyperspheroid: dimension mismatch");
  c_min_ = (focus_b_ - focus_a_).norm();
  if (c_min_ <= 0.0)
    throw std::invalid_argument("ProlateHyperspheroid: coincident foci");
  c_best_ = std::max(c_best, c_min_);
  center_ = 0.5 * (focus_a_ + focus_b_);
  rotation_ = rotation_from_axis((focus_b_ - focus_a_) / c_min_);
  measure_ = phs_measure(c_best_, c_min_, dim());
}

bool ProlateHyperspheroid::contains(const StateVec& x) const {
  return (x - focus_a_).norm() + (x - focus_b_).norm() <= c_best_ + 1e-9;
}

StateVec ProlateHyperspheroid::sample(Rng& rng) const {
  const int n = dim();
  // Uniform point in the unit n-ball: normalized Gaussian direction scaled
  // by U^(1/n).
  StateVec u(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) u[i] = rng.normal();
    norm = u.norm();
  } while (norm == 0.0);
  u *= std::pow(rng.u01(), 1.0 / n) / norm;

  const double transverse = 0.5 * c_best_;
  const double conjugate =
      0.5 * std::sqrt(std::max(c_best_ * c_best_ - c_min_ * c_min_, 0.0));
  u[0] *= transverse;
  for (int i = 1; i < n; ++i) u[i] *= conjugate;
  return center_ + rotation_ * u;
}

Bounds ProlateHyperspheroid::aabb() const {
  const int n = dim();
  StateVec semi(n);
  semi[0] = 0.5 * c_best_;
  const double conjugate =
      0.5 * std::sqrt(std::max(c_best_ * c_best_ - c_min_ * c_min_, 0.0));
  for (int i = 1; i < n; ++i) semi[i] = conjugate;

  StateVec half(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double term = rotation_(j, k) * semi[k];
      acc += term * term;
    }
    half[j] = std::sqrt(acc);
  }
  return Bounds{center_ - half, center_ + half};
}

bool phs_contains(const ProlateHyperspheroid& phs, const StateVec& x) {
  return phs.contains(x);
}

StateVec phs_sample(const ProlateHyperspheroid& phs, Rng& rng) {
  return phs.sample(rng);
}

double phs_mc_intersection(const ProlateHyperspheroid& a,
                           const ProlateHyperspheroid& b, int samples,
                           Rng& rng) {
  const ProlateHyperspheroid& small = a.measure() <= b.measure() ? a : b;
  const ProlateHyperspheroid& other = a.measure() <= b.measure() ? b : a;
  if (small.measure() <= 0.0 || samples <= 0) return 0.0;
  long hits = 0;
  for (int i = 0; i < samples; ++i)
    if (other.contains(small.sample(rng))) ++hits;
  return small.measure() * static_cast<double>(hits) / samples;
}

int InformedUnion::count_containing(const StateVec& x) const {
  int count = 0;
  for (const auto& phs : spheroids_)
    if (phs.contains(x)) ++count;
  return count;
}

StateVec InformedUnion::sample(Rng& rng) const {
  if (all_measures_zero()) {
    // Fully converged: any point on the nominal is as good as any other.
    const double s = rng.u01() * nominal_cumlen_.back();
    auto it = std::upper_bound(nominal_cumlen_.begin(), nominal_cumlen_.end(), s);
    const auto seg = std::min<std::size_t>(
        static_cast<std::size_t>(it - nominal_cumlen_.begin()) - 1,
        nominal_states_.size() - 2);
    const double len = nominal_cumlen_[seg + 1] - nominal_cumlen_[seg];
    const double f = len > 0.0 ? (s - nominal_cumlen_[seg]) / len : 0.0;
    return nominal_states_[seg] +
           f * (nominal_states_[seg + 1] - nominal_states_[seg]);
  }
  for (;;) {
    const double r = rng.u01() * total_measure_;
    const auto it =
        std::upper_bound(selection_cdf_.begin(), selection_cdf_.end(), r);
    const auto i = std::min<std::size_t>(
        static_cast<std::size_t>(it - selection_cdf_.begin()),
        spheroids_.size() - 1);
    const StateVec x = spheroids_[i].sample(rng);
    const int k = count_containing(x);
    if (k <= 1 || rng.u01() < 1.0 / k) return x;
  }
}

InformedUnion build_union(const NominalPath& nom,
                          const std::vector<StateVec>& dev,
                          const IntersectionConfig& cfg, Rng* mc_rng) {
  if (dev.size() < 2)
    throw std::invalid_argument("build_union: deviation needs >= 2 states");
  constexpr double kEndpointTol = 1e-9;
  if ((dev.front() - nom.start()).norm() > kEndpointTol ||
      (dev.back() - nom.end()).norm() > kEndpointTol)
    throw std::invalid_argument(
        "build_union: deviation endpoints must match the nominal endpoints");
  if (cfg.mode == IntersectionMode::kMonteCarlo && mc_rng == nullptr)
    throw std::invalid_argument("build_union: Monte Carlo mode needs an rng");

  const auto& s = nom.states();
  const std::size_t m = s.size();
  const auto& c_min = nom.segment_lengths();

  InformedUnion u;
  u.intersection_ = cfg;
  u.nominal_states_ = s;
  u.nominal_cumlen_ = nom.cumulative_length();

  if (m == 2) {
    u.spheroids_.emplace_back(s[0], s[1],
                              std::max(path_length(dev), c_min[0]));
  } else {
    // Shared states: nearest deviation state per interior nominal state,
    // indices repaired forward so the sub-paths rho_i tile the deviation.
    std::vector<int> k(m - 2);
    for (std::size_t j = 0; j < m - 2; ++j)
      k[j] = nearest_deviation_state(s[j + 1], dev).second;
    for (std::size_t j = 1; j < m - 2; ++j) k[j] = std::max(k[j], k[j - 1]);

    for (std::size_t i = 0; i + 1 < m; ++i) {
      std::vector<StateVec> rho;
      if (i == 0) {
        for (int t = 0; t <= k[0]; ++t) rho.push_back(dev[t]);
        rho.push_back(s[1]);
      } else if (i + 2 < m) {
        rho.push_back(s[i]);
        for (int t = k[i - 1]; t <= k[i]; ++t) rho.push_back(dev[t]);
        rho.push_back(s[i + 1]);
      } else {
        rho.push_back(s[i]);
        for (std::size_t t = k[i - 1]; t < dev.size(); ++t)
          rho.push_back(dev[t]);
      }
      u.spheroids_.emplace_back(s[i], s[i + 1],
                                std::max(path_length(rho), c_min[i]));
    }
  }

  for (const auto& phs : u.spheroids_) {
    u.measures_.push_back(phs.measure());
    u.total_measure_ += phs.measure();
    u.selection_cdf_.push_back(u.total_measure_);
  }

  double intersections = 0.0;
  if (cfg.mode == IntersectionMode::kMonteCarlo) {
    for (std::size_t i = 0; i + 1 < u.spheroids_.size(); ++i)
      intersections += phs_mc_intersection(u.spheroids_[i], u.spheroids_[i + 1],
                                           cfg.mc_samples, *mc_rng);
  }
  u.measure_estimate_ = u.total_measure_ - intersections;
  return u;
}

InformedUnion build_union(const NominalPath& nom,
                          const std::vector<StateVec>& dev) {
  return build_union(nom, dev, IntersectionConfig{}, nullptr);
}

double union_measure_estimate(const InformedUnion& u) {
  return u.measure_estimate();
}

StateVec union_sample(const InformedUnion& u, Rng& rng) {
  return u.sample(rng);
}

bool should_switch(const InformedUnion& u, double rect_measure) {
  if (rect_measure <= 0.0)
    throw std::invalid_argument("should_switch: rect_measure must be > 0");
  return u.measure_estimate() < rect_measure;
}

}  // namespace replan
