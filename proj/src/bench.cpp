#include "replan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace replan {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kInformedBiased:
      return "informed-biased";
    case Variant::kInformedUnbiased:
      return "informed-unbiased";
    case Variant::kUninformedBiased:
      return "uninformed-biased";
    case Variant::kUninformedUnbiased:
      return "uninformed-unbiased";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(const std::string& name) {
  for (Variant v : all_variants())
    if (name == variant_name(v)) return v;
  return std::nullopt;
}

std::vector<Variant> all_variants() {
  return {Variant::kInformedBiased, Variant::kInformedUnbiased,
          Variant::kUninformedBiased, Variant::kUninformedUnbiased};
}

PlannerConfig apply_variant(PlannerConfig base, Variant v) {
  base.informed_enabled =
      v == Variant::kInformedBiased || v == Variant::kInformedUnbiased;
  if (v == Variant::kInformedUnbiased || v == Variant::kUninformedUnbiased)
    base.bias.delta = 0.0;
  return base;
}

int resolve_worker_count(int workers) {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("REPLAN_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

TrialBatch run_batch(const Scenario& scenario, Variant variant, int trials,
                     std::uint64_t base_seed, const PlannerConfig& base_config,
                     int workers) {
  if (trials < 1) throw std::invalid_argument("run_batch: trials must be >= 1");
  TrialBatch batch;
  batch.scenario_name = scenario.name;
  batch.variant = variant;
  batch.trials.resize(trials);
  for (int i = 0; i < trials; ++i)
    batch.seeds.push_back(base_seed + static_cast<std::uint64_t>(i));

  const PlannerConfig cfg = apply_variant(base_config, variant);
  const int n_workers = std::min(resolve_worker_count(workers), trials);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= trials) return;
      PlannerConfig trial_cfg = cfg;
      trial_cfg.rng_seed = batch.seeds[i];
      batch.trials[i] = plan(scenario, trial_cfg);
    }
  };
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return batch;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty())
    throw std::invalid_argument("percentile: empty sample");
  std::sort(values.begin(), values.end());
  const double rank = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  if (std::isinf(values[lo]) || std::isinf(values[hi])) return values[hi];
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::optional<std::pair<int, int>> median_ci_ranks(int n) {
  if (n < 1) return std::nullopt;
  // Largest 1-based rank l with P(Bin(n, 1/2) <= l-1) <= 0.025; the interval
  // (x_(l), x_(n+1-l)) then covers the median with >= 95% confidence.
  const double log_half = std::log(0.5);
  double cdf = 0.0;
  int l = 0;
  for (int k = 0; k <= n; ++k) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                           std::lgamma(n - k + 1.0) + n * log_half;
    cdf += std::exp(log_pmf);
    if (cdf <= 0.025)
      l = k + 1;
    else
      break;
  }
  if (l < 1) return std::nullopt;
  return std::make_pair(l, n + 1 - l);
}

CostThreshold threshold_from_batch(const TrialBatch& batch) {
  std::vector<double> finals;
  for (const auto& t : batch.trials) finals.push_back(t.trace.back().cost);
  CostThreshold th;
  th.median_final = percentile(finals, 50.0);
  th.sigma = (percentile(finals, 84.1) - percentile(finals, 15.9)) / 2.0;
  th.threshold = th.median_final + 3.0 * th.sigma;
  return th;
}

AggregateStats aggregate(const TrialBatch& batch,
                         const std::vector<int>& checkpoints,
                         const std::optional<CostThreshold>& reference) {
  if (batch.trials.empty())
    throw std::invalid_argument("aggregate: empty batch");
  const int n = static_cast<int>(batch.trials.size());
  for (int c : checkpoints) {
    if (c < 1) throw std::invalid_argument("aggregate: checkpoint < 1");
    for (const auto& t : batch.trials)
      if (static_cast<int>(t.trace.size()) < c)
        throw std::invalid_argument(
            "aggregate: a trial does not cover the largest checkpoint");
  }

  AggregateStats stats;
  stats.checkpoints = checkpoints;
  const auto ranks = median_ci_ranks(n);
  for (int c : checkpoints) {
    std::vector<double> costs;
    for (const auto& t : batch.trials) costs.push_back(t.trace[c - 1].cost);
    std::sort(costs.begin(), costs.end());
    const double median = percentile(costs, 50.0);
    stats.median_cost.push_back(median);
    int unsolved = 0;
    for (double v : costs)
      if (std::isinf(v)) ++unsolved;
    const bool degenerate = !ranks.has_value() || 2 * unsolved > n;
    stats.degenerate.push_back(degenerate);
    if (degenerate) {
      stats.ci_low.push_back(std::numeric_limits<double>::quiet_NaN());
      stats.ci_high.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      stats.ci_low.push_back(costs[ranks->first - 1]);
      stats.ci_high.push_back(costs[ranks->second - 1]);
    }
  }

  const CostThreshold own = threshold_from_batch(batch);
  stats.median_final = own.median_final;
  stats.sigma_nonparam = own.sigma;
  stats.threshold = reference.value_or(own);
  for (const auto& t : batch.trials) {
    double reached = std::numeric_limits<double>::infinity();
    for (const auto& pt : t.trace) {
      if (pt.cost <= stats.threshold.threshold) {
        reached = pt.seconds;
        break;
      }
    }
    stats.time_to_3sigma.push_back(reached);
  }
  return stats;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_curves_csv(
    const std::string& path,
    const std::vector<std::pair<Variant, AggregateStats>>& stats) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "variant,checkpoint,median,ci_low,ci_high,degenerate\n";
  for (const auto& [variant, s] : stats) {
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
      out << variant_name(variant) << ',' << s.checkpoints[i] << ','
          << format_g17(s.median_cost[i]) << ',' << format_g17(s.ci_low[i])
          << ',' << format_g17(s.ci_high[i]) << ','
          << (s.degenerate[i] ? 1 : 0) << '\n';
    }
  }
}

void write_times_csv(
    const std::string& path,
    const std::vector<std::pair<const TrialBatch*, const AggregateStats*>>&
        rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "variant,trial,seed,time_to_3sigma,final_cost\n";
  for (const auto& [batch, stats] : rows) {
    for (std::size_t i = 0; i < batch->trials.size(); ++i) {
      out << variant_name(batch->variant) << ',' << i << ','
          << batch->seeds[i] << ',' << format_g17(stats->time_to_3sigma[i])
          << ',' << format_g17(batch->trials[i].trace.back().cost) << '\n';
    }
  }
}

void write_trace_csv(const std::string& path, const PlanResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iteration,cost,seconds\n";
  for (const auto& pt : result.trace)
    out << pt.iteration << ',' << format_g17(pt.cost) << ','
        << format_g17(pt.seconds) << '\n';
}

std::vector<CurveRow> parse_curves_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    CurveRow row;
    std::getline(ss, row.variant, ',');
    std::getline(ss, field, ',');
    row.checkpoint = std::stoi(field);
    std::getline(ss, field, ',');
    row.median = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    row.ci_low = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    row.ci_high = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    row.degenerate = field == "1";
    rows.push_back(row);
  }
  return rows;
}

}  // namespace replan
