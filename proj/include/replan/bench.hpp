#pragma once

#include <optional>
#include <string>
#include <vector>

#include "replan/planner.hpp"
#include "replan/scenario.hpp"

namespace replan {

enum class Variant {
  kInformedBiased,
  kInformedUnbiased,
  kUninformedBiased,
  kUninformedUnbiased,
};

const char* variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string& name);
std::vector<Variant> all_variants();

/// Planner configuration for a variant: informed toggles the union sampler,
/// unbiased forces delta to zero.
PlannerConfig apply_variant(PlannerConfig base, Variant v);

struct TrialBatch {
  std::string scenario_name;
  Variant variant = Variant::kInformedBiased;
  std::vector<std::uint64_t> seeds;
  std::vector<PlanResult> trials;
};

/// Runs `trials` independent plans with seeds base_seed..base_seed+trials-1,
/// fanned out over `workers` threads (<= 0 resolves from the REPLAN_WORKERS
/// environment variable, then hardware concurrency). Results are identical
/// regardless of the worker count.
TrialBatch run_batch(const Scenario& scenario, Variant variant, int trials,
                     std::uint64_t base_seed, const PlannerConfig& base_config,
                     int workers = 0);

int resolve_worker_count(int workers);

/// Reference level for the time-to-3-sigma statistic: first wall time at
/// which a trial's cost reaches median_final + 3 sigma of the designated
/// reference batch.
struct CostThreshold {
  double median_final = 0.0;
  double sigma = 0.0;
  double threshold = 0.0;
};

CostThreshold threshold_from_batch(const TrialBatch& batch);

struct AggregateStats {
  std::vector<int> checkpoints;
  std::vector<double> median_cost;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<bool> degenerate;  // majority unsolved or too few trials
  double median_final = 0.0;
  double sigma_nonparam = 0.0;  // (p84.1 - p15.9) / 2 of final costs
  CostThreshold threshold;      // level used for time_to_3sigma
  std::vector<double> time_to_3sigma;  // per trial, seconds (inf = never)
};

/// Per-checkpoint medians with distribution-free 95% confidence intervals
/// from binomial order statistics. The time-to-3-sigma threshold comes from
/// `reference` when given, otherwise from the batch itself. Throws if a
/// trial does not cover the largest checkpoint.
AggregateStats aggregate(const TrialBatch& batch,
                         const std::vector<int>& checkpoints,
                         const std::optional<CostThreshold>& reference = {});

/// 1-based order-statistic ranks (lo, hi) bounding the median at >= 95%
/// two-sided confidence; nullopt when n is too small.
std::optional<std::pair<int, int>> median_ci_ranks(int n);

double percentile(std::vector<double> values, double q);  // q in [0, 100]

/// CSV emission. Numbers are written with 17 significant digits so re-parsing
/// reproduces them exactly.
std::string format_g17(double v);
void write_curves_csv(const std::string& path,
                      const std::vector<std::pair<Variant, AggregateStats>>&
                          stats);
void write_times_csv(
    const std::string& path,
    const std::vector<std::pair<const TrialBatch*, const AggregateStats*>>&
        rows);
void write_trace_csv(const std::string& path, const PlanResult& result);

struct CurveRow {
  std::string variant;
  int checkpoint = 0;
  double median = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool degenerate = false;
};
std::vector<CurveRow> parse_curves_csv(const std::string& path);

}  // namespace replan
