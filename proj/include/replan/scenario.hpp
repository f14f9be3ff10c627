#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "replan/geometry.hpp"
#include "replan/nominal.hpp"
#include "replan/rng.hpp"

namespace replan {

/// Schema violation, carrying the offending field path in the message.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// A planning scenario: sampling rectangle, nominal path, static obstacles,
/// target vessels and the own-ship speed that maps path length to time.
/// Immutable after load; shareable across trial threads.
struct Scenario {
  std::string name;
  Bounds bounds;
  NominalPath nominal;
  std::vector<Obstacle> static_obstacles;
  std::vector<MovingEllipse> moving_obstacles;
  double own_speed = 1.0;

  double rect_measure() const { return bounds.measure(); }
  double diagonal() const { return bounds.diagonal(); }

  bool point_in_static(const StateVec& p) const;
  bool edge_collision_free(const Segment& s, double t_a, double t_b,
                           double resolution) const;
};

/// Parses and fully validates a schema-version-1 document (see README for
/// the field-by-field schema). Unknown fields are rejected; diagnostics name
/// the offending field path.
Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

/// Serializes back to the schema; load(serialize(s)) reproduces s exactly.
std::string scenario_to_json(const Scenario& s);

struct AreaRatioEstimate {
  double ratio = 0.0;      // statically-free fraction of the bounds
  double std_error = 0.0;  // binomial standard error of the estimate
};

/// Monte Carlo estimate of the statically-free fraction of the bounds
/// (moving obstacles excluded by definition). Requires mc_samples >= 1000.
AreaRatioEstimate area_ratio(const Scenario& s, long mc_samples,
                             std::uint64_t seed = 0x5eed);

/// The three bundled case-study scenarios (narrow_passage, inner_coastal,
/// fjord_exit). Geometry is procedurally constructed to match the case
/// studies' traffic structure and target area ratios.
std::vector<Scenario> bundled_fixtures();
Scenario bundled_fixture(const std::string& name);
std::vector<std::string> bundled_fixture_names();

/// Hand-authored feasible deviation for a bundled fixture, used by tests to
/// certify that every fixture admits a solution.
std::vector<StateVec> bundled_feasible_path(const std::string& name);

}  // namespace replan
