#pragma once

#include <string>
#include <vector>

#include "replan/bench.hpp"
#include "replan/informed.hpp"
#include "replan/scenario.hpp"

namespace replan {

/// 2-D scenario map: bounds, obstacles (moving ones at their t=0 pose with
/// dashed trajectories), the nominal path, an optional best path and the
/// optional informed-union ellipse outlines.
std::string scenario_svg(const Scenario& scenario,
                         const std::vector<StateVec>* best_path = nullptr,
                         const InformedUnion* informed = nullptr);

struct CurveSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> median;
  std::vector<double> ci_low;   // may be empty (no band)
  std::vector<double> ci_high;  // may be empty
};

/// Cost-versus-iteration plot with shaded confidence bands.
std::string convergence_svg(const std::vector<CurveSeries>& series,
                            const std::string& title);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace replan
