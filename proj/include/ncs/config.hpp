#pragma once

#include <string>

#include "ncs/design.hpp"
#include "ncs/sim.hpp"

namespace ncs {

// JSON config parsing (schema_version 1, unknown keys rejected) and report
// serialization. All functions throw ParseError on malformed input.
NCSModel parse_model(const std::string& json_text);
SimConfig parse_sim_config(const std::string& json_text, const NCSModel& model);
DesignProblem parse_design_problem(const std::string& json_text);

std::string report_to_json(const MomentReport& report, int indent = 2);
std::string stability_to_json(const StabilityReport& report, int indent = 2);
std::string ensemble_to_json(const EnsembleStats& stats, int indent = 2);
std::string design_to_json(const DesignResult& result, int indent = 2);

// Parameter sweep over mean_interval or cv2 of the interval distribution,
// one CSV row per grid point. Optional Monte Carlo columns for x_1.
struct SweepConfig {
  enum class Parameter { MeanInterval, Cv2 } parameter = Parameter::MeanInterval;
  std::vector<double> values;
  bool with_monte_carlo = false;
  SimConfig sim;
  QuadratureSpec quadrature;
};

SweepConfig parse_sweep_config(const std::string& json_text,
                               const NCSModel& model);
std::string run_sweep(const NCSModel& model, const SweepConfig& sweep);

}  // namespace ncs
