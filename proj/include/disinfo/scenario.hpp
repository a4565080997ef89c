#pragma once

#include <cstdint>
#include <string>

#include "disinfo/integrator.hpp"
#include "disinfo/model.hpp"

namespace disinfo {

/// Tipping-analysis settings: classification threshold and the
/// documented slow/fast rate bracket for the critical-rate search.
struct TippingSettings {
  double delta_tip = 1.0;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  double tol = 1e-3;

  void validate(const char* path) const;
};

/// Forward-backward sweep settings.
struct ControlSettings {
  double omega = 0.5;  // relaxation, in (0,1]
  double tol = 1e-6;
  std::size_t max_iter = 500;

  void validate(const char* path) const;
};

/// A fully validated experiment description: model parameters, initial
/// state, forcing profile, grid and solver settings.
struct Scenario {
  Params params;
  StateVec initial;
  ForcingProfile forcing;
  TimeGrid grid;
  CostWeights weights;
  TippingSettings tipping;
  ControlSettings control;
  ModelOptions model_options;

  void validate() const;
};

/// Parses the sectioned key = value scenario format. Unknown sections
/// or keys are rejected; every omitted optional key gets its documented
/// default. Errors name the offending path and constraint.
Scenario parse_scenario(const std::string& text);

/// Canonical text form; parse(serialize(s)) reproduces s exactly.
std::string serialize_scenario(const Scenario& s);

/// Content hash of the canonical serialization (FNV-1a, hex).
std::string scenario_digest(const Scenario& s);

/// Convenience forward integration of a scenario.
inline Trajectory integrate(const Scenario& sc,
                            const std::vector<ControlVec>* schedule = nullptr) {
  return integrate(sc.params, sc.initial, sc.forcing, sc.grid,
                   sc.model_options, schedule);
}

}  // namespace disinfo
