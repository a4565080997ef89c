#pragma once

#include <string>
#include <vector>

#include "disinfo/integrator.hpp"
#include "disinfo/scenario.hpp"

namespace disinfo {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Deterministic CSV serialization of a trajectory: header
/// t,S,E,C,I,Z,F (plus ,u1,u2,u3,u4 when controls are included),
/// 12 significant digits, LF line endings.
std::string export_csv(const Trajectory& traj, bool include_controls);

/// Control-schedule CSV: header t,u1,u2,u3,u4, same formatting rules.
std::string export_controls_csv(const TimeGrid& grid,
                                const std::vector<ControlVec>& controls);

/// Reproducibility record written beside every CLI output.
struct RunManifest {
  std::string scenario_digest;
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> options;
  double runtime_seconds = 0.0;
  std::vector<std::string> outputs;

  std::string to_json() const;
};

}  // namespace disinfo
