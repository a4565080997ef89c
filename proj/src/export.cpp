#include "disinfo/export.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "disinfo/errors.hpp"

namespace disinfo {

namespace {
// 12 significant digits, C locale.
void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  out += buf;
}
}  // namespace

std::string export_csv(const Trajectory& traj, bool include_controls) {
  if (include_controls && !traj.controls)
    throw ValidationError("export: trajectory carries no control schedule");
  std::string out = "t,S,E,C,I,Z,F";
  if (include_controls) out += ",u1,u2,u3,u4";
  out += "\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    append_num(out, traj.grid.time_at(k));
    const StateVec& x = traj.states[k];
    for (int i = 0; i < 5; ++i) {
      out += ',';
      append_num(out, x[i]);
    }
    out += ',';
    append_num(out, traj.forcing[k]);
    if (include_controls) {
      const ControlVec& u = (*traj.controls)[k];
      for (int i = 0; i < 4; ++i) {
        out += ',';
        append_num(out, u[i]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string export_controls_csv(const TimeGrid& grid,
                                const std::vector<ControlVec>& controls) {
  if (controls.size() != grid.nodes())
    throw ValidationError("export: controls length must equal grid nodes");
  std::string out = "t,u1,u2,u3,u4\n";
  for (std::size_t k = 0; k < controls.size(); ++k) {
    append_num(out, grid.time_at(k));
    for (int i = 0; i < 4; ++i) {
      out += ',';
      append_num(out, controls[k][i]);
    }
    out += '\n';
  }
  return out;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["artifact_version"] = kArtifactVersion;
  j["scenario_digest"] = scenario_digest;
  j["subcommand"] = subcommand;
  nlohmann::ordered_json opts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : options) opts[k] = v;
  j["options"] = opts;
  j["runtime_seconds"] = runtime_seconds;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

}  // namespace disinfo
