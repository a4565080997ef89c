#include "disinfo/integrator.hpp"

namespace disinfo {

void TimeGrid::validate(const char* path) const {
  const std::string base(path);
  if (!std::isfinite(t0) || !std::isfinite(T))
    throw ValidationError(base + ": bounds must be finite");
  if (!(T > t0)) throw ValidationError(base + ".T: must be > t0");
  if (n_steps < 1) throw ValidationError(base + ".n_steps: must be >= 1");
}

StateVec Trajectory::state_at(double t) const {
  return detail::schedule_at(states, grid, t);
}

Trajectory integrate(const Params& params, const StateVec& initial,
                     const ForcingProfile& profile, const TimeGrid& grid,
                     const ModelOptions& opts,
                     const std::vector<ControlVec>* schedule) {
  if (schedule && schedule->size() != grid.nodes())
    throw ValidationError("control schedule length must equal grid nodes");

  const double h = grid.step();
  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.nodes());
  traj.forcing.reserve(grid.nodes());
  traj.states.push_back(initial);
  traj.forcing.push_back(forcing_value(profile, grid.t0));
  if (schedule) traj.controls = *schedule;

  auto f = [&](double t, const StateVec& y) {
    const ControlVec u =
        schedule ? detail::schedule_at(*schedule, grid, t) : ControlVec{};
    return rhs(y, params, forcing_value(profile, t), u, opts);
  };

  for (std::size_t k = 0; k < grid.n_steps; ++k) {
    const double tk = grid.time_at(k);
    StateVec next;
    try {
      next = rk4_step(f, traj.states.back(), tk, h);
    } catch (const BlowUpError&) {
      throw BlowUpError("integration blew up", tk);
    }
    detail::check_finite(next, grid.time_at(k + 1));
    traj.states.push_back(next);
    traj.forcing.push_back(forcing_value(profile, grid.time_at(k + 1)));
  }
  return traj;
}

}  // namespace disinfo
