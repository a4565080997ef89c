#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "disinfo/errors.hpp"
#include "disinfo/model.hpp"

namespace disinfo {

inline StateVec operator+(const StateVec& a, const StateVec& b) {
  return {a.S + b.S, a.E + b.E, a.C + b.C, a.I + b.I, a.Z + b.Z};
}
inline StateVec operator-(const StateVec& a, const StateVec& b) {
  return {a.S - b.S, a.E - b.E, a.C - b.C, a.I - b.I, a.Z - b.Z};
}
inline StateVec operator*(double s, const StateVec& a) {
  return {s * a.S, s * a.E, s * a.C, s * a.I, s * a.Z};
}
inline ControlVec operator+(const ControlVec& a, const ControlVec& b) {
  return {a.u1 + b.u1, a.u2 + b.u2, a.u3 + b.u3, a.u4 + b.u4};
}
inline ControlVec operator-(const ControlVec& a, const ControlVec& b) {
  return {a.u1 - b.u1, a.u2 - b.u2, a.u3 - b.u3, a.u4 - b.u4};
}
inline ControlVec operator*(double s, const ControlVec& a) {
  return {s * a.u1, s * a.u2, s * a.u3, s * a.u4};
}

/// Uniform time grid on [t0, T] with n_steps intervals.
struct TimeGrid {
  double t0 = 0.0;
  double T = 0.0;
  std::size_t n_steps = 0;

  TimeGrid() = default;
  TimeGrid(double t0_, double T_, std::size_t n_steps_)
      : t0(t0_), T(T_), n_steps(n_steps_) {
    validate("grid");
  }

  void validate(const char* path) const;

  double step() const { return (T - t0) / static_cast<double>(n_steps); }
  std::size_t nodes() const { return n_steps + 1; }
  double time_at(std::size_t k) const {
    return t0 + step() * static_cast<double>(k);
  }
};

/// Dense solution on a grid: states, forcing levels and (optionally)
/// the control schedule that generated it.
struct Trajectory {
  TimeGrid grid;
  std::vector<StateVec> states;
  std::vector<double> forcing;
  std::optional<std::vector<ControlVec>> controls;

  const StateVec& final_state() const { return states.back(); }

  /// Piecewise-linear interpolation of the stored states.
  StateVec state_at(double t) const;
};

/// One classical fourth-order Runge-Kutta step. Works for any value
/// type with vector-space operators (double, StateVec, AdjointVec).
template <class F, class V>
V rk4_step(F&& f, const V& y, double t, double h) {
  const V k1 = f(t, y);
  const V k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
  const V k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
  const V k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline constexpr double kBlowUpLimit = 1e12;

namespace detail {
inline void check_finite(double v, double t) {
  if (!std::isfinite(v) || std::abs(v) > kBlowUpLimit)
    throw BlowUpError("integration blew up", t);
}
template <class V>
void check_finite(const V& x, double t) {
  for (double c : x.to_array()) check_finite(c, t);
}
/// Node-held schedule value at an arbitrary time, linear between nodes.
template <class V>
V schedule_at(const std::vector<V>& nodes, const TimeGrid& g, double t) {
  const double h = g.step();
  double s = (t - g.t0) / h;
  if (s <= 0.0) return nodes.front();
  if (s >= static_cast<double>(g.n_steps)) return nodes.back();
  const auto k = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(k);
  return (1.0 - w) * nodes[k] + w * nodes[k + 1];
}
}  // namespace detail

/// Forward RK4 integration of the controlled model over the grid.
/// `schedule`, when present, holds one ControlVec per grid node.
Trajectory integrate(const Params& params, const StateVec& initial,
                     const ForcingProfile& profile, const TimeGrid& grid,
                     const ModelOptions& opts = {},
                     const std::vector<ControlVec>* schedule = nullptr);

/// RK4 in reverse time from node n down to node 0. The returned
/// sequence is node-indexed: element k corresponds to grid time t_k.
/// `f(t, v)` must interpolate any frozen quantities itself.
template <class F, class V>
std::vector<V> integrate_backward(F&& f, const V& terminal,
                                  const TimeGrid& grid) {
  const double h = grid.step();
  std::vector<V> seq(grid.nodes());
  seq[grid.n_steps] = terminal;
  for (std::size_t k = grid.n_steps; k > 0; --k) {
    seq[k - 1] = rk4_step(f, seq[k], grid.time_at(k), -h);
    detail::check_finite(seq[k - 1], grid.time_at(k - 1));
  }
  return seq;
}

}  // namespace disinfo
