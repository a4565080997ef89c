#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "disinfo/integrator.hpp"
#include "disinfo/model.hpp"
#include "disinfo/scenario.hpp"

namespace disinfo {

/// Costates for S, E, C, I, Z. Terminal condition lambda(T) = 0
/// (free terminal state).
struct AdjointVec {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  double lambda5 = 0.0;

  std::array<double, 5> to_array() const {
    return {lambda1, lambda2, lambda3, lambda4, lambda5};
  }
  double& operator[](std::size_t i) { return (&lambda1)[i]; }
  double operator[](std::size_t i) const { return (&lambda1)[i]; }
};

inline AdjointVec operator+(const AdjointVec& a, const AdjointVec& b) {
  return {a.lambda1 + b.lambda1, a.lambda2 + b.lambda2, a.lambda3 + b.lambda3,
          a.lambda4 + b.lambda4, a.lambda5 + b.lambda5};
}
inline AdjointVec operator*(double s, const AdjointVec& a) {
  return {s * a.lambda1, s * a.lambda2, s * a.lambda3, s * a.lambda4,
          s * a.lambda5};
}

/// Outcome of the forward-backward sweep.
struct FbsmResult {
  std::vector<ControlVec> controls;   // per grid node
  std::vector<AdjointVec> adjoints;   // per grid node
  Trajectory state_traj;
  std::vector<double> J_history;      // objective per iteration
  bool converged = false;
  std::size_t iterations = 0;
  double stationarity_residual = 0.0;
};

/// Instantaneous cost rate w_C*C + w_I*I + w_E*E - w_Z*Z + w_u*|u|^2.
double running_cost(const StateVec& state, const ControlVec& u,
                    const CostWeights& w);

/// running_cost plus the adjoint-weighted dynamics.
double hamiltonian(const StateVec& state, const ControlVec& u,
                   const AdjointVec& lam, const Params& params, double F,
                   const CostWeights& w, const ModelOptions& opts = {});

/// Costate derivative -dH/dx, analytic.
AdjointVec adjoint_rhs(const StateVec& state, const ControlVec& u,
                       const AdjointVec& lam, const Params& params, double F,
                       const CostWeights& w, const ModelOptions& opts = {});

/// Projected stationarity formulas, clamped to [0,1] componentwise.
ControlVec optimal_control_update(const StateVec& state, const AdjointVec& lam,
                                  const Params& params,
                                  SignConvention convention, double w_u = 1.0);

/// Composite Simpson quadrature of running_cost over the trajectory
/// (trapezoid on the final interval when the interval count is odd).
double objective(const Trajectory& traj, const std::vector<ControlVec>& controls,
                 const CostWeights& w);

/// Quadrature weights matching `objective` (one per node, already
/// scaled by the step).
std::vector<double> quadrature_weights(const TimeGrid& grid);

/// Forward-backward sweep with relaxed control updates. Uses the
/// scenario's control settings (omega, tol, max_iter).
FbsmResult forward_backward_sweep(const Scenario& sc);

/// Adjoint-gradient directional derivative vs a central finite
/// difference of the objective along the perturbation `du`.
/// Returns {adjoint route, finite-difference route}.
std::pair<double, double> directional_derivative_check(
    const Scenario& sc, const std::vector<ControlVec>& u,
    const std::vector<ControlVec>& du);

}  // namespace disinfo
