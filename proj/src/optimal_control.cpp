#include "disinfo/optimal_control.hpp"

#include <algorithm>
#include <cmath>

#include "disinfo/errors.hpp"

namespace disinfo {

double running_cost(const StateVec& x, const ControlVec& u,
                    const CostWeights& w) {
  return w.w_C * x.C + w.w_I * x.I + w.w_E * x.E - w.w_Z * x.Z +
         w.w_u * (u.u1 * u.u1 + u.u2 * u.u2 + u.u3 * u.u3 + u.u4 * u.u4);
}

double hamiltonian(const StateVec& x, const ControlVec& u,
                   const AdjointVec& lam, const Params& params, double F,
                   const CostWeights& w, const ModelOptions& opts) {
  const StateVec d = rhs(x, params, F, u, opts);
  double h = running_cost(x, u, w);
  for (int i = 0; i < 5; ++i) h += lam[i] * d[i];
  return h;
}

AdjointVec adjoint_rhs(const StateVec& x, const ControlVec& u,
                       const AdjointVec& lam, const Params& q, double F,
                       const CostWeights& w, const ModelOptions& opts) {
  const double cs = (opts.convention == SignConvention::Literal) ? 1.0 : -1.0;
  const double denom = (opts.transfer == TransferForm::Regularized)
                           ? 1.0 + q.phi * x.Z
                           : q.phi * x.Z + opts.kappa;
  const double dT_dE = q.epsilon / denom;
  const double dT_dZ = -q.epsilon * x.E * q.phi / (denom * denom);

  const double l1 = lam.lambda1, l2 = lam.lambda2, l3 = lam.lambda3,
               l4 = lam.lambda4, l5 = lam.lambda5;

  // dH/dS
  const double dH_dS =
      l1 * (-q.gamma * x.C - q.beta * x.I - q.b * x.Z) +
      l2 * ((1.0 - q.p) * q.beta * x.I + (1.0 - q.l) * q.b * x.Z +
            cs * u.u4 * q.b * x.Z) +
      l3 * ((1.0 - q.eta) * q.gamma * x.C) +
      l4 * (q.eta * q.gamma * x.C + q.p * q.beta * x.I) +
      l5 * (-cs * u.u4 * q.b * x.Z);
  // dH/dE
  const double dH_dE = w.w_E + (l4 - l2) * dT_dE;
  // dH/dC
  const double dH_dC =
      w.w_C + l1 * (-q.gamma * x.S) +
      l3 * (F * x.I - q.mu + (1.0 - q.eta) * q.gamma * x.S - u.u1 +
            cs * u.u3 * x.I) +
      l4 * (-F * x.I + q.eta * q.gamma * x.S - cs * u.u3 * x.I);
  // dH/dI
  const double dH_dI =
      w.w_I + l1 * (-q.beta * x.S) +
      l2 * ((1.0 - q.p) * q.beta * x.S + u.u2) +
      l3 * (F * x.C + cs * u.u3 * x.C) +
      l4 * (-F * x.C + q.p * q.beta * x.S - u.u2 - cs * u.u3 * x.C) +
      l5 * (q.b * x.Z);
  // dH/dZ
  const double dH_dZ =
      -w.w_Z + l1 * (-q.b * x.S) +
      l2 * (-dT_dZ + (1.0 - q.l) * q.b * x.S + cs * u.u4 * q.b * x.S) +
      l4 * dT_dZ + l5 * (q.b * x.I - q.xi - cs * u.u4 * q.b * x.S);

  return {-dH_dS, -dH_dE, -dH_dC, -dH_dI, -dH_dZ};
}

namespace {
double clamp01(double v) { return std::min(std::max(0.0, v), 1.0); }
}  // namespace

ControlVec optimal_control_update(const StateVec& x, const AdjointVec& lam,
                                  const Params& params,
                                  SignConvention convention, double w_u) {
  if (!(w_u > 0.0))
    throw ValidationError("weights.w_u: must be > 0 for control updates");
  const double cs = (convention == SignConvention::Literal) ? 1.0 : -1.0;
  ControlVec u;
  u.u1 = clamp01(x.C * lam.lambda3 / (2.0 * w_u));
  u.u2 = clamp01(x.I * (lam.lambda4 - lam.lambda2) / (2.0 * w_u));
  u.u3 = clamp01(cs * x.C * x.I * (lam.lambda4 - lam.lambda3) / (2.0 * w_u));
  u.u4 = clamp01(cs * params.b * x.S * x.Z *
                 (lam.lambda5 - lam.lambda2) / (2.0 * w_u));
  return u;
}

std::vector<double> quadrature_weights(const TimeGrid& grid) {
  const std::size_t n = grid.n_steps;
  const double h = grid.step();
  std::vector<double> w(grid.nodes(), 0.0);
  // Simpson over the largest even number of intervals, trapezoid on the
  // remaining one.
  const std::size_t m = (n % 2 == 0) ? n : n - 1;
  if (m >= 2) {
    w[0] += h / 3.0;
    w[m] += h / 3.0;
    for (std::size_t k = 1; k < m; ++k)
      w[k] += (k % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
  }
  if (m < n) {
    w[n - 1] += h / 2.0;
    w[n] += h / 2.0;
  }
  return w;
}

double objective(const Trajectory& traj, const std::vector<ControlVec>& controls,
                 const CostWeights& w) {
  if (controls.size() != traj.states.size())
    throw ValidationError("objective: controls length must equal grid nodes");
  const std::vector<double> qw = quadrature_weights(traj.grid);
  double J = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    J += qw[k] * running_cost(traj.states[k], controls[k], w);
  return J;
}

namespace {

// Backward adjoint solve along a frozen forward trajectory.
std::vector<AdjointVec> solve_adjoint(const Scenario& sc,
                                      const Trajectory& traj,
                                      const std::vector<ControlVec>& u) {
  auto f = [&](double t, const AdjointVec& lam) {
    const ControlVec ut = detail::schedule_at(u, sc.grid, t);
    const StateVec xt = traj.state_at(t);
    return adjoint_rhs(xt, ut, lam, sc.params, forcing_value(sc.forcing, t),
                       sc.weights, sc.model_options);
  };
  return integrate_backward(f, AdjointVec{}, sc.grid);
}

// State-adjoint part of dH/du_i (the switch functions).
std::array<double, 4> switch_terms(const StateVec& x, const AdjointVec& lam,
                                   const Params& q, SignConvention conv) {
  const double cs = (conv == SignConvention::Literal) ? 1.0 : -1.0;
  return {-lam.lambda3 * x.C,
          (lam.lambda2 - lam.lambda4) * x.I,
          cs * (lam.lambda3 - lam.lambda4) * x.C * x.I,
          cs * (lam.lambda2 - lam.lambda5) * q.b * x.S * x.Z};
}

}  // namespace

FbsmResult forward_backward_sweep(const Scenario& sc) {
  sc.control.validate("control");
  const std::size_t nodes = sc.grid.nodes();
  const double omega = sc.control.omega;

  std::vector<ControlVec> u(nodes);
  FbsmResult res;

  for (std::size_t iter = 1; iter <= sc.control.max_iter; ++iter) {
    Trajectory traj = integrate(sc, &u);
    const std::vector<AdjointVec> lam = solve_adjoint(sc, traj, u);

    double delta = 0.0;
    std::vector<ControlVec> u_next(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      const ControlVec star = optimal_control_update(
          traj.states[k], lam[k], sc.params, sc.model_options.convention,
          sc.weights.w_u);
      for (int i = 0; i < 4; ++i)
        delta = std::max(delta, std::abs(star[i] - u[k][i]));
      u_next[k] = (1.0 - omega) * u[k] + omega * star;
    }

    res.J_history.push_back(objective(traj, u, sc.weights));
    res.iterations = iter;

    if (delta < sc.control.tol) {
      // Final polish: take the full update, then report the residual of
      // the projected stationarity condition on the refreshed solution.
      for (std::size_t k = 0; k < nodes; ++k)
        u[k] = optimal_control_update(traj.states[k], lam[k], sc.params,
                                      sc.model_options.convention,
                                      sc.weights.w_u);
      Trajectory final_traj = integrate(sc, &u);
      const std::vector<AdjointVec> final_lam =
          solve_adjoint(sc, final_traj, u);
      double resid = 0.0;
      for (std::size_t k = 0; k < nodes; ++k) {
        const ControlVec star = optimal_control_update(
            final_traj.states[k], final_lam[k], sc.params,
            sc.model_options.convention, sc.weights.w_u);
        for (int i = 0; i < 4; ++i)
          resid = std::max(resid, std::abs(star[i] - u[k][i]));
      }
      res.controls = std::move(u);
      res.adjoints = final_lam;
      res.state_traj = std::move(final_traj);
      res.J_history.push_back(
          objective(res.state_traj, res.controls, sc.weights));
      res.converged = true;
      res.stationarity_residual = resid;
      return res;
    }
    u = std::move(u_next);
  }

  NoConvergenceError err("forward-backward sweep did not converge within " +
                         std::to_string(sc.control.max_iter) + " iterations");
  err.j_history = std::move(res.J_history);
  throw err;
}

std::pair<double, double> directional_derivative_check(
    const Scenario& sc, const std::vector<ControlVec>& u,
    const std::vector<ControlVec>& du) {
  const std::size_t nodes = sc.grid.nodes();
  if (u.size() != nodes || du.size() != nodes)
    throw ValidationError("schedule length must equal grid nodes");

  const double eps = 1e-5;
  auto shifted = [&](double sign) {
    std::vector<ControlVec> v(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      v[k] = u[k] + (sign * eps) * du[k];
      for (int i = 0; i < 4; ++i)
        if (v[k][i] < 0.0 || v[k][i] > 1.0)
          throw ValidationError(
              "perturbation leaves the admissible control box");
    }
    return v;
  };
  const std::vector<ControlVec> up = shifted(+1.0);
  const std::vector<ControlVec> um = shifted(-1.0);

  // Adjoint route.
  Trajectory traj = integrate(sc, &u);
  const std::vector<AdjointVec> lam = solve_adjoint(sc, traj, u);
  const std::vector<double> qw = quadrature_weights(sc.grid);
  double adjoint_dot = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto sw = switch_terms(traj.states[k], lam[k], sc.params,
                                 sc.model_options.convention);
    for (int i = 0; i < 4; ++i)
      adjoint_dot +=
          qw[k] * (2.0 * sc.weights.w_u * u[k][i] + sw[i]) * du[k][i];
  }

  // Central finite difference of the objective.
  Trajectory tp = integrate(sc, &up);
  Trajectory tm = integrate(sc, &um);
  const double fd_dot = (objective(tp, up, sc.weights) -
                         objective(tm, um, sc.weights)) /
                        (2.0 * eps);
  return {adjoint_dot, fd_dot};
}

}  // namespace disinfo
