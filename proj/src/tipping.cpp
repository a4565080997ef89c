#include "disinfo/tipping.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "disinfo/errors.hpp"
#include "disinfo/integrator.hpp"

namespace disinfo {

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;

Vec5 to_eigen(const StateVec& x) {
  Vec5 v;
  for (int i = 0; i < 5; ++i) v[i] = x[i];
  return v;
}

StateVec from_eigen(const Vec5& v) {
  StateVec x;
  for (int i = 0; i < 5; ++i) x[i] = v[i];
  return x;
}

Vec5 residual(const Vec5& y, const Params& params, double F,
              const ModelOptions& opts) {
  return to_eigen(rhs(from_eigen(y), params, F, ControlVec{}, opts));
}

// Central finite-difference Jacobian, step 1e-6*max(1,|x_i|).
Eigen::Matrix<double, 5, 5> fd_jacobian(const Vec5& y, const Params& params,
                                        double F, const ModelOptions& opts) {
  Eigen::Matrix<double, 5, 5> J;
  for (int i = 0; i < 5; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(y[i]));
    Vec5 yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    J.col(i) = (residual(yp, params, F, opts) - residual(ym, params, F, opts)) /
               (2.0 * h);
  }
  return J;
}

// Damped Newton; returns true on success.
bool newton(Vec5& y, const Params& params, double F, const ModelOptions& opts) {
  constexpr int kMaxIter = 100;
  constexpr int kMaxHalvings = 20;
  constexpr double kTol = 1e-10;
  double rnorm = residual(y, params, F, opts).lpNorm<Eigen::Infinity>();
  for (int it = 0; it < kMaxIter; ++it) {
    if (rnorm < kTol) return true;
    const Vec5 r = residual(y, params, F, opts);
    const Eigen::Matrix<double, 5, 5> J = fd_jacobian(y, params, F, opts);
    const Vec5 step = J.fullPivLu().solve(-r);
    if (!step.allFinite()) return false;
    double damp = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      const Vec5 trial = y + damp * step;
      const double trial_norm =
          residual(trial, params, F, opts).lpNorm<Eigen::Infinity>();
      if (std::isfinite(trial_norm) && trial_norm < rnorm) {
        y = trial;
        rnorm = trial_norm;
        accepted = true;
        break;
      }
      damp *= 0.5;
    }
    if (!accepted) return false;
  }
  return rnorm < kTol;
}

}  // namespace

StateVec find_equilibrium(const Params& params, double F_frozen,
                          const StateVec& guess, const ModelOptions& opts,
                          double fallback_horizon) {
  Vec5 y = to_eigen(guess);
  if (newton(y, params, F_frozen, opts)) return from_eigen(y);

  // Fallback: settle the frozen system, then restart Newton.
  ForcingProfile frozen;
  frozen.kind = ForcingKind::Constant;
  frozen.f0 = frozen.f_min = frozen.f_max = F_frozen;
  const std::size_t steps =
      static_cast<std::size_t>(std::ceil(fallback_horizon / 0.01));
  const TimeGrid grid(0.0, fallback_horizon, std::max<std::size_t>(steps, 1));
  const Trajectory traj = integrate(params, guess, frozen, grid, opts);
  y = to_eigen(traj.final_state());
  if (newton(y, params, F_frozen, opts)) return from_eigen(y);
  throw NoConvergenceError(
      "find_equilibrium: Newton failed after the integration fallback");
}

TipVerdict classify_endstate(const Trajectory& traj, const StateVec& reference,
                             double delta_tip) {
  if (!(delta_tip > 0.0))
    throw ValidationError("tipping.delta_tip: must be > 0");
  const StateVec diff = traj.final_state() - reference;
  double sq = 0.0;
  for (int i = 0; i < 5; ++i) sq += diff[i] * diff[i];
  TipVerdict v;
  v.distance = std::sqrt(sq);
  v.reference = reference;
  v.outcome = v.distance > delta_tip ? TipOutcome::Tip : TipOutcome::Track;
  return v;
}

namespace {

struct SweepContext {
  StateVec start;      // equilibrium at frozen f_min
  StateVec reference;  // equilibrium at frozen f_max
};

SweepContext sweep_context(const Scenario& sc) {
  const double fallback = 10.0 * (sc.grid.T - sc.grid.t0);
  SweepContext ctx;
  ctx.start = find_equilibrium(sc.params, sc.forcing.f_min, sc.initial,
                               sc.model_options, fallback);
  ctx.reference = find_equilibrium(sc.params, sc.forcing.f_max, ctx.start,
                                   sc.model_options, fallback);
  return ctx;
}

TipVerdict verdict_at(const Scenario& sc, const SweepContext& ctx,
                      double alpha) {
  const Trajectory traj =
      integrate(sc.params, ctx.start, sc.forcing.with_alpha(alpha), sc.grid,
                sc.model_options);
  return classify_endstate(traj, ctx.reference, sc.tipping.delta_tip);
}

}  // namespace

std::vector<SweepEntry> sweep_rate(const Scenario& sc,
                                   const std::vector<double>& alphas) {
  if (alphas.empty())
    throw ValidationError("sweep: alphas must be non-empty");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] < 0.0)
      throw ValidationError("sweep: alphas must be >= 0");
    if (i > 0 && !(alphas[i] > alphas[i - 1]))
      throw ValidationError("sweep: alphas must be strictly increasing");
  }
  const SweepContext ctx = sweep_context(sc);

  std::vector<SweepEntry> out(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    SweepEntry& e = out[i];
    e.alpha = alphas[i];
    try {
      const Trajectory traj =
          integrate(sc.params, ctx.start, sc.forcing.with_alpha(e.alpha),
                    sc.grid, sc.model_options);
      e.verdict = classify_endstate(traj, ctx.reference, sc.tipping.delta_tip);
      for (const StateVec& x : traj.states) {
        e.peak_C = std::max(e.peak_C, x.C);
        e.peak_I = std::max(e.peak_I, x.I);
      }
      e.ok = true;
    } catch (const std::exception& ex) {
      e.ok = false;
      e.error = ex.what();
    }
  }
  return out;
}

BisectOutcome bisect_rate(const std::function<bool(double)>& tips,
                          double alpha_lo, double alpha_hi, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tipping.tol: must be > 0");
  if (!(alpha_lo < alpha_hi))
    throw ValidationError("tipping bracket: alpha_lo must be < alpha_hi");
  if (tips(alpha_lo) || !tips(alpha_hi))
    throw NonMonotonicBracketError(
        "bracket endpoints do not straddle the Track/Tip transition");
  double lo = alpha_lo, hi = alpha_hi;
  std::size_t iters = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (tips(mid))
      hi = mid;
    else
      lo = mid;
    ++iters;
  }
  return {0.5 * (lo + hi), lo, hi, iters};
}

TippingResult critical_rate(const Scenario& sc, double alpha_lo,
                            double alpha_hi, double tol) {
  const SweepContext ctx = sweep_context(sc);
  TippingResult res;
  res.verdict_lo = verdict_at(sc, ctx, alpha_lo);
  res.verdict_hi = verdict_at(sc, ctx, alpha_hi);
  if (res.verdict_lo.outcome == TipOutcome::Tip ||
      res.verdict_hi.outcome == TipOutcome::Track)
    throw NonMonotonicBracketError(
        "bracket endpoints do not straddle the Track/Tip transition");
  const BisectOutcome b = bisect_rate(
      [&](double a) {
        return verdict_at(sc, ctx, a).outcome == TipOutcome::Tip;
      },
      alpha_lo, alpha_hi, tol);
  res.alpha_c = b.alpha_c;
  res.alpha_lo = b.alpha_lo;
  res.alpha_hi = b.alpha_hi;
  res.iterations = b.iterations;
  return res;
}

}  // namespace disinfo
