#pragma once

#include <functional>
#include <string>
#include <vector>

#include "disinfo/model.hpp"
#include "disinfo/scenario.hpp"

namespace disinfo {

enum class TipOutcome { Track, Tip };

/// Classification of one ramped run against its quasi-static reference.
struct TipVerdict {
  TipOutcome outcome = TipOutcome::Track;
  double distance = 0.0;   // end-state distance to the reference
  StateVec reference;      // frozen-forcing equilibrium used
};

/// Result of the critical-rate bisection.
struct TippingResult {
  double alpha_c = 0.0;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  std::size_t iterations = 0;
  TipVerdict verdict_lo;
  TipVerdict verdict_hi;
};

/// One rate-sweep entry. When ok is false, `error` explains the
/// integration or solver failure for this alpha.
struct SweepEntry {
  double alpha = 0.0;
  bool ok = false;
  TipVerdict verdict;
  double peak_C = 0.0;
  double peak_I = 0.0;
  std::string error;
};

/// Zero of the uncontrolled rhs at frozen forcing, by damped Newton
/// with a central finite-difference Jacobian. Falls back to a long
/// integration restart when Newton stalls. `fallback_horizon` is the
/// frozen-system settle time used by the fallback (10x the scenario
/// horizon at the call sites).
StateVec find_equilibrium(const Params& params, double F_frozen,
                          const StateVec& guess, const ModelOptions& opts = {},
                          double fallback_horizon = 2000.0);

/// End-state distance classification; the boundary counts as Track.
TipVerdict classify_endstate(const Trajectory& traj, const StateVec& reference,
                             double delta_tip);

/// Integrates the scenario for each rate in `alphas` (strictly
/// increasing) from the frozen-f_min equilibrium and classifies against
/// the frozen-f_max equilibrium. Entries fail independently.
std::vector<SweepEntry> sweep_rate(const Scenario& sc,
                                   const std::vector<double>& alphas);

/// Bisection of a Track/Tip predicate over [alpha_lo, alpha_hi].
/// `tips(alpha)` must be false at alpha_lo and true at alpha_hi.
/// Exposed so synthetic predicates can exercise the same search the
/// real classifier uses.
struct BisectOutcome {
  double alpha_c;
  double alpha_lo;
  double alpha_hi;
  std::size_t iterations;
};
BisectOutcome bisect_rate(const std::function<bool(double)>& tips,
                          double alpha_lo, double alpha_hi, double tol);

/// Brackets the critical rate of the scenario by bisection on the
/// Track/Tip verdict.
TippingResult critical_rate(const Scenario& sc, double alpha_lo,
                            double alpha_hi, double tol);

}  // namespace disinfo
