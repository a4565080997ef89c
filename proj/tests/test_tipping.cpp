#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "disinfo/errors.hpp"
#include "disinfo/tipping.hpp"

using namespace disinfo;

namespace {

Scenario load_default() {
  std::ifstream in(std::string(SCENARIOS_DIR) + "/default.toml");
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

double residual_norm(const Params& q, double F, const StateVec& x) {
  const StateVec d = rhs(x, q, F, ControlVec{});
  double m = 0.0;
  for (int i = 0; i < 5; ++i) m = std::max(m, std::abs(d[i]));
  return m;
}

// Interior equilibrium with skeptics present; see the library tests for
// the analytic I* = xi/b relation this must satisfy.
Params skeptic_params() {
  Params q;
  q.r = 2.0;
  q.beta = 0.04;
  q.b = 0.08;
  q.p = 0.3;
  q.l = 0.5;
  q.epsilon = 0.3;
  q.phi = 0.5;
  q.gamma = 0.05;
  q.eta = 0.5;
  q.mu = 0.6;
  q.xi = 0.12;
  return q;
}

}  // namespace

TEST_CASE("zero-inflow system has the origin as an exact equilibrium") {
  Params q = skeptic_params();
  q.r = 0.0;
  const StateVec eq = find_equilibrium(q, 0.3, StateVec{});
  for (int i = 0; i < 5; ++i) CHECK(eq[i] == 0.0);
  CHECK(residual_norm(q, 0.3, eq) == 0.0);
}

TEST_CASE("default scenario equilibrium at frozen f_min") {
  const Scenario sc = load_default();
  const StateVec eq = find_equilibrium(sc.params, sc.forcing.f_min, sc.initial,
                                       sc.model_options);
  CHECK(residual_norm(sc.params, sc.forcing.f_min, eq) < 1e-10);
  // The documented initial condition is that equilibrium.
  for (int i = 0; i < 5; ++i)
    CHECK(eq[i] == doctest::Approx(sc.initial[i]).epsilon(1e-7).scale(1.0));
}

TEST_CASE("skeptic-positive equilibrium pins I at xi/b") {
  const Params q = skeptic_params();
  const StateVec guess{6.0, 4.3, 2.6, 1.5, 1.8};
  const StateVec eq = find_equilibrium(q, 0.3, guess);
  CHECK(residual_norm(q, 0.3, eq) < 1e-10);
  REQUIRE(eq.Z > 0.0);
  CHECK(std::abs(eq.I - q.xi / q.b) < 1e-8);
}

TEST_CASE("classify_endstate") {
  Trajectory traj;
  traj.grid = TimeGrid(0.0, 1.0, 1);
  const StateVec ref{1, 2, 3, 4, 5};
  traj.states = {ref, ref};
  traj.forcing = {0.0, 0.0};

  SUBCASE("exact match tracks with distance zero") {
    const TipVerdict v = classify_endstate(traj, ref, 0.5);
    CHECK(v.outcome == TipOutcome::Track);
    CHECK(v.distance == 0.0);
  }
  SUBCASE("boundary distance classifies as Track") {
    StateVec off = ref;
    off.S += 0.5;
    traj.states.back() = off;
    const TipVerdict v = classify_endstate(traj, ref, 0.5);
    CHECK(v.distance == doctest::Approx(0.5));
    CHECK(v.outcome == TipOutcome::Track);
  }
  SUBCASE("twice the threshold tips") {
    StateVec off = ref;
    off.S += 1.0;
    traj.states.back() = off;
    CHECK(classify_endstate(traj, ref, 0.5).outcome == TipOutcome::Tip);
  }
  SUBCASE("verdict is monotone in delta_tip") {
    StateVec off = ref;
    off.I += 0.9;
    traj.states.back() = off;
    for (double delta : {0.1, 0.3, 0.5, 0.7, 0.95, 1.2, 2.0}) {
      const TipVerdict v = classify_endstate(traj, ref, delta);
      CHECK(v.distance == doctest::Approx(0.9));
      CHECK((v.outcome == TipOutcome::Tip) == (v.distance > delta));
    }
  }
}

TEST_CASE("sweep precondition checks") {
  const Scenario sc = load_default();
  CHECK_THROWS_AS(sweep_rate(sc, {}), ValidationError);
  CHECK_THROWS_AS(sweep_rate(sc, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(sweep_rate(sc, {-0.1, 0.5}), ValidationError);
}

TEST_CASE("flat forcing sweep tracks at alpha zero") {
  Scenario sc = load_default();
  sc.forcing.f_max = sc.forcing.f_min;  // no ramp at all
  const auto entries = sweep_rate(sc, {0.0});
  REQUIRE(entries.size() == 1);
  REQUIRE(entries[0].ok);
  CHECK(entries[0].verdict.outcome == TipOutcome::Track);
  CHECK(entries[0].verdict.distance < sc.tipping.delta_tip);
}

TEST_CASE("sweep output is deterministic") {
  const Scenario sc = load_default();
  const std::vector<double> alphas{0.4, 1.0, 4.0};
  const auto a = sweep_rate(sc, alphas);
  const auto b = sweep_rate(sc, alphas);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].verdict.distance == b[i].verdict.distance);
    CHECK(a[i].peak_C == b[i].peak_C);
    CHECK(a[i].peak_I == b[i].peak_I);
  }
}

TEST_CASE("default scenario sweep switches once from Track to Tip") {
  const Scenario sc = load_default();
  std::vector<double> alphas(50);
  const double lo = 0.3, hi = 8.0;
  for (int i = 0; i < 50; ++i)
    alphas[i] = lo * std::pow(hi / lo, i / 49.0);
  const auto entries = sweep_rate(sc, alphas);
  int switches = 0;
  bool prev_tip = false;
  for (const SweepEntry& e : entries) {
    REQUIRE(e.ok);
    const bool tip = e.verdict.outcome == TipOutcome::Tip;
    if (tip != prev_tip) ++switches;
    prev_tip = tip;
  }
  CHECK(switches == 1);
  CHECK(entries.front().verdict.outcome == TipOutcome::Track);
  CHECK(entries.back().verdict.outcome == TipOutcome::Tip);
}

TEST_CASE("synthetic predicate bisection hits the injected threshold") {
  const BisectOutcome b =
      bisect_rate([](double a) { return a > 0.22; }, 0.1, 0.4, 1e-3);
  CHECK(b.alpha_c >= 0.2195);
  CHECK(b.alpha_c <= 0.2205);
  CHECK(b.alpha_hi - b.alpha_lo <= 1e-3);
}

TEST_CASE("bisection rejects non-straddling brackets") {
  CHECK_THROWS_AS(bisect_rate([](double) { return false; }, 0.1, 0.4, 1e-3),
                  NonMonotonicBracketError);
  CHECK_THROWS_AS(bisect_rate([](double) { return true; }, 0.1, 0.4, 1e-3),
                  NonMonotonicBracketError);
}

namespace {
// Scalar saddle-node prototype: x' = (x + lam)^2 - 1 with lam ramped
// from 0 to lam_max. Tracking follows x = -lam - 1; a too-fast ramp
// sweeps the repeller past the state and the solution escapes.
bool scalar_prototype_tips(double alpha) {
  const double lam_max = 3.0, t_mid = 10.0, T = 40.0, h = 0.01;
  auto lam = [&](double t) {
    return lam_max / (1.0 + std::exp(-alpha * (t - t_mid)));
  };
  auto f = [&](double t, double x) {
    const double s = x + lam(t);
    return s * s - 1.0;
  };
  double x = -1.0;
  const int n = static_cast<int>(T / h);
  for (int k = 0; k < n; ++k) {
    x = rk4_step(f, x, k * h, h);
    if (x > 5.0) return true;
  }
  return x > -lam_max + 1.0;
}
}  // namespace

TEST_CASE("scalar prototype bisection agrees with a dense grid scan") {
  const double lo = 0.5, hi = 8.0, tol = 1e-3;
  REQUIRE_FALSE(scalar_prototype_tips(lo));
  REQUIRE(scalar_prototype_tips(hi));
  const BisectOutcome b = bisect_rate(scalar_prototype_tips, lo, hi, tol);

  // Brute-force 1000-point scan for the first tipping rate.
  double grid_alpha_c = hi;
  for (int i = 0; i < 1000; ++i) {
    const double a = lo + (hi - lo) * i / 999.0;
    if (scalar_prototype_tips(a)) {
      grid_alpha_c = a;
      break;
    }
  }
  CHECK(std::abs(b.alpha_c - grid_alpha_c) <=
        2.0 * tol + (hi - lo) / 999.0);
}

TEST_CASE("critical_rate brackets the default scenario transition") {
  const Scenario sc = load_default();
  const TippingResult res = critical_rate(sc, sc.tipping.alpha_lo,
                                          sc.tipping.alpha_hi, sc.tipping.tol);
  CHECK(res.verdict_lo.outcome == TipOutcome::Track);
  CHECK(res.verdict_hi.outcome == TipOutcome::Tip);
  CHECK(res.alpha_hi - res.alpha_lo <= sc.tipping.tol);
  CHECK(res.alpha_c > sc.tipping.alpha_lo);
  CHECK(res.alpha_c < sc.tipping.alpha_hi);
}

TEST_CASE("critical_rate rejects a non-straddling bracket") {
  const Scenario sc = load_default();
  CHECK_THROWS_AS(critical_rate(sc, 0.3, 0.35, 1e-3),
                  NonMonotonicBracketError);
}
