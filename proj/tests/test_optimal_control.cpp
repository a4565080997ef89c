#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "disinfo/errors.hpp"
#include "disinfo/optimal_control.hpp"
#include "oracles.hpp"

using namespace disinfo;

namespace {

Scenario load_default() {
  std::ifstream in(std::string(SCENARIOS_DIR) + "/default.toml");
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Params worked_params() {
  Params q;
  q.r = 0.5;
  q.beta = 0.2;
  q.b = 0.1;
  q.p = 0.3;
  q.l = 0.4;
  q.epsilon = 0.3;
  q.phi = 0.5;
  q.gamma = 0.05;
  q.eta = 0.6;
  q.mu = 0.2;
  q.xi = 0.1;
  return q;
}

// Small in-code scenario whose cost penalizes control effort only.
Scenario effort_only_scenario() {
  Scenario sc;
  sc.params = worked_params();
  sc.initial = StateVec{4.0, 1.0, 0.5, 1.0, 0.3};
  sc.forcing.kind = ForcingKind::Constant;
  sc.forcing.f0 = sc.forcing.f_min = sc.forcing.f_max = 0.2;
  sc.grid = TimeGrid(0.0, 2.0, 200);
  sc.weights.w_E = sc.weights.w_C = sc.weights.w_I = sc.weights.w_Z = 0.0;
  return sc;
}

}  // namespace

TEST_CASE("running_cost examples") {
  const CostWeights w;
  CHECK(running_cost(StateVec{}, ControlVec{}, w) == 0.0);
  CHECK(running_cost(StateVec{5, 1, 1, 1, 0}, ControlVec{}, w) == 3.0);
  CHECK(running_cost(StateVec{5, 1, 1, 1, 2}, ControlVec{}, w) == 1.0);
  CHECK(running_cost(StateVec{}, ControlVec{1, 1, 1, 1}, w) == 4.0);
  CHECK(running_cost(StateVec{0, 0, 0, 0, 0}, ControlVec{0.5, 0, 0, 0}, w) ==
        doctest::Approx(0.25));
  CostWeights scaled;
  scaled.w_Z = 3.0;
  scaled.w_u = 2.0;
  CHECK(running_cost(StateVec{0, 0, 0, 0, 1}, ControlVec{1, 0, 0, 0}, scaled) ==
        doctest::Approx(-1.0));
}

TEST_CASE("hamiltonian") {
  const Params q = worked_params();
  const CostWeights w;
  SUBCASE("zero costate reduces to the running cost") {
    const StateVec x{2, 1, 0.5, 1.5, 0.2};
    const ControlVec u{0.3, 0.1, 0.2, 0.4};
    CHECK(hamiltonian(x, u, AdjointVec{}, q, 0.3, w) ==
          doctest::Approx(running_cost(x, u, w)).epsilon(1e-14));
  }
  SUBCASE("empty state with a pure S costate") {
    AdjointVec lam;
    lam.lambda1 = 2.0;
    CHECK(hamiltonian(StateVec{}, ControlVec{}, lam, q, 0.3, w) ==
          doctest::Approx(2.0 * q.r).epsilon(1e-14));
  }
  SUBCASE("decomposes into cost plus costate-weighted dynamics") {
    oracle::StateGen gen(17);
    for (int i = 0; i < 100; ++i) {
      const StateVec x = StateVec::from_array(gen.next());
      const ControlVec u{gen.uniform(0, 1), gen.uniform(0, 1),
                         gen.uniform(0, 1), gen.uniform(0, 1)};
      AdjointVec lam;
      for (int j = 0; j < 5; ++j) lam[j] = gen.uniform(-3, 3);
      const double F = gen.uniform(0, 1);
      const StateVec d = rhs(x, q, F, u);
      double expect = running_cost(x, u, w);
      for (int j = 0; j < 5; ++j) expect += lam[j] * d[j];
      CHECK(hamiltonian(x, u, lam, q, F, w) ==
            doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("adjoint_rhs with zero costate is the cost gradient") {
  const Params q = worked_params();
  const CostWeights w;
  const AdjointVec d =
      adjoint_rhs(StateVec{3, 2, 1, 1, 1}, ControlVec{}, AdjointVec{}, q, 0.3, w);
  CHECK(d.lambda1 == 0.0);
  CHECK(d.lambda2 == -1.0);
  CHECK(d.lambda3 == -1.0);
  CHECK(d.lambda4 == -1.0);
  CHECK(d.lambda5 == 1.0);
}

TEST_CASE("analytic adjoint matches a finite difference of H") {
  const Params q = worked_params();
  const CostWeights w;
  ModelOptions opts_list[3];
  opts_list[1].convention = SignConvention::Remedial;
  opts_list[2].transfer = TransferForm::Literal;
  opts_list[2].kappa = 0.8;

  oracle::StateGen gen(23);
  for (int i = 0; i < 100; ++i) {
    const ModelOptions& opts = opts_list[i % 3];
    auto a = gen.next();
    for (double& v : a) v += 0.1;  // keep safely positive
    const StateVec x = StateVec::from_array(a);
    const ControlVec u{gen.uniform(0, 1), gen.uniform(0, 1), gen.uniform(0, 1),
                       gen.uniform(0, 1)};
    AdjointVec lam;
    for (int j = 0; j < 5; ++j) lam[j] = gen.uniform(-3, 3);
    const double F = gen.uniform(0, 1);

    const AdjointVec an = adjoint_rhs(x, u, lam, q, F, w, opts);
    for (int j = 0; j < 5; ++j) {
      const double step = 1e-6 * std::max(1.0, std::abs(x[j]));
      StateVec xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      const double dH = (hamiltonian(xp, u, lam, q, F, w, opts) -
                         hamiltonian(xm, u, lam, q, F, w, opts)) /
                        (2.0 * step);
      const double scale = std::max(1.0, std::abs(dH));
      CHECK(std::abs(-an[j] - dH) / scale < 1e-6);
    }
  }
}

TEST_CASE("optimal_control_update") {
  const Params q = worked_params();
  SUBCASE("zero costate gives zero control") {
    const ControlVec u = optimal_control_update(StateVec{3, 2, 1, 1, 1},
                                                AdjointVec{},
                                                q, SignConvention::Literal);
    for (int i = 0; i < 4; ++i) CHECK(u[i] == 0.0);
  }
  SUBCASE("interior and clamped components") {
    StateVec x;
    x.C = 2.0;
    x.I = 2.0;
    AdjointVec lam;
    lam.lambda3 = 3.0;  // u1 = clamp(2*3/2) -> 1
    lam.lambda4 = 3.1;  // u2 = 2*(3.1-0)/2 clamped, u3 = 2*2*(3.1-3)/2 = 0.2
    const ControlVec u =
        optimal_control_update(x, lam, q, SignConvention::Literal);
    CHECK(u.u1 == 1.0);
    CHECK(u.u2 == 1.0);
    CHECK(u.u3 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(u.u4 == 0.0);
    lam.lambda2 = 3.0;
    const ControlVec v =
        optimal_control_update(x, lam, q, SignConvention::Literal);
    CHECK(v.u2 == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("effort weight scales interior values") {
    StateVec x;
    x.C = 2.0;
    AdjointVec lam;
    lam.lambda3 = 3.0;
    const ControlVec u =
        optimal_control_update(x, lam, q, SignConvention::Literal, 10.0);
    CHECK(u.u1 == doctest::Approx(0.3).epsilon(1e-12));
  }
  SUBCASE("remedial convention flips the coupling channels") {
    StateVec x{1.0, 0.0, 2.0, 2.0, 1.0};
    AdjointVec lam;
    lam.lambda4 = 3.1;
    lam.lambda3 = 3.0;
    lam.lambda5 = 1.0;
    const ControlVec lit =
        optimal_control_update(x, lam, q, SignConvention::Literal);
    const ControlVec rem =
        optimal_control_update(x, lam, q, SignConvention::Remedial);
    CHECK(lit.u3 > 0.0);
    CHECK(rem.u3 == 0.0);
    CHECK(lit.u4 > 0.0);
    CHECK(rem.u4 == 0.0);
  }
  SUBCASE("nonpositive effort weight rejected") {
    CHECK_THROWS_AS(optimal_control_update(StateVec{}, AdjointVec{}, q,
                                           SignConvention::Literal, 0.0),
                    ValidationError);
  }
}

TEST_CASE("quadrature weights") {
  SUBCASE("weights sum to the interval length") {
    for (std::size_t n : {1u, 2u, 3u, 10u, 11u, 100u}) {
      const TimeGrid g(1.0, 4.0, n);
      const auto w = quadrature_weights(g);
      REQUIRE(w.size() == g.nodes());
      double sum = 0.0;
      for (double v : w) sum += v;
      CHECK(sum == doctest::Approx(3.0).epsilon(1e-13));
    }
  }
  SUBCASE("even interval count integrates cubics exactly") {
    const TimeGrid g(0.0, 2.0, 10);
    const auto w = quadrature_weights(g);
    double sum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double t = g.time_at(k);
      sum += w[k] * t * t * t;
    }
    CHECK(sum == doctest::Approx(4.0).epsilon(1e-13));
  }
  SUBCASE("odd interval count is exact for quadratics") {
    const TimeGrid g(0.0, 1.0, 11);
    const auto w = quadrature_weights(g);
    double lin = 0.0, quad = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double t = g.time_at(k);
      lin += w[k] * t;
      quad += w[k] * t * t;
    }
    CHECK(lin == doctest::Approx(0.5).epsilon(1e-13));
    // Simpson on the first 10 intervals is exact; only the trailing
    // trapezoid carries the h^2 error term.
    const double h = g.step();
    const double trap_err = h * h * h / 6.0;  // trapezoid excess for t^2
    CHECK(quad == doctest::Approx(1.0 / 3.0 + trap_err).epsilon(1e-12));
  }
}

TEST_CASE("objective") {
  const Scenario sc = load_default();
  const Trajectory traj = integrate(sc);
  const std::vector<ControlVec> zero(sc.grid.nodes());
  SUBCASE("length mismatch rejected") {
    const std::vector<ControlVec> bad(3);
    CHECK_THROWS_AS(objective(traj, bad, sc.weights), ValidationError);
  }
  SUBCASE("matches a dense trapezoid oracle") {
    const double J = objective(traj, zero, sc.weights);
    double trap = 0.0;
    const double h = sc.grid.step();
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
      const double a = running_cost(traj.states[k], zero[k], sc.weights);
      const double b = running_cost(traj.states[k + 1], zero[k + 1], sc.weights);
      trap += 0.5 * h * (a + b);
    }
    CHECK(J == doctest::Approx(trap).epsilon(1e-4));
  }
}

TEST_CASE("sweep on an effort-only cost stops at zero control") {
  Scenario sc = effort_only_scenario();
  const FbsmResult res = forward_backward_sweep(sc);
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.stationarity_residual == 0.0);
  for (const ControlVec& u : res.controls)
    for (int i = 0; i < 4; ++i) CHECK(u[i] == 0.0);
  CHECK(res.J_history.back() == 0.0);
}

TEST_CASE("sweep settings validation") {
  Scenario sc = effort_only_scenario();
  sc.control.omega = 0.0;
  CHECK_THROWS_AS(forward_backward_sweep(sc), ValidationError);
}

TEST_CASE("sweep reports the objective history on failure") {
  Scenario sc = load_default();
  sc.control.max_iter = 1;
  try {
    forward_backward_sweep(sc);
    FAIL("expected NoConvergenceError");
  } catch (const NoConvergenceError& e) {
    CHECK(e.j_history.size() == 1);
  }
}

TEST_CASE("sweep solves the default scenario") {
  const Scenario sc = load_default();
  const FbsmResult res = forward_backward_sweep(sc);
  REQUIRE(res.converged);
  CHECK(res.stationarity_residual < 1e-6);

  // Terminal costate is free, bounds hold everywhere.
  for (int i = 0; i < 5; ++i) CHECK(res.adjoints.back()[i] == 0.0);
  for (const ControlVec& u : res.controls)
    for (int i = 0; i < 4; ++i) {
      CHECK(u[i] >= 0.0);
      CHECK(u[i] <= 1.0);
    }

  // The optimized schedule does not lose to doing nothing.
  const Trajectory base = integrate(sc);
  const std::vector<ControlVec> zero(sc.grid.nodes());
  const double J_zero = objective(base, zero, sc.weights);
  CHECK(res.J_history.back() <= J_zero + 1e-9);
}

TEST_CASE("directional derivative agreement") {
  Scenario sc = effort_only_scenario();
  sc.weights = CostWeights{};  // full state cost back on
  const std::size_t nodes = sc.grid.nodes();

  SUBCASE("zero perturbation gives zero on both routes") {
    std::vector<ControlVec> u(nodes, ControlVec{0.5, 0.5, 0.5, 0.5});
    const auto [adj, fd] = directional_derivative_check(
        sc, u, std::vector<ControlVec>(nodes));
    CHECK(adj == 0.0);
    CHECK(fd == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
  }
  SUBCASE("perturbations leaving the box are rejected") {
    std::vector<ControlVec> u(nodes, ControlVec{1.0, 0.5, 0.5, 0.5});
    std::vector<ControlVec> du(nodes, ControlVec{1.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(directional_derivative_check(sc, u, du), ValidationError);
  }
  SUBCASE("random smooth interior schedules agree to 1e-3") {
    oracle::StateGen gen(31);
    const double span = sc.grid.T - sc.grid.t0;
    for (int trial = 0; trial < 3; ++trial) {
      // Low-order random Fourier schedules; node-scale noise is not
      // resolvable by the quadrature behind the adjoint route.
      double cu[4][4], su[4][4], cd[4][4], sd[4][4];
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          cu[i][j] = gen.uniform(-0.05, 0.05);
          su[i][j] = gen.uniform(-0.05, 0.05);
          cd[i][j] = gen.uniform(-0.2, 0.2);
          sd[i][j] = gen.uniform(-0.2, 0.2);
        }
      std::vector<ControlVec> u(nodes), du(nodes);
      for (std::size_t k = 0; k < nodes; ++k) {
        const double t = sc.grid.time_at(k);
        for (int i = 0; i < 4; ++i) {
          double uu = 0.5, dd = 0.0;
          for (int j = 0; j < 4; ++j) {
            const double w = 2.0 * 3.14159265358979324 * (j + 1) * t / span;
            uu += cu[i][j] * std::cos(w) + su[i][j] * std::sin(w);
            dd += cd[i][j] * std::cos(w) + sd[i][j] * std::sin(w);
          }
          u[k][i] = uu;
          du[k][i] = dd;
        }
      }
      const auto [adj, fd] = directional_derivative_check(sc, u, du);
      CHECK(std::abs(adj - fd) / std::max(1.0, std::abs(fd)) < 1e-3);
    }
  }
  SUBCASE("effort-only closed form") {
    Scenario eff = effort_only_scenario();
    const double d = 0.1;
    std::vector<ControlVec> u(nodes, ControlVec{0.5, 0.5, 0.5, 0.5});
    std::vector<ControlVec> du(nodes, ControlVec{d, d, d, d});
    const auto [adj, fd] = directional_derivative_check(eff, u, du);
    const double span = eff.grid.T - eff.grid.t0;
    CHECK(adj == doctest::Approx(4.0 * span * d).epsilon(1e-6));
    CHECK(fd == doctest::Approx(4.0 * span * d).epsilon(1e-6));
  }
}
