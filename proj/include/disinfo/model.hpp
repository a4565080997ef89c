#pragma once

#include <array>
#include <cstddef>

namespace disinfo {

/// Compartment densities at one instant: susceptibles, exposed,
/// sources, mediums (spreaders) and skeptics.
struct StateVec {
  double S = 0.0;
  double E = 0.0;
  double C = 0.0;
  double I = 0.0;
  double Z = 0.0;

  std::array<double, 5> to_array() const { return {S, E, C, I, Z}; }
  static StateVec from_array(const std::array<double, 5>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }
  double& operator[](std::size_t i) { return (&S)[i]; }
  double operator[](std::size_t i) const { return (&S)[i]; }

  // Construction-time check: finite and nonnegative.
  void validate(const char* path) const;
};

/// The eleven rate constants of the five-compartment system.
struct Params {
  double r = 0.0;        // susceptible inflow (per day)
  double beta = 0.0;     // susceptible-medium contact rate
  double b = 0.0;        // skeptic contact rate
  double p = 0.0;        // fraction of beta-contacts becoming mediums directly
  double l = 0.0;        // fraction of skeptic contacts withheld from exposure
  double epsilon = 0.0;  // exposed->medium base transfer rate
  double phi = 0.0;      // skeptic inhibition coefficient
  double gamma = 0.0;    // source recruitment coefficient
  double eta = 0.0;      // fraction of recruits entering sources directly
  double mu = 0.0;       // source decay rate
  double xi = 0.0;       // skeptic decay rate

  void validate(const char* path) const;
};

enum class ForcingKind { Constant, LinearRamp, SigmoidRamp };

/// External-influence level as a function of time, parameterized by the
/// rate alpha. Ramp profiles rise from f_min toward f_max.
struct ForcingProfile {
  ForcingKind kind = ForcingKind::Constant;
  double f0 = 0.0;     // Constant level
  double f_min = 0.0;  // ramp floor
  double f_max = 0.0;  // ramp ceiling
  double alpha = 0.0;  // rate parameter (per day, >= 0)
  double t_mid = 0.0;  // sigmoid midpoint (day)

  void validate(const char* path) const;

  /// Same profile with a different rate; used by rate sweeps.
  ForcingProfile with_alpha(double a) const {
    ForcingProfile q = *this;
    q.alpha = a;
    return q;
  }
};

/// The four bounded intervention efforts, each in [0,1].
struct ControlVec {
  double u1 = 0.0;  // source removal
  double u2 = 0.0;  // medium demotion
  double u3 = 0.0;  // source-medium coupling
  double u4 = 0.0;  // susceptible-skeptic channel

  std::array<double, 4> to_array() const { return {u1, u2, u3, u4}; }
  double& operator[](std::size_t i) { return (&u1)[i]; }
  double operator[](std::size_t i) const { return (&u1)[i]; }

  void validate(const char* path) const;
};

/// Weights of the running cost. Defaults of 1 give the plain
/// C + I + E - Z + |u|^2 integrand.
struct CostWeights {
  double w_E = 1.0;
  double w_C = 1.0;
  double w_I = 1.0;
  double w_Z = 1.0;
  double w_u = 1.0;

  void validate(const char* path) const;
};

enum class TransferForm { Regularized, Literal };
enum class SignConvention { Literal, Remedial };

/// Switches that select between model variants.
struct ModelOptions {
  TransferForm transfer = TransferForm::Regularized;
  double kappa = 0.0;  // Literal transfer denominator guard, must be > 0
  SignConvention convention = SignConvention::Literal;

  void validate(const char* path) const;
};

/// Forcing level at time t. Total on valid profiles.
double forcing_value(const ForcingProfile& profile, double t);

/// E -> I transfer flow, damped by skeptics. Regularized form
/// eps*E/(1 + phi*Z); Literal form eps*E/(phi*Z + kappa).
double transfer_exposed_to_medium(double E, double Z, const Params& params,
                                  const ModelOptions& opts = {});

/// Source recruitment flow out of susceptibles: gamma*C*S.
double recruitment_term(double C, double S, const Params& params);

/// Controlled right-hand side of the five-ODE system. With u = 0 this is
/// the uncontrolled model exactly.
StateVec rhs(const StateVec& state, const Params& params, double F,
             const ControlVec& u, const ModelOptions& opts = {});

}  // namespace disinfo
