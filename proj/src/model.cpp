#include "disinfo/model.hpp"

#include <cmath>
#include <string>

#include "disinfo/errors.hpp"

namespace disinfo {

namespace {

void require(bool cond, const std::string& path, const char* what) {
  if (!cond) throw ValidationError(path + ": " + what);
}

void check_field(double v, const std::string& path, bool unit_interval) {
  require(std::isfinite(v), path, "must be finite");
  require(v >= 0.0, path, "must be >= 0");
  if (unit_interval) require(v <= 1.0, path, "must lie in [0,1]");
}

}  // namespace

void StateVec::validate(const char* path) const {
  const char* names[5] = {"S", "E", "C", "I", "Z"};
  for (int i = 0; i < 5; ++i)
    check_field((*this)[i], std::string(path) + "." + names[i], false);
}

void Params::validate(const char* path) const {
  const std::string base(path);
  check_field(r, base + ".r", false);
  check_field(beta, base + ".beta", false);
  check_field(b, base + ".b", false);
  check_field(p, base + ".p", true);
  check_field(l, base + ".l", true);
  check_field(epsilon, base + ".epsilon", false);
  check_field(phi, base + ".phi", false);
  check_field(gamma, base + ".gamma", false);
  check_field(eta, base + ".eta", true);
  check_field(mu, base + ".mu", false);
  check_field(xi, base + ".xi", false);
}

void ForcingProfile::validate(const char* path) const {
  const std::string base(path);
  require(std::isfinite(f0), base + ".f0", "must be finite");
  require(std::isfinite(f_min), base + ".f_min", "must be finite");
  require(std::isfinite(f_max), base + ".f_max", "must be finite");
  require(std::isfinite(t_mid), base + ".t_mid", "must be finite");
  require(std::isfinite(alpha), base + ".alpha", "must be finite");
  require(alpha >= 0.0, base + ".alpha", "must be >= 0");
  require(f_min <= f_max, base + ".f_min", "must be <= f_max");
}

void ControlVec::validate(const char* path) const {
  const char* names[4] = {"u1", "u2", "u3", "u4"};
  for (int i = 0; i < 4; ++i)
    check_field((*this)[i], std::string(path) + "." + names[i], true);
}

void CostWeights::validate(const char* path) const {
  const std::string base(path);
  check_field(w_E, base + ".w_E", false);
  check_field(w_C, base + ".w_C", false);
  check_field(w_I, base + ".w_I", false);
  check_field(w_Z, base + ".w_Z", false);
  check_field(w_u, base + ".w_u", false);
}

void ModelOptions::validate(const char* path) const {
  if (transfer == TransferForm::Literal) {
    require(std::isfinite(kappa) && kappa > 0.0,
            std::string(path) + ".kappa", "must be > 0 for the literal form");
  }
}

double forcing_value(const ForcingProfile& profile, double t) {
  switch (profile.kind) {
    case ForcingKind::Constant:
      return profile.f0;
    case ForcingKind::LinearRamp:
      return std::min(profile.f_min + profile.alpha * t, profile.f_max);
    case ForcingKind::SigmoidRamp:
      return profile.f_min +
             (profile.f_max - profile.f_min) /
                 (1.0 + std::exp(-profile.alpha * (t - profile.t_mid)));
  }
  return profile.f0;  // unreachable
}

double transfer_exposed_to_medium(double E, double Z, const Params& params,
                                  const ModelOptions& opts) {
  const double denom = (opts.transfer == TransferForm::Regularized)
                           ? 1.0 + params.phi * Z
                           : params.phi * Z + opts.kappa;
  return params.epsilon * E / denom;
}

double recruitment_term(double C, double S, const Params& params) {
  return params.gamma * C * S;
}

StateVec rhs(const StateVec& x, const Params& q, double F, const ControlVec& u,
             const ModelOptions& opts) {
  for (int i = 0; i < 5; ++i)
    if (!std::isfinite(x[i]))
      throw BlowUpError("rhs: non-finite state component", 0.0);

  const double T = transfer_exposed_to_medium(x.E, x.Z, q, opts);
  const double R = recruitment_term(x.C, x.S, q);
  // Remedial convention flips the u3 and u4 couplings.
  const double cs = (opts.convention == SignConvention::Literal) ? 1.0 : -1.0;

  StateVec d;
  d.S = q.r - R - q.beta * x.I * x.S - q.b * x.S * x.Z;
  d.E = -T + (1.0 - q.p) * q.beta * x.I * x.S + (1.0 - q.l) * q.b * x.S * x.Z +
        u.u2 * x.I + cs * u.u4 * q.b * x.S * x.Z;
  d.C = F * x.C * x.I - q.mu * x.C + (1.0 - q.eta) * R - u.u1 * x.C +
        cs * u.u3 * x.C * x.I;
  d.I = T - F * x.C * x.I + q.eta * R + q.beta * q.p * x.I * x.S -
        u.u2 * x.I - cs * u.u3 * x.C * x.I;
  d.Z = q.b * x.I * x.Z - q.xi * x.Z - cs * u.u4 * q.b * x.S * x.Z;
  return d;
}

}  // namespace disinfo
