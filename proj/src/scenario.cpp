#include "disinfo/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

#include "disinfo/errors.hpp"

namespace disinfo {

void TippingSettings::validate(const char* path) const {
  const std::string base(path);
  if (!(delta_tip > 0.0) || !std::isfinite(delta_tip))
    throw ValidationError(base + ".delta_tip: must be > 0");
  if (alpha_lo < 0.0 || !std::isfinite(alpha_lo))
    throw ValidationError(base + ".alpha_lo: must be >= 0");
  if (alpha_hi < alpha_lo || !std::isfinite(alpha_hi))
    throw ValidationError(base + ".alpha_hi: must be >= alpha_lo");
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw ValidationError(base + ".tol: must be > 0");
}

void ControlSettings::validate(const char* path) const {
  const std::string base(path);
  if (!(omega > 0.0 && omega <= 1.0))
    throw ValidationError(base + ".omega: must lie in (0,1]");
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw ValidationError(base + ".tol: must be > 0");
  if (max_iter < 1) throw ValidationError(base + ".max_iter: must be >= 1");
}

void Scenario::validate() const {
  params.validate("params");
  initial.validate("initial");
  forcing.validate("forcing");
  grid.validate("integration");
  weights.validate("weights");
  tipping.validate("tipping");
  control.validate("control");
  model_options.validate("model");
}

namespace {

struct RawValue {
  std::string text;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, RawValue>;

struct RawDoc {
  std::map<std::string, Section> sections;

  Section* find(const std::string& name) {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  }
};

RawDoc tokenize(const std::string& text) {
  RawDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string current;  // "" = top level
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("line " + std::to_string(lineno) +
                              ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      doc.sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("line " + std::to_string(lineno) +
                            ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ValidationError("line " + std::to_string(lineno) +
                            ": expected key = value");
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    auto& sec = doc.sections[current];
    if (sec.count(key))
      throw ValidationError("line " + std::to_string(lineno) +
                            ": duplicate key '" + key + "'");
    sec[key] = RawValue{val, lineno, false};
  }
  return doc;
}

std::string qualify(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

class Reader {
 public:
  explicit Reader(RawDoc& doc) : doc_(doc) {}

  bool has(const std::string& section, const std::string& key) {
    Section* s = doc_.find(section);
    return s && s->count(key);
  }

  std::string get_string(const std::string& section, const std::string& key) {
    Section* s = doc_.find(section);
    if (s) {
      if (auto it = s->find(key); it != s->end()) {
        it->second.used = true;
        return it->second.text;
      }
    }
    throw ValidationError(qualify(section, key) + ": missing required key");
  }

  double get_number(const std::string& section, const std::string& key) {
    const std::string raw = get_string(section, key);
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
      throw ValidationError(qualify(section, key) + ": not a number: '" +
                            raw + "'");
    return v;
  }

  double get_number_or(const std::string& section, const std::string& key,
                       double fallback) {
    return has(section, key) ? get_number(section, key) : fallback;
  }

  std::size_t get_count(const std::string& section, const std::string& key) {
    const double v = get_number(section, key);
    if (v < 0 || v != std::floor(v) || v > 1e15)
      throw ValidationError(qualify(section, key) +
                            ": must be a nonnegative integer");
    return static_cast<std::size_t>(v);
  }

  void require_section(const std::string& name) {
    if (!doc_.find(name))
      throw ValidationError(name + ": missing required section");
  }

  void finish() {
    static const char* known_sections[] = {"",        "params",      "initial",
                                           "forcing", "integration", "weights",
                                           "tipping", "control"};
    for (auto& [name, sec] : doc_.sections) {
      bool ok = false;
      for (const char* k : known_sections) ok = ok || name == k;
      if (!ok) throw ValidationError(name + ": unknown section");
      for (auto& [key, rv] : sec)
        if (!rv.used)
          throw ValidationError(qualify(name, key) + ": unknown key");
    }
  }

 private:
  RawDoc& doc_;
};

}  // namespace

Scenario parse_scenario(const std::string& text) {
  RawDoc doc = tokenize(text);
  Reader rd(doc);
  Scenario sc;

  for (const char* name : {"params", "initial", "forcing", "integration"})
    rd.require_section(name);

  sc.params.r = rd.get_number("params", "r");
  sc.params.beta = rd.get_number("params", "beta");
  sc.params.b = rd.get_number("params", "b");
  sc.params.p = rd.get_number("params", "p");
  sc.params.l = rd.get_number("params", "l");
  sc.params.epsilon = rd.get_number("params", "epsilon");
  sc.params.phi = rd.get_number("params", "phi");
  sc.params.gamma = rd.get_number("params", "gamma");
  sc.params.eta = rd.get_number("params", "eta");
  sc.params.mu = rd.get_number("params", "mu");
  sc.params.xi = rd.get_number("params", "xi");

  sc.initial.S = rd.get_number("initial", "S");
  sc.initial.E = rd.get_number("initial", "E");
  sc.initial.C = rd.get_number("initial", "C");
  sc.initial.I = rd.get_number("initial", "I");
  sc.initial.Z = rd.get_number("initial", "Z");

  const std::string kind = rd.get_string("forcing", "kind");
  if (kind == "constant") {
    sc.forcing.kind = ForcingKind::Constant;
    sc.forcing.f0 = rd.get_number("forcing", "f0");
    sc.forcing.f_min = sc.forcing.f_max = sc.forcing.f0;
  } else if (kind == "linear") {
    sc.forcing.kind = ForcingKind::LinearRamp;
    sc.forcing.f_min = rd.get_number("forcing", "f_min");
    sc.forcing.f_max = rd.get_number("forcing", "f_max");
    sc.forcing.alpha = rd.get_number("forcing", "alpha");
  } else if (kind == "sigmoid") {
    sc.forcing.kind = ForcingKind::SigmoidRamp;
    sc.forcing.f_min = rd.get_number("forcing", "f_min");
    sc.forcing.f_max = rd.get_number("forcing", "f_max");
    sc.forcing.alpha = rd.get_number("forcing", "alpha");
    sc.forcing.t_mid = rd.get_number("forcing", "t_mid");
  } else {
    throw ValidationError(
        "forcing.kind: must be one of constant, linear, sigmoid");
  }

  sc.grid.t0 = rd.get_number_or("integration", "t0", 0.0);
  sc.grid.T = rd.get_number("integration", "T");
  sc.grid.n_steps = rd.get_count("integration", "n_steps");

  sc.weights.w_E = rd.get_number_or("weights", "w_E", 1.0);
  sc.weights.w_C = rd.get_number_or("weights", "w_C", 1.0);
  sc.weights.w_I = rd.get_number_or("weights", "w_I", 1.0);
  sc.weights.w_Z = rd.get_number_or("weights", "w_Z", 1.0);
  sc.weights.w_u = rd.get_number_or("weights", "w_u", 1.0);

  sc.tipping.delta_tip = rd.get_number_or("tipping", "delta_tip", 1.0);
  sc.tipping.alpha_lo = rd.get_number_or("tipping", "alpha_lo", 0.0);
  sc.tipping.alpha_hi = rd.get_number_or("tipping", "alpha_hi", 0.0);
  sc.tipping.tol = rd.get_number_or("tipping", "tol", 1e-3);

  sc.control.omega = rd.get_number_or("control", "omega", 0.5);
  sc.control.tol = rd.get_number_or("control", "tol", 1e-6);
  sc.control.max_iter =
      rd.has("control", "max_iter") ? rd.get_count("control", "max_iter") : 500;
  if (rd.has("control", "sign_convention")) {
    const std::string conv = rd.get_string("control", "sign_convention");
    if (conv == "literal")
      sc.model_options.convention = SignConvention::Literal;
    else if (conv == "remedial")
      sc.model_options.convention = SignConvention::Remedial;
    else
      throw ValidationError(
          "control.sign_convention: must be literal or remedial");
  }

  if (rd.has("", "transfer_form")) {
    const std::string form = rd.get_string("", "transfer_form");
    if (form == "regularized") {
      sc.model_options.transfer = TransferForm::Regularized;
    } else if (form == "literal") {
      sc.model_options.transfer = TransferForm::Literal;
      sc.model_options.kappa = rd.get_number("", "kappa");
    } else {
      throw ValidationError("transfer_form: must be regularized or literal");
    }
  }

  rd.finish();
  sc.validate();
  return sc;
}

namespace {
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  if (s.model_options.transfer == TransferForm::Literal) {
    out << "transfer_form = literal\n";
    out << "kappa = " << num(s.model_options.kappa) << "\n";
  } else {
    out << "transfer_form = regularized\n";
  }
  out << "\n[params]\n";
  out << "r = " << num(s.params.r) << "\n";
  out << "beta = " << num(s.params.beta) << "\n";
  out << "b = " << num(s.params.b) << "\n";
  out << "p = " << num(s.params.p) << "\n";
  out << "l = " << num(s.params.l) << "\n";
  out << "epsilon = " << num(s.params.epsilon) << "\n";
  out << "phi = " << num(s.params.phi) << "\n";
  out << "gamma = " << num(s.params.gamma) << "\n";
  out << "eta = " << num(s.params.eta) << "\n";
  out << "mu = " << num(s.params.mu) << "\n";
  out << "xi = " << num(s.params.xi) << "\n";
  out << "\n[initial]\n";
  out << "S = " << num(s.initial.S) << "\n";
  out << "E = " << num(s.initial.E) << "\n";
  out << "C = " << num(s.initial.C) << "\n";
  out << "I = " << num(s.initial.I) << "\n";
  out << "Z = " << num(s.initial.Z) << "\n";
  out << "\n[forcing]\n";
  switch (s.forcing.kind) {
    case ForcingKind::Constant:
      out << "kind = constant\n";
      out << "f0 = " << num(s.forcing.f0) << "\n";
      break;
    case ForcingKind::LinearRamp:
      out << "kind = linear\n";
      out << "f_min = " << num(s.forcing.f_min) << "\n";
      out << "f_max = " << num(s.forcing.f_max) << "\n";
      out << "alpha = " << num(s.forcing.alpha) << "\n";
      break;
    case ForcingKind::SigmoidRamp:
      out << "kind = sigmoid\n";
      out << "f_min = " << num(s.forcing.f_min) << "\n";
      out << "f_max = " << num(s.forcing.f_max) << "\n";
      out << "alpha = " << num(s.forcing.alpha) << "\n";
      out << "t_mid = " << num(s.forcing.t_mid) << "\n";
      break;
  }
  out << "\n[integration]\n";
  out << "t0 = " << num(s.grid.t0) << "\n";
  out << "T = " << num(s.grid.T) << "\n";
  out << "n_steps = " << s.grid.n_steps << "\n";
  out << "\n[weights]\n";
  out << "w_E = " << num(s.weights.w_E) << "\n";
  out << "w_C = " << num(s.weights.w_C) << "\n";
  out << "w_I = " << num(s.weights.w_I) << "\n";
  out << "w_Z = " << num(s.weights.w_Z) << "\n";
  out << "w_u = " << num(s.weights.w_u) << "\n";
  out << "\n[tipping]\n";
  out << "delta_tip = " << num(s.tipping.delta_tip) << "\n";
  out << "alpha_lo = " << num(s.tipping.alpha_lo) << "\n";
  out << "alpha_hi = " << num(s.tipping.alpha_hi) << "\n";
  out << "tol = " << num(s.tipping.tol) << "\n";
  out << "\n[control]\n";
  out << "omega = " << num(s.control.omega) << "\n";
  out << "tol = " << num(s.control.tol) << "\n";
  out << "max_iter = " << s.control.max_iter << "\n";
  out << "sign_convention = "
      << (s.model_options.convention == SignConvention::Literal ? "literal"
                                                                : "remedial")
      << "\n";
  return out.str();
}

std::string scenario_digest(const Scenario& s) {
  const std::string text = serialize_scenario(s);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace disinfo
