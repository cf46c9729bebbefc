#include "gfm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "gfm/error.hpp"
#include "gfm/multiplier.hpp"
#include "json.hpp"

namespace gfm {

using nlohmann::json;

namespace {

constexpr double kIdentityTolRel = 1e-12;
constexpr CertificateKind kAllKinds[] = {CertificateKind::ThmMain, CertificateKind::Cooor,
                                         CertificateKind::Combined,
                                         CertificateKind::DualFrames};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

Certificate build_certificate(CertificateKind kind, const Scenario& s) {
  const Tolerances& tol = s.tolerances;
  switch (kind) {
    case CertificateKind::ThmMain:
      return cert_thm_main(s.lambda, s.theta_or_lambda(), s.symbol, s.nu_override, tol);
    case CertificateKind::Cooor:
      return cert_cooor(s.lambda, s.symbol, tol);
    case CertificateKind::Combined:
      return cert_combined(s.lambda, s.theta_or_lambda(), s.symbol, s.nu_override, tol);
    case CertificateKind::DualFrames:
      if (!s.dual) throw Error(ErrorKind::ConditionNotMet, "scenario has no dual family");
      return cert_dualframes(s.lambda, *s.dual, s.symbol, tol);
  }
  throw Error(ErrorKind::ValidationError, "unknown certificate kind");
}

CertificateEntry evaluate_certificate(CertificateKind kind, const Scenario& s,
                                      const ReportOptions& opt,
                                      std::vector<Inequality>& assertions) {
  CertificateEntry entry{kind, std::nullopt, {}, std::nullopt, {}};
  try {
    entry.certificate = build_certificate(kind, s);
  } catch (const Error& e) {
    entry.not_applicable = e.what();
    return entry;
  }
  Certificate& cert = *entry.certificate;
  if (!cert.satisfied) return entry;

  if (s.debug_predicted_bound_scale) cert.predicted_inv_upper *= *s.debug_predicted_bound_scale;

  const std::string tag = "[" + std::string(to_string(kind)) + "] ";
  try {
    const Operator m = certified_multiplier(kind, s.symbol, s.lambda, s.theta_or_lambda(),
                                            s.dual ? &*s.dual : nullptr);
    CertifiedInversion inv =
        run_certified_inversion(cert, m, opt.n_max, opt.target_err, false);
    Inequality lower = inv.lower_check;
    Inequality upper = inv.upper_check;
    lower.claim = tag + lower.claim;
    upper.claim = tag + upper.claim;
    assertions.push_back(std::move(lower));
    assertions.push_back(std::move(upper));
    const auto worst = std::min_element(
        inv.steps.begin(), inv.steps.end(), [](const StepCheck& a, const StepCheck& b) {
          return (a.certified_bound - a.oracle_gap) < (b.certified_bound - b.oracle_gap);
        });
    if (worst != inv.steps.end()) {
      assertions.push_back(check_at_most(
          tag + "||M^-1 - X_n|| <= r^(n+1) c, tightest at n = " + std::to_string(worst->n),
          worst->oracle_gap, worst->certified_bound, kBoundSlack));
    }
    entry.inversion = std::move(inv);
  } catch (const Error& e) {
    entry.inversion_error = e.what();
    assertions.push_back({tag + "satisfied certificate admits a convergent series (" +
                              e.what() + ")",
                          0.0, 0.0, -1.0, false});
  }
  return entry;
}

json inequality_json(const Inequality& q) {
  return {{"claim", q.claim}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"margin", q.margin},
          {"holds", q.holds}};
}

json bounds_json(const FrameBounds& b) {
  return {{"lower", b.lower}, {"upper", b.upper}, {"is_frame", b.is_frame}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string inequality_line(const Inequality& q) {
  return std::string(q.holds ? "[ok] " : "[VIOLATED] ") + q.claim + ": lhs=" + num(q.lhs) +
         " rhs=" + num(q.rhs) + " margin=" + num(q.margin);
}

}  // namespace

bool Report::has_violation() const {
  return std::any_of(assertions.begin(), assertions.end(),
                     [](const Inequality& q) { return !q.holds; });
}

Report run_report(const Scenario& s, const ReportOptions& opt) {
  const Tolerances& tol = s.tolerances;
  const GFrameFamily& theta = s.theta_or_lambda();
  std::vector<Inequality> assertions;

  const FrameBounds lb = frame_bounds(s.lambda, tol.frame_tol);
  const FrameBounds tb = frame_bounds(theta, tol.frame_tol);
  std::optional<FrameBounds> db;
  if (s.dual) db = frame_bounds(*s.dual, tol.frame_tol);

  const Operator mult = assemble_multiplier(s.symbol, s.lambda, theta);
  const double mult_norm = op_norm(mult);
  const double adjoint_dev = adjoint_multiplier_check(s.symbol, s.lambda, theta);
  const double rewrite_dev = rewrite_identities_check(s.symbol, s.lambda, theta);
  assertions.push_back(check_at_most("||M^* - M_{conj m,Theta,Lambda}|| <= 1e-12 ||M||",
                                     adjoint_dev, kIdentityTolRel * mult_norm, 0.0));
  assertions.push_back(check_at_most(
      "max ||M - M_{1,conj(m) Lambda,Theta}||, ||M - M_{1,Lambda,m Theta}|| <= 1e-12 ||M||",
      rewrite_dev, kIdentityTolRel * mult_norm, 0.0));
  assertions.push_back(check_at_most("||M|| <= ||m|| sqrt(B_Lambda B_Theta)", mult_norm,
                                     s.symbol.sup_norm() * std::sqrt(lb.upper * tb.upper),
                                     kBoundSlack));

  MultiplierSummary ms{mult_norm, numerically_invertible(mult), std::nullopt, std::nullopt};
  if (ms.invertible) {
    const InverseResult inv = direct_inverse(mult);
    ms.condition = inv.condition;
    ms.inverse_norm = op_norm(inv.inverse);
  }

  std::vector<CertificateEntry> certs;
  for (CertificateKind kind : kAllKinds) {
    certs.push_back(evaluate_certificate(kind, s, opt, assertions));
  }

  NecessaryReport necessary = necessary_conditions_check(s.symbol, s.lambda, theta);
  for (const auto& c : necessary.claims) assertions.push_back(c);

  const GDualCheck gd = gdual_check(s.lambda, theta, tol.dual_tol);
  DualitySummary duality{dual_check(s.lambda, theta, tol.dual_tol), gd.is_gdual, gd.residual,
                         std::nullopt, std::nullopt, std::nullopt};
  if (gd.is_gdual) {
    assertions.push_back(check_at_most("||S_{(Lambda S_{Theta Lambda}^-1) Theta} - I|| <= dual_tol",
                                       gd.residual, tol.dual_tol, 0.0));
  }
  if (s.dual) duality.given_dual = dual_check(s.lambda, *s.dual, tol.dual_tol);
  if (ms.invertible) {
    const DualsFromInvertible d = duals_from_invertible(s.symbol, s.lambda, theta);
    duality.theta_partner_residual = d.theta_residual;
    duality.lambda_partner_residual = d.lambda_residual;
    assertions.push_back(check_at_most("Theta dual to conj(m) Lambda M_{conj m,Theta,Lambda}^-1",
                                       d.theta_residual, tol.dual_tol, 0.0));
    assertions.push_back(check_at_most("m Theta M^-1 dual to Lambda", d.lambda_residual,
                                       tol.dual_tol, 0.0));
  }

  std::optional<PerturbationReport> perturbation;
  std::string perturbation_error;
  try {
    perturbation = theta_frame_check(s.lambda, theta, s.nu_override, tol);
    if (perturbation->deviation) assertions.push_back(*perturbation->deviation);
    if (perturbation->theta_is_frame) {
      assertions.push_back(check_at_least("nu < A_Lambda implies A_Theta > 0",
                                          *perturbation->theta_lower, 0.0, 0.0));
      assertions.back().holds = *perturbation->theta_is_frame;
    }
  } catch (const Error& e) {
    perturbation_error = e.what();
  }

  return Report{s.provenance ? s.provenance->generator : std::string("file"),
                lb,
                tb,
                db,
                estimate_nu(s.lambda, theta),
                s.nu_override,
                adjoint_dev,
                rewrite_dev,
                ms,
                std::move(certs),
                std::move(necessary),
                std::move(duality),
                std::move(perturbation),
                std::move(perturbation_error),
                std::move(assertions)};
}

std::string render_text(const Report& r, const std::string& timestamp) {
  std::ostringstream os;
  os << "# gfm report generated " << timestamp << "\n";
  os << "generator: " << r.generator << "\n\n";

  auto bounds = [&](const char* name, const FrameBounds& b) {
    os << name << ": A=" << num(b.lower) << " B=" << num(b.upper)
       << " is_frame=" << yes_no(b.is_frame) << "\n";
  };
  os << "== frame bounds ==\n";
  bounds("Lambda", r.lambda_bounds);
  bounds("Theta", r.theta_bounds);
  if (r.dual_bounds) bounds("Lambda^d", *r.dual_bounds);
  os << "nu estimate: " << num(r.nu_estimate) << "\n";
  os << "nu override: " << (r.nu_override ? num(*r.nu_override) : "none") << "\n\n";

  os << "== multiplier ==\n";
  os << "||M||=" << num(r.multiplier.norm) << " invertible=" << yes_no(r.multiplier.invertible);
  if (r.multiplier.invertible) {
    os << " cond=" << num(*r.multiplier.condition)
       << " ||M^-1||=" << num(*r.multiplier.inverse_norm);
  }
  os << "\nadjoint identity deviation: " << num(r.adjoint_deviation) << "\n";
  os << "rewrite identity deviation: " << num(r.rewrite_deviation) << "\n\n";

  os << "== sufficient conditions ==\n";
  for (const auto& e : r.certificates) {
    os << "[" << to_string(e.kind) << "] ";
    if (!e.certificate) {
      os << "not applicable: " << e.not_applicable << "\n";
      continue;
    }
    const Certificate& c = *e.certificate;
    os << "status=" << to_string(c.status) << " lhs=" << num(c.lhs) << " rhs=" << num(c.rhs)
       << " margin=" << num(c.margin);
    if (c.satisfied) {
      os << " interval=[" << num(c.predicted_inv_lower) << ", " << num(c.predicted_inv_upper)
         << "] r=" << num(c.neumann_ratio) << " c=" << num(c.neumann_prefactor)
         << " anchor=" << to_string(c.anchor_id);
    }
    os << "\n";
    if (e.inversion) {
      const auto& inv = *e.inversion;
      os << "    neumann: terms=" << inv.result.terms_used
         << " measured_ratio=" << num(inv.result.ratio)
         << " a_priori=" << num(inv.result.a_priori_bound)
         << " residual=" << num(inv.result.a_posteriori_residual) << " oracle_gap="
         << (inv.result.oracle_gap ? num(*inv.result.oracle_gap) : "n/a")
         << " target_reached=" << yes_no(inv.result.target_reached) << "\n";
      os << "    actual: 1/||M||=" << num(inv.min_gain) << " ||M^-1||=" << num(inv.inverse_norm)
         << "\n";
    }
    if (!e.inversion_error.empty()) os << "    inversion error: " << e.inversion_error << "\n";
  }

  os << "\n== necessary conditions ==\n";
  if (!r.necessary.applicable) {
    os << "not applicable: M is numerically singular\n";
  } else {
    os << "gamma=||M^-1||=" << num(r.necessary.gamma) << "\n";
    for (const auto& c : r.necessary.claims) os << inequality_line(c) << "\n";
  }

  os << "\n== duality ==\n";
  os << "Theta dual of Lambda: " << yes_no(r.duality.theta_dual.is_dual)
     << " deviation=" << num(r.duality.theta_dual.deviation) << "\n";
  os << "Theta g-dual of Lambda: " << yes_no(r.duality.is_gdual);
  if (r.duality.is_gdual) os << " residual=" << num(r.duality.gdual_residual);
  os << "\n";
  if (r.duality.given_dual) {
    os << "Lambda^d dual of Lambda: " << yes_no(r.duality.given_dual->is_dual)
       << " deviation=" << num(r.duality.given_dual->deviation) << "\n";
  }
  if (r.duality.theta_partner_residual) {
    os << "duals from invertible M: theta partner residual="
       << num(*r.duality.theta_partner_residual)
       << " lambda partner residual=" << num(*r.duality.lambda_partner_residual) << "\n";
  }

  os << "\n== perturbation ==\n";
  if (r.perturbation) {
    const auto& p = *r.perturbation;
    os << "nu=" << num(p.nu) << " A_Lambda=" << num(p.a_lambda)
       << " condition_met=" << yes_no(p.condition_met) << "\n";
    if (p.deviation) os << inequality_line(*p.deviation) << "\n";
    if (p.theta_lower) {
      os << "A_Theta=" << num(*p.theta_lower) << " Theta is_frame=" << yes_no(*p.theta_is_frame)
         << "\n";
    }
  } else {
    os << "not applicable: " << r.perturbation_error << "\n";
  }

  const auto violated = std::count_if(r.assertions.begin(), r.assertions.end(),
                                      [](const Inequality& q) { return !q.holds; });
  os << "\n== assertions ==\n";
  for (const auto& q : r.assertions) os << inequality_line(q) << "\n";
  os << r.assertions.size() << " checked, " << violated << " violated\n";
  os << "verdict: " << (violated == 0 ? "all asserted inequalities hold" : "THEOREM VIOLATION")
     << "\n";
  return os.str();
}

std::string render_json(const Report& r, const std::string& timestamp) {
  json root;
  root["generated"] = timestamp;
  root["generator"] = r.generator;
  root["frame_bounds"] = {{"lambda", bounds_json(r.lambda_bounds)},
                          {"theta", bounds_json(r.theta_bounds)},
                          {"dual", r.dual_bounds ? bounds_json(*r.dual_bounds) : json(nullptr)}};
  root["nu_estimate"] = r.nu_estimate;
  root["nu_override"] = optional_json(r.nu_override);
  root["multiplier"] = {{"norm", r.multiplier.norm},
                        {"invertible", r.multiplier.invertible},
                        {"condition", optional_json(r.multiplier.condition)},
                        {"inverse_norm", optional_json(r.multiplier.inverse_norm)},
                        {"adjoint_deviation", r.adjoint_deviation},
                        {"rewrite_deviation", r.rewrite_deviation}};
  json certs = json::array();
  for (const auto& e : r.certificates) {
    json c;
    c["kind"] = std::string(to_string(e.kind));
    if (!e.certificate) {
      c["status"] = "not_applicable";
      c["reason"] = e.not_applicable;
    } else {
      const Certificate& k = *e.certificate;
      c["status"] = std::string(to_string(k.status));
      c["lhs"] = k.lhs;
      c["rhs"] = k.rhs;
      c["margin"] = k.margin;
      c["predicted_inv_lower"] = k.predicted_inv_lower;
      c["predicted_inv_upper"] = k.predicted_inv_upper;
      c["neumann_ratio"] = k.neumann_ratio;
      c["neumann_prefactor"] = k.neumann_prefactor;
      c["anchor"] = std::string(to_string(k.anchor_id));
      c["inputs"] = {{"A_lambda", k.inputs.a_lambda},
                     {"B_lambda", k.inputs.b_lambda},
                     {"B_theta", optional_json(k.inputs.b_theta)},
                     {"B_dual", optional_json(k.inputs.b_dual)},
                     {"nu", optional_json(k.inputs.nu)},
                     {"delta", optional_json(k.inputs.delta)},
                     {"lambda", optional_json(k.inputs.lambda)},
                     {"sup_norm", k.inputs.sup_norm}};
    }
    if (e.inversion) {
      const auto& inv = *e.inversion;
      json steps = json::array();
      for (const auto& st : inv.steps) {
        steps.push_back({{"n", st.n}, {"oracle_gap", st.oracle_gap},
                         {"certified_bound", st.certified_bound}, {"holds", st.holds}});
      }
      c["inversion"] = {{"terms_used", inv.result.terms_used},
                        {"measured_ratio", inv.result.ratio},
                        {"a_priori_bound", inv.result.a_priori_bound},
                        {"a_posteriori_residual", inv.result.a_posteriori_residual},
                        {"oracle_gap", optional_json(inv.result.oracle_gap)},
                        {"target_reached", inv.result.target_reached},
                        {"inverse_norm", inv.inverse_norm},
                        {"min_gain", inv.min_gain},
                        {"steps", std::move(steps)}};
    }
    if (!e.inversion_error.empty()) c["inversion_error"] = e.inversion_error;
    certs.push_back(std::move(c));
  }
  root["certificates"] = std::move(certs);

  json nec;
  nec["applicable"] = r.necessary.applicable;
  nec["gamma"] = r.necessary.gamma;
  nec["claims"] = json::array();
  for (const auto& c : r.necessary.claims) nec["claims"].push_back(inequality_json(c));
  root["necessary"] = std::move(nec);

  json dual;
  dual["theta_is_dual"] = r.duality.theta_dual.is_dual;
  dual["theta_dual_deviation"] = r.duality.theta_dual.deviation;
  dual["is_gdual"] = r.duality.is_gdual;
  dual["gdual_residual"] = r.duality.is_gdual ? json(r.duality.gdual_residual) : json(nullptr);
  if (r.duality.given_dual) {
    dual["given_dual"] = {{"is_dual", r.duality.given_dual->is_dual},
                          {"deviation", r.duality.given_dual->deviation}};
  }
  dual["theta_partner_residual"] = optional_json(r.duality.theta_partner_residual);
  dual["lambda_partner_residual"] = optional_json(r.duality.lambda_partner_residual);
  root["duality"] = std::move(dual);

  if (r.perturbation) {
    const auto& p = *r.perturbation;
    root["perturbation"] = {
        {"nu", p.nu},
        {"A_lambda", p.a_lambda},
        {"condition_met", p.condition_met},
        {"deviation", p.deviation ? inequality_json(*p.deviation) : json(nullptr)},
        {"A_theta", optional_json(p.theta_lower)},
        {"theta_is_frame", p.theta_is_frame ? json(*p.theta_is_frame) : json(nullptr)}};
  } else {
    root["perturbation"] = {{"error", r.perturbation_error}};
  }

  json asserts = json::array();
  for (const auto& q : r.assertions) asserts.push_back(inequality_json(q));
  root["assertions"] = std::move(asserts);
  root["violation"] = r.has_violation();
  return root.dump(2) + "\n";
}

}  // namespace gfm
