#include "gfm/invertibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "gfm/error.hpp"

namespace gfm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSymbolImagTol = 1e-12;
constexpr double kNecessaryTolRel = 1e-10;

/// Strict inequality lhs < rhs, with a borderline band of width
/// eps * max(|lhs|, |rhs|) around equality.
CertStatus strict_status(double lhs, double rhs, double eps) {
  const double band = eps * std::max(std::abs(lhs), std::abs(rhs));
  const double margin = rhs - lhs;
  if (std::abs(margin) <= band) return CertStatus::Borderline;
  return margin > 0.0 ? CertStatus::Satisfied : CertStatus::NotSatisfied;
}

Certificate make_certificate(CertificateKind kind, CertificateInputs inputs, double lhs,
                             double rhs, const Tolerances& tol, AnchorKind anchor) {
  const CertStatus status = strict_status(lhs, rhs, tol.boundary_eps);
  return {kind,   std::move(inputs),
          status, status == CertStatus::Satisfied,
          lhs,    rhs,
          rhs - lhs, kNaN,
          kNaN,   kNaN,
          kNaN,   anchor,
          std::nullopt, std::nullopt};
}

FrameBounds require_frame(const GFrameFamily& family, const Tolerances& tol,
                          const char* which) {
  const FrameBounds fb = frame_bounds(family, tol.frame_tol);
  if (!fb.is_frame) {
    std::ostringstream os;
    os << which << " is not a frame (lower bound " << fb.lower << ")";
    throw Error(ErrorKind::NotAFrame, os.str());
  }
  return fb;
}

}  // namespace

Inequality check_at_least(std::string claim, double lhs, double rhs, double tol) {
  const double margin = lhs - rhs;
  return {std::move(claim), lhs, rhs, margin, margin >= -tol};
}

Inequality check_at_most(std::string claim, double lhs, double rhs, double tol) {
  const double margin = rhs - lhs;
  return {std::move(claim), lhs, rhs, margin, margin >= -tol};
}

std::string_view to_string(CertificateKind kind) noexcept {
  switch (kind) {
    case CertificateKind::ThmMain: return "thm_main";
    case CertificateKind::Cooor: return "cooor";
    case CertificateKind::Combined: return "combined";
    case CertificateKind::DualFrames: return "dualframes";
  }
  return "unknown";
}

std::string_view to_string(CertStatus status) noexcept {
  switch (status) {
    case CertStatus::Satisfied: return "satisfied";
    case CertStatus::NotSatisfied: return "not_satisfied";
    case CertStatus::Borderline: return "borderline";
  }
  return "unknown";
}

std::string_view to_string(AnchorKind anchor) noexcept {
  switch (anchor) {
    case AnchorKind::PositiveMultiplier: return "M_{m,Lambda,Lambda}";
    case AnchorKind::FrameOperator: return "S_Lambda";
    case AnchorKind::Identity: return "I";
  }
  return "unknown";
}

std::optional<CertificateKind> parse_certificate_kind(std::string_view name) {
  for (auto k : {CertificateKind::ThmMain, CertificateKind::Cooor,
                 CertificateKind::Combined, CertificateKind::DualFrames}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

double resolve_nu(const GFrameFamily& lambda, const GFrameFamily& theta,
                  std::optional<double> nu_override) {
  const double estimate = estimate_nu(lambda, theta);
  if (!nu_override) return estimate;
  const double nu = *nu_override;
  if (!std::isfinite(nu) || nu < estimate - 1e-12 * std::max(1.0, estimate)) {
    std::ostringstream os;
    os << "nu override " << nu << " is below the tight estimate " << estimate;
    throw Error(ErrorKind::ValidationError, os.str());
  }
  return nu;
}

Certificate cert_thm_main(const GFrameFamily& lambda, const GFrameFamily& theta,
                          const Symbol& m, std::optional<double> nu_override,
                          const Tolerances& tol) {
  require_same_structure(lambda, theta);
  const FrameBounds fb = require_frame(lambda, tol, "Lambda");
  const double sup = m.sup_norm();
  if (m.max_imag_abs() > kSymbolImagTol * sup) {
    throw Error(ErrorKind::SymbolNotPositive, "symbol is not real-valued");
  }
  const double delta = m.min_real();
  if (!(delta > 0.0)) {
    std::ostringstream os;
    os << "symbol minimum " << delta << " is not positive";
    throw Error(ErrorKind::SymbolNotPositive, os.str());
  }
  const double nu = resolve_nu(lambda, theta, nu_override);
  const double a = fb.lower;
  const double b = fb.upper;

  CertificateInputs in{a, b, frame_bounds(theta).upper, std::nullopt, nu, delta,
                       std::nullopt, sup};
  Certificate cert = make_certificate(CertificateKind::ThmMain, std::move(in),
                                      sup / delta * std::sqrt(nu), a / std::sqrt(b), tol,
                                      AnchorKind::PositiveMultiplier);
  if (cert.satisfied) {
    const double coupling = sup * std::sqrt(nu * b);
    cert.predicted_inv_lower = 1.0 / (sup * b + coupling);
    cert.predicted_inv_upper = 1.0 / (delta * a - coupling);
    cert.neumann_ratio = coupling / (delta * a);
    cert.neumann_prefactor = cert.predicted_inv_upper;
    cert.anchor = assemble_multiplier(m, lambda, lambda);
  }
  return cert;
}

Certificate cert_cooor(const GFrameFamily& lambda, const Symbol& m, const Tolerances& tol) {
  const FrameBounds fb = require_frame(lambda, tol, "Lambda");
  if (m.size() != lambda.size()) {
    throw Error(ErrorKind::DimError, "symbol length does not match the family");
  }
  const double a = fb.lower;
  const double b = fb.upper;
  const double lam = m.dist_to_one();

  CertificateInputs in{a, b, std::nullopt, std::nullopt, std::nullopt, std::nullopt, lam,
                       m.sup_norm()};
  Certificate cert = make_certificate(CertificateKind::Cooor, std::move(in), lam, a / b, tol,
                                      AnchorKind::FrameOperator);
  if (cert.satisfied) {
    cert.predicted_inv_lower = 1.0 / ((lam + 1.0) * b);
    cert.predicted_inv_upper = 1.0 / (a - lam * b);
    cert.neumann_ratio = lam * b / a;
    cert.neumann_prefactor = cert.predicted_inv_upper;
    cert.anchor = frame_operator(lambda);
  }
  return cert;
}

Certificate cert_combined(const GFrameFamily& lambda, const GFrameFamily& theta,
                          const Symbol& m, std::optional<double> nu_override,
                          const Tolerances& tol) {
  require_same_structure(lambda, theta);
  const double nu = resolve_nu(lambda, theta, nu_override);
  if (nu == 0.0) {
    Certificate cert = cert_cooor(lambda, m, tol);
    cert.kind = CertificateKind::Combined;
    cert.inputs.nu = 0.0;
    cert.inputs.b_theta = frame_bounds(theta).upper;
    return cert;
  }

  const FrameBounds fb = require_frame(lambda, tol, "Lambda");
  const double a = fb.lower;
  const double b = fb.upper;
  const double lam = m.dist_to_one();
  const double coupling = std::sqrt(nu * b);

  CertificateInputs in{a, b, frame_bounds(theta).upper, std::nullopt, nu, std::nullopt, lam,
                       m.sup_norm()};
  Certificate cert = make_certificate(CertificateKind::Combined, std::move(in), lam,
                                      (a - coupling) / (b + coupling), tol,
                                      AnchorKind::PositiveMultiplier);
  if (cert.satisfied) {
    cert.predicted_inv_lower = 1.0 / ((lam + 1.0) * (b + coupling));
    cert.predicted_inv_upper = 1.0 / (a - lam * b - (lam + 1.0) * coupling);
    cert.neumann_ratio = (lam + 1.0) * coupling / (a - lam * b);
    cert.neumann_prefactor = cert.predicted_inv_upper;
    cert.anchor = assemble_multiplier(m, lambda, lambda);
  }
  return cert;
}

Certificate cert_dualframes(const GFrameFamily& lambda, const GFrameFamily& dual,
                            const Symbol& m, const Tolerances& tol) {
  require_same_structure(lambda, dual);
  const DualCheck dc = dual_check(lambda, dual, tol.dual_tol);
  if (!dc.is_dual) {
    std::ostringstream os;
    os << "||S_{Lambda Lambda^d} - I|| = " << dc.deviation << " exceeds " << tol.dual_tol;
    throw Error(ErrorKind::NotDualPair, os.str());
  }
  const FrameBounds fb = require_frame(lambda, tol, "Lambda");
  const FrameBounds fd = require_frame(dual, tol, "Lambda^d");
  const double lam = m.dist_to_one();
  const double product = lam * std::sqrt(fb.upper * fd.upper);

  CertificateInputs in{fb.lower, fb.upper, std::nullopt, fd.upper, std::nullopt,
                       std::nullopt, lam, m.sup_norm()};
  Certificate cert = make_certificate(CertificateKind::DualFrames, std::move(in), product,
                                      1.0, tol, AnchorKind::Identity);
  if (cert.satisfied) {
    cert.predicted_inv_lower = 1.0 / (1.0 + product);
    cert.predicted_inv_upper = 1.0 / (1.0 - product);
    cert.neumann_ratio = product;
    cert.neumann_prefactor = 1.0 / (1.0 - product);
    cert.anchor = Operator::identity(lambda.ambient_dim());
    cert.series_step = assemble_multiplier(m.one_minus(), lambda, dual);
  }
  return cert;
}

Operator certified_multiplier(CertificateKind kind, const Symbol& m,
                              const GFrameFamily& lambda, const GFrameFamily& theta,
                              const GFrameFamily* dual) {
  switch (kind) {
    case CertificateKind::ThmMain:
    case CertificateKind::Combined:
      return assemble_multiplier(m, lambda, theta);
    case CertificateKind::Cooor:
      return assemble_multiplier(m, lambda, lambda);
    case CertificateKind::DualFrames:
      if (dual == nullptr) {
        throw Error(ErrorKind::ValidationError, "dual-frame certificate needs a dual family");
      }
      return assemble_multiplier(m, lambda, *dual);
  }
  throw Error(ErrorKind::ValidationError, "unknown certificate kind");
}

bool CertifiedInversion::violated() const {
  if (!lower_check.holds || !upper_check.holds) return true;
  return std::any_of(steps.begin(), steps.end(), [](const StepCheck& s) { return !s.holds; });
}

CertifiedInversion run_certified_inversion(const Certificate& cert, const Operator& m,
                                           int n_max, double target_err,
                                           bool throw_on_violation) {
  if (!cert.satisfied || !cert.anchor) {
    std::ostringstream os;
    os << to_string(cert.kind) << " certificate is " << to_string(cert.status);
    throw Error(ErrorKind::ConditionNotMet, os.str());
  }
  const InverseResult oracle = direct_inverse(m);
  const NeumannPlan plan =
      cert.series_step ? plan_with_step(*cert.series_step, Operator::identity(m.dim()))
                       : plan_anchored(m, *cert.anchor);

  std::vector<StepCheck> steps;
  const double r = cert.neumann_ratio;
  const double c = cert.neumann_prefactor;
  auto visit = [&](int n, const Operator& partial) {
    const double gap = distance(partial, oracle.inverse);
    const double bound = (r == 0.0 ? 0.0 : std::pow(r, n + 1)) * c;
    steps.push_back({n, gap, bound, gap <= bound + kBoundSlack});
  };
  NeumannResult result = run_neumann(m, plan, n_max, target_err, visit);

  const double inv_norm = op_norm(oracle.inverse);
  const double min_gain = 1.0 / op_norm(m);
  CertifiedInversion out{
      std::move(result),
      std::move(steps),
      inv_norm,
      min_gain,
      check_at_least("1/||M|| >= predicted_inv_lower", min_gain, cert.predicted_inv_lower,
                     kBoundSlack),
      check_at_most("||M^-1|| <= predicted_inv_upper", inv_norm, cert.predicted_inv_upper,
                    kBoundSlack),
  };

  if (throw_on_violation && out.violated()) {
    std::ostringstream os;
    os << to_string(cert.kind) << ": ";
    if (!out.lower_check.holds) {
      os << out.lower_check.claim << " fails (" << out.lower_check.lhs << " vs "
         << out.lower_check.rhs << ") ";
    }
    if (!out.upper_check.holds) {
      os << out.upper_check.claim << " fails (" << out.upper_check.lhs << " vs "
         << out.upper_check.rhs << ") ";
    }
    for (const auto& s : out.steps) {
      if (!s.holds) {
        os << "partial sum " << s.n << " gap " << s.oracle_gap << " exceeds bound "
           << s.certified_bound << " ";
        break;
      }
    }
    throw Error(ErrorKind::TheoremViolation, os.str());
  }
  return out;
}

bool NecessaryReport::all_hold() const {
  return std::all_of(claims.begin(), claims.end(), [](const Inequality& c) { return c.holds; });
}

NecessaryReport necessary_conditions_check(const Symbol& m, const GFrameFamily& lambda,
                                           const GFrameFamily& theta) {
  const Operator mult = assemble_multiplier(m, lambda, theta);
  if (!numerically_invertible(mult)) return {false, kNaN, {}};

  const double gamma = op_norm(direct_inverse(mult).inverse);
  const double g2 = gamma * gamma;
  const double b_lambda = frame_bounds(lambda).upper;
  const double b_theta = frame_bounds(theta).upper;
  const double sup2 = m.sup_norm() * m.sup_norm();

  auto claim = [](std::string text, double actual, double bound) {
    const double tol = kNecessaryTolRel * std::max(std::abs(actual), std::abs(bound));
    return check_at_least(std::move(text), actual, bound, tol);
  };
  std::vector<Inequality> claims;
  claims.push_back(claim("lambda_min(S_{m Theta}) >= 1/(B_Lambda gamma^2)",
                         frame_bounds(scale_family(m, theta)).lower, 1.0 / (b_lambda * g2)));
  claims.push_back(claim("lambda_min(S_{conj(m) Lambda}) >= 1/(B_Theta gamma^2)",
                         frame_bounds(scale_family(m.conj(), lambda)).lower,
                         1.0 / (b_theta * g2)));
  claims.push_back(claim("lambda_min(S_Theta) >= 1/(B_Lambda ||m||^2 gamma^2)",
                         frame_bounds(theta).lower, 1.0 / (b_lambda * sup2 * g2)));
  claims.push_back(claim("lambda_min(S_Lambda) >= 1/(B_Theta ||m||^2 gamma^2)",
                         frame_bounds(lambda).lower, 1.0 / (b_theta * sup2 * g2)));
  return {true, gamma, std::move(claims)};
}

PerturbationReport theta_frame_check(const GFrameFamily& lambda, const GFrameFamily& theta,
                                     std::optional<double> nu_override,
                                     const Tolerances& tol) {
  require_same_structure(lambda, theta);
  const FrameBounds fb = require_frame(lambda, tol, "Lambda");
  const double nu = resolve_nu(lambda, theta, nu_override);
  const double a = fb.lower;
  PerturbationReport report{strict_status(nu, a, tol.boundary_eps) == CertStatus::Satisfied,
                            nu, a, std::nullopt, std::nullopt, std::nullopt};
  if (!report.condition_met) return report;

  const Operator mixed = cross_frame_operator(canonical_dual(lambda, tol.frame_tol), theta);
  const double dev = distance(Operator::identity(mixed.dim()), mixed);
  report.deviation = check_at_most("||I - M_{1,dual(Lambda),Theta}|| <= sqrt(nu/A_Lambda)",
                                   dev, std::sqrt(nu / a), kBoundSlack);
  const FrameBounds ft = frame_bounds(theta);
  report.theta_lower = ft.lower;
  report.theta_is_frame = ft.is_frame;
  return report;
}

}  // namespace gfm
