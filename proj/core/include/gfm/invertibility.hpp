#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfm/gframe.hpp"
#include "gfm/multiplier.hpp"
#include "gfm/neumann.hpp"
#include "gfm/opalgebra.hpp"
#include "gfm/symbol.hpp"

namespace gfm {

/// Numerical thresholds shared by the checks. frame_tol is absolute when set,
/// otherwise kDefaultFrameTolRel * B. boundary_eps is relative to the size of
/// the two sides of a strict inequality.
struct Tolerances {
  std::optional<double> frame_tol;
  double dual_tol = kDefaultDualTol;
  double boundary_eps = 1e-12;
};

/// A numeric claim "lhs <op> rhs" with margin oriented so that margin >= 0
/// means the claim holds.
struct Inequality {
  std::string claim;
  double lhs;
  double rhs;
  double margin;
  bool holds;
};

/// Claim lhs >= rhs, accepted within tol.
Inequality check_at_least(std::string claim, double lhs, double rhs, double tol);
/// Claim lhs <= rhs, accepted within tol.
Inequality check_at_most(std::string claim, double lhs, double rhs, double tol);

enum class CertificateKind { ThmMain, Cooor, Combined, DualFrames };
enum class CertStatus { Satisfied, NotSatisfied, Borderline };
enum class AnchorKind {
  PositiveMultiplier,  // M_{m,Lambda,Lambda} = S_{sqrt(m) Lambda}
  FrameOperator,       // S_Lambda
  Identity,            // I, series realized as powers of M_{1-m,Lambda,Lambda^d}
};

std::string_view to_string(CertificateKind kind) noexcept;
std::string_view to_string(CertStatus status) noexcept;
std::string_view to_string(AnchorKind anchor) noexcept;
std::optional<CertificateKind> parse_certificate_kind(std::string_view name);

struct CertificateInputs {
  double a_lambda;
  double b_lambda;
  std::optional<double> b_theta;
  std::optional<double> b_dual;
  std::optional<double> nu;
  std::optional<double> delta;
  std::optional<double> lambda;
  double sup_norm;
};

/// Outcome of one sufficient condition for invertibility of a multiplier.
///
/// The predicted interval bounds ||M^{-1} f|| / ||f||, so 1/||M|| must be at
/// least predicted_inv_lower and ||M^{-1}|| at most predicted_inv_upper. The
/// series truncated after n terms is within neumann_ratio^{n+1} *
/// neumann_prefactor of M^{-1}. These four values are NaN unless satisfied.
struct Certificate {
  CertificateKind kind;
  CertificateInputs inputs;
  CertStatus status;
  bool satisfied;
  double lhs;
  double rhs;
  double margin;  // rhs - lhs
  double predicted_inv_lower;
  double predicted_inv_upper;
  double neumann_ratio;
  double neumann_prefactor;
  AnchorKind anchor_id;
  std::optional<Operator> anchor;
  std::optional<Operator> series_step;
};

/// nu_override when given (must not undercut the tight estimate), otherwise
/// estimate_nu(lambda, theta). Throws ValidationError on undercut.
double resolve_nu(const GFrameFamily& lambda, const GFrameFamily& theta,
                  std::optional<double> nu_override);

/// Perturbation of a frame with a real positive symbol, anchored at
/// S_{sqrt(m) Lambda}.
Certificate cert_thm_main(const GFrameFamily& lambda, const GFrameFamily& theta,
                          const Symbol& m, std::optional<double> nu_override = std::nullopt,
                          const Tolerances& tol = {});

/// Symbol close to 1, anchored at S_Lambda. The multiplier is M_{m,Lambda,Lambda}.
Certificate cert_cooor(const GFrameFamily& lambda, const Symbol& m,
                       const Tolerances& tol = {});

/// Symbol close to 1 and perturbed family together. With nu == 0 this is the
/// cooor certificate verbatim (anchor S_Lambda), relabelled.
Certificate cert_combined(const GFrameFamily& lambda, const GFrameFamily& theta,
                          const Symbol& m, std::optional<double> nu_override = std::nullopt,
                          const Tolerances& tol = {});

/// Dual pair (S_{Lambda Lambda^d} = I) with symbol close to 1. The multiplier
/// is M_{m,Lambda,Lambda^d}. Throws NotDualPair.
Certificate cert_dualframes(const GFrameFamily& lambda, const GFrameFamily& dual,
                            const Symbol& m, const Tolerances& tol = {});

/// The multiplier a certificate speaks about.
Operator certified_multiplier(CertificateKind kind, const Symbol& m,
                              const GFrameFamily& lambda, const GFrameFamily& theta,
                              const GFrameFamily* dual);

struct StepCheck {
  int n;
  double oracle_gap;
  double certified_bound;  // r^{n+1} c
  bool holds;
};

struct CertifiedInversion {
  NeumannResult result;
  std::vector<StepCheck> steps;
  double inverse_norm;  // ||M^{-1}||
  double min_gain;      // 1 / ||M||
  Inequality lower_check;
  Inequality upper_check;

  bool violated() const;
};

/// Absolute slack granted to every certified bound comparison.
inline constexpr double kBoundSlack = 1e-10;

/// Runs the certificate's series on M and checks every partial sum against the
/// certified truncation bound, and the operator norms against the predicted
/// interval. Throws ConditionNotMet for an unsatisfied certificate and, when
/// throw_on_violation, TheoremViolation if any check fails.
CertifiedInversion run_certified_inversion(const Certificate& cert, const Operator& m,
                                           int n_max, double target_err,
                                           bool throw_on_violation = true);

struct NecessaryReport {
  bool applicable;  // false when M is numerically singular
  double gamma;     // ||M^{-1}||
  std::vector<Inequality> claims;

  bool all_hold() const;
};

/// Lower frame bounds forced on m Theta, conj(m) Lambda, Theta and Lambda by
/// invertibility of M_{m,Lambda,Theta}.
NecessaryReport necessary_conditions_check(const Symbol& m, const GFrameFamily& lambda,
                                           const GFrameFamily& theta);

struct PerturbationReport {
  bool condition_met;  // nu < A_Lambda
  double nu;
  double a_lambda;
  std::optional<Inequality> deviation;  // ||I - M_{1,dual Lambda,Theta}|| <= sqrt(nu/A)
  std::optional<double> theta_lower;
  std::optional<bool> theta_is_frame;
};

PerturbationReport theta_frame_check(const GFrameFamily& lambda, const GFrameFamily& theta,
                                     std::optional<double> nu_override = std::nullopt,
                                     const Tolerances& tol = {});

}  // namespace gfm
