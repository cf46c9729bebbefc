#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfm/invertibility.hpp"
#include "gfm/scenario.hpp"

namespace gfm {

struct ReportOptions {
  int n_max = 30;
  double target_err = 1e-10;
};

struct CertificateEntry {
  CertificateKind kind;
  std::optional<Certificate> certificate;
  std::string not_applicable;  // reason, when certificate is empty
  std::optional<CertifiedInversion> inversion;
  std::string inversion_error;
};

struct MultiplierSummary {
  double norm;
  bool invertible;
  std::optional<double> condition;
  std::optional<double> inverse_norm;
};

struct DualitySummary {
  DualCheck theta_dual;  // Theta against Lambda
  bool is_gdual;
  double gdual_residual;
  std::optional<DualCheck> given_dual;  // Lambda^d against Lambda
  std::optional<double> theta_partner_residual;   // duals_from_invertible
  std::optional<double> lambda_partner_residual;
};

/// Everything run_report learns about one scenario. Any entry in assertions
/// whose holds flag is false is a contradiction with a proven inequality.
struct Report {
  std::string generator;
  FrameBounds lambda_bounds;
  FrameBounds theta_bounds;
  std::optional<FrameBounds> dual_bounds;
  double nu_estimate;
  std::optional<double> nu_override;
  double adjoint_deviation;
  double rewrite_deviation;
  MultiplierSummary multiplier;
  std::vector<CertificateEntry> certificates;
  NecessaryReport necessary;
  DualitySummary duality;
  std::optional<PerturbationReport> perturbation;
  std::string perturbation_error;
  std::vector<Inequality> assertions;

  bool has_violation() const;
};

Report run_report(const Scenario& scenario, const ReportOptions& options = {});

/// Plain-text rendering. The first line is a timestamp header; everything
/// after it is a deterministic function of the scenario and options.
std::string render_text(const Report& report, const std::string& timestamp);
std::string render_json(const Report& report, const std::string& timestamp);

}  // namespace gfm
