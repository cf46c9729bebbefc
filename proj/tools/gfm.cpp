// gfm: command-line front end for g-frame multiplier invertibility checks.
//
// Exit codes: 0 all asserted inequalities hold, 1 usage/format error,
// 2 a proven inequality failed numerically (implementation bug signal).

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gfm/error.hpp"
#include "gfm/generator.hpp"
#include "gfm/invertibility.hpp"
#include "gfm/report.hpp"
#include "gfm/scenario.hpp"
#include "gfm/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned sweep_threads() {
  const char* env = std::getenv("GFM_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    const long v = std::stol(env);
    return v > 0 ? static_cast<unsigned>(v) : 0u;
  } catch (const std::exception&) {
    throw gfm::Error(gfm::ErrorKind::ValidationError,
                     std::string("GFM_THREADS is not an integer: ") + env);
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw gfm::Error(gfm::ErrorKind::FormatError, path + ": cannot open for writing");
  out << content;
}

int cmd_report(const std::string& path, bool as_json, int n_max, double target_err) {
  const gfm::Scenario s = gfm::load_scenario(path);
  const gfm::Report r = gfm::run_report(s, {n_max, target_err});
  const std::string ts = utc_timestamp();
  std::cout << (as_json ? gfm::render_json(r, ts) : gfm::render_text(r, ts));
  return r.has_violation() ? kExitViolation : kExitOk;
}

int cmd_generate(const gfm::GenerateOptions& opt, const std::string& out) {
  gfm::save_scenario(gfm::generate_scenario(opt), out);
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

int cmd_invert(const std::string& path, const std::string& cert_name, int n_max,
               double target_err) {
  const auto kind = gfm::parse_certificate_kind(cert_name);
  if (!kind) {
    throw gfm::Error(gfm::ErrorKind::ValidationError, "unknown certificate '" + cert_name + "'");
  }
  const gfm::Scenario s = gfm::load_scenario(path);
  const gfm::GFrameFamily& theta = s.theta_or_lambda();
  const gfm::Tolerances& tol = s.tolerances;

  gfm::Certificate cert = [&] {
    switch (*kind) {
      case gfm::CertificateKind::ThmMain:
        return gfm::cert_thm_main(s.lambda, theta, s.symbol, s.nu_override, tol);
      case gfm::CertificateKind::Cooor:
        return gfm::cert_cooor(s.lambda, s.symbol, tol);
      case gfm::CertificateKind::Combined:
        return gfm::cert_combined(s.lambda, theta, s.symbol, s.nu_override, tol);
      case gfm::CertificateKind::DualFrames:
        if (!s.dual) {
          throw gfm::Error(gfm::ErrorKind::ValidationError, "scenario has no dual family");
        }
        return gfm::cert_dualframes(s.lambda, *s.dual, s.symbol, tol);
    }
    throw gfm::Error(gfm::ErrorKind::ValidationError, "unknown certificate");
  }();
  if (s.debug_predicted_bound_scale) cert.predicted_inv_upper *= *s.debug_predicted_bound_scale;

  std::cout << "certificate " << cert_name << ": " << gfm::to_string(cert.status)
            << " lhs=" << cert.lhs << " rhs=" << cert.rhs << " margin=" << cert.margin << "\n";
  if (!cert.satisfied) {
    std::cerr << "certificate not satisfied; nothing to invert\n";
    return kExitUsage;
  }
  std::cout << "predicted ||M^-1 f||/||f|| in [" << cert.predicted_inv_lower << ", "
            << cert.predicted_inv_upper << "], r=" << cert.neumann_ratio
            << " c=" << cert.neumann_prefactor << " anchor=" << gfm::to_string(cert.anchor_id)
            << "\n";

  const gfm::Operator m = gfm::certified_multiplier(*kind, s.symbol, s.lambda, theta,
                                                    s.dual ? &*s.dual : nullptr);
  const gfm::CertifiedInversion inv =
      gfm::run_certified_inversion(cert, m, n_max, target_err, false);
  std::cout << "n,oracle_gap,certified_bound,holds\n";
  for (const auto& st : inv.steps) {
    std::cout << st.n << ',' << st.oracle_gap << ',' << st.certified_bound << ','
              << (st.holds ? "yes" : "no") << "\n";
  }
  std::cout << "terms_used=" << inv.result.terms_used
            << " a_priori_bound=" << inv.result.a_priori_bound
            << " residual=" << inv.result.a_posteriori_residual
            << " target_reached=" << (inv.result.target_reached ? "yes" : "no") << "\n";
  std::cout << "1/||M||=" << inv.min_gain << " (" << (inv.lower_check.holds ? "ok" : "VIOLATED")
            << ") ||M^-1||=" << inv.inverse_norm << " ("
            << (inv.upper_check.holds ? "ok" : "VIOLATED") << ")\n";
  return inv.violated() ? kExitViolation : kExitOk;
}

int cmd_sweep(const std::string& path, const std::string& param_name, double from, double to,
              int steps, const std::string& out) {
  const auto param = gfm::parse_sweep_param(param_name);
  if (!param) {
    throw gfm::Error(gfm::ErrorKind::ValidationError, "unknown sweep parameter '" + param_name + "'");
  }
  gfm::SweepSpec spec{*param, from, to, steps, gfm::load_scenario(path)};
  const auto rows = gfm::run_sweep(spec, sweep_threads());
  write_file(out, gfm::sweep_csv(rows, *param));
  std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous g-frame multiplier invertibility toolkit"};
  app.require_subcommand(1);

  std::string scenario_path;
  bool as_json = false;
  int n_max = 30;
  double target_err = 1e-10;
  auto* report = app.add_subcommand("report", "Run every check on a scenario");
  report->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  report->add_flag("--json", as_json, "Emit the report as JSON");
  report->add_option("--nmax", n_max, "Largest Neumann partial sum index")->check(CLI::NonNegativeNumber);
  report->add_option("--target-err", target_err, "Stop the series once the bound reaches this");

  gfm::GenerateOptions gen;
  std::string symbol_spec = "constant:1";
  std::string out_path;
  long long block_dim = 1;
  auto* generate = app.add_subcommand("generate", "Draw a random scenario");
  generate->add_option("--seed", gen.seed)->required();
  generate->add_option("--dim", gen.dim)->required()->check(CLI::PositiveNumber);
  generate->add_option("--points", gen.points)->required()->check(CLI::PositiveNumber);
  generate->add_option("--ratio", gen.target_ratio, "Target A/B in (0, 1]")->required();
  generate->add_option("--nu", gen.nu_target, "Target perturbation level")->required();
  generate->add_option("--symbol", symbol_spec,
                       "constant:c | near-one:l | positive-range:d:M | random-complex:r")
      ->required();
  generate->add_option("--out", out_path)->required();
  generate->add_option("--block-dim", block_dim, "Rows per block")->check(CLI::PositiveNumber);
  generate->add_flag("--with-dual", gen.with_dual, "Store the canonical dual as Lambda^d");

  std::string cert_name;
  int terms = -1;
  double invert_target = -1.0;
  auto* invert = app.add_subcommand("invert", "Certified Neumann inversion");
  invert->add_option("--scenario", scenario_path)->required();
  invert->add_option("--cert", cert_name)
      ->required()
      ->check(CLI::IsMember({"thm_main", "cooor", "combined", "dualframes"}));
  auto* terms_opt = invert->add_option("--terms", terms, "Fixed number of series terms")
                        ->check(CLI::NonNegativeNumber);
  auto* target_opt = invert->add_option("--target-err", invert_target, "Truncation target");
  terms_opt->excludes(target_opt);

  std::string param;
  double from = 0.0, to = 0.0;
  int steps = 0;
  auto* sweep = app.add_subcommand("sweep", "Tabulate certificates along a parameter");
  sweep->add_option("--scenario", scenario_path)->required();
  sweep->add_option("--param", param)
      ->required()
      ->check(CLI::IsMember({"lambda_shift", "nu_scale", "symbol_scale"}));
  sweep->add_option("--from", from)->required();
  sweep->add_option("--to", to)->required();
  sweep->add_option("--steps", steps)->required();
  sweep->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*report) return cmd_report(scenario_path, as_json, n_max, target_err);
    if (*generate) {
      gen.symbol = gfm::parse_symbol_spec(symbol_spec);
      gen.block_dims = {static_cast<gfm::Index>(block_dim)};
      return cmd_generate(gen, out_path);
    }
    if (*invert) {
      int nm = 30;
      double te = 1e-10;
      if (*terms_opt) {
        nm = terms;
        te = 0.0;
      } else if (*target_opt) {
        nm = 10000;
        te = invert_target;
      }
      return cmd_invert(scenario_path, cert_name, nm, te);
    }
    if (*sweep) return cmd_sweep(scenario_path, param, from, to, steps, out_path);
  } catch (const gfm::Error& e) {
    std::cerr << "gfm: " << e.what() << "\n";
    return e.kind() == gfm::ErrorKind::TheoremViolation ? kExitViolation : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "gfm: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
