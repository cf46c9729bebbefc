#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfm/invertibility.hpp"
#include "gfm/scenario.hpp"

namespace gfm {

enum class SweepParam {
  /// m(t) = 1 + t u with ||u||_inf = 1: u is the normalized (m_base - 1), or
  /// alternating +1/-1 when m_base == 1. So ||m(t) - 1||_inf = t.
  LambdaShift,
  /// Theta(t) = Lambda + sqrt(t / nu_base) (Theta_base - Lambda) so that nu = t;
  /// when Theta_base == Lambda, nu_override = t instead.
  NuScale,
  /// m(t) = t m_base
  SymbolScale,
};

std::string_view to_string(SweepParam param) noexcept;
std::optional<SweepParam> parse_sweep_param(std::string_view name);

struct SweepSpec {
  SweepParam param;
  double from;
  double to;
  int steps;
  Scenario base;
};

inline constexpr int kMaxSweepSteps = 10000;

struct SweepCell {
  std::string status;  // satisfied / not_satisfied / borderline / na
  double margin;
  double predicted_lower;
  double predicted_upper;
};

struct SweepRow {
  int step;
  double value;
  SweepCell thm_main;
  SweepCell cooor;
  SweepCell combined;
  SweepCell dualframes;
  bool invertible;
  double condition;     // inf when singular
  double inverse_norm;  // nan when singular
  double min_gain;      // 1 / ||M||
};

/// Scenario at parameter value t. The base is never modified.
Scenario sweep_scenario(const SweepSpec& spec, double value);

/// One row per step, in step order. threads == 0 means hardware concurrency.
/// Throws ValidationError for a degenerate range or step count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

std::string sweep_csv(const std::vector<SweepRow>& rows, SweepParam param);

}  // namespace gfm
