#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gfm/gframe.hpp"
#include "gfm/invertibility.hpp"
#include "gfm/symbol.hpp"

namespace gfm {

struct Provenance {
  std::string generator;
  std::uint64_t seed;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Everything one report needs: the measure space, families, symbol and knobs.
///
/// JSON layout (complex numbers as [re, im] or plain reals, matrices as arrays
/// of rows, one matrix per point):
///
///   { "dim": 2, "weights": [1, 1],
///     "lambda": [ [[[1,0],[0,0]]], [[[0,0],[1,0]]] ],
///     "theta": ..., "dual": ..., "symbol": [[1,0],[1,0]],
///     "nu_override": 0.01,
///     "tolerances": {"frame_tol": 1e-10, "dual_tol": 1e-9, "boundary_eps": 1e-12},
///     "meta": {"generator": "...", "seed": 42},
///     "debug": {"predicted_bound_scale": 0.5} }
///
/// Only dim, weights, lambda and symbol are required. "debug" is a fault
/// injection hook for exercising the violation path of the CLI.
struct Scenario {
  SpacePtr space;
  GFrameFamily lambda;
  std::optional<GFrameFamily> theta;
  std::optional<GFrameFamily> dual;
  Symbol symbol;
  std::optional<double> nu_override;
  Tolerances tolerances;
  std::optional<Provenance> provenance;
  std::optional<double> debug_predicted_bound_scale;

  Index dim() const noexcept { return lambda.ambient_dim(); }
  /// Theta, defaulting to Lambda.
  const GFrameFamily& theta_or_lambda() const noexcept { return theta ? *theta : lambda; }
};

bool operator==(const Scenario& a, const Scenario& b);

/// Throws FormatError for malformed JSON or fields, ValidationError when the
/// pieces do not fit together. origin is used in messages.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
std::string scenario_to_json(const Scenario& scenario);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace gfm
