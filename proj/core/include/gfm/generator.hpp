#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gfm/scenario.hpp"

namespace gfm {

/// Identifies the random stream so a report can say how its scenario was drawn.
/// Reproducible for the same build toolchain only.
inline constexpr std::string_view kGeneratorId =
    "gfm-gen-1/mt19937_64/std::normal_distribution+std::uniform_real_distribution";

struct SymbolSpec {
  enum class Kind {
    Constant,       // m_i = c
    NearOne,        // real, ||m - 1|| = lambda exactly
    PositiveRange,  // real in [delta, max], both ends attained when N >= 2
    RandomComplex,  // |m_i| <= rho, uniform in the disc
  };
  Kind kind;
  double a;
  double b = 0.0;
};

/// "constant:<c>", "near-one:<lambda>", "positive-range:<delta>:<max>",
/// "random-complex:<rho>". Throws ValidationError.
SymbolSpec parse_symbol_spec(std::string_view text);
std::string to_string(const SymbolSpec& spec);

struct GenerateOptions {
  std::uint64_t seed = 0;
  Index dim = 2;
  Index points = 2;
  /// One entry per point, or a single entry applied to all points.
  std::vector<Index> block_dims{1};
  double target_ratio = 1.0;  // A/B in (0, 1]
  double nu_target = 0.0;
  SymbolSpec symbol{SymbolSpec::Kind::Constant, 1.0};
  bool with_dual = false;
};

/// Draws a random family, reshapes its frame operator to the spectrum
/// linspace(target_ratio, 1, d) (so B = 1 and A/B = target_ratio), perturbs it
/// by a random family scaled to hit nu_target exactly, and draws the symbol.
/// Throws GenerationError for infeasible targets.
Scenario generate_scenario(const GenerateOptions& options);

}  // namespace gfm
