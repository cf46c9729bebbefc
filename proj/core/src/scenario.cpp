#include "gfm/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "gfm/error.hpp"
#include "json.hpp"

namespace gfm {

using nlohmann::json;

namespace {

[[noreturn]] void format_error(const std::string& origin, const std::string& msg) {
  throw Error(ErrorKind::FormatError, origin + ": " + msg);
}

[[noreturn]] void validation_error(const std::string& origin, const std::string& msg) {
  throw Error(ErrorKind::ValidationError, origin + ": " + msg);
}

Complex parse_complex(const json& j, const std::string& origin, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  format_error(origin, "field " + field + ": expected a number or [re, im], got " + j.dump());
}

double parse_real(const json& j, const std::string& origin, const std::string& field) {
  if (!j.is_number()) format_error(origin, "field " + field + ": expected a number");
  return j.get<double>();
}

std::vector<Matrix> parse_blocks(const json& j, Index dim, const std::string& origin,
                                 const std::string& name) {
  if (!j.is_array()) format_error(origin, "field " + name + ": expected an array of matrices");
  std::vector<Matrix> blocks;
  blocks.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = name + "[" + std::to_string(i) + "]";
    const json& rows = j[i];
    if (!rows.is_array() || rows.empty()) {
      format_error(origin, "field " + where + ": expected a non-empty array of rows");
    }
    Matrix block(static_cast<Index>(rows.size()), dim);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string row_where = where + "[" + std::to_string(r) + "]";
      if (!rows[r].is_array()) format_error(origin, "field " + row_where + ": expected a row");
      if (static_cast<Index>(rows[r].size()) != dim) {
        std::ostringstream os;
        os << name << " block " << i << " row " << r << " has " << rows[r].size()
           << " columns, expected dim = " << dim;
        validation_error(origin, os.str());
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        block(static_cast<Index>(r), static_cast<Index>(c)) =
            parse_complex(rows[r][c], origin, row_where + "[" + std::to_string(c) + "]");
      }
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

GFrameFamily build_family(const SpacePtr& space, Index dim, std::vector<Matrix> blocks,
                          const std::string& origin, const std::string& name) {
  if (static_cast<Index>(blocks.size()) != space->size()) {
    std::ostringstream os;
    os << name << " has " << blocks.size() << " blocks but weights has " << space->size()
       << " points";
    validation_error(origin, os.str());
  }
  try {
    return GFrameFamily(space, dim, std::move(blocks));
  } catch (const Error& e) {
    validation_error(origin, name + ": " + e.what());
  }
}

void require_matching_block_dims(const GFrameFamily& ref, const GFrameFamily& other,
                                 const std::string& origin, const std::string& name) {
  for (Index i = 0; i < ref.size(); ++i) {
    if (ref.block_dim(i) != other.block_dim(i)) {
      std::ostringstream os;
      os << name << " block " << i << " has " << other.block_dim(i)
         << " rows, lambda block has " << ref.block_dim(i);
      validation_error(origin, os.str());
    }
  }
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json blocks_json(const GFrameFamily& family) {
  json out = json::array();
  for (const auto& b : family.blocks()) {
    json rows = json::array();
    for (Index r = 0; r < b.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < b.cols(); ++c) row.push_back(complex_json(b(r, c)));
      rows.push_back(std::move(row));
    }
    out.push_back(std::move(rows));
  }
  return out;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

bool operator==(const Scenario& a, const Scenario& b) {
  return *a.space == *b.space && a.lambda == b.lambda && a.theta == b.theta &&
         a.dual == b.dual && a.symbol == b.symbol && a.nu_override == b.nu_override &&
         a.tolerances.frame_tol == b.tolerances.frame_tol &&
         a.tolerances.dual_tol == b.tolerances.dual_tol &&
         a.tolerances.boundary_eps == b.tolerances.boundary_eps &&
         a.provenance == b.provenance &&
         a.debug_predicted_bound_scale == b.debug_predicted_bound_scale;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "line " << line_of(text, e.byte) << ": " << e.what();
    format_error(origin, os.str());
  }
  if (!root.is_object()) format_error(origin, "top level must be an object");
  for (const char* key : {"dim", "weights", "lambda", "symbol"}) {
    if (!root.contains(key)) format_error(origin, std::string("missing field ") + key);
  }

  if (!root["dim"].is_number_integer() || root["dim"].get<long long>() < 1) {
    format_error(origin, "field dim: expected a positive integer");
  }
  const auto dim = static_cast<Index>(root["dim"].get<long long>());

  if (!root["weights"].is_array()) format_error(origin, "field weights: expected an array");
  std::vector<double> weights;
  for (std::size_t i = 0; i < root["weights"].size(); ++i) {
    weights.push_back(parse_real(root["weights"][i], origin, "weights[" + std::to_string(i) + "]"));
  }
  SpacePtr space;
  try {
    space = make_space(std::move(weights));
  } catch (const Error& e) {
    validation_error(origin, e.what());
  }

  GFrameFamily lambda =
      build_family(space, dim, parse_blocks(root["lambda"], dim, origin, "lambda"), origin,
                   "lambda");
  std::optional<GFrameFamily> theta;
  if (root.contains("theta") && !root["theta"].is_null()) {
    theta = build_family(space, dim, parse_blocks(root["theta"], dim, origin, "theta"),
                         origin, "theta");
    require_matching_block_dims(lambda, *theta, origin, "theta");
  }
  std::optional<GFrameFamily> dual;
  if (root.contains("dual") && !root["dual"].is_null()) {
    dual = build_family(space, dim, parse_blocks(root["dual"], dim, origin, "dual"), origin,
                        "dual");
    require_matching_block_dims(lambda, *dual, origin, "dual");
  }

  const json& sym = root["symbol"];
  if (!sym.is_array()) format_error(origin, "field symbol: expected an array");
  if (static_cast<Index>(sym.size()) != space->size()) {
    std::ostringstream os;
    os << "symbol has " << sym.size() << " values but weights has " << space->size()
       << " points";
    validation_error(origin, os.str());
  }
  std::vector<Complex> values;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    values.push_back(parse_complex(sym[i], origin, "symbol[" + std::to_string(i) + "]"));
  }

  std::optional<double> nu_override;
  if (root.contains("nu_override") && !root["nu_override"].is_null()) {
    nu_override = parse_real(root["nu_override"], origin, "nu_override");
    if (*nu_override < 0.0) validation_error(origin, "nu_override must be nonnegative");
  }

  Tolerances tol;
  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) format_error(origin, "field tolerances: expected an object");
    if (t.contains("frame_tol")) tol.frame_tol = parse_real(t["frame_tol"], origin, "tolerances.frame_tol");
    if (t.contains("dual_tol")) tol.dual_tol = parse_real(t["dual_tol"], origin, "tolerances.dual_tol");
    if (t.contains("boundary_eps")) tol.boundary_eps = parse_real(t["boundary_eps"], origin, "tolerances.boundary_eps");
  }

  std::optional<Provenance> provenance;
  if (root.contains("meta")) {
    const json& m = root["meta"];
    if (!m.is_object() || !m.contains("generator") || !m["generator"].is_string() ||
        !m.contains("seed") || !m["seed"].is_number_unsigned()) {
      format_error(origin, "field meta: expected {\"generator\": string, \"seed\": integer}");
    }
    provenance = Provenance{m["generator"].get<std::string>(), m["seed"].get<std::uint64_t>()};
  }

  std::optional<double> debug_scale;
  if (root.contains("debug")) {
    const json& d = root["debug"];
    if (!d.is_object()) format_error(origin, "field debug: expected an object");
    if (d.contains("predicted_bound_scale")) {
      debug_scale = parse_real(d["predicted_bound_scale"], origin, "debug.predicted_bound_scale");
    }
  }

  Symbol symbol = [&] {
    try {
      return Symbol(values);
    } catch (const Error& e) {
      validation_error(origin, e.what());
    }
  }();

  return Scenario{std::move(space), std::move(lambda), std::move(theta), std::move(dual),
                  std::move(symbol), nu_override, tol, std::move(provenance), debug_scale};
}

std::string scenario_to_json(const Scenario& s) {
  json root;
  root["dim"] = s.dim();
  root["weights"] = s.space->weights();
  root["lambda"] = blocks_json(s.lambda);
  if (s.theta) root["theta"] = blocks_json(*s.theta);
  if (s.dual) root["dual"] = blocks_json(*s.dual);
  json sym = json::array();
  for (Index i = 0; i < s.symbol.size(); ++i) sym.push_back(complex_json(s.symbol[i]));
  root["symbol"] = std::move(sym);
  if (s.nu_override) root["nu_override"] = *s.nu_override;
  json tol;
  if (s.tolerances.frame_tol) tol["frame_tol"] = *s.tolerances.frame_tol;
  tol["dual_tol"] = s.tolerances.dual_tol;
  tol["boundary_eps"] = s.tolerances.boundary_eps;
  root["tolerances"] = std::move(tol);
  if (s.provenance) {
    root["meta"] = {{"generator", s.provenance->generator}, {"seed", s.provenance->seed}};
  }
  if (s.debug_predicted_bound_scale) {
    root["debug"] = {{"predicted_bound_scale", *s.debug_predicted_bound_scale}};
  }
  return root.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FormatError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::FormatError, path + ": cannot open for writing");
  out << scenario_to_json(scenario);
  if (!out) throw Error(ErrorKind::FormatError, path + ": write failed");
}

}  // namespace gfm
