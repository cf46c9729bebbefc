#include "gfm/generator.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

#include "gfm/error.hpp"

namespace gfm {

namespace {

[[noreturn]] void gen_error(const std::string& msg) {
  throw Error(ErrorKind::GenerationError, msg);
}

double parse_number(std::string_view text, std::string_view spec) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw Error(ErrorKind::ValidationError,
                "bad number '" + std::string(text) + "' in symbol spec '" + std::string(spec) + "'");
  }
  return v;
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  Index index(Index n) {
    return static_cast<Index>(std::uniform_int_distribution<long long>(0, n - 1)(rng_));
  }
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
  }
  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) m(r, c) = complex_normal();
    return m;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::vector<Index> expand_block_dims(const GenerateOptions& o) {
  std::vector<Index> dims = o.block_dims;
  if (dims.empty()) dims = {1};
  if (dims.size() == 1) dims.assign(static_cast<std::size_t>(o.points), dims.front());
  if (static_cast<Index>(dims.size()) != o.points) {
    gen_error("block_dims must have one entry or one per point");
  }
  for (Index k : dims) {
    if (k < 1) gen_error("block dims must be >= 1");
  }
  return dims;
}

/// Right-multiply every block by G = U diag(sqrt(t/s)) U^*, which maps the
/// frame operator U diag(s) U^* to U diag(t) U^*.
GFrameFamily shape_spectrum(const GFrameFamily& raw, double ratio) {
  const Index d = raw.ambient_dim();
  const Operator s = frame_operator(raw);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (s.matrix() + s.matrix().adjoint()));
  const Eigen::VectorXd& ev = eig.eigenvalues();
  if (!(ev(0) > 1e-10 * ev(d - 1))) {
    gen_error("random family is rank deficient; cannot shape its spectrum");
  }
  Eigen::VectorXd target(d);
  for (Index j = 0; j < d; ++j) {
    target(j) = d == 1 ? 1.0 : ratio + (1.0 - ratio) * static_cast<double>(j) / static_cast<double>(d - 1);
  }
  const Eigen::VectorXd scale = (target.array() / ev.array()).sqrt();
  const Matrix& u = eig.eigenvectors();
  const Matrix g = u * scale.cast<Complex>().asDiagonal() * u.adjoint();
  return right_compose(raw, Operator(g));
}

Symbol draw_symbol(Sampler& rng, const SymbolSpec& spec, Index n) {
  Vector v(n);
  switch (spec.kind) {
    case SymbolSpec::Kind::Constant:
      v.setConstant(Complex(spec.a, 0.0));
      break;
    case SymbolSpec::Kind::NearOne: {
      for (Index i = 0; i < n; ++i) v(i) = 1.0 + spec.a * rng.uniform(-1.0, 1.0);
      const Index hit = rng.index(n);
      v(hit) = 1.0 + (rng.uniform(0.0, 1.0) < 0.5 ? -spec.a : spec.a);
      break;
    }
    case SymbolSpec::Kind::PositiveRange: {
      for (Index i = 0; i < n; ++i) v(i) = rng.uniform(spec.a, spec.b);
      const Index lo = rng.index(n);
      v(lo) = spec.a;
      if (n >= 2) {
        Index hi = rng.index(n - 1);
        if (hi >= lo) ++hi;
        v(hi) = spec.b;
      }
      break;
    }
    case SymbolSpec::Kind::RandomComplex:
      for (Index i = 0; i < n; ++i) {
        const double r = spec.a * std::sqrt(rng.uniform(0.0, 1.0));
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        v(i) = std::polar(r, phase);
      }
      break;
  }
  return Symbol(std::move(v));
}

}  // namespace

SymbolSpec parse_symbol_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::ValidationError, "symbol spec '" + std::string(text) +
                                                "' must look like kind:value");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  if (kind == "constant") return {SymbolSpec::Kind::Constant, parse_number(rest, text)};
  if (kind == "near-one") {
    const double lam = parse_number(rest, text);
    if (lam < 0.0) throw Error(ErrorKind::ValidationError, "near-one radius must be >= 0");
    return {SymbolSpec::Kind::NearOne, lam};
  }
  if (kind == "random-complex") {
    const double rho = parse_number(rest, text);
    if (rho <= 0.0) throw Error(ErrorKind::ValidationError, "random-complex radius must be > 0");
    return {SymbolSpec::Kind::RandomComplex, rho};
  }
  if (kind == "positive-range") {
    const auto sep = rest.find_first_of(":,");
    if (sep == std::string_view::npos) {
      throw Error(ErrorKind::ValidationError, "positive-range needs delta:max");
    }
    const double lo = parse_number(rest.substr(0, sep), text);
    const double hi = parse_number(rest.substr(sep + 1), text);
    if (!(lo > 0.0) || !(hi >= lo)) {
      throw Error(ErrorKind::ValidationError, "positive-range needs 0 < delta <= max");
    }
    return {SymbolSpec::Kind::PositiveRange, lo, hi};
  }
  throw Error(ErrorKind::ValidationError, "unknown symbol kind '" + std::string(kind) + "'");
}

std::string to_string(const SymbolSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  switch (spec.kind) {
    case SymbolSpec::Kind::Constant: os << "constant:" << spec.a; break;
    case SymbolSpec::Kind::NearOne: os << "near-one:" << spec.a; break;
    case SymbolSpec::Kind::PositiveRange: os << "positive-range:" << spec.a << ":" << spec.b; break;
    case SymbolSpec::Kind::RandomComplex: os << "random-complex:" << spec.a; break;
  }
  return os.str();
}

Scenario generate_scenario(const GenerateOptions& o) {
  if (o.dim < 1 || o.points < 1) gen_error("dim and points must be >= 1");
  if (!(o.target_ratio > 0.0 && o.target_ratio <= 1.0)) {
    gen_error("target A/B ratio must lie in (0, 1]");
  }
  if (!(o.nu_target >= 0.0) || !std::isfinite(o.nu_target)) {
    gen_error("nu target must be a finite nonnegative number");
  }
  if (o.dim == 1 && o.target_ratio < 1.0) {
    gen_error("a one-dimensional frame always has A/B = 1");
  }
  const std::vector<Index> dims = expand_block_dims(o);
  Index total_rows = 0;
  for (Index k : dims) total_rows += k;
  if (total_rows < o.dim) {
    std::ostringstream os;
    os << "blocks provide " << total_rows << " rows, fewer than dim " << o.dim
       << "; no frame exists";
    gen_error(os.str());
  }

  Sampler rng(o.seed);
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(o.points));
  for (Index i = 0; i < o.points; ++i) weights.push_back(rng.uniform(0.5, 1.5));
  SpacePtr space = make_space(std::move(weights));

  std::vector<Matrix> raw;
  for (Index k : dims) raw.push_back(rng.matrix(k, o.dim));
  GFrameFamily lambda = shape_spectrum(GFrameFamily(space, o.dim, std::move(raw)), o.target_ratio);

  std::vector<Matrix> noise;
  for (Index k : dims) noise.push_back(rng.matrix(k, o.dim));
  const GFrameFamily perturbation(space, o.dim, std::move(noise));

  std::optional<GFrameFamily> theta;
  if (o.nu_target > 0.0) {
    const double raw_nu = frame_bounds(perturbation).upper;
    if (!(raw_nu > 0.0)) gen_error("perturbation family vanishes; cannot reach nu target");
    theta = combine(1.0, lambda, -std::sqrt(o.nu_target / raw_nu), perturbation);
  } else {
    theta = lambda;
  }

  Symbol symbol = draw_symbol(rng, o.symbol, o.points);

  std::optional<GFrameFamily> dual;
  if (o.with_dual) dual = canonical_dual(lambda);

  return Scenario{space,
                  std::move(lambda),
                  std::move(theta),
                  std::move(dual),
                  std::move(symbol),
                  std::nullopt,
                  Tolerances{},
                  Provenance{std::string(kGeneratorId), o.seed},
                  std::nullopt};
}

}  // namespace gfm
