#include "gfm/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "gfm/error.hpp"
#include "gfm/multiplier.hpp"

namespace gfm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const SweepSpec& spec) {
  if (!std::isfinite(spec.from) || !std::isfinite(spec.to) || !(spec.from < spec.to)) {
    throw Error(ErrorKind::ValidationError, "sweep range needs from < to");
  }
  if (spec.steps < 2 || spec.steps > kMaxSweepSteps) {
    throw Error(ErrorKind::ValidationError,
                "sweep steps must lie in [2, " + std::to_string(kMaxSweepSteps) + "]");
  }
}

double step_value(const SweepSpec& spec, int k) {
  return spec.from + (spec.to - spec.from) * static_cast<double>(k) /
                         static_cast<double>(spec.steps - 1);
}

template <class Build>
SweepCell evaluate(Build&& build) {
  try {
    const Certificate c = build();
    return {std::string(to_string(c.status)), c.margin, c.predicted_inv_lower,
            c.predicted_inv_upper};
  } catch (const Error&) {
    return {"na", kNaN, kNaN, kNaN};
  }
}

SweepRow evaluate_row(const SweepSpec& spec, int k) {
  const double t = step_value(spec, k);
  const Scenario s = sweep_scenario(spec, t);
  const GFrameFamily& theta = s.theta_or_lambda();
  const Tolerances& tol = s.tolerances;

  SweepRow row{k, t, {}, {}, {}, {}, false, std::numeric_limits<double>::infinity(), kNaN, kNaN};
  row.thm_main = evaluate([&] { return cert_thm_main(s.lambda, theta, s.symbol, s.nu_override, tol); });
  row.cooor = evaluate([&] { return cert_cooor(s.lambda, s.symbol, tol); });
  row.combined = evaluate([&] { return cert_combined(s.lambda, theta, s.symbol, s.nu_override, tol); });
  row.dualframes = evaluate([&] {
    if (!s.dual) throw Error(ErrorKind::ConditionNotMet, "no dual family");
    return cert_dualframes(s.lambda, *s.dual, s.symbol, tol);
  });

  const Operator m = assemble_multiplier(s.symbol, s.lambda, theta);
  row.min_gain = 1.0 / op_norm(m);
  if (numerically_invertible(m)) {
    const InverseResult inv = direct_inverse(m);
    row.invertible = true;
    row.condition = inv.condition;
    row.inverse_norm = op_norm(inv.inverse);
  }
  return row;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string_view to_string(SweepParam param) noexcept {
  switch (param) {
    case SweepParam::LambdaShift: return "lambda_shift";
    case SweepParam::NuScale: return "nu_scale";
    case SweepParam::SymbolScale: return "symbol_scale";
  }
  return "unknown";
}

std::optional<SweepParam> parse_sweep_param(std::string_view name) {
  for (auto p : {SweepParam::LambdaShift, SweepParam::NuScale, SweepParam::SymbolScale}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

Scenario sweep_scenario(const SweepSpec& spec, double t) {
  Scenario s = spec.base;
  switch (spec.param) {
    case SweepParam::LambdaShift: {
      const Vector& base = s.symbol.values();
      Vector dir = (base.array() - Complex(1.0, 0.0)).matrix();
      const double len = dir.cwiseAbs().maxCoeff();
      if (len > 0.0) {
        dir /= len;
      } else {
        for (Index i = 0; i < dir.size(); ++i) dir(i) = (i % 2 == 0) ? 1.0 : -1.0;
      }
      s.symbol = Symbol(Vector((Complex(1.0, 0.0) + t * dir.array()).matrix()));
      break;
    }
    case SweepParam::NuScale: {
      if (t < 0.0) throw Error(ErrorKind::ValidationError, "nu_scale values must be >= 0");
      const double base_nu = estimate_nu(s.lambda, s.theta_or_lambda());
      if (base_nu > 0.0) {
        const GFrameFamily diff = family_diff(s.theta_or_lambda(), s.lambda);
        s.theta = combine(1.0, s.lambda, std::sqrt(t / base_nu), diff);
        s.nu_override.reset();
      } else {
        s.nu_override = t;
      }
      break;
    }
    case SweepParam::SymbolScale:
      s.symbol = s.symbol.scaled(t);
      break;
  }
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  validate(spec);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(spec.steps));

  std::vector<std::optional<SweepRow>> slots(static_cast<std::size_t>(spec.steps));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (int k = next++; k < spec.steps; k = next++) {
      try {
        slots[static_cast<std::size_t>(k)] = evaluate_row(spec, k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  rows.reserve(slots.size());
  for (auto& r : slots) rows.push_back(std::move(*r));
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, SweepParam param) {
  std::ostringstream os;
  os << "step,param,value";
  for (const char* c : {"thm_main", "cooor", "combined", "dualframes"}) {
    os << ',' << c << "_status," << c << "_margin," << c << "_lower," << c << "_upper";
  }
  os << ",invertible,condition,inv_norm,min_gain\n";
  for (const auto& r : rows) {
    os << r.step << ',' << to_string(param) << ',' << num(r.value);
    for (const SweepCell* c : {&r.thm_main, &r.cooor, &r.combined, &r.dualframes}) {
      os << ',' << c->status << ',' << num(c->margin) << ',' << num(c->predicted_lower) << ','
         << num(c->predicted_upper);
    }
    os << ',' << (r.invertible ? "yes" : "no") << ',' << num(r.condition) << ','
       << num(r.inverse_norm) << ',' << num(r.min_gain) << '\n';
  }
  return os.str();
}

}  // namespace gfm
