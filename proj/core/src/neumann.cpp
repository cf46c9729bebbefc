#include "gfm/neumann.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "gfm/error.hpp"

namespace gfm {

NeumannSeries::NeumannSeries(Operator step, Operator base)
    : step_(std::move(step).matrix()), term_(base.matrix()), sum_(std::move(base).matrix()) {
  if (step_.rows() != term_.rows()) {
    throw Error(ErrorKind::DimError, "Neumann step and base differ in dimension");
  }
}

void NeumannSeries::advance() {
  term_ = step_ * term_;
  sum_ += term_;
  ++n_;
}

namespace {

void require_contractive(double q) {
  if (!(q < 1.0)) {
    std::ostringstream os;
    os << "contraction ratio " << q << " is not below 1";
    throw Error(ErrorKind::NotContractive, os.str());
  }
}

double tail_bound(const NeumannPlan& plan, int n) {
  if (plan.ratio == 0.0) return 0.0;
  return plan.base_norm * std::pow(plan.ratio, n + 1) / (1.0 - plan.ratio);
}

}  // namespace

NeumannPlan plan_anchored(const Operator& m, const Operator& anchor) {
  if (m.dim() != anchor.dim()) {
    throw Error(ErrorKind::DimError, "anchor and operator differ in dimension");
  }
  Operator anchor_inv = direct_inverse(anchor).inverse;
  const Operator gap = anchor - m;
  const double inv_norm = op_norm(anchor_inv);
  const double q = inv_norm * op_norm(gap);
  require_contractive(q);
  Operator step = anchor_inv * gap;
  return {std::move(step), std::move(anchor_inv), inv_norm, q};
}

NeumannPlan plan_with_step(Operator step, Operator base) {
  const double q = op_norm(step);
  require_contractive(q);
  const double base_norm = op_norm(base);
  return {std::move(step), std::move(base), base_norm, q};
}

NeumannResult run_neumann(const Operator& m, const NeumannPlan& plan, int n_max,
                          double target_err, const PartialSumVisitor& visit) {
  if (n_max < 0) throw Error(ErrorKind::ValidationError, "n_max must be >= 0");
  const std::optional<Operator> oracle =
      numerically_invertible(m) ? std::optional<Operator>(direct_inverse(m).inverse)
                                : std::nullopt;

  NeumannSeries series(plan.step, plan.base);
  for (;;) {
    const int n = series.terms();
    if (visit) visit(n, Operator(series.partial_sum()));
    const double bound = tail_bound(plan, n);
    const bool reached = bound <= target_err;
    if (reached || n >= n_max) {
      Operator approx(series.partial_sum());
      const double residual =
          distance(m * approx, Operator::identity(m.dim()));
      std::optional<double> gap;
      if (oracle) gap = distance(approx, *oracle);
      return {std::move(approx), n, plan.ratio, bound, residual, gap, reached};
    }
    series.advance();
  }
}

NeumannResult neumann_invert(const Operator& m, const Operator& anchor, int n_max,
                             double target_err) {
  return run_neumann(m, plan_anchored(m, anchor), n_max, target_err);
}

}  // namespace gfm
