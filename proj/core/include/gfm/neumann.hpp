#pragma once

#include <functional>
#include <optional>

#include "gfm/opalgebra.hpp"

namespace gfm {

/// Running partial sums X_n = sum_{k=0}^{n} K^k B of a Neumann series.
///
/// One power term K^n B is carried along, so each advance() costs a single
/// matrix product plus an addition.
class NeumannSeries {
 public:
  NeumannSeries(Operator step, Operator base);

  int terms() const noexcept { return n_; }
  const Matrix& partial_sum() const noexcept { return sum_; }
  void advance();

 private:
  Matrix step_;
  Matrix term_;
  Matrix sum_;
  int n_ = 0;
};

/// Series data for inverting M: step K, base B and the contraction data that
/// make ||M^{-1} - X_n|| <= base_norm * ratio^{n+1} / (1 - ratio).
struct NeumannPlan {
  Operator step;
  Operator base;
  double base_norm;
  double ratio;
};

/// Anchored expansion M^{-1} = sum_k [P^{-1}(P - M)]^k P^{-1} with
/// ratio q = ||P^{-1}|| ||P - M||. Throws SingularOperator if P is singular and
/// NotContractive if q >= 1.
NeumannPlan plan_anchored(const Operator& m, const Operator& anchor);

/// Series with a caller-supplied step, e.g. powers of M_{1-m,Lambda,Lambda^d}
/// with identity base. ratio = ||step||, base_norm = ||base||.
NeumannPlan plan_with_step(Operator step, Operator base);

struct NeumannResult {
  Operator approx_inverse;
  int terms_used;
  double ratio;
  double a_priori_bound;
  double a_posteriori_residual;  // ||M X - I||
  std::optional<double> oracle_gap;  // ||X - M^{-1}|| when M is invertible
  bool target_reached;
};

using PartialSumVisitor = std::function<void(int n, const Operator& partial)>;

/// Sums until n == n_max or the a-priori bound drops to target_err, calling
/// visit on every partial sum X_0, X_1, ... in order.
NeumannResult run_neumann(const Operator& m, const NeumannPlan& plan, int n_max,
                          double target_err, const PartialSumVisitor& visit = {});

NeumannResult neumann_invert(const Operator& m, const Operator& anchor, int n_max,
                             double target_err);

}  // namespace gfm
