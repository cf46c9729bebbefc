#include "gfm/multiplier.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "gfm/error.hpp"

namespace gfm {

namespace {

void require_symbol_fits(const Symbol& m, const GFrameFamily& family) {
  if (m.size() != family.size()) {
    std::ostringstream os;
    os << "symbol has " << m.size() << " values for " << family.size() << " points";
    throw Error(ErrorKind::DimError, os.str());
  }
}

double relative(double dev, double scale) { return scale > 0.0 ? dev / scale : dev; }

}  // namespace

Operator assemble_multiplier(const Symbol& m, const GFrameFamily& lambda,
                             const GFrameFamily& theta) {
  require_same_structure(lambda, theta);
  require_symbol_fits(m, lambda);
  std::vector<Complex> coeffs;
  coeffs.reserve(static_cast<std::size_t>(lambda.size()));
  for (Index i = 0; i < lambda.size(); ++i) {
    coeffs.push_back(Complex(lambda.space().weight(i), 0.0) * m[i]);
  }
  return Operator(weighted_cross_gram(lambda, theta, coeffs));
}

double adjoint_multiplier_check(const Symbol& m, const GFrameFamily& lambda,
                                const GFrameFamily& theta) {
  const Operator lhs = assemble_multiplier(m, lambda, theta).adjoint();
  const Operator rhs = assemble_multiplier(m.conj(), theta, lambda);
  return distance(lhs, rhs);
}

double rewrite_identities_check(const Symbol& m, const GFrameFamily& lambda,
                                const GFrameFamily& theta) {
  const Operator direct = assemble_multiplier(m, lambda, theta);
  const Symbol one = Symbol::ones(lambda.size());
  const Operator via_lambda =
      assemble_multiplier(one, scale_family(m.conj(), lambda), theta);
  const Operator via_theta = assemble_multiplier(one, lambda, scale_family(m, theta));
  return std::max(distance(direct, via_lambda), distance(direct, via_theta));
}

DualCheck dual_check(const GFrameFamily& lambda, const GFrameFamily& theta,
                     double dual_tol) {
  const Operator s = cross_frame_operator(lambda, theta);
  const double dev = distance(s, Operator::identity(s.dim()));
  return {dev <= dual_tol, dev};
}

GDualCheck gdual_check(const GFrameFamily& lambda, const GFrameFamily& theta,
                       double dual_tol) {
  Operator s = cross_frame_operator(lambda, theta);
  if (!numerically_invertible(s)) {
    return {false, std::move(s), 0.0, false};
  }
  // S_{Theta Lambda} = S_{Lambda Theta}^*
  const Operator s_rev = cross_frame_operator(theta, lambda);
  const GFrameFamily partner = right_compose(lambda, direct_inverse(s_rev).inverse);
  const DualCheck dc = dual_check(partner, theta, dual_tol);
  return {true, std::move(s), dc.deviation, dc.is_dual};
}

DualsFromInvertible duals_from_invertible(const Symbol& m, const GFrameFamily& lambda,
                                          const GFrameFamily& theta) {
  const Operator mult = assemble_multiplier(m, lambda, theta);
  const Operator mult_inv = direct_inverse(mult).inverse;
  const Operator adj_inv = direct_inverse(assemble_multiplier(m.conj(), theta, lambda)).inverse;

  GFrameFamily theta_dual = right_compose(scale_family(m.conj(), lambda), adj_inv);
  GFrameFamily lambda_dual = right_compose(scale_family(m, theta), mult_inv);
  const double theta_res = dual_check(theta_dual, theta).deviation;
  const double lambda_res = dual_check(lambda, lambda_dual).deviation;
  return {std::move(theta_dual), std::move(lambda_dual), theta_res, lambda_res};
}

ComposeReport compose_identities(const Symbol& m, const GFrameFamily& lambda,
                                 const Operator& s) {
  require_symbol_fits(m, lambda);
  const FrameBounds fb = frame_bounds(lambda);
  const bool positive = m.is_real() && m.min_real() > 0.0;
  const bool near_one = fb.is_frame && m.dist_to_one() < fb.lower / fb.upper;
  if (!fb.is_frame || !(positive || near_one)) {
    std::ostringstream os;
    os << "symbol is neither real with positive lower bound nor within A/B = "
       << (fb.upper > 0 ? fb.lower / fb.upper : 0.0) << " of 1 (||m-1|| = "
       << m.dist_to_one() << ")";
    throw Error(ErrorKind::ConditionNotMet, os.str());
  }

  const Operator base = assemble_multiplier(m, lambda, lambda);
  const Operator base_inv = direct_inverse(base).inverse;
  const Operator s_inv = direct_inverse(s).inverse;
  const GFrameFamily composed = right_compose(lambda, s);

  Operator right = assemble_multiplier(m, lambda, composed);
  Operator left = assemble_multiplier(m, composed, lambda);
  Operator right_inv = direct_inverse(right).inverse;
  Operator left_inv = direct_inverse(left).inverse;

  const double right_fwd = relative(distance(right, base * s), op_norm(right));
  const double left_fwd = relative(distance(left, s.adjoint() * base), op_norm(left));
  const double right_inv_dev =
      relative(distance(right_inv, s_inv * base_inv), op_norm(right_inv));
  const double left_inv_dev =
      relative(distance(left_inv, base_inv * s_inv.adjoint()), op_norm(left_inv));

  const Operator frame_op = frame_operator(lambda);
  const GFrameFamily dual = canonical_dual(lambda);
  const Operator dual_right_inv =
      direct_inverse(assemble_multiplier(m, lambda, dual)).inverse;
  const Operator dual_left_inv =
      direct_inverse(assemble_multiplier(m, dual, lambda)).inverse;
  const double dual_right_dev = relative(distance(dual_right_inv, frame_op * base_inv),
                                         op_norm(dual_right_inv));
  const double dual_left_dev =
      relative(distance(dual_left_inv, base_inv * frame_op), op_norm(dual_left_inv));

  return {std::move(right), std::move(left), std::move(right_inv), std::move(left_inv),
          right_fwd, left_fwd, right_inv_dev, left_inv_dev, dual_right_dev, dual_left_dev};
}

}  // namespace gfm
