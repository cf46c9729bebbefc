#pragma once

#include "gfm/gframe.hpp"
#include "gfm/opalgebra.hpp"
#include "gfm/symbol.hpp"

namespace gfm {

/// Absolute operator-norm tolerance on ||S_{Lambda Theta} - I|| for duality.
inline constexpr double kDefaultDualTol = 1e-9;

/// M_{m,Lambda,Theta} = sum_i w_i m_i Lambda_i^* Theta_i.
///
/// With m == 1 this is bit-identical to cross_frame_operator(Lambda, Theta):
/// both reduce through weighted_cross_gram with the same coefficients.
Operator assemble_multiplier(const Symbol& m, const GFrameFamily& lambda,
                             const GFrameFamily& theta);

/// ||M_{m,L,T}^* - M_{conj m,T,L}||
double adjoint_multiplier_check(const Symbol& m, const GFrameFamily& lambda,
                                const GFrameFamily& theta);

/// Largest of ||M_{m,L,T} - M_{1,conj(m) L,T}|| and ||M_{m,L,T} - M_{1,L,m T}||.
double rewrite_identities_check(const Symbol& m, const GFrameFamily& lambda,
                                const GFrameFamily& theta);

struct DualCheck {
  bool is_dual;
  double deviation;  // ||S_{Lambda Theta} - I||
};

/// Theta is a dual of Lambda when S_{Lambda Theta} = I.
DualCheck dual_check(const GFrameFamily& lambda, const GFrameFamily& theta,
                     double dual_tol = kDefaultDualTol);

struct GDualCheck {
  bool is_gdual;
  Operator cross_operator;  // S_{Lambda Theta}
  /// ||S_{(Lambda S_{Theta Lambda}^{-1}) Theta} - I||; only meaningful when is_gdual.
  double residual;
  bool residual_ok;
};

GDualCheck gdual_check(const GFrameFamily& lambda, const GFrameFamily& theta,
                       double dual_tol = kDefaultDualTol);

struct DualsFromInvertible {
  /// conj(m) Lambda M_{conj m,Theta,Lambda}^{-1}, a dual partner for Theta.
  GFrameFamily theta_dual;
  /// m Theta M_{m,Lambda,Theta}^{-1}, a dual partner for Lambda.
  GFrameFamily lambda_dual;
  double theta_residual;
  double lambda_residual;
};

/// Throws SingularOperator when M_{m,Lambda,Theta} is not numerically invertible.
DualsFromInvertible duals_from_invertible(const Symbol& m, const GFrameFamily& lambda,
                                          const GFrameFamily& theta);

struct ComposeReport {
  Operator right;      // M_{m,L,LS}
  Operator left;       // M_{m,LS,L}
  Operator right_inv;  // M_{m,L,LS}^{-1}
  Operator left_inv;   // M_{m,LS,L}^{-1}
  // ||M_{m,L,LS} - M_{m,L,L} S|| / ||M_{m,L,LS}||, likewise for the rest.
  double right_forward_dev;
  double left_forward_dev;
  double right_inverse_dev;
  double left_inverse_dev;
  // Same two inverse identities with S = S_Lambda^{-1}.
  double dual_right_inverse_dev;
  double dual_left_inverse_dev;
};

/// Right-composition identities for M_{m,Lambda,Lambda S}. Requires m either
/// real with min m_i > 0 or ||m - 1|| < A/B; throws ConditionNotMet otherwise.
ComposeReport compose_identities(const Symbol& m, const GFrameFamily& lambda,
                                 const Operator& s);

}  // namespace gfm
