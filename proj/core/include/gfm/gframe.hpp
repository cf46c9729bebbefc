#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gfm/opalgebra.hpp"
#include "gfm/symbol.hpp"

namespace gfm {

/// Finite weighted point set standing in for a measure space (Omega, mu).
/// Integrals against mu become sums weighted by w_i > 0.
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> weights);

  Index size() const noexcept { return static_cast<Index>(weights_.size()); }
  double weight(Index i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

 private:
  std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

SpacePtr make_space(std::vector<double> weights);
SpacePtr uniform_space(Index points, double weight = 1.0);

/// Element of K-hat: one vector per point of the measure space.
struct BlockVector {
  SpacePtr space;
  std::vector<Vector> blocks;
};

/// <F, G> = sum_i w_i <F_i, G_i>, linear in F.
Complex inner(const BlockVector& f, const BlockVector& g);
double squared_norm(const BlockVector& f);

/// Family {Lambda_i : H -> K_i}, block i stored as a k_i x d matrix.
class GFrameFamily {
 public:
  GFrameFamily(SpacePtr space, Index ambient_dim, std::vector<Matrix> blocks);

  const MeasureSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  Index size() const noexcept { return static_cast<Index>(blocks_.size()); }
  Index ambient_dim() const noexcept { return ambient_dim_; }
  const Matrix& block(Index i) const { return blocks_[static_cast<std::size_t>(i)]; }
  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }
  Index block_dim(Index i) const { return block(i).rows(); }
  std::vector<Index> block_dims() const;

  /// Same measure space, ambient dimension and block dims.
  bool same_structure(const GFrameFamily& other) const;

  friend bool operator==(const GFrameFamily& a, const GFrameFamily& b);

 private:
  SpacePtr space_;
  Index ambient_dim_;
  std::vector<Matrix> blocks_;
};

/// Throws DimError unless a and b share space, ambient dim and block dims.
void require_same_structure(const GFrameFamily& a, const GFrameFamily& b);

struct FrameBounds {
  double lower;  // A = lambda_min(S)
  double upper;  // B = lambda_max(S)
  bool is_frame;
};

/// Default relative threshold: lower bound must exceed this times B.
inline constexpr double kDefaultFrameTolRel = 1e-10;

/// sum_i coeffs_i * left_i^* right_i, reduced pairwise in a fixed order.
/// Every frame-operator-like sum in the library goes through here.
Matrix weighted_cross_gram(const GFrameFamily& left, const GFrameFamily& right,
                           std::span<const Complex> coeffs);

/// S = sum_i w_i Lambda_i^* Lambda_i
Operator frame_operator(const GFrameFamily& family);

/// S_{Lambda Theta} = sum_i w_i Lambda_i^* Theta_i
Operator cross_frame_operator(const GFrameFamily& lambda, const GFrameFamily& theta);

/// Optimal bounds; frame_tol defaults to kDefaultFrameTolRel * B.
FrameBounds frame_bounds(const GFrameFamily& family,
                         std::optional<double> frame_tol = std::nullopt);

/// T* f = (Lambda_i f)_i. Weights do not enter.
BlockVector analysis(const GFrameFamily& family, const Vector& f);

/// T F = sum_i w_i Lambda_i^* F_i
Vector synthesis(const GFrameFamily& family, const BlockVector& f);

/// The d x (sum k_i) matrix [sqrt(w_1) Lambda_1^*, ...]: synthesis expressed in
/// an orthonormal basis of K-hat, so its spectral norm is ||T||.
Matrix synthesis_matrix(const GFrameFamily& family);

/// Lambda S^{-1}. Throws NotAFrame when frame_bounds says so.
GFrameFamily canonical_dual(const GFrameFamily& family,
                            std::optional<double> frame_tol = std::nullopt);

/// (m_i Lambda_i)_i
GFrameFamily scale_family(const Symbol& m, const GFrameFamily& family);

/// (Lambda_i S)_i
GFrameFamily right_compose(const GFrameFamily& family, const Operator& s);

/// (alpha Lambda_i + beta Theta_i)_i
GFrameFamily combine(Complex alpha, const GFrameFamily& lambda, Complex beta,
                     const GFrameFamily& theta);

/// (Lambda_i - Theta_i)_i
GFrameFamily family_diff(const GFrameFamily& lambda, const GFrameFamily& theta);

/// Smallest nu with sum_i w_i ||(Lambda_i - Theta_i) f||^2 <= nu ||f||^2.
double estimate_nu(const GFrameFamily& lambda, const GFrameFamily& theta);

/// max_i ||Lambda_i - Theta_i|| <= tol
bool weakly_equal(const GFrameFamily& lambda, const GFrameFamily& theta, double tol);

}  // namespace gfm
