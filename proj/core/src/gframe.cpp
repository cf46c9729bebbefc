#include "gfm/gframe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "gfm/error.hpp"

namespace gfm {

MeasureSpace::MeasureSpace(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw Error(ErrorKind::ValidationError, "measure space needs at least one point");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
      std::ostringstream os;
      os << "weight " << i << " must be positive and finite, got " << weights_[i];
      throw Error(ErrorKind::ValidationError, os.str());
    }
  }
}

SpacePtr make_space(std::vector<double> weights) {
  return std::make_shared<const MeasureSpace>(std::move(weights));
}

SpacePtr uniform_space(Index points, double weight) {
  return make_space(std::vector<double>(static_cast<std::size_t>(points), weight));
}

namespace {

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

void require_same_layout(const BlockVector& f, const BlockVector& g) {
  if (!same_space(f.space, g.space) || f.blocks.size() != g.blocks.size()) {
    throw Error(ErrorKind::DimError, "block vectors live on different spaces");
  }
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    if (f.blocks[i].size() != g.blocks[i].size()) {
      std::ostringstream os;
      os << "block " << i << " has length " << f.blocks[i].size() << " vs "
         << g.blocks[i].size();
      throw Error(ErrorKind::DimError, os.str());
    }
  }
}

// Fixed-shape binary tree over [begin, end): same association for the same N.
template <class Term>
Matrix pairwise_sum(Index begin, Index end, const Term& term) {
  if (end - begin == 1) return term(begin);
  const Index mid = begin + (end - begin) / 2;
  Matrix left = pairwise_sum(begin, mid, term);
  left += pairwise_sum(mid, end, term);
  return left;
}

std::vector<Complex> weight_coeffs(const MeasureSpace& space) {
  std::vector<Complex> c;
  c.reserve(space.weights().size());
  for (double w : space.weights()) c.emplace_back(w, 0.0);
  return c;
}

}  // namespace

Complex inner(const BlockVector& f, const BlockVector& g) {
  require_same_layout(f, g);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    acc += f.space->weight(static_cast<Index>(i)) * g.blocks[i].dot(f.blocks[i]);
  }
  return acc;
}

double squared_norm(const BlockVector& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    acc += f.space->weight(static_cast<Index>(i)) * f.blocks[i].squaredNorm();
  }
  return acc;
}

GFrameFamily::GFrameFamily(SpacePtr space, Index ambient_dim,
                           std::vector<Matrix> blocks)
    : space_(std::move(space)), ambient_dim_(ambient_dim), blocks_(std::move(blocks)) {
  if (!space_) throw Error(ErrorKind::ValidationError, "family has no measure space");
  if (ambient_dim_ < 1) {
    throw Error(ErrorKind::DimError, "ambient dimension must be >= 1");
  }
  if (size() != space_->size()) {
    std::ostringstream os;
    os << "family has " << size() << " blocks but the space has " << space_->size()
       << " points";
    throw Error(ErrorKind::DimError, os.str());
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Matrix& b = blocks_[i];
    if (b.cols() != ambient_dim_ || b.rows() < 1) {
      std::ostringstream os;
      os << "block " << i << " is " << b.rows() << "x" << b.cols()
         << ", expected k x " << ambient_dim_ << " with k >= 1";
      throw Error(ErrorKind::DimError, os.str());
    }
    if (!b.allFinite()) {
      std::ostringstream os;
      os << "block " << i << " has non-finite entries";
      throw Error(ErrorKind::InvalidOperator, os.str());
    }
  }
}

std::vector<Index> GFrameFamily::block_dims() const {
  std::vector<Index> dims;
  dims.reserve(blocks_.size());
  for (const auto& b : blocks_) dims.push_back(b.rows());
  return dims;
}

bool GFrameFamily::same_structure(const GFrameFamily& other) const {
  if (!same_space(space_, other.space_) || ambient_dim_ != other.ambient_dim_ ||
      blocks_.size() != other.blocks_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].rows() != other.blocks_[i].rows()) return false;
  }
  return true;
}

bool operator==(const GFrameFamily& a, const GFrameFamily& b) {
  return a.same_structure(b) && a.blocks_ == b.blocks_;
}

void require_same_structure(const GFrameFamily& a, const GFrameFamily& b) {
  if (!a.same_structure(b)) {
    throw Error(ErrorKind::DimError,
                "families differ in measure space, ambient dimension or block dims");
  }
}

Matrix weighted_cross_gram(const GFrameFamily& left, const GFrameFamily& right,
                           std::span<const Complex> coeffs) {
  require_same_structure(left, right);
  if (static_cast<Index>(coeffs.size()) != left.size()) {
    throw Error(ErrorKind::DimError, "coefficient count does not match point count");
  }
  return pairwise_sum(0, left.size(), [&](Index i) -> Matrix {
    return coeffs[static_cast<std::size_t>(i)] * (left.block(i).adjoint() * right.block(i));
  });
}

Operator frame_operator(const GFrameFamily& family) {
  return cross_frame_operator(family, family);
}

Operator cross_frame_operator(const GFrameFamily& lambda, const GFrameFamily& theta) {
  const auto coeffs = weight_coeffs(lambda.space());
  return Operator(weighted_cross_gram(lambda, theta, coeffs));
}

FrameBounds frame_bounds(const GFrameFamily& family, std::optional<double> frame_tol) {
  const auto [lo, hi] = herm_extremal_eigs(frame_operator(family));
  const double tol = frame_tol.value_or(kDefaultFrameTolRel * hi);
  return {lo, hi, lo > tol};
}

BlockVector analysis(const GFrameFamily& family, const Vector& f) {
  if (f.size() != family.ambient_dim()) {
    std::ostringstream os;
    os << "vector has length " << f.size() << ", family acts on dimension "
       << family.ambient_dim();
    throw Error(ErrorKind::DimError, os.str());
  }
  BlockVector out{family.space_ptr(), {}};
  out.blocks.reserve(static_cast<std::size_t>(family.size()));
  for (const auto& b : family.blocks()) out.blocks.emplace_back(b * f);
  return out;
}

Vector synthesis(const GFrameFamily& family, const BlockVector& f) {
  if (!same_space(family.space_ptr(), f.space) ||
      static_cast<Index>(f.blocks.size()) != family.size()) {
    throw Error(ErrorKind::DimError, "block vector does not belong to the family's space");
  }
  Vector acc = Vector::Zero(family.ambient_dim());
  for (Index i = 0; i < family.size(); ++i) {
    const Vector& fi = f.blocks[static_cast<std::size_t>(i)];
    if (fi.size() != family.block_dim(i)) {
      std::ostringstream os;
      os << "block " << i << " has length " << fi.size() << ", expected "
         << family.block_dim(i);
      throw Error(ErrorKind::DimError, os.str());
    }
    acc += family.space().weight(i) * (family.block(i).adjoint() * fi);
  }
  return acc;
}

Matrix synthesis_matrix(const GFrameFamily& family) {
  Index total = 0;
  for (const auto& b : family.blocks()) total += b.rows();
  Matrix t(family.ambient_dim(), total);
  Index col = 0;
  for (Index i = 0; i < family.size(); ++i) {
    const Matrix& b = family.block(i);
    t.middleCols(col, b.rows()) = std::sqrt(family.space().weight(i)) * b.adjoint();
    col += b.rows();
  }
  return t;
}

GFrameFamily canonical_dual(const GFrameFamily& family, std::optional<double> frame_tol) {
  const FrameBounds fb = frame_bounds(family, frame_tol);
  if (!fb.is_frame) {
    std::ostringstream os;
    os << "lower frame bound " << fb.lower << " is not above the frame tolerance";
    throw Error(ErrorKind::NotAFrame, os.str());
  }
  return right_compose(family, direct_inverse(frame_operator(family)).inverse);
}

GFrameFamily scale_family(const Symbol& m, const GFrameFamily& family) {
  if (m.size() != family.size()) {
    std::ostringstream os;
    os << "symbol has " << m.size() << " values for " << family.size() << " points";
    throw Error(ErrorKind::DimError, os.str());
  }
  std::vector<Matrix> blocks;
  blocks.reserve(family.blocks().size());
  for (Index i = 0; i < family.size(); ++i) blocks.emplace_back(m[i] * family.block(i));
  return GFrameFamily(family.space_ptr(), family.ambient_dim(), std::move(blocks));
}

GFrameFamily right_compose(const GFrameFamily& family, const Operator& s) {
  if (s.dim() != family.ambient_dim()) {
    throw Error(ErrorKind::DimError, "operator dimension does not match the family");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(family.blocks().size());
  for (const auto& b : family.blocks()) blocks.emplace_back(b * s.matrix());
  return GFrameFamily(family.space_ptr(), family.ambient_dim(), std::move(blocks));
}

GFrameFamily combine(Complex alpha, const GFrameFamily& lambda, Complex beta,
                     const GFrameFamily& theta) {
  require_same_structure(lambda, theta);
  std::vector<Matrix> blocks;
  blocks.reserve(lambda.blocks().size());
  for (Index i = 0; i < lambda.size(); ++i) {
    blocks.emplace_back(alpha * lambda.block(i) + beta * theta.block(i));
  }
  return GFrameFamily(lambda.space_ptr(), lambda.ambient_dim(), std::move(blocks));
}

GFrameFamily family_diff(const GFrameFamily& lambda, const GFrameFamily& theta) {
  require_same_structure(lambda, theta);
  std::vector<Matrix> blocks;
  blocks.reserve(lambda.blocks().size());
  for (Index i = 0; i < lambda.size(); ++i) {
    blocks.emplace_back(lambda.block(i) - theta.block(i));
  }
  return GFrameFamily(lambda.space_ptr(), lambda.ambient_dim(), std::move(blocks));
}

double estimate_nu(const GFrameFamily& lambda, const GFrameFamily& theta) {
  return std::max(0.0, frame_bounds(family_diff(lambda, theta)).upper);
}

bool weakly_equal(const GFrameFamily& lambda, const GFrameFamily& theta, double tol) {
  require_same_structure(lambda, theta);
  for (Index i = 0; i < lambda.size(); ++i) {
    if (op_norm(Matrix(lambda.block(i) - theta.block(i))) > tol) return false;
  }
  return true;
}

}  // namespace gfm
