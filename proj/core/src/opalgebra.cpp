#include "gfm/opalgebra.hpp"

#include <sstream>
#include <utility>

#include "gfm/error.hpp"

namespace gfm {

namespace {

void require_finite(const Matrix& m, const char* where) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidOperator,
                std::string(where) + ": non-finite entries");
  }
}

Eigen::VectorXd singular_values(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

}  // namespace

Operator::Operator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    std::ostringstream os;
    os << "operator must be square with dim >= 1, got " << m_.rows() << "x"
       << m_.cols();
    throw Error(ErrorKind::DimError, os.str());
  }
  require_finite(m_, "Operator");
}

Operator Operator::identity(Index dim) {
  return Operator(Matrix::Identity(dim, dim));
}

Operator Operator::zero(Index dim) { return Operator(Matrix::Zero(dim, dim)); }

Operator Operator::diagonal(const Vector& diag) {
  return Operator(diag.asDiagonal().toDenseMatrix());
}

Operator Operator::adjoint() const { return Operator(m_.adjoint()); }

Vector Operator::apply(const Vector& f) const {
  if (f.size() != dim()) {
    throw Error(ErrorKind::DimError, "vector length does not match operator");
  }
  return m_ * f;
}

namespace {
void require_same_dim(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimError, "operator dimensions differ");
  }
}
}  // namespace

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return Operator(a.m_ * b.m_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.m_); }

double op_norm(const Matrix& a) {
  require_finite(a, "op_norm");
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double op_norm(const Operator& a) { return op_norm(a.matrix()); }

HermitianExtremes herm_extremal_eigs(const Operator& a) {
  const Matrix& m = a.matrix();
  const double scale = op_norm(m);
  const double skew = op_norm(Matrix(m - m.adjoint()));
  if (skew > kHermitianTol * scale) {
    std::ostringstream os;
    os << "||A - A*|| = " << skew << " exceeds " << kHermitianTol
       << " * ||A|| = " << kHermitianTol * scale;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
  // Eigen reads the lower triangle only; symmetrize so both halves count.
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();  // ascending
  return {ev(0), ev(ev.size() - 1)};
}

InverseResult direct_inverse(const Operator& a) {
  const Eigen::VectorXd sv = singular_values(a.matrix());
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smin < kSingularityTol * smax) {
    std::ostringstream os;
    os << "sigma_min = " << smin << " below " << kSingularityTol
       << " * sigma_max = " << kSingularityTol * smax;
    throw Error(ErrorKind::SingularOperator, os.str());
  }
  Eigen::PartialPivLU<Matrix> lu(a.matrix());
  return {Operator(lu.inverse()), smax / smin};
}

bool numerically_invertible(const Operator& a) {
  const Eigen::VectorXd sv = singular_values(a.matrix());
  return sv(0) > 0.0 && sv(sv.size() - 1) >= kSingularityTol * sv(0);
}

double distance(const Operator& a, const Operator& b) {
  return op_norm(a - b);
}

}  // namespace gfm
