#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gfm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Dense square operator on H = C^d.
///
/// Construction rejects non-square or non-finite matrices, so every
/// Operator in the program is a valid element of B(H).
class Operator {
 public:
  explicit Operator(Matrix m);

  static Operator identity(Index dim);
  static Operator zero(Index dim);
  static Operator diagonal(const Vector& diag);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const& noexcept { return m_; }
  Matrix matrix() && noexcept { return std::move(m_); }

  Complex operator()(Index r, Index c) const { return m_(r, c); }

  Operator adjoint() const;
  Vector apply(const Vector& f) const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);

  friend bool operator==(const Operator& a, const Operator& b) {
    return a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

/// Spectral norm (largest singular value) of an arbitrary matrix.
double op_norm(const Matrix& a);
double op_norm(const Operator& a);

struct HermitianExtremes {
  double min;
  double max;
};

/// Relative tolerance on ||A - A*|| accepted as "Hermitian".
inline constexpr double kHermitianTol = 1e-12;

/// Extremal eigenvalues of a Hermitian operator. Throws NotHermitian when
/// ||A - A*|| exceeds kHermitianTol * ||A||.
HermitianExtremes herm_extremal_eigs(const Operator& a);

/// sigma_min / sigma_max below this is treated as numerically singular.
inline constexpr double kSingularityTol = 1e-12;

struct InverseResult {
  Operator inverse;
  double condition;  // sigma_max / sigma_min
};

/// A^{-1} by LU with partial pivoting. Throws SingularOperator when the
/// smallest singular value falls below kSingularityTol * ||A||.
InverseResult direct_inverse(const Operator& a);

/// True when direct_inverse would succeed.
bool numerically_invertible(const Operator& a);

/// ||A - B|| in spectral norm.
double distance(const Operator& a, const Operator& b);

}  // namespace gfm
