#pragma once

#include <cstddef>
#include <vector>

#include "gfm/opalgebra.hpp"

namespace gfm {

/// Bounded weight function m on the discretized measure space, one complex
/// value per point. Derived norms are recomputed from the values on demand.
class Symbol {
 public:
  explicit Symbol(Vector values);
  explicit Symbol(const std::vector<Complex>& values);

  static Symbol ones(Index n);
  static Symbol constant(Index n, Complex c);

  Index size() const noexcept { return values_.size(); }
  Complex operator[](Index i) const { return values_(i); }
  const Vector& values() const noexcept { return values_; }

  /// ||m||_inf
  double sup_norm() const;
  /// ||m - 1||_inf
  double dist_to_one() const;
  double min_real() const;
  double max_imag_abs() const;

  /// Real-valued within rel_tol * ||m||_inf.
  bool is_real(double rel_tol = 1e-12) const;

  Symbol conj() const;
  /// |m|^2 as a real symbol.
  Symbol abs2() const;
  /// 1 - m
  Symbol one_minus() const;
  Symbol scaled(Complex s) const;

  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.values_ == b.values_;
  }

 private:
  Vector values_;
};

}  // namespace gfm
