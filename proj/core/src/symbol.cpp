#include "gfm/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gfm/error.hpp"

namespace gfm {

Symbol::Symbol(Vector values) : values_(std::move(values)) {
  if (values_.size() < 1) {
    throw Error(ErrorKind::ValidationError, "symbol must have at least one value");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorKind::ValidationError, "symbol has non-finite values");
  }
}

Symbol::Symbol(const std::vector<Complex>& values)
    : Symbol(Vector(Eigen::Map<const Vector>(values.data(),
                                             static_cast<Index>(values.size())))) {}

Symbol Symbol::ones(Index n) { return constant(n, Complex(1.0, 0.0)); }

Symbol Symbol::constant(Index n, Complex c) {
  return Symbol(Vector(Vector::Constant(n, c)));
}

double Symbol::sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

double Symbol::dist_to_one() const {
  return (values_.array() - Complex(1.0, 0.0)).abs().maxCoeff();
}

double Symbol::min_real() const { return values_.real().minCoeff(); }

double Symbol::max_imag_abs() const {
  return values_.imag().cwiseAbs().maxCoeff();
}

bool Symbol::is_real(double rel_tol) const {
  return max_imag_abs() <= rel_tol * sup_norm();
}

Symbol Symbol::conj() const { return Symbol(Vector(values_.conjugate())); }

Symbol Symbol::abs2() const {
  return Symbol(Vector(values_.cwiseAbs2().cast<Complex>()));
}

Symbol Symbol::one_minus() const {
  return Symbol(Vector((Complex(1.0, 0.0) - values_.array()).matrix()));
}

Symbol Symbol::scaled(Complex s) const { return Symbol(Vector(s * values_)); }

}  // namespace gfm
