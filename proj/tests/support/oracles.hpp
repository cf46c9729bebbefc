#pragma once

// Independent reference computations. None of these call the library's
// norm, eigen or inverse routines, so agreement is evidence, not tautology.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gfm/gframe.hpp"
#include "gfm/opalgebra.hpp"

namespace gfm::oracle {

/// sqrt of the largest eigenvalue of A^* A, via the general (non-Hermitian)
/// complex eigensolver.
inline double norm_by_eigs(const Matrix& a) {
  const Matrix g = a.adjoint() * a;
  Eigen::ComplexEigenSolver<Matrix> es(g, false);
  double best = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    best = std::max(best, es.eigenvalues()(i).real());
  }
  return std::sqrt(std::max(best, 0.0));
}

/// Power iteration on A^* A.
inline double norm_by_power(const Matrix& a, std::mt19937_64& rng, int iters = 5000) {
  std::normal_distribution<double> nd;
  Vector v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = Complex(nd(rng), nd(rng));
  v.normalize();
  double est = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vector w = a.adjoint() * (a * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    if (std::abs(n - est) <= 1e-15 * n) {
      est = n;
      break;
    }
    est = n;
  }
  return std::sqrt(est);
}

/// min and max of <A f, f> / <f, f> over random unit vectors. For Hermitian A
/// the sampled min upper-bounds lambda_min and the sampled max lower-bounds
/// lambda_max.
struct Sampled {
  double min;
  double max;
};
inline Sampled rayleigh_sample(const Matrix& a, std::mt19937_64& rng, int samples) {
  std::normal_distribution<double> nd;
  Sampled s{INFINITY, -INFINITY};
  Vector f(a.cols());
  for (int k = 0; k < samples; ++k) {
    for (Index i = 0; i < f.size(); ++i) f(i) = Complex(nd(rng), nd(rng));
    const double q = (f.dot(a * f)).real() / f.squaredNorm();
    s.min = std::min(s.min, q);
    s.max = std::max(s.max, q);
  }
  return s;
}

/// sum_i w_i L_i^* L_i accumulated from the last point to the first.
inline Matrix frame_operator_reverse(const GFrameFamily& fam) {
  const Index d = fam.ambient_dim();
  Matrix s = Matrix::Zero(d, d);
  for (Index i = fam.size() - 1; i >= 0; --i) {
    s += fam.space().weight(i) * (fam.block(i).adjoint() * fam.block(i));
  }
  return s;
}

/// Gaussian elimination with full pivoting, written out by hand.
inline Matrix inverse_by_elimination(Matrix a) {
  const Index n = a.rows();
  Matrix inv = Matrix::Identity(n, n);
  std::vector<Index> colperm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) colperm[static_cast<std::size_t>(i)] = i;
  for (Index k = 0; k < n; ++k) {
    Index pr = k, pc = k;
    double best = -1.0;
    for (Index r = k; r < n; ++r) {
      for (Index c = k; c < n; ++c) {
        if (std::abs(a(r, c)) > best) {
          best = std::abs(a(r, c));
          pr = r;
          pc = c;
        }
      }
    }
    a.row(k).swap(a.row(pr));
    inv.row(k).swap(inv.row(pr));
    a.col(k).swap(a.col(pc));
    std::swap(colperm[static_cast<std::size_t>(k)], colperm[static_cast<std::size_t>(pc)]);
    const Complex p = a(k, k);
    a.row(k) /= p;
    inv.row(k) /= p;
    for (Index r = 0; r < n; ++r) {
      if (r == k) continue;
      const Complex f = a(r, k);
      if (f == Complex(0.0, 0.0)) continue;
      a.row(r) -= f * a.row(k);
      inv.row(r) -= f * inv.row(k);
    }
  }
  // a x = b with columns permuted: undo by permuting rows of the result.
  Matrix out(n, n);
  for (Index k = 0; k < n; ++k) out.row(colperm[static_cast<std::size_t>(k)]) = inv.row(k);
  return out;
}

}  // namespace gfm::oracle
