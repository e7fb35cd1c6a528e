#ifndef QME_LU_HPP
#define QME_LU_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "qme/errors.hpp"
#include "qme/matrix.hpp"

namespace qme {

/// LU factorization with partial (row) pivoting, PA = LU.
///
/// A pivot with magnitude below 1e-13 * ||A||_inf is treated as numerical
/// singularity and raises SingularMatrixError. The factors are stored packed
/// in one matrix (unit lower triangle implicit).
class LuFactorization {
 public:
  static constexpr double kPivotRelTol = 1e-13;

  explicit LuFactorization(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (!lu_.is_square()) {
      throw DimensionMismatchError("LuFactorization: matrix must be square");
    }
    const std::size_t n = lu_.rows();
    const double threshold = kPivotRelTol * inf_norm(lu_);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::fabs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = std::fabs(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best <= threshold || best == 0.0) {
        throw SingularMatrixError("LuFactorization: pivot " + std::to_string(best) +
                                  " below threshold at column " + std::to_string(k));
      }
      if (p != k) {
        auto rk = lu_.row(k);
        auto rp = lu_.row(p);
        for (std::size_t j = 0; j < n; ++j) std::swap(rk[j], rp[j]);
        std::swap(perm_[k], perm_[p]);
      }
      const double pivot = lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double m = lu_(i, k) / pivot;
        lu_(i, k) = m;
        if (m == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  /// Solves A S = rhs for every column of rhs.
  Matrix solve(const Matrix& rhs) const {
    const std::size_t n = size();
    if (rhs.rows() != n) {
      throw DimensionMismatchError("LuFactorization::solve: rhs row count differs");
    }
    const std::size_t m = rhs.cols();
    Matrix s(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      auto src = rhs.row(perm_[i]);
      auto dst = s.row(i);
      for (std::size_t j = 0; j < m; ++j) dst[j] = src[j];
    }
    // forward substitution with unit L
    for (std::size_t i = 1; i < n; ++i) {
      auto si = s.row(i);
      for (std::size_t k = 0; k < i; ++k) {
        const double l = lu_(i, k);
        if (l == 0.0) continue;
        auto sk = s.row(k);
        for (std::size_t j = 0; j < m; ++j) si[j] -= l * sk[j];
      }
    }
    // back substitution with U
    for (std::size_t ii = n; ii-- > 0;) {
      auto si = s.row(ii);
      for (std::size_t k = ii + 1; k < n; ++k) {
        const double u = lu_(ii, k);
        if (u == 0.0) continue;
        auto sk = s.row(k);
        for (std::size_t j = 0; j < m; ++j) si[j] -= u * sk[j];
      }
      const double d = lu_(ii, ii);
      for (std::size_t j = 0; j < m; ++j) si[j] /= d;
    }
    return s;
  }

  Vector solve(const Vector& rhs) const {
    Matrix s = solve(as_column(rhs));
    return Vector(std::vector<double>(s.values().begin(), s.values().end()));
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

inline Matrix lu_solve(const Matrix& a, const Matrix& rhs) {
  if (!a.is_square()) throw DimensionMismatchError("lu_solve: A must be square");
  if (rhs.rows() != a.rows()) throw DimensionMismatchError("lu_solve: rhs row count differs");
  return LuFactorization(a).solve(rhs);
}

inline Vector lu_solve(const Matrix& a, const Vector& rhs) {
  if (!a.is_square()) throw DimensionMismatchError("lu_solve: A must be square");
  return LuFactorization(a).solve(rhs);
}

/// Explicit inverse. Only for callers that must inspect A^{-1} entrywise.
inline Matrix inverse(const Matrix& a) {
  return lu_solve(a, Matrix::identity(a.rows()));
}

}  // namespace qme

#endif  // QME_LU_HPP
