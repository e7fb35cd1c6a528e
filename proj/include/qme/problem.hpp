#ifndef QME_PROBLEM_HPP
#define QME_PROBLEM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "qme/errors.hpp"
#include "qme/lu.hpp"
#include "qme/matrix.hpp"
#include "qme/mmatrix.hpp"

namespace qme {

/// A X^2 + B X + C = 0 with A diagonal and positive.
struct GeneralQme {
  Matrix a_tilde;
  Matrix b_tilde;
  Matrix c_tilde;
};

class QmeProblem;
QmeProblem validate(const Matrix& b, const Matrix& c);

/// X^2 + B X + C = 0 with B a nonsingular M-matrix, C an M-matrix,
/// B^{-1} C >= 0 and B - C - I a nonsingular M-matrix.
///
/// Only obtainable through validate() (or reduce() and the generators, which
/// call it), so holding one means the hypotheses were checked. The
/// certificate pair satisfies u > 0 and v = (B - C - I) u > 0.
class QmeProblem {
 public:
  const Matrix& b() const noexcept { return b_; }
  const Matrix& c() const noexcept { return c_; }
  std::size_t n() const noexcept { return b_.rows(); }
  const Vector& u() const noexcept { return u_; }
  const Vector& v() const noexcept { return v_; }

  double b_norm() const noexcept { return b_norm_; }
  double c_norm() const noexcept { return c_norm_; }

 private:
  friend QmeProblem validate(const Matrix& b, const Matrix& c);

  QmeProblem(Matrix b, Matrix c, Vector u, Vector v)
      : b_(std::move(b)),
        c_(std::move(c)),
        u_(std::move(u)),
        v_(std::move(v)),
        b_norm_(inf_norm(b_)),
        c_norm_(inf_norm(c_)) {}

  Matrix b_;
  Matrix c_;
  Vector u_;
  Vector v_;
  double b_norm_;
  double c_norm_;
};

inline QmeProblem validate(const Matrix& b, const Matrix& c) {
  if (!b.is_square() || !c.is_square() || b.rows() != c.rows() || b.rows() == 0) {
    throw ValidationError(ValidationReason::DimensionMismatch,
                          "B and C must be square and of equal size");
  }
  const std::size_t n = b.rows();

  const MClass b_class = classify_m(b);
  if (!b_class.is_nonsingular_m()) {
    throw ValidationError(ValidationReason::BNotNonsingularM,
                          std::string("B classified as ") + to_string(b_class.kind));
  }

  const MClass c_class = classify_m(c);
  if (!c_class.is_m()) {
    throw ValidationError(ValidationReason::CNotM,
                          std::string("C classified as ") + to_string(c_class.kind));
  }

  const Matrix binv_c = lu_solve(b, c);
  const double binv_c_tol = 1e-12 * inf_norm(binv_c);
  if (!is_entrywise(binv_c, Relation::GE0, binv_c_tol)) {
    throw ValidationError(ValidationReason::BinvCNotNonneg,
                          "B^{-1} C has a negative entry");
  }

  const Matrix shifted = b - c - Matrix::identity(n);
  const MClass shifted_class = classify_m(shifted);
  if (!shifted_class.is_nonsingular_m()) {
    throw ValidationError(ValidationReason::Cond3Fails,
                          std::string("B - C - I classified as ") +
                              to_string(shifted_class.kind));
  }

  // u = (B - C - I)^{-1} 1 is exactly the classification witness.
  Vector u = *shifted_class.witness;
  Vector v = Vector::ones(n);
  const double cert_tol = 1e-12 * inf_norm(b);
  if (!is_entrywise(u, Relation::GT0, 0.0) ||
      !is_entrywise(shifted * u, Relation::GT0, cert_tol)) {
    throw ValidationError(ValidationReason::Cond3Fails,
                          "certificate u = (B - C - I)^{-1} 1 is not positive");
  }
  return QmeProblem(b, c, std::move(u), std::move(v));
}

/// Left-multiplies by A^{-1} (row scaling) and validates the result.
inline QmeProblem reduce(const GeneralQme& g) {
  const Matrix& a = g.a_tilde;
  if (!a.is_square() || a.rows() != g.b_tilde.rows() || a.rows() != g.c_tilde.rows() ||
      !g.b_tilde.is_square() || !g.c_tilde.is_square()) {
    throw ValidationError(ValidationReason::DimensionMismatch,
                          "A, B, C must be square and of equal size");
  }
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j ? !(a(i, i) > 0.0) : a(i, j) != 0.0) {
        throw ValidationError(ValidationReason::ATildeNotPositiveDiagonal,
                              "A must be diagonal with positive diagonal");
      }
    }
  }
  Matrix b = g.b_tilde;
  Matrix c = g.c_tilde;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a(i, i);
    for (double& x : b.row(i)) x /= d;
    for (double& x : c.row(i)) x /= d;
  }
  return validate(b, c);
}

/// Normalized residual
///   ||X^2 + B X + C|| / (||X|| (||X|| + ||B||) + ||C||)
/// in the infinity norm. Defined as 0 when numerator and denominator both
/// vanish (C = 0 with X = 0).
inline double nres(const QmeProblem& p, const Matrix& x) {
  if (x.rows() != p.n() || !x.is_square()) {
    throw DimensionMismatchError("nres: X has the wrong dimension");
  }
  const double num = inf_norm(x * x + p.b() * x + p.c());
  const double xn = inf_norm(x);
  const double den = xn * (xn + p.b_norm()) + p.c_norm();
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

/// Normalized residual of the dual equation C Y^2 + B Y + I = 0, with the
/// denominator ||Y|| (||Y|| ||C|| + ||B||) + 1 mirroring nres term by term.
inline double dual_residual(const QmeProblem& p, const Matrix& y) {
  if (y.rows() != p.n() || !y.is_square()) {
    throw DimensionMismatchError("dual_residual: Y has the wrong dimension");
  }
  const double num = inf_norm(p.c() * (y * y) + p.b() * y + Matrix::identity(p.n()));
  const double yn = inf_norm(y);
  return num / (yn * (yn * p.c_norm() + p.b_norm()) + 1.0);
}

struct SolventCheck {
  double residual_nres = 0.0;
  bool is_nonpositive = false;
  double rho = 0.0;
  MClass b_plus_phi_class;
  MClass b_plus_phi_minus_c_class;
  bool bound_ok = false;

  /// All structural properties of the maximal nonpositive solvent hold.
  bool structure_ok() const noexcept {
    return is_nonpositive && rho < 1.0 && b_plus_phi_class.is_nonsingular_m() &&
           b_plus_phi_minus_c_class.is_nonsingular_m() && bound_ok;
  }
};

/// Tolerance used by check_solvent for the sign and bound tests.
inline double solvent_tolerance(const QmeProblem& p) {
  return 1e-10 * std::max(1.0, p.b_norm());
}

/// Checks X against the properties of the maximal nonpositive solvent:
/// X <= 0, rho(X) < 1, B + X and B + X - C nonsingular M-matrices, and the
/// a priori bound -X u <= u - B^{-1} v.
inline SolventCheck check_solvent(const QmeProblem& p, const Matrix& x) {
  SolventCheck out;
  out.residual_nres = nres(p, x);
  const double tol = solvent_tolerance(p);
  out.is_nonpositive = is_entrywise(x, Relation::LE0, tol);
  out.rho = spectral_radius(x);
  const Matrix b_plus_x = p.b() + x;
  out.b_plus_phi_class = classify_m(b_plus_x);
  out.b_plus_phi_minus_c_class = classify_m(b_plus_x - p.c());

  const Vector lhs = (-x) * p.u();
  const Vector binv_v = lu_solve(p.b(), p.v());
  const double bound_tol = tol * std::max(1.0, inf_norm(p.u()));
  out.bound_ok = true;
  for (std::size_t i = 0; i < p.n(); ++i) {
    if (lhs[i] > p.u()[i] - binv_v[i] + bound_tol) out.bound_ok = false;
  }
  return out;
}

struct Coefficients {
  Matrix b;
  Matrix c;
};

/// B = tridiag(-10, 30, -10) with corner entries 20, C = tridiag(-5, 15, -5).
/// Unvalidated; at n = 2, B - C - I = [[4, -5], [-5, 4]] is not an M-matrix.
inline Coefficients example1_coefficients(std::size_t n) {
  if (n < 2) throw Error("example 1: n must be at least 2");
  Matrix b = Matrix::tridiagonal(n, -10.0, 30.0, -10.0);
  b(0, 0) = 20.0;
  b(n - 1, n - 1) = 20.0;
  return {std::move(b), Matrix::tridiagonal(n, -5.0, 15.0, -5.0)};
}

/// B = tridiag(-1, 4, -1), C = I. Unvalidated.
inline Coefficients example2_coefficients(std::size_t n) {
  if (n < 2) throw Error("example 2: n must be at least 2");
  return {Matrix::tridiagonal(n, -1.0, 4.0, -1.0), Matrix::identity(n)};
}

/// Validated first example family; throws ValidationError(Cond3Fails) at n = 2.
inline QmeProblem gen_example1(std::size_t n) {
  const auto [b, c] = example1_coefficients(n);
  return validate(b, c);
}

inline QmeProblem gen_example2(std::size_t n) {
  const auto [b, c] = example2_coefficients(n);
  return validate(b, c);
}

}  // namespace qme

#endif  // QME_PROBLEM_HPP
