#ifndef QME_MMATRIX_HPP
#define QME_MMATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qme/errors.hpp"
#include "qme/lu.hpp"
#include "qme/matrix.hpp"

namespace qme {

struct PowerIterationOptions {
  double rel_tol = 1e-10;
  int max_squarings = 64;
};

/// Spectral radius of |A| by power iteration from the all-ones vector,
/// advanced by repeated squaring.
///
/// For M = |A| >= 0, ||M^m 1||_inf = ||M^m||_inf, and the Gelfand estimate
/// ||M^m||^{1/m} decreases to rho(M) from above for every nonnegative M,
/// including periodic (tridiag(1, 0, 1)) and reducible ones. Squaring the
/// normalized power doubles m per step, so slowly separating spectra
/// (gap ~ 1/n^2) converge in O(log) steps instead of O(n^2) matrix-vector
/// products. The log-scale is carried separately so nothing overflows.
///
/// Stops once two consecutive estimates agree to rel_tol and m >= n^2, past
/// every nilpotent or preperiodic transient of an n x n nonnegative pattern.
inline double spectral_radius(const Matrix& a, PowerIterationOptions opt = {}) {
  if (!a.is_square()) throw DimensionMismatchError("spectral_radius: matrix must be square");
  const std::size_t n = a.rows();
  Matrix power = abs(a);
  double log_scale = 0.0;  // log of the factor divided out of M^m
  double m = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  int settled = 0;
  for (int step = 0; step <= opt.max_squarings; ++step) {
    const double norm = inf_norm(power);
    if (norm == 0.0) return 0.0;
    log_scale += std::log(norm);
    const double estimate = std::exp(log_scale / m);
    power *= 1.0 / norm;

    if (std::fabs(previous - estimate) <= opt.rel_tol * estimate) {
      ++settled;
    } else {
      settled = 0;
    }
    if (settled >= 2 && m >= static_cast<double>(n) * static_cast<double>(n)) return estimate;
    previous = estimate;

    power = power * power;
    log_scale *= 2.0;
    m *= 2.0;
  }
  throw NoConvergenceError("spectral_radius: no convergence after " +
                           std::to_string(opt.max_squarings) + " squarings");
}

/// NotM: a Z-matrix with s < rho(N), i.e. not an M-matrix at all.
enum class MKind { NotZ, NotM, SingularM, NonsingularM };

inline const char* to_string(MKind k) {
  switch (k) {
    case MKind::NotZ: return "NotZ";
    case MKind::NotM: return "NotM";
    case MKind::SingularM: return "SingularM";
    case MKind::NonsingularM: return "NonsingularM";
  }
  return "Unknown";
}

/// Classification of a square matrix against the Z/M-matrix classes.
struct MClass {
  MKind kind = MKind::NotZ;
  /// Positive u with A u > 0; present only for NonsingularM.
  std::optional<Vector> witness;
  /// s - rho(N) for the splitting A = sI - N; NaN when kind == NotZ.
  double s_minus_rho = std::numeric_limits<double>::quiet_NaN();

  bool is_m() const noexcept {
    return kind == MKind::SingularM || kind == MKind::NonsingularM;
  }
  bool is_nonsingular_m() const noexcept { return kind == MKind::NonsingularM; }
};

inline double default_m_tolerance(const Matrix& a) {
  return 1e-12 * std::max(1.0, inf_norm(a));
}

/// Z/M-matrix classification through the splitting A = sI - N with
/// s = max_i a_ii. A Z-matrix is a nonsingular M-matrix iff s > rho(N).
/// Off-diagonal entries in (0, tol] are treated as zero.
inline MClass classify_m(const Matrix& a, double tol) {
  if (!a.is_square()) throw DimensionMismatchError("classify_m: matrix must be square");
  const std::size_t n = a.rows();
  MClass out;
  double s = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && a(i, j) > tol) return out;
    }
    s = std::max(s, a(i, i));
  }

  Matrix nn(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      nn(i, j) = i == j ? s - a(i, i) : std::max(0.0, -a(i, j));
    }
  }
  out.s_minus_rho = s - spectral_radius(nn);

  if (out.s_minus_rho > tol) {
    out.kind = MKind::NonsingularM;
    try {
      out.witness = lu_solve(a, Vector::ones(n));
    } catch (const SingularMatrixError&) {
      // rho(N) estimate and factorization disagree at the boundary
      out.kind = MKind::SingularM;
      out.witness.reset();
    }
  } else if (out.s_minus_rho >= -tol) {
    out.kind = MKind::SingularM;
  } else {
    out.kind = MKind::NotM;
  }
  return out;
}

inline MClass classify_m(const Matrix& a) { return classify_m(a, default_m_tolerance(a)); }

}  // namespace qme

#endif  // QME_MMATRIX_HPP
