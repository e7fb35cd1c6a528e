#ifndef QME_SDA_HPP
#define QME_SDA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "qme/errors.hpp"
#include "qme/lu.hpp"
#include "qme/matrix.hpp"
#include "qme/mmatrix.hpp"
#include "qme/problem.hpp"
#include "qme/report.hpp"

namespace qme {

/// (I - Y X) or (I - X Y) was numerically singular during a doubling step.
class BreakdownError : public SingularMatrixError {
 public:
  using SingularMatrixError::SingularMatrixError;
};

/// The quadruple (E_k, F_k, X_k, Y_k) of the doubling iteration on the
/// first-standard-form pencil
///
///   [E  0]       [I  -Y]
///   [-X I] - l * [0   F].
///
/// X_k decreases monotonically to the maximal nonpositive solvent Phi and
/// Y_k to the dual solvent Psi; E_k and F_k decay like Phi^{2^k}, Psi^{2^k}.
struct SdaState {
  Matrix e;
  Matrix f;
  Matrix x;
  Matrix y;
  int k = 0;
};

/// X_0 = E_0 = -B^{-1} C, Y_0 = F_0 = -B^{-1}.
inline SdaState sda_init(const QmeProblem& p) {
  const LuFactorization b_lu(p.b());
  SdaState s;
  s.x = -b_lu.solve(p.c());
  s.y = -b_lu.solve(Matrix::identity(p.n()));
  s.e = s.x;
  s.f = s.y;
  s.k = 0;
  return s;
}

/// One doubling step:
///   E+ = E (I - Y X)^{-1} E,        F+ = F (I - X Y)^{-1} F,
///   X+ = X + F (I - X Y)^{-1} X E,  Y+ = Y + E (I - Y X)^{-1} Y F.
/// Each of I - Y X and I - X Y is factorized once and solved against both
/// right-hand sides that share it.
inline SdaState sda_step(const SdaState& s) {
  const std::size_t n = s.x.rows();
  if (!s.x.is_square() || s.y.rows() != n || s.e.rows() != n || s.f.rows() != n) {
    throw DimensionMismatchError("sda_step: inconsistent state dimensions");
  }
  const Matrix id = Matrix::identity(n);

  auto factor = [](Matrix m, const char* which) {
    try {
      return LuFactorization(std::move(m));
    } catch (const SingularMatrixError& err) {
      throw BreakdownError(std::string(which) + " is singular: " + err.what());
    }
  };
  const LuFactorization iyx = factor(id - s.y * s.x, "I - Y X");
  const LuFactorization ixy = factor(id - s.x * s.y, "I - X Y");

  // [ (I-YX)^{-1} E | (I-YX)^{-1} Y F ] and [ (I-XY)^{-1} F | (I-XY)^{-1} X E ]
  const Matrix yf = s.y * s.f;
  const Matrix xe = s.x * s.e;
  const Matrix iyx_e = iyx.solve(s.e);
  const Matrix iyx_yf = iyx.solve(yf);
  const Matrix ixy_f = ixy.solve(s.f);
  const Matrix ixy_xe = ixy.solve(xe);

  SdaState next;
  next.e = s.e * iyx_e;
  next.f = s.f * ixy_f;
  next.x = s.x + s.f * ixy_xe;
  next.y = s.y + s.e * iyx_yf;
  next.k = s.k + 1;
  return next;
}

namespace detail {

/// Collects one-sided inequality checks into a report's invariant log.
class InvariantRecorder {
 public:
  InvariantRecorder(std::vector<InvariantCheck>& log, int k) : log_(log), k_(k) {}

  /// Records `lhs <= rhs + tol` entrywise.
  void leq(const char* name, const Matrix& lhs, const Matrix& rhs, double tol) {
    record(name, max_excess(lhs, rhs) - tol);
  }

  /// Records `a <= tol` entrywise.
  void nonpositive(const char* name, const Matrix& a, double tol) {
    record(name, max_entry(a) - tol);
  }

  /// Records `a >= -tol` entrywise.
  void nonnegative(const char* name, const Matrix& a, double tol) {
    record(name, -min_entry(a) - tol);
  }

  void nonsingular_m(const char* name, const Matrix& a) {
    InvariantCheck c{k_, name, true, 0.0};
    try {
      const MClass cls = classify_m(a);
      c.passed = cls.is_nonsingular_m();
      c.excess = std::isnan(cls.s_minus_rho) ? 1.0 : -cls.s_minus_rho;
    } catch (const Error&) {
      c.passed = false;
      c.excess = 1.0;
    }
    ok_ = ok_ && c.passed;
    log_.push_back(std::move(c));
  }

  bool ok() const noexcept { return ok_; }

 private:
  static double max_entry(const Matrix& a) {
    auto v = a.values();
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  }
  static double min_entry(const Matrix& a) {
    auto v = a.values();
    return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
  }

  void record(const char* name, double excess) {
    const bool passed = excess <= 0.0;
    ok_ = ok_ && passed;
    log_.push_back(InvariantCheck{k_, name, passed, excess});
  }

  std::vector<InvariantCheck>& log_;
  int k_;
  bool ok_ = true;
};

inline double monotone_tolerance(const QmeProblem& p) {
  return 1e-10 * std::max(1.0, p.b_norm());
}

}  // namespace detail

/// Runs the doubling iteration from sda_init until NRes(X_k) < opt.tol or
/// opt.kmax steps. With check_invariants, every step verifies
///   X_k <= X_{k-1} <= 0,  Y_k <= Y_{k-1} <= 0,  E_k, F_k >= 0,
///   I - X_k Y_k and I - Y_k X_k nonsingular M-matrices,
/// and stops with InvariantViolated on the first failure.
inline SolveReport sda_solve(const QmeProblem& p, const SdaOptions& opt = {}) {
  if (!(opt.tol > 0.0) || opt.kmax < 1) throw Error("sda_solve: need tol > 0 and kmax >= 1");
  SolveReport report;
  report.method = "SDA";
  report.has_psi = true;
  const double tol_m = detail::monotone_tolerance(p);

  SdaState s;
  try {
    s = sda_init(p);
  } catch (const SingularMatrixError& err) {
    report.status = SolveStatus::BreakdownSingular;
    report.message = err.what();
    report.phi = Matrix::zeros(p.n());
    report.psi = Matrix::zeros(p.n());
    return report;
  }

  auto observe = [&](const SdaState& st) {
    report.final_nres = nres(p, st.x);
    if (opt.track_history) {
      report.history.push_back({st.k, report.final_nres, dual_residual(p, st.y)});
    }
    if (opt.keep_iterates) {
      report.x_iterates.push_back(st.x);
      report.y_iterates.push_back(st.y);
    }
  };
  auto finish = [&](SolveStatus status) {
    report.status = status;
    report.iterations = s.k;
    report.phi = s.x;
    report.psi = s.y;
    return report;
  };

  observe(s);
  if (opt.check_invariants) {
    detail::InvariantRecorder rec(report.invariant_log, 0);
    rec.nonpositive("X_nonpositive", s.x, tol_m);
    rec.nonpositive("Y_nonpositive", s.y, tol_m);
    if (!rec.ok()) return finish(SolveStatus::InvariantViolated);
  }
  if (report.final_nres < opt.tol) return finish(SolveStatus::Converged);

  while (s.k < opt.kmax) {
    SdaState next;
    try {
      next = sda_step(s);
    } catch (const SingularMatrixError& err) {
      report.message = err.what();
      return finish(SolveStatus::BreakdownSingular);
    }

    if (opt.check_invariants) {
      detail::InvariantRecorder rec(report.invariant_log, next.k);
      rec.leq("X_monotone", next.x, s.x, tol_m);
      rec.nonpositive("X_nonpositive", next.x, tol_m);
      rec.leq("Y_monotone", next.y, s.y, tol_m);
      rec.nonpositive("Y_nonpositive", next.y, tol_m);
      rec.nonnegative("E_nonnegative", next.e, tol_m);
      rec.nonnegative("F_nonnegative", next.f, tol_m);
      const Matrix id = Matrix::identity(p.n());
      rec.nonsingular_m("I-XY_nonsingular_M", id - next.x * next.y);
      rec.nonsingular_m("I-YX_nonsingular_M", id - next.y * next.x);
      if (!rec.ok()) {
        s = std::move(next);
        observe(s);
        return finish(SolveStatus::InvariantViolated);
      }
    }

    s = std::move(next);
    observe(s);
    if (report.final_nres < opt.tol) return finish(SolveStatus::Converged);
  }
  return finish(SolveStatus::MaxIterations);
}

namespace detail {

inline bool bound_sequence_holds(const std::vector<Matrix>& iterates, const Matrix& limit,
                                 const Matrix& other_limit) {
  // 0 <= Z_k - L <= O^{2^k} (-L) L^{2^k}, powers by repeated squaring
  const double slack = 1e-10 * inf_norm(limit);
  Matrix limit_pow = limit;
  Matrix other_pow = other_limit;
  const Matrix zero = Matrix::zeros(limit.rows());
  for (std::size_t k = 1; k < iterates.size(); ++k) {
    limit_pow = limit_pow * limit_pow;
    other_pow = other_pow * other_pow;
    const Matrix gap = iterates[k] - limit;
    const Matrix bound = other_pow * (-limit) * limit_pow;
    if (max_excess(zero, gap) > slack || max_excess(gap, bound) > slack) return false;
  }
  return true;
}

}  // namespace detail

/// Checks the a priori error bounds
///   0 <= X_k - Phi <= Psi^{2^k} (-Phi) Phi^{2^k},
///   0 <= Y_k - Psi <= Phi^{2^k} (-Psi) Psi^{2^k}
/// for every retained iterate k >= 1, against reference solvents.
/// Requires a report produced with keep_iterates.
inline bool error_bound_check(const QmeProblem& p, const SolveReport& report,
                              const Matrix& phi_ref, const Matrix& psi_ref) {
  const std::size_t n = p.n();
  if (phi_ref.rows() != n || !phi_ref.is_square() || psi_ref.rows() != n ||
      !psi_ref.is_square()) {
    throw DimensionMismatchError("error_bound_check: reference solvent has the wrong dimension");
  }
  for (const auto& list : {&report.x_iterates, &report.y_iterates}) {
    for (const Matrix& m : *list) {
      if (m.rows() != n || !m.is_square()) {
        throw DimensionMismatchError("error_bound_check: iterate has the wrong dimension");
      }
    }
  }
  if (report.x_iterates.empty() || report.y_iterates.size() != report.x_iterates.size()) {
    throw Error("error_bound_check: report carries no iterates (solve with keep_iterates)");
  }
  return detail::bound_sequence_holds(report.x_iterates, phi_ref, psi_ref) &&
         detail::bound_sequence_holds(report.y_iterates, psi_ref, phi_ref);
}

}  // namespace qme

#endif  // QME_SDA_HPP
