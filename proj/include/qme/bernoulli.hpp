#ifndef QME_BERNOULLI_HPP
#define QME_BERNOULLI_HPP

#include <optional>
#include <string>

#include "qme/errors.hpp"
#include "qme/lu.hpp"
#include "qme/matrix.hpp"
#include "qme/problem.hpp"
#include "qme/report.hpp"
#include "qme/sda.hpp"

namespace qme {

/// Linearly convergent Bernoulli-like fixed-point baselines, both started
/// from X_0 = 0 and monotonically decreasing to Phi:
///   BL:  X+ = -(B + X)^{-1} C
///   BLL: X+ = -B^{-1} (X^2 + C)
enum class FixedPointKind { BL, BLL };

inline const char* to_string(FixedPointKind k) {
  return k == FixedPointKind::BL ? "BL" : "BL-L";
}

/// One fixed-point map. `b_lu` is a factorization of B, reused by BLL.
inline Matrix fp_step(const QmeProblem& p, const Matrix& x, FixedPointKind kind,
                      const LuFactorization& b_lu) {
  if (x.rows() != p.n() || !x.is_square()) {
    throw DimensionMismatchError("fp_step: X has the wrong dimension");
  }
  if (kind == FixedPointKind::BL) {
    return -lu_solve(p.b() + x, p.c());
  }
  return -b_lu.solve(x * x + p.c());
}

inline Matrix fp_step(const QmeProblem& p, const Matrix& x, FixedPointKind kind) {
  return fp_step(p, x, kind, LuFactorization(p.b()));
}

/// Iterates fp_step from X_0 = 0 under the same stopping rule and report
/// format as sda_solve. The report has no dual iterate (has_psi = false,
/// psi = 0). Invariants checked per step: X_k <= X_{k-1} and X_k <= 0.
inline SolveReport fp_solve(const QmeProblem& p, FixedPointKind kind, const SdaOptions& opt = {}) {
  if (!(opt.tol > 0.0) || opt.kmax < 1) throw Error("fp_solve: need tol > 0 and kmax >= 1");
  SolveReport report;
  report.method = to_string(kind);
  report.has_psi = false;
  report.psi = Matrix::zeros(p.n());
  const double tol_m = detail::monotone_tolerance(p);
  const LuFactorization b_lu(p.b());

  Matrix x = Matrix::zeros(p.n());
  int k = 0;
  auto observe = [&] {
    report.final_nres = nres(p, x);
    if (opt.track_history) report.history.push_back({k, report.final_nres, std::nullopt});
    if (opt.keep_iterates) report.x_iterates.push_back(x);
  };
  auto finish = [&](SolveStatus status) {
    report.status = status;
    report.iterations = k;
    report.phi = x;
    return report;
  };

  observe();
  if (report.final_nres < opt.tol) return finish(SolveStatus::Converged);
  while (k < opt.kmax) {
    Matrix next;
    try {
      next = fp_step(p, x, kind, b_lu);
    } catch (const SingularMatrixError& err) {
      report.message = err.what();
      return finish(SolveStatus::BreakdownSingular);
    }
    ++k;
    bool ok = true;
    if (opt.check_invariants) {
      detail::InvariantRecorder rec(report.invariant_log, k);
      rec.leq("X_monotone", next, x, tol_m);
      rec.nonpositive("X_nonpositive", next, tol_m);
      ok = rec.ok();
    }
    x = std::move(next);
    observe();
    if (!ok) return finish(SolveStatus::InvariantViolated);
    if (report.final_nres < opt.tol) return finish(SolveStatus::Converged);
  }
  return finish(SolveStatus::MaxIterations);
}

}  // namespace qme

#endif  // QME_BERNOULLI_HPP
