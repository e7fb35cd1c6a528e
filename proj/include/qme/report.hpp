#ifndef QME_REPORT_HPP
#define QME_REPORT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qme/matrix.hpp"

namespace qme {

/// Stopping rule shared by the doubling and fixed-point solvers.
struct SdaOptions {
  double tol = 1e-12;  ///< stop once NRes(X_k) < tol
  int kmax = 1000;
  bool check_invariants = true;
  bool track_history = true;
  /// Retain every X_k and Y_k (needed by error_bound_check). O(k n^2) memory.
  bool keep_iterates = false;
};

enum class SolveStatus { Converged, MaxIterations, BreakdownSingular, InvariantViolated };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::BreakdownSingular: return "BreakdownSingular";
    case SolveStatus::InvariantViolated: return "InvariantViolated";
  }
  return "Unknown";
}

struct HistoryEntry {
  int k = 0;
  double nres = 0.0;
  std::optional<double> dual_nres;  ///< absent for methods without a dual iterate
};

/// Outcome of one runtime invariant test at iteration k. `excess` is the
/// amount by which the inequality was missed (<= 0 when it holds).
struct InvariantCheck {
  int k = 0;
  std::string name;
  bool passed = true;
  double excess = 0.0;
};

struct SolveReport {
  std::string method;
  Matrix phi;
  Matrix psi;
  bool has_psi = false;
  int iterations = 0;
  double final_nres = 0.0;  ///< NRes(phi), kept even when history is off
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<HistoryEntry> history;
  std::vector<InvariantCheck> invariant_log;
  std::vector<Matrix> x_iterates;
  std::vector<Matrix> y_iterates;
  std::string message;

  bool converged() const noexcept { return status == SolveStatus::Converged; }

  const InvariantCheck* first_violation() const noexcept {
    for (const auto& c : invariant_log) {
      if (!c.passed) return &c;
    }
    return nullptr;
  }
};

}  // namespace qme

#endif  // QME_REPORT_HPP
