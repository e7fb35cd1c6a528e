#ifndef QME_REPORT_IO_HPP
#define QME_REPORT_IO_HPP

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"

#include "qme/matrix.hpp"
#include "qme/report.hpp"

namespace qme {

/// Shortest text that round-trips the double exactly.
inline std::string format_exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// {"method", "status", "iterations", "final_nres", "history": [[k, nres,
/// dual_nres|null], ...], "phi": "<matrix text>", "psi": "<matrix text>"|null,
/// "invariant_violations": [{"k", "name", "excess"}, ...]}
inline nlohmann::json report_to_json(const SolveReport& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["final_nres"] = r.final_nres;
  auto history = nlohmann::json::array();
  for (const auto& h : r.history) {
    history.push_back({h.k, h.nres, h.dual_nres ? nlohmann::json(*h.dual_nres) : nlohmann::json()});
  }
  j["history"] = std::move(history);
  j["phi"] = to_text(r.phi);
  j["psi"] = r.has_psi ? nlohmann::json(to_text(r.psi)) : nlohmann::json();
  auto violations = nlohmann::json::array();
  for (const auto& c : r.invariant_log) {
    if (!c.passed) violations.push_back({{"k", c.k}, {"name", c.name}, {"excess", c.excess}});
  }
  j["invariant_violations"] = std::move(violations);
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

/// Convergence history as CSV: "k,nres[,dual_nres]" with exact doubles.
inline void write_history_csv(std::ostream& os, const SolveReport& r) {
  const bool dual = r.has_psi;
  os << (dual ? "k,nres,dual_nres\n" : "k,nres\n");
  for (const auto& h : r.history) {
    os << h.k << ',' << format_exact(h.nres);
    if (dual) os << ',' << (h.dual_nres ? format_exact(*h.dual_nres) : std::string());
    os << '\n';
  }
}

}  // namespace qme

#endif  // QME_REPORT_IO_HPP
