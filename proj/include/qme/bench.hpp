#ifndef QME_BENCH_HPP
#define QME_BENCH_HPP

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "qme/bernoulli.hpp"
#include "qme/errors.hpp"
#include "qme/problem.hpp"
#include "qme/problem_io.hpp"
#include "qme/report.hpp"
#include "qme/report_io.hpp"
#include "qme/sda.hpp"

namespace qme::bench {

enum class Method { SDA, BL, BLL };
enum class Format { Table, Json, Csv };

inline const char* display_name(Method m) {
  switch (m) {
    case Method::SDA: return "SDA";
    case Method::BL: return "BL";
    case Method::BLL: return "BL-L";
  }
  return "?";
}

/// Lowercase key used on the command line and in output file names.
inline const char* key(Method m) {
  switch (m) {
    case Method::SDA: return "sda";
    case Method::BL: return "bl";
    case Method::BLL: return "bll";
  }
  return "?";
}

inline Method parse_method(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "sda") return Method::SDA;
  if (s == "bl") return Method::BL;
  if (s == "bll" || s == "bl-l") return Method::BLL;
  throw ParseError("unknown method '" + s + "' (expected sda, bl, bll)");
}

inline Format parse_format(const std::string& s) {
  if (s == "table") return Format::Table;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw ParseError("unknown format '" + s + "' (expected table, json, csv)");
}

struct ExampleProblem {
  int example = 1;
  std::size_t n = 30;
};

struct RunConfig {
  std::variant<ExampleProblem, std::filesystem::path> problem = ExampleProblem{};
  std::vector<Method> methods{Method::SDA};
  double tol = 1e-12;
  int kmax = 1000;
  std::string output = "qme";
  Format format = Format::Table;
};

struct BenchRow {
  std::string method;
  int iter = 0;
  double cpu_seconds = 0.0;
  double final_nres = 0.0;
  SolveStatus status = SolveStatus::MaxIterations;
};

struct RunResult {
  std::vector<BenchRow> rows;
  std::string summary;  ///< rendered in the configured format
  std::vector<std::filesystem::path> files;

  /// 0 when every method converged, 2 otherwise.
  int exit_code() const {
    for (const auto& r : rows) {
      if (r.status != SolveStatus::Converged) return 2;
    }
    return 0;
  }
};

inline QmeProblem load(const RunConfig& cfg) {
  if (const auto* ex = std::get_if<ExampleProblem>(&cfg.problem)) {
    if (ex->n < 2) throw ParseError("--n must be at least 2");
    if (ex->example == 1) return gen_example1(ex->n);
    if (ex->example == 2) return gen_example2(ex->n);
    throw ParseError("--example must be 1 or 2");
  }
  return load_problem(std::get<std::filesystem::path>(cfg.problem));
}

/// Method, Iter, CPU, NRes columns; NRes as d.dddde-xx.
inline std::string render_table(const std::vector<BenchRow>& rows) {
  std::size_t name_w = 6;
  for (const auto& r : rows) name_w = std::max(name_w, r.method.size());
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s  %6s  %10s  %12s\n", static_cast<int>(name_w), "Method",
                "Iter", "CPU", "NRes");
  os << line;
  os << std::string(name_w + 2 + 6 + 2 + 10 + 2 + 12, '-') << '\n';
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-*s  %6d  %10.4f  %12.4e", static_cast<int>(name_w),
                  r.method.c_str(), r.iter, r.cpu_seconds, r.final_nres);
    os << line;
    if (r.status != SolveStatus::Converged) os << "  (" << to_string(r.status) << ')';
    os << '\n';
  }
  return os.str();
}

inline std::string render_json(const std::vector<BenchRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"method", r.method},
                   {"iter", r.iter},
                   {"cpu_seconds", r.cpu_seconds},
                   {"final_nres", r.final_nres},
                   {"status", to_string(r.status)}});
  }
  return arr.dump(2) + "\n";
}

inline std::string render_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "method,iter,cpu_seconds,final_nres,status\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.iter << ',' << format_exact(r.cpu_seconds) << ','
       << format_exact(r.final_nres) << ',' << to_string(r.status) << '\n';
  }
  return os.str();
}

inline SolveReport run_method(const QmeProblem& p, Method m, const SdaOptions& opt) {
  switch (m) {
    case Method::SDA: return sda_solve(p, opt);
    case Method::BL: return fp_solve(p, FixedPointKind::BL, opt);
    case Method::BLL: return fp_solve(p, FixedPointKind::BLL, opt);
  }
  throw Error("run_method: unknown method");
}

/// Runs every configured method in sequence. Per method, writes the
/// convergence history to "<output>.<method>.csv" (and the full report to
/// "<output>.<method>.json" in json format); the summary goes to
/// "<output>.summary.<txt|json|csv>". Input problems raise ParseError or
/// ValidationError before any solver runs.
inline RunResult run(const RunConfig& cfg) {
  if (cfg.methods.empty()) throw ParseError("no methods selected");
  if (!(cfg.tol > 0.0) || cfg.kmax < 1) throw ParseError("need tol > 0 and kmax >= 1");
  const QmeProblem p = load(cfg);

  SdaOptions opt;
  opt.tol = cfg.tol;
  opt.kmax = cfg.kmax;

  RunResult result;
  auto open = [&](const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    result.files.push_back(path);
    return out;
  };

  for (Method m : cfg.methods) {
    const auto t0 = std::chrono::steady_clock::now();
    const SolveReport report = run_method(p, m, opt);
    const auto t1 = std::chrono::steady_clock::now();

    result.rows.push_back({display_name(m), report.iterations,
                           std::chrono::duration<double>(t1 - t0).count(), report.final_nres,
                           report.status});

    auto csv = open(cfg.output + "." + key(m) + ".csv");
    write_history_csv(csv, report);
    if (cfg.format == Format::Json) {
      auto js = open(cfg.output + "." + key(m) + ".json");
      js << report_to_json(report).dump(2) << '\n';
    }
  }

  const char* ext = "txt";
  switch (cfg.format) {
    case Format::Table: result.summary = render_table(result.rows); break;
    case Format::Json: result.summary = render_json(result.rows); ext = "json"; break;
    case Format::Csv: result.summary = render_csv(result.rows); ext = "csv"; break;
  }
  auto summary = open(cfg.output + ".summary." + ext);
  summary << result.summary;
  return result;
}

}  // namespace qme::bench

#endif  // QME_BENCH_HPP
