#ifndef QME_MATRIX_HPP
#define QME_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qme/errors.hpp"

namespace qme {

namespace detail {

inline void require_finite(std::span<const double> values, const char* what) {
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw Error(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace detail

/// Dense real vector. Entries are finite on construction.
class Vector {
 public:
  Vector() = default;

  explicit Vector(std::size_t len, double fill = 0.0) : data_(len, fill) {
    detail::require_finite(data_, "Vector");
  }

  explicit Vector(std::vector<double> values) : data_(std::move(values)) {
    detail::require_finite(data_, "Vector");
  }

  Vector(std::initializer_list<double> values) : data_(values) {
    detail::require_finite(data_, "Vector");
  }

  static Vector ones(std::size_t len) { return Vector(len, 1.0); }

  std::size_t size() const noexcept { return data_.size(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

/// Dense real matrix in row-major storage.
///
/// Constructors reject non-finite entries. Arithmetic on finite operands is
/// assumed not to overflow for the problem scales this library targets.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    detail::require_finite(data_, "Matrix");
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
      : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionMismatchError("Matrix: entry count does not match shape");
    }
    detail::require_finite(data_, "Matrix");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        throw DimensionMismatchError("Matrix: ragged initializer");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
    detail::require_finite(data_, "Matrix");
  }

  static Matrix zeros(std::size_t n) { return Matrix(n, n); }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    detail::require_finite(m.data_, "Matrix");
    return m;
  }

  /// Tridiagonal n x n matrix with constant sub/main/super diagonals.
  static Matrix tridiagonal(std::size_t n, double sub, double diag, double super) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = diag;
      if (i > 0) m(i, i - 1) = sub;
      if (i + 1 < n) m(i, i + 1) = super;
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  Matrix& operator*=(double s) noexcept {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionMismatchError("operator*: inner dimensions differ");
    }
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      double* ci = c.data_.data() + i * c.cols_;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        const double* bk = b.data_.data() + k * b.cols_;
        for (std::size_t j = 0; j < b.cols_; ++j) ci[j] += aik * bk[j];
      }
    }
    return c;
  }

  friend Vector operator*(const Matrix& a, const Vector& x) {
    if (a.cols_ != x.size()) {
      throw DimensionMismatchError("operator*: matrix-vector dimensions differ");
    }
    std::vector<double> y(a.rows_, 0.0);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
      y[i] = s;
    }
    return Vector(std::move(y));
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same_shape(const Matrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionMismatchError(std::string(what) + ": shapes differ");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix abs(Matrix a) {
  for (double& x : a.values()) x = std::fabs(x);
  return a;
}

/// Column vector view of v as an n x 1 matrix.
inline Matrix as_column(const Vector& v) {
  return Matrix(v.size(), 1, std::vector<double>(v.values().begin(), v.values().end()));
}

/// Maximum absolute row sum.
inline double inf_norm(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double x : a.row(i)) s += std::fabs(x);
    best = std::max(best, s);
  }
  return best;
}

inline double inf_norm(const Vector& v) {
  double best = 0.0;
  for (double x : v.values()) best = std::max(best, std::fabs(x));
  return best;
}

enum class Relation { GE0, LE0, GT0, LT0 };

/// Entrywise sign test with an absolute tolerance.
/// GE0: x >= -tol, GT0: x > tol, LE0: x <= tol, LT0: x < -tol.
inline bool is_entrywise(std::span<const double> values, Relation rel, double tol) {
  auto ok = [rel, tol](double x) {
    switch (rel) {
      case Relation::GE0: return x >= -tol;
      case Relation::GT0: return x > tol;
      case Relation::LE0: return x <= tol;
      case Relation::LT0: return x < -tol;
    }
    return false;
  };
  return std::all_of(values.begin(), values.end(), ok);
}

inline bool is_entrywise(const Matrix& a, Relation rel, double tol) {
  return is_entrywise(a.values(), rel, tol);
}

inline bool is_entrywise(const Vector& v, Relation rel, double tol) {
  return is_entrywise(v.values(), rel, tol);
}

/// Largest entry of a - b (positive when a exceeds b somewhere).
inline double max_excess(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatchError("max_excess: shapes differ");
  }
  double worst = -std::numeric_limits<double>::infinity();
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) worst = std::max(worst, av[i] - bv[i]);
  return worst;
}

// Matrix text format: "rows cols" then one line per row, whitespace separated.

inline void write_matrix(std::ostream& os, const Matrix& a) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << a(i, j);
    }
    out << '\n';
  }
  os << out.str();
}

inline std::string to_text(const Matrix& a) {
  std::ostringstream os;
  write_matrix(os, a);
  return os.str();
}

inline Matrix read_matrix(std::istream& is) {
  long long rows = 0;
  long long cols = 0;
  if (!(is >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw ParseError("matrix text: expected positive 'rows cols' header");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(rows * cols));
  std::string token;
  for (long long i = 0; i < rows * cols; ++i) {
    if (!(is >> token)) {
      throw ParseError("matrix text: expected " + std::to_string(rows * cols) +
                       " entries, got " + std::to_string(i));
    }
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(token, &used);
    } catch (const std::exception&) {
      throw ParseError("matrix text: bad number '" + token + "'");
    }
    if (used != token.size() || !std::isfinite(x)) {
      throw ParseError("matrix text: bad number '" + token + "'");
    }
    values.push_back(x);
  }
  if (is >> token) {
    throw ParseError("matrix text: trailing data '" + token + "'");
  }
  return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                std::move(values));
}

inline Matrix from_text(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

inline Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

inline void save_matrix(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file '" + path + "'");
  write_matrix(out, a);
}

}  // namespace qme

#endif  // QME_MATRIX_HPP
