// Exact integer matrix algebra: Smith normal form, integer solvability,
// cokernel invariants, matrix powers.

#ifndef MTSPLIT_INTLINALG_HPP_
#define MTSPLIT_INTLINALG_HPP_

#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace mtsplit {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

inline Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_)
        throw InvalidArgument("ragged matrix literal");
      for (long x : r)
        a_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j)
      return;
    for (std::size_t c = 0; c < cols_; ++c)
      std::swap((*this)(i, c), (*this)(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j)
      return;
    for (std::size_t r = 0; r < rows_; ++r)
      std::swap((*this)(r, i), (*this)(r, j));
  }
  /// row_dst += f * row_src
  void add_row(std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t c = 0; c < cols_; ++c)
      (*this)(dst, c) += f * (*this)(src, c);
  }
  void add_col(std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t r = 0; r < rows_; ++r)
      (*this)(r, dst) += f * (*this)(r, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c)
      (*this)(i, c) = -(*this)(i, c);
  }

  bool operator==(const IntMatrix&) const = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> a_;
};

inline IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols() != y.rows())
    throw InvalidArgument("matrix product dimension mismatch");
  IntMatrix r(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      if (x(i, k) == 0)
        continue;
      for (std::size_t j = 0; j < y.cols(); ++j)
        r(i, j) += x(i, k) * y(k, j);
    }
  return r;
}

inline IntVector operator*(const IntMatrix& x, const IntVector& v) {
  if (x.cols() != v.size())
    throw InvalidArgument("matrix-vector dimension mismatch");
  IntVector r(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      r[i] += x(i, j) * v[j];
  return r;
}

inline IntMatrix operator+(IntMatrix x, const IntMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw InvalidArgument("matrix sum dimension mismatch");
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      x(i, j) += y(i, j);
  return x;
}

inline IntMatrix operator-(IntMatrix x, const IntMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw InvalidArgument("matrix difference dimension mismatch");
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      x(i, j) -= y(i, j);
  return x;
}

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(IntMatrix m) {
  if (!m.is_square())
    throw InvalidArgument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0)
    return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0)
        ++p;
      if (p == n)
        return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline IntMatrix mat_power(const IntMatrix& a, unsigned long k) {
  if (!a.is_square())
    throw InvalidArgument("power of a non-square matrix");
  IntMatrix result = IntMatrix::identity(a.rows());
  IntMatrix base = a;
  while (k) {
    if (k & 1)
      result = result * base;
    k >>= 1;
    if (k)
      base = base * base;
  }
  return result;
}

/// S_k = I + A + ... + A^{k-1}; S_0 = 0.
inline IntMatrix mat_sum_powers(const IntMatrix& a, unsigned long k) {
  if (!a.is_square())
    throw InvalidArgument("power sum of a non-square matrix");
  IntMatrix sum(a.rows(), a.cols());
  IntMatrix p = IntMatrix::identity(a.rows());
  for (unsigned long j = 0; j < k; ++j) {
    sum = sum + p;
    p = p * a;
  }
  return sum;
}

struct SmithForm {
  IntMatrix U, D, V;  // U * A * V == D
};

/// Smith normal form by unimodular row and column operations.
///
/// Pivot: smallest nonzero |entry| of the active block, first in row-major
/// order on ties. The diagonal of D is nonnegative with d_1 | d_2 | ...
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t r = a.rows(), c = a.cols();
  SmithForm f{IntMatrix::identity(r), a, IntMatrix::identity(c)};
  IntMatrix& D = f.D;
  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    for (;;) {
      bool found = false;
      std::size_t pi = t, pj = t;
      Integer best;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (D(i, j) != 0 && (!found || abs_value(D(i, j)) < best)) {
            found = true;
            best = abs_value(D(i, j));
            pi = i;
            pj = j;
          }
      if (!found)
        return f;
      D.swap_rows(t, pi);
      f.U.swap_rows(t, pi);
      D.swap_cols(t, pj);
      f.V.swap_cols(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        Integer q = D(i, t) / D(t, t);
        if (q != 0) {
          D.add_row(i, t, -q);
          f.U.add_row(i, t, -q);
        }
        dirty = dirty || D(i, t) != 0;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        Integer q = D(t, j) / D(t, t);
        if (q != 0) {
          D.add_col(j, t, -q);
          f.V.add_col(j, t, -q);
        }
        dirty = dirty || D(t, j) != 0;
      }
      if (dirty)
        continue;

      bool fixed = false;
      for (std::size_t i = t + 1; i < r && !fixed; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (D(i, j) % D(t, t) != 0) {
            D.add_row(t, i, 1);
            f.U.add_row(t, i, 1);
            fixed = true;
            break;
          }
      if (!fixed)
        break;
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      f.U.negate_row(t);
    }
  }
  return f;
}

/// Some integer y with A y = b, or nullopt when b is outside the image lattice.
inline std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.rows())
    throw InvalidArgument("solve_integer: dimension mismatch");
  SmithForm f = smith_normal_form(a);
  IntVector rhs = f.U * b;
  IntVector z(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer d = i < a.cols() ? f.D(i, i) : Integer(0);
    if (d == 0) {
      if (rhs[i] != 0)
        return std::nullopt;
    } else {
      if (rhs[i] % d != 0)
        return std::nullopt;
      z[i] = rhs[i] / d;
    }
  }
  return f.V * z;
}

/// Invariants of the cokernel Z^rows / A Z^cols.
struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // elementary divisors > 1, in divisibility order
  bool operator==(const AbelianInvariants&) const = default;
};

inline AbelianInvariants cokernel_invariants(const IntMatrix& a) {
  SmithForm f = smith_normal_form(a);
  AbelianInvariants inv;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) {
    const Integer& d = f.D(i, i);
    if (d != 0)
      ++rank;
    if (d > 1)
      inv.torsion.push_back(d);
  }
  inv.free_rank = a.rows() - rank;
  return inv;
}

/// "Z^2 + Z/6", "Z", "0".
inline std::string format_invariants(const AbelianInvariants& inv) {
  std::ostringstream out;
  bool first = true;
  if (inv.free_rank > 0) {
    out << 'Z';
    if (inv.free_rank > 1)
      out << '^' << inv.free_rank;
    first = false;
  }
  for (const Integer& d : inv.torsion) {
    if (!first)
      out << " + ";
    out << "Z/" << d;
    first = false;
  }
  if (first)
    out << '0';
  return out.str();
}

/// Row-per-line, space-separated.
inline std::string format_matrix(const IntMatrix& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
  return out.str();
}

}  // namespace mtsplit

#endif  // MTSPLIT_INTLINALG_HPP_
