#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jacalg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold for its input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint32_t kDefaultModulus = 32003;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Arithmetic in Z/p. Elements are canonical residues in [0, p).
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p = kDefaultModulus) : p_(p) {
    if (p >= (1u << 31) || !is_prime(p)) {
      throw PreconditionError("field modulus " + std::to_string(p) + " is not a prime below 2^31");
    }
  }

  std::uint32_t modulus() const { return p_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1 % p_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw Error("inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
  }
  std::uint32_t from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint32_t>(r);
  }
  // Symmetric representative in (-p/2, p/2], for display.
  std::int64_t to_signed(std::uint32_t a) const {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
  }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_;
};

// Dense row-major matrix over F_p. Modules act on row vectors, so a map
// V -> W with dim V = m, dim W = n is an m x n matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<std::uint32_t> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const std::uint32_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool is_zero() const {
    for (auto v : data_) {
      if (v) return false;
    }
    return true;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> data_;
};

inline Matrix multiply(const PrimeField& F, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix shape mismatch in multiply");
  Matrix c(a.rows(), b.cols());
  const std::uint64_t p = F.modulus();
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      std::uint64_t x = a(i, k);
      if (!x) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] = (acc[j] + x * brow[j]) % p;
    }
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = static_cast<std::uint32_t>(acc[j]);
  }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline Matrix subtract(const PrimeField& F, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("matrix shape mismatch in subtract");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = F.sub(a(i, j), b(i, j));
  return c;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw Error("matrix shape mismatch in vstack");
  Matrix c(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, j) = b(i, j);
  return c;
}

struct Echelon {
  Matrix reduced;                    // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;   // pivot column of each row
};

inline Echelon rref(const PrimeField& F, Matrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
    std::uint32_t s = F.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = F.mul(m(r, j), s);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      std::uint32_t f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = F.sub(m(i, j), F.mul(f, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix reduced(r, m.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) reduced(i, j) = m(i, j);
  return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const PrimeField& F, const Matrix& m) { return rref(F, m).pivots.size(); }

// Basis (as rows) of {u : A u = 0}.
inline Matrix nullspace(const PrimeField& F, const Matrix& a) {
  Echelon e = rref(F, a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix basis(free_cols.size(), a.cols());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t fc = free_cols[k];
    basis(k, fc) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(k, e.pivots[r]) = F.neg(e.reduced(r, fc));
  }
  return basis;
}

// Basis (as rows) of {x : x A = 0}.
inline Matrix left_nullspace(const PrimeField& F, const Matrix& a) { return nullspace(F, transpose(a)); }

inline std::optional<Matrix> inverse(const PrimeField& F, const Matrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  const std::size_t n = a.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = rref(F, std::move(aug));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

// Solves X B = V for X, where the rows of B are linearly independent.
// Throws if some row of V lies outside the row space of B.
inline Matrix solve_left(const PrimeField& F, const Matrix& b, const Matrix& v) {
  if (b.rows() == 0) {
    if (!v.is_zero()) throw Error("solve_left: vector outside an empty row space");
    return Matrix(v.rows(), 0);
  }
  if (b.cols() != v.cols()) throw Error("solve_left: shape mismatch");
  // Columns of [B^T | V^T]: solving B^T x = v^T for each row v.
  const std::size_t k = b.rows();
  Matrix aug(b.cols(), k + v.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < k; ++i) aug(j, i) = b(i, j);
    for (std::size_t i = 0; i < v.rows(); ++i) aug(j, k + i) = v(i, j);
  }
  Echelon e = rref(F, std::move(aug));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= k) throw Error("solve_left: vector outside the row space");
    if (e.pivots[r] != r) throw Error("solve_left: basis rows are dependent");
  }
  if (e.pivots.size() != k) throw Error("solve_left: basis rows are dependent");
  Matrix x(v.rows(), k);
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t r = 0; r < k; ++r) x(i, r) = e.reduced(r, k + i);
  return x;
}

// Exact integer determinant by fraction-free (Bareiss) elimination.
inline std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[s], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * static_cast<std::int64_t>(a[n - 1][n - 1]);
}

}  // namespace jacalg
