#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gci/errors.hpp"
#include "gci/rational.hpp"

namespace gci {

// Row-major square matrix over a commutative ring T. Row r is paired with
// column r; the sign of the determinant is fixed by that pairing.
template <class T>
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<T> a;

  const T& operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
  T& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
};

// Cofactor expansion along rows, memoized over the remaining column set:
// O(n 2^n) ring multiplications. Uses only ring operations, so it works for
// polynomial and number-field entries alike.
template <class T>
T laplace_determinant(const SquareMatrix<T>& m, const T& one) {
  if (m.a.size() != m.n * m.n) throw DomainError("determinant of a non-square matrix");
  if (m.n == 0) return one;
  if (m.n > 30) throw DomainError("cofactor expansion limited to 30x30");
  std::unordered_map<std::uint32_t, T> memo;
  const std::uint32_t full = m.n == 32 ? ~0u : ((1u << m.n) - 1u);

  auto rec = [&](auto&& self, std::size_t row, std::uint32_t cols) -> T {
    if (row == m.n) return one;
    if (row == m.n - 1) {
      for (std::size_t c = 0; c < m.n; ++c) {
        if (cols & (1u << c)) return m(row, c);
      }
    }
    if (auto it = memo.find(cols); it != memo.end()) return it->second;
    T acc = T(one - one);
    bool negative = false;
    for (std::size_t c = 0; c < m.n; ++c) {
      if (!(cols & (1u << c))) continue;
      T term = m(row, c) * self(self, row + 1, cols & ~(1u << c));
      if (negative) {
        acc = acc - term;
      } else {
        acc = acc + term;
      }
      negative = !negative;
    }
    memo.emplace(cols, acc);
    return acc;
  };
  return rec(rec, 0, full);
}

// Fraction-free Gaussian elimination with row pivoting. T must be an
// integral domain in which the Bareiss divisions are exact (e.g. Rat).
template <class T>
T bareiss_determinant(SquareMatrix<T> m, const T& one) {
  if (m.a.size() != m.n * m.n) throw DomainError("determinant of a non-square matrix");
  if (m.n == 0) return one;
  const T zero = T(one - one);
  bool negate = false;
  T prev = one;
  for (std::size_t k = 0; k + 1 < m.n; ++k) {
    if (m(k, k) == zero) {
      std::size_t pivot = k + 1;
      while (pivot < m.n && m(pivot, k) == zero) ++pivot;
      if (pivot == m.n) return zero;
      for (std::size_t c = 0; c < m.n; ++c) std::swap(m(k, c), m(pivot, c));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < m.n; ++i) {
      for (std::size_t j = k + 1; j < m.n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  T det = m(m.n - 1, m.n - 1);
  return negate ? T(zero - det) : det;
}

// Bareiss for rationals, cofactor expansion for everything else.
template <class T>
T determinant(const SquareMatrix<T>& m, const T& one) {
  if constexpr (std::is_same_v<T, Rat>) {
    return bareiss_determinant(m, one);
  } else {
    return laplace_determinant(m, one);
  }
}

}  // namespace gci
