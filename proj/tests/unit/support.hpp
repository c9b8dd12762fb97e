#pragma once

#include <random>
#include <string>
#include <vector>

#include "gci/minors.hpp"
#include "gci/polynomial.hpp"

namespace gci::test {

inline Polynomial var(const std::string& name) { return Polynomial::variable(name); }

// A A^T + I for a random integer matrix A with entries in [-range, range].
inline RationalCovariance random_pd(const GroundSet& g, std::mt19937_64& rng, int range = 3) {
  const std::size_t n = g.size();
  std::uniform_int_distribution<int> d(-range, range);
  std::vector<Rat> a(n * n);
  for (auto& x : a) x = d(rng);
  std::vector<Rat> s(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      Rat acc = r == c ? 1 : 0;
      for (std::size_t t = 0; t < n; ++t) acc += a[r * n + t] * a[c * n + t];
      s[r * n + c] = acc;
    }
  }
  return RationalCovariance(g, std::move(s));
}

inline RationalCovariance rational_matrix(const GroundSet& g, const std::vector<std::string>& entries) {
  std::vector<Rat> v;
  for (const auto& e : entries) v.push_back(parse_rat(e));
  return RationalCovariance(g, std::move(v));
}

inline RationalCovariance indefinite_matrix() {
  return rational_matrix(GroundSet::standard(4), {"1", "4", "-2", "-8", "4", "1", "-2", "-2", "-2", "-2", "1", "1/4",
                                                  "-8", "-2", "1/4", "1"});
}

inline RationalCovariance not1_witness() {
  return rational_matrix(GroundSet::standard(3), {"1", "0", "1/2", "0", "1", "1/2", "1/2", "1/2", "1"});
}

inline RationalCovariance not2_witness() {
  return rational_matrix(GroundSet::standard(3), {"1", "1/4", "1/2", "1/4", "1", "1/2", "1/2", "1/2", "1"});
}

// Sparse polynomial in the given variables with small integer coefficients.
inline Polynomial random_polynomial(const std::vector<std::string>& vars, std::mt19937_64& rng, int terms = 4,
                                    int max_exp = 2) {
  std::uniform_int_distribution<int> coeff(-5, 5), exp(0, max_exp);
  Polynomial p;
  for (int t = 0; t < terms; ++t) {
    std::vector<Monomial::Factor> f;
    for (const auto& v : vars) f.emplace_back(v, static_cast<std::uint32_t>(exp(rng)));
    p += Polynomial::term(Rat(coeff(rng)), Monomial(std::move(f)));
  }
  return p;
}

}  // namespace gci::test
