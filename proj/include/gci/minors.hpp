#pragma once

#include <cstddef>
#include <map>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gci/determinant.hpp"
#include "gci/errors.hpp"
#include "gci/polynomial.hpp"
#include "gci/rational.hpp"

namespace gci {

using Label = std::string;
using LabelSet = std::vector<Label>;

// Ordered, duplicate-free list of labels. The order fixes variable naming and
// the enumeration order of conditioning sets; no value depends on it.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<Label> labels);

  // "i", "j", "k", "l", ... continuing through the alphabet.
  static GroundSet standard(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const Label& operator[](std::size_t idx) const { return labels_[idx]; }
  bool contains(std::string_view label) const;
  // Throws DomainError for labels outside the ground set.
  std::size_t index(std::string_view label) const;

  // Validates membership and sorts into ground-set order; rejects duplicates.
  LabelSet canonical(LabelSet labels) const;
  // Labels not in `exclude`, in ground-set order.
  LabelSet complement(const LabelSet& exclude) const;
  // All subsets of `base` (in ground-set order), smallest first.
  std::vector<LabelSet> subsets(const LabelSet& base) const;

  friend bool operator==(const GroundSet& a, const GroundSet& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<Label> labels_;
  std::unordered_map<Label, std::size_t> index_;
};

std::string concat_labels(const LabelSet& labels);

// Symmetric matrix indexed by a ground set; entries stored in full.
template <class T>
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  // Row-major n*n entries; throws FormatError unless entry(a,b) == entry(b,a).
  SymmetricMatrix(GroundSet ground, std::vector<T> entries) : ground_(std::move(ground)), entries_(std::move(entries)) {
    const std::size_t n = ground_.size();
    if (entries_.size() != n * n) throw FormatError("matrix entry count does not match ground set");
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r + 1; c < n; ++c) {
        if (!(entries_[r * n + c] == entries_[c * n + r])) {
          throw FormatError("matrix is not symmetric at (" + ground_[r] + "," + ground_[c] + ")");
        }
      }
    }
  }

  const GroundSet& ground_set() const noexcept { return ground_; }
  std::size_t size() const noexcept { return ground_.size(); }
  const T& operator()(std::size_t r, std::size_t c) const { return entries_[r * ground_.size() + c]; }
  const T& at(std::string_view a, std::string_view b) const { return (*this)(ground_.index(a), ground_.index(b)); }
  const std::vector<T>& entries() const noexcept { return entries_; }

 private:
  GroundSet ground_;
  std::vector<T> entries_;
};

using RationalCovariance = SymmetricMatrix<Rat>;
using SymbolicCovariance = SymmetricMatrix<Polynomial>;

// Multiplicative identity in the ring of `like`.
inline Rat ring_one(const Rat&) { return Rat(1); }
inline Polynomial ring_one(const Polynomial&) { return Polynomial(Rat(1)); }

// s_a_b with a before b in ground-set order.
std::string sigma_name(const GroundSet& ground, std::string_view a, std::string_view b);
SymbolicCovariance symbolic_covariance(const GroundSet& ground);
RationalCovariance identity_covariance(const GroundSet& ground);

// det of the submatrix with rows `rows` and columns `cols`, the k-th row
// label paired with the k-th column label.
template <class T>
T submatrix_determinant(const SymmetricMatrix<T>& sigma, const LabelSet& rows, const LabelSet& cols, const T& one) {
  if (rows.size() != cols.size()) throw DomainError("non-square submatrix");
  SquareMatrix<T> m;
  m.n = rows.size();
  m.a.reserve(m.n * m.n);
  for (const auto& r : rows) {
    const std::size_t ri = sigma.ground_set().index(r);
    for (const auto& c : cols) m.a.push_back(sigma(ri, sigma.ground_set().index(c)));
  }
  return determinant(m, one);
}

template <class T>
T unit_of(const SymmetricMatrix<T>& sigma) {
  if (sigma.size() == 0) {
    if constexpr (std::is_constructible_v<T, long>) {
      return T(1L);
    } else {
      throw DomainError("empty matrix has no ring context");
    }
  }
  return ring_one(sigma(0, 0));
}

// [K : Sigma]; each k in K paired with itself.
template <class T>
T principal_minor(const SymmetricMatrix<T>& sigma, const LabelSet& K) {
  const LabelSet k = sigma.ground_set().canonical(K);
  return submatrix_determinant(sigma, k, k, unit_of(sigma));
}

// [ij|K : Sigma]: rows iK, columns jK, row i paired with column j.
template <class T>
T almost_principal_minor(const SymmetricMatrix<T>& sigma, const Label& i, const Label& j, const LabelSet& K) {
  const GroundSet& g = sigma.ground_set();
  g.index(i);
  g.index(j);
  if (i == j) throw DomainError("almost-principal minor needs i != j");
  LabelSet k = g.canonical(K);
  for (const auto& x : k) {
    if (x == i || x == j) throw DomainError("conditioning set overlaps {" + i + "," + j + "}");
  }
  LabelSet rows{i};
  LabelSet cols{j};
  rows.insert(rows.end(), k.begin(), k.end());
  cols.insert(cols.end(), k.begin(), k.end());
  return submatrix_determinant(sigma, rows, cols, unit_of(sigma));
}

// Submatrix on `keep` (the marginal covariance).
RationalCovariance marginal(const RationalCovariance& sigma, const LabelSet& keep);
// Schur complement Sigma/Sigma_mm on N \ {m} (the conditional covariance).
RationalCovariance condition_on(const RationalCovariance& sigma, const Label& m);

// ------------------------------------------------------------ bracket ring

struct Bracket {
  enum class Kind { principal, almost_principal };
  Kind kind = Kind::principal;
  Label i, j;  // almost-principal only
  LabelSet K;
};

// "p_<K>" with K in ground-set order ("p_" for the empty bracket).
std::string principal_bracket(const GroundSet& ground, const LabelSet& K);
// "a_<i>_<j>_<K>" with i before j in ground-set order.
std::string apm_bracket(const GroundSet& ground, const Label& i, const Label& j, const LabelSet& K);
Polynomial principal_bracket_var(const GroundSet& ground, const LabelSet& K);
Polynomial apm_bracket_var(const GroundSet& ground, const Label& i, const Label& j, const LabelSet& K);

// Parses a bracket variable name against the ground set. Multi-character
// labels are split greedily with backtracking; ambiguous splits are rejected.
// Throws FormatError on malformed names.
Bracket parse_bracket(const GroundSet& ground, std::string_view name);

// Checks every variable of f is a well-formed bracket (FormatError otherwise).
void validate_bracket_polynomial(const Polynomial& f, const GroundSet& ground);

// Ring homomorphism R_N -> Q[Sigma]: p_K -> [K:Sigma], a_i_j_K -> [ij|K:Sigma], p_ -> 1.
Polynomial bracket_eval(const Polynomial& f, const GroundSet& ground);
// Same homomorphism into a concrete matrix.
Rat bracket_eval(const Polynomial& f, const RationalCovariance& sigma);

// [kL][ij|L] - [L][ij|kL] - [ik|L][jk|L]
Polynomial matus_residual(const GroundSet& ground, const Label& i, const Label& j, const Label& k, const LabelSet& L);

// True iff bracket_eval(f) is the zero polynomial (the dehomogenized kernel).
bool in_eval_kernel(const Polynomial& f, const GroundSet& ground);

// ------------------------------------------------------------------- JSON

// {"ground_set": [...], "entries": [["1","1/4",...], ...]}
RationalCovariance rational_covariance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RationalCovariance& sigma);
GroundSet ground_set_from_json(const nlohmann::json& j);

}  // namespace gci
