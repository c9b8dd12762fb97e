#pragma once

#include <compare>
#include <map>
#include <json.hpp>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gci/minors.hpp"

namespace gci {

// Elementary statement (i,j|K): X_i and X_j independent given X_K.
// Normalized so that i < j (string order) and K is sorted and duplicate-free;
// equality is therefore order-free in the pair and in K.
struct CIStatement {
  Label i, j;
  LabelSet K;

  // Throws DomainError when i == j or K meets {i,j}.
  static CIStatement make(Label i, Label j, LabelSet K = {});

  bool mentions(const Label& l) const;
  friend auto operator<=>(const CIStatement&, const CIStatement&) = default;
  friend bool operator==(const CIStatement&, const CIStatement&) = default;
};

// "[i,j|k,l]", labels in ground-set order when a ground set is given.
std::string to_string(const CIStatement& s);
std::string to_string(const CIStatement& s, const GroundSet& ground);
void validate(const CIStatement& s, const GroundSet& ground);

// ["i","j",["k","l"]]
nlohmann::json to_json(const CIStatement& s, const GroundSet& ground);
CIStatement statement_from_json(const nlohmann::json& j);

// All n(n-1)/2 * 2^(n-2) elementary statements.
std::vector<CIStatement> all_statements(const GroundSet& ground);

// Conjunction of antecedents implies disjunction of consequents.
struct InferenceFormula {
  std::vector<CIStatement> antecedents;
  std::vector<CIStatement> consequents;

  // Drops repeated statements, keeping first occurrences.
  void normalize();
  friend bool operator==(const InferenceFormula&, const InferenceFormula&) = default;
};

std::string to_string(const InferenceFormula& phi, const GroundSet& ground);

// formula := conj "=>" disj ; conj := stmt ("&" stmt)* ;
// disj := stmt ("|" stmt)* ; stmt := "[" label "," label "|" (label ("," label)*)? "]"
// Throws ParseError (with position) on syntax errors, i = j, K overlapping
// {i,j}, or labels outside the ground set.
InferenceFormula parse_formula(std::string_view text, const GroundSet& ground);
// Labels of a formula text in order of first appearance.
GroundSet infer_ground_set(std::string_view text);

struct CIModelSpec {
  GroundSet ground;
  std::vector<CIStatement> independences;
  std::vector<CIStatement> dependences;

  // Throws DomainError on malformed statements or overlapping lists.
  void validate() const;
};

// M(phi): antecedents must vanish, consequents must not.
CIModelSpec counterexample_model(const InferenceFormula& phi, const GroundSet& ground);
CIModelSpec model_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CIModelSpec& spec);

struct CIStructure {
  GroundSet ground;
  std::set<CIStatement> statements;

  bool contains(const CIStatement& s) const { return statements.count(s) > 0; }
  friend bool operator==(const CIStructure&, const CIStructure&) = default;
};

// {"ground_set": [...], "statements": [["i","j",["k"]], ...]}
CIStructure structure_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CIStructure& g);

// ---------------------------------------------------------- exact semantics

inline bool exact_is_zero(const Rat& r) { return r == 0; }

// All principal minors positive (every nonempty K, not just leading ones).
template <class T>
bool is_positive_definite(const SymmetricMatrix<T>& sigma) {
  const auto& g = sigma.ground_set();
  for (const auto& K : g.subsets(g.labels())) {
    if (K.empty()) continue;
    if (sign(principal_minor(sigma, K)) <= 0) return false;
  }
  return true;
}

template <class T>
bool ci_holds(const SymmetricMatrix<T>& sigma, const CIStatement& s) {
  validate(s, sigma.ground_set());
  return exact_is_zero(almost_principal_minor(sigma, s.i, s.j, s.K));
}

enum class Classification { not_applicable, witnesses_conclusion, counterexample };

std::string to_string(Classification c);

// Throws DomainError when sigma is not positive definite.
template <class T>
Classification classify_against_formula(const SymmetricMatrix<T>& sigma, const InferenceFormula& phi) {
  if (!is_positive_definite(sigma)) throw DomainError("matrix is not positive definite");
  for (const auto& s : phi.antecedents) {
    if (!ci_holds(sigma, s)) return Classification::not_applicable;
  }
  for (const auto& s : phi.consequents) {
    if (ci_holds(sigma, s)) return Classification::witnesses_conclusion;
  }
  return Classification::counterexample;
}

template <class T>
CIStructure structure_of(const SymmetricMatrix<T>& sigma) {
  CIStructure g{sigma.ground_set(), {}};
  for (const auto& s : all_statements(sigma.ground_set())) {
    if (ci_holds(sigma, s)) g.statements.insert(s);
  }
  return g;
}

// ----------------------------------------------------- symmetry and minors

using Permutation = std::map<Label, Label>;

// Throws DomainError unless pi is a bijection of the ground set.
void validate_permutation(const Permutation& pi, const GroundSet& ground);
Permutation inverse(const Permutation& pi);

CIStatement apply_permutation(const CIStatement& s, const Permutation& pi);
InferenceFormula apply_permutation(const InferenceFormula& phi, const Permutation& pi);
CIStructure apply_permutation(const CIStructure& g, const Permutation& pi);
// Sigma'[pi(a)][pi(b)] = Sigma[a][b], over the same ground set.
RationalCovariance apply_permutation(const RationalCovariance& sigma, const Permutation& pi);

// Statements not mentioning m, over N \ {m}.
CIStructure structure_delete(const CIStructure& g, const Label& m);
// (ij|K) over N \ {m} holds iff (ij|Km) is in g.
CIStructure structure_contract(const CIStructure& g, const Label& m);

}  // namespace gci
