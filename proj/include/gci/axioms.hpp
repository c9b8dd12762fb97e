#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gci/ci.hpp"

namespace gci {

// A formula over schematic labels. It is instantiated by every injective
// relabeling into a ground set and, when extend_conditioning is set, by
// adding any set M of unused labels to every conditioning set.
struct InferenceRule {
  std::string name;
  GroundSet schema;  // the schematic labels, in order of first appearance
  InferenceFormula formula;
  bool extend_conditioning = true;

  // Parses a DSL formula; throws ParseError.
  static InferenceRule from_text(std::string name, std::string_view text, bool extend_conditioning = true);

  bool is_disjunctive() const noexcept { return formula.consequents.size() > 1; }
};

struct RuleInstance {
  std::string rule;
  Permutation assignment;  // schematic label -> ground-set label (partial map)
  LabelSet extension;      // M, added to every conditioning set
  InferenceFormula formula;
};

std::string describe(const RuleInstance& inst, const GroundSet& ground);

// Every instantiation of `rule` over `ground`, in a deterministic order.
std::vector<RuleInstance> instantiate(const InferenceRule& rule, const GroundSet& ground);

class RuleSet {
 public:
  RuleSet() = default;

  // SEMIGRAPHOID_HALF and WEAK_TRANSITIVITY_GENERAL.
  static RuleSet builtins();
  // One DSL formula per line; '#' starts a comment. Rules are named
  // "<origin>:<line>". Throws ParseError annotated with the line.
  static RuleSet parse(std::string_view text, std::string_view origin = "rules");

  // Throws DomainError on a duplicate name.
  void add(InferenceRule rule);
  void extend(const RuleSet& other);
  const InferenceRule* find(std::string_view name) const;
  const std::vector<InferenceRule>& rules() const noexcept { return rules_; }
  bool empty() const noexcept { return rules_.empty(); }

 private:
  std::vector<InferenceRule> rules_;
};

inline constexpr std::string_view kSemigraphoidHalf = "semigraphoid-half";
inline constexpr std::string_view kWeakTransitivity = "weak-transitivity";

// [A,C|B] & [A,B|] => [A,C|]
InferenceRule semigraphoid_half_rule();
// [i,j|] & [i,j|k] => [i,k|] | [j,k|], extended by arbitrary L
InferenceRule weak_transitivity_rule();

struct SatisfactionResult {
  bool satisfied = true;
  std::optional<RuleInstance> violation;
};

SatisfactionResult satisfies(const CIStructure& g, const InferenceRule& rule);

// Least superset of g closed under the rules. Throws SemanticError if a rule
// has more than one consequent.
CIStructure closure(const CIStructure& g, const RuleSet& rules);

struct ProofBudget {
  std::size_t max_depth = 16;        // nested case splits
  std::size_t max_branches = 4096;   // total branches explored
};

struct ProofResult {
  enum class Verdict { proved, not_proved };
  Verdict verdict = Verdict::not_proved;
  bool budget_exhausted = false;
  std::vector<std::string> trace;
};

// Assumes the antecedents and the negated consequents, saturates with unit
// propagation (forward and contrapositive) and case-splits on disjunctive
// rule instances. Proved iff every branch closes. Sound, not complete.
ProofResult prove_by_rules(const InferenceFormula& phi, const GroundSet& ground, const RuleSet& rules,
                           const ProofBudget& budget = {});

}  // namespace gci
