#include "gci/axioms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace gci {

InferenceRule InferenceRule::from_text(std::string name, std::string_view text, bool extend_conditioning) {
  InferenceRule r;
  r.name = std::move(name);
  r.schema = infer_ground_set(text);
  r.formula = parse_formula(text, r.schema);
  r.extend_conditioning = extend_conditioning;
  return r;
}

std::string describe(const RuleInstance& inst, const GroundSet& ground) {
  return inst.rule + " as " + to_string(inst.formula, ground);
}

std::vector<RuleInstance> instantiate(const InferenceRule& rule, const GroundSet& ground) {
  std::vector<RuleInstance> out;
  const auto& schema = rule.schema.labels();
  if (schema.size() > ground.size()) return out;

  Permutation assignment;
  std::vector<bool> used(ground.size(), false);

  auto map_statement = [&](const CIStatement& s, const LabelSet& extension) {
    LabelSet K;
    for (const auto& k : s.K) K.push_back(assignment.at(k));
    K.insert(K.end(), extension.begin(), extension.end());
    return CIStatement::make(assignment.at(s.i), assignment.at(s.j), std::move(K));
  };

  auto emit = [&]() {
    LabelSet unused;
    for (std::size_t g = 0; g < ground.size(); ++g) {
      if (!used[g]) unused.push_back(ground[g]);
    }
    std::vector<LabelSet> extensions =
        rule.extend_conditioning ? ground.subsets(unused) : std::vector<LabelSet>{LabelSet{}};
    for (const auto& M : extensions) {
      RuleInstance inst;
      inst.rule = rule.name;
      inst.assignment = assignment;
      inst.extension = M;
      for (const auto& s : rule.formula.antecedents) inst.formula.antecedents.push_back(map_statement(s, M));
      for (const auto& s : rule.formula.consequents) inst.formula.consequents.push_back(map_statement(s, M));
      inst.formula.normalize();
      out.push_back(std::move(inst));
    }
  };

  std::function<void(std::size_t)> assign = [&](std::size_t pos) {
    if (pos == schema.size()) {
      emit();
      return;
    }
    for (std::size_t g = 0; g < ground.size(); ++g) {
      if (used[g]) continue;
      used[g] = true;
      assignment[schema[pos]] = ground[g];
      assign(pos + 1);
      used[g] = false;
    }
    assignment.erase(schema[pos]);
  };
  assign(0);
  return out;
}

// ------------------------------------------------------------------ RuleSet

InferenceRule semigraphoid_half_rule() {
  return InferenceRule::from_text(std::string(kSemigraphoidHalf), "[A,C|B] & [A,B|] => [A,C|]");
}

InferenceRule weak_transitivity_rule() {
  return InferenceRule::from_text(std::string(kWeakTransitivity), "[i,j|] & [i,j|k] => [i,k|] | [j,k|]");
}

RuleSet RuleSet::builtins() {
  RuleSet rs;
  rs.add(semigraphoid_half_rule());
  rs.add(weak_transitivity_rule());
  return rs;
}

RuleSet RuleSet::parse(std::string_view text, std::string_view origin) {
  RuleSet rs;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      const std::string name = std::string(origin) + ":" + std::to_string(line_no);
      try {
        rs.add(InferenceRule::from_text(name, line));
      } catch (const ParseError& e) {
        throw ParseError(name + ": " + e.what(), e.position());
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return rs;
}

void RuleSet::add(InferenceRule rule) {
  if (find(rule.name) != nullptr) throw DomainError("duplicate rule name '" + rule.name + "'");
  if (rule.formula.antecedents.empty()) throw DomainError("rule '" + rule.name + "' has no antecedents");
  rules_.push_back(std::move(rule));
}

void RuleSet::extend(const RuleSet& other) {
  for (const auto& r : other.rules_) add(r);
}

const InferenceRule* RuleSet::find(std::string_view name) const {
  for (const auto& r : rules_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

// -------------------------------------------------------------- semantics

namespace {

bool all_in(const std::vector<CIStatement>& stmts, const CIStructure& g) {
  return std::all_of(stmts.begin(), stmts.end(), [&](const CIStatement& s) { return g.contains(s); });
}

bool any_in(const std::vector<CIStatement>& stmts, const CIStructure& g) {
  return std::any_of(stmts.begin(), stmts.end(), [&](const CIStatement& s) { return g.contains(s); });
}

}  // namespace

SatisfactionResult satisfies(const CIStructure& g, const InferenceRule& rule) {
  for (auto& inst : instantiate(rule, g.ground)) {
    if (all_in(inst.formula.antecedents, g) && !any_in(inst.formula.consequents, g)) {
      return SatisfactionResult{false, std::move(inst)};
    }
  }
  return {};
}

CIStructure closure(const CIStructure& g, const RuleSet& rules) {
  std::vector<RuleInstance> instances;
  for (const auto& r : rules.rules()) {
    if (r.formula.consequents.size() != 1) {
      throw SemanticError("closure needs single-consequent rules; '" + r.name + "' is disjunctive");
    }
    auto inst = instantiate(r, g.ground);
    instances.insert(instances.end(), std::make_move_iterator(inst.begin()), std::make_move_iterator(inst.end()));
  }
  CIStructure out = g;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& inst : instances) {
      if (all_in(inst.formula.antecedents, out) && out.statements.insert(inst.formula.consequents.front()).second) {
        changed = true;
      }
    }
  }
  return out;
}

// ------------------------------------------------------------------ prover

namespace {

struct IndexedInstance {
  std::vector<std::size_t> antecedents;
  std::vector<std::size_t> consequents;
  const RuleInstance* source;
};

class Prover {
 public:
  Prover(const InferenceFormula& phi, const GroundSet& ground, const RuleSet& rules, const ProofBudget& budget)
      : ground_(ground), budget_(budget) {
    statements_ = all_statements(ground);
    for (std::size_t k = 0; k < statements_.size(); ++k) index_.emplace(statements_[k], k);
    for (const auto& r : rules.rules()) {
      auto inst = instantiate(r, ground);
      instances_.insert(instances_.end(), std::make_move_iterator(inst.begin()), std::make_move_iterator(inst.end()));
    }
    for (const auto& inst : instances_) {
      IndexedInstance ii{{}, {}, &inst};
      for (const auto& s : inst.formula.antecedents) ii.antecedents.push_back(index_.at(s));
      for (const auto& s : inst.formula.consequents) ii.consequents.push_back(index_.at(s));
      indexed_.push_back(std::move(ii));
    }
    for (const auto& s : phi.antecedents) {
      validate(s, ground);
      initial_.push_back({index_.at(s), kTrue});
    }
    for (const auto& s : phi.consequents) {
      validate(s, ground);
      initial_.push_back({index_.at(s), kFalse});
    }
  }

  ProofResult run() {
    ProofResult result;
    std::vector<signed char> values(statements_.size(), kUnknown);
    std::vector<std::string> trace;
    bool closed = true;
    for (const auto& [idx, v] : initial_) {
      if (values[idx] != kUnknown && values[idx] != v) {
        trace.push_back("contradiction: " + name(idx) + " is both assumed and refuted");
        closed = true;
        result.verdict = ProofResult::Verdict::proved;
        result.trace = std::move(trace);
        return result;
      }
      values[idx] = v;
      trace.push_back(std::string(v == kTrue ? "assume " : "assume not ") + name(idx));
    }
    closed = branch(values, 0, trace, "");
    result.verdict = closed ? ProofResult::Verdict::proved : ProofResult::Verdict::not_proved;
    result.budget_exhausted = exhausted_;
    result.trace = std::move(trace);
    return result;
  }

 private:
  static constexpr signed char kTrue = 1;
  static constexpr signed char kFalse = -1;
  static constexpr signed char kUnknown = 0;

  std::string name(std::size_t idx) const { return to_string(statements_[idx], ground_); }

  // Unit propagation to a fixed point. Returns false on contradiction and
  // reports the index of a splittable instance (if any) through `split`.
  bool propagate(std::vector<signed char>& values, std::vector<std::string>& trace, const std::string& indent,
                 std::optional<std::size_t>& split) {
    bool changed = true;
    while (changed) {
      changed = false;
      split.reset();
      std::size_t best_open = 0;
      for (std::size_t n = 0; n < indexed_.size(); ++n) {
        const auto& ii = indexed_[n];
        bool blocked = false;
        std::vector<std::size_t> unknown_ants;
        for (auto a : ii.antecedents) {
          if (values[a] == kFalse) blocked = true;
          if (values[a] == kUnknown) unknown_ants.push_back(a);
        }
        if (blocked) continue;
        std::vector<std::size_t> open_cons;
        bool satisfied = false;
        for (auto c : ii.consequents) {
          if (values[c] == kTrue) satisfied = true;
          if (values[c] == kUnknown) open_cons.push_back(c);
        }
        if (satisfied) continue;
        const std::string why = describe(*ii.source, ground_);
        if (unknown_ants.empty()) {
          if (open_cons.empty()) {
            trace.push_back(indent + "contradiction: " + why);
            return false;
          }
          if (open_cons.size() == 1) {
            values[open_cons.front()] = kTrue;
            trace.push_back(indent + "derive " + name(open_cons.front()) + " by " + why);
            changed = true;
          } else if (!split || open_cons.size() < best_open) {
            split = n;
            best_open = open_cons.size();
          }
        } else if (unknown_ants.size() == 1 && open_cons.empty()) {
          values[unknown_ants.front()] = kFalse;
          trace.push_back(indent + "derive not " + name(unknown_ants.front()) + " by contraposition of " + why);
          changed = true;
        }
      }
    }
    return true;
  }

  bool branch(std::vector<signed char> values, std::size_t depth, std::vector<std::string>& trace,
              const std::string& indent) {
    if (++branches_ > budget_.max_branches) {
      exhausted_ = true;
      trace.push_back(indent + "budget exhausted (branches)");
      return false;
    }
    std::optional<std::size_t> split;
    if (!propagate(values, trace, indent, split)) return true;
    if (!split) {
      trace.push_back(indent + "open branch: rules saturated without contradiction");
      return false;
    }
    if (depth >= budget_.max_depth) {
      exhausted_ = true;
      trace.push_back(indent + "budget exhausted (depth)");
      return false;
    }
    const auto& ii = indexed_[*split];
    std::vector<std::size_t> open_cons;
    for (auto c : ii.consequents) {
      if (values[c] == kUnknown) open_cons.push_back(c);
    }
    trace.push_back(indent + "split on " + describe(*ii.source, ground_));
    std::vector<signed char> base = values;
    for (std::size_t t = 0; t < open_cons.size(); ++t) {
      std::vector<signed char> case_values = base;
      case_values[open_cons[t]] = kTrue;
      trace.push_back(indent + "  case " + name(open_cons[t]));
      if (!branch(std::move(case_values), depth + 1, trace, indent + "    ")) return false;
      base[open_cons[t]] = kFalse;
    }
    return true;
  }

  const GroundSet& ground_;
  ProofBudget budget_;
  std::vector<CIStatement> statements_;
  std::map<CIStatement, std::size_t> index_;
  std::vector<RuleInstance> instances_;
  std::vector<IndexedInstance> indexed_;
  std::vector<std::pair<std::size_t, signed char>> initial_;
  std::size_t branches_ = 0;
  bool exhausted_ = false;
};

}  // namespace

ProofResult prove_by_rules(const InferenceFormula& phi, const GroundSet& ground, const RuleSet& rules,
                           const ProofBudget& budget) {
  return Prover(phi, ground, rules, budget).run();
}

}  // namespace gci
