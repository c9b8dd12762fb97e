#include "gci/ci.hpp"

#include <algorithm>
#include <cctype>

namespace gci {

// ------------------------------------------------------------- statements

CIStatement CIStatement::make(Label i, Label j, LabelSet K) {
  if (i == j) {
    throw DomainError("statement [" + i + "," + j + "|...] has i = j; functional dependence is not modelled");
  }
  if (j < i) std::swap(i, j);
  std::sort(K.begin(), K.end());
  if (std::adjacent_find(K.begin(), K.end()) != K.end()) throw DomainError("repeated label in conditioning set");
  for (const auto& k : K) {
    if (k == i || k == j) throw DomainError("conditioning set overlaps {" + i + "," + j + "}");
  }
  return CIStatement{std::move(i), std::move(j), std::move(K)};
}

bool CIStatement::mentions(const Label& l) const {
  return i == l || j == l || std::find(K.begin(), K.end(), l) != K.end();
}

namespace {

std::string join(const LabelSet& labels) {
  std::string out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (k) out += ',';
    out += labels[k];
  }
  return out;
}

}  // namespace

std::string to_string(const CIStatement& s) { return "[" + s.i + "," + s.j + "|" + join(s.K) + "]"; }

std::string to_string(const CIStatement& s, const GroundSet& ground) {
  const bool swap = ground.index(s.j) < ground.index(s.i);
  const Label& a = swap ? s.j : s.i;
  const Label& b = swap ? s.i : s.j;
  return "[" + a + "," + b + "|" + join(ground.canonical(s.K)) + "]";
}

void validate(const CIStatement& s, const GroundSet& ground) {
  ground.index(s.i);
  ground.index(s.j);
  for (const auto& k : s.K) ground.index(k);
}

nlohmann::json to_json(const CIStatement& s, const GroundSet& ground) {
  const bool swap = ground.index(s.j) < ground.index(s.i);
  return nlohmann::json::array({swap ? s.j : s.i, swap ? s.i : s.j, ground.canonical(s.K)});
}

CIStatement statement_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_string() || !j[1].is_string() || !j[2].is_array()) {
    throw FormatError("statement must be [\"i\", \"j\", [\"k\", ...]]");
  }
  LabelSet K;
  for (const auto& k : j[2]) {
    if (!k.is_string()) throw FormatError("conditioning labels must be strings");
    K.push_back(k.get<std::string>());
  }
  try {
    return CIStatement::make(j[0].get<std::string>(), j[1].get<std::string>(), std::move(K));
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
}

std::vector<CIStatement> all_statements(const GroundSet& ground) {
  std::vector<CIStatement> out;
  const auto& labels = ground.labels();
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      for (auto& K : ground.subsets(ground.complement({labels[a], labels[b]}))) {
        out.push_back(CIStatement::make(labels[a], labels[b], std::move(K)));
      }
    }
  }
  return out;
}

// --------------------------------------------------------------- formulas

void InferenceFormula::normalize() {
  auto dedup = [](std::vector<CIStatement>& v) {
    std::vector<CIStatement> out;
    for (auto& s : v) {
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
    }
    v = std::move(out);
  };
  dedup(antecedents);
  dedup(consequents);
}

std::string to_string(const InferenceFormula& phi, const GroundSet& ground) {
  std::string out;
  for (std::size_t k = 0; k < phi.antecedents.size(); ++k) {
    if (k) out += " & ";
    out += to_string(phi.antecedents[k], ground);
  }
  out += " => ";
  for (std::size_t k = 0; k < phi.consequents.size(); ++k) {
    if (k) out += " | ";
    out += to_string(phi.consequents[k], ground);
  }
  return out;
}

namespace {

constexpr std::string_view kReserved = "[]|,&=>#";

bool is_label_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && kReserved.find(c) == std::string_view::npos;
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const GroundSet* ground) : text_(text), ground_(ground) {}

  InferenceFormula parse() {
    InferenceFormula phi;
    phi.antecedents.push_back(statement());
    while (peek() == '&') {
      ++pos_;
      phi.antecedents.push_back(statement());
    }
    skip_space();
    if (text_.substr(pos_, 2) != "=>") fail("expected '=>'");
    pos_ += 2;
    phi.consequents.push_back(statement());
    while (peek() == '|') {
      ++pos_;
      phi.consequents.push_back(statement());
    }
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    phi.normalize();
    return phi;
  }

  std::vector<Label> labels_seen() const { return seen_; }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Label label() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a label");
    Label l(text_.substr(start, pos_ - start));
    if (ground_ != nullptr && !ground_->contains(l)) throw ParseError("unknown label '" + l + "'", start);
    if (std::find(seen_.begin(), seen_.end(), l) == seen_.end()) seen_.push_back(l);
    return l;
  }

  CIStatement statement() {
    skip_space();
    const std::size_t start = pos_;
    expect('[');
    Label i = label();
    expect(',');
    Label j = label();
    expect('|');
    LabelSet K;
    if (peek() != ']') {
      K.push_back(label());
      while (peek() == ',') {
        ++pos_;
        K.push_back(label());
      }
    }
    expect(']');
    try {
      return CIStatement::make(std::move(i), std::move(j), std::move(K));
    } catch (const DomainError& e) {
      throw ParseError(e.what(), start);
    }
  }

  std::string_view text_;
  const GroundSet* ground_;
  std::size_t pos_ = 0;
  std::vector<Label> seen_;
};

}  // namespace

InferenceFormula parse_formula(std::string_view text, const GroundSet& ground) {
  return FormulaParser(text, &ground).parse();
}

GroundSet infer_ground_set(std::string_view text) {
  FormulaParser p(text, nullptr);
  p.parse();
  return GroundSet(p.labels_seen());
}

// ------------------------------------------------------------ model specs

void CIModelSpec::validate() const {
  for (const auto& s : independences) gci::validate(s, ground);
  for (const auto& s : dependences) {
    gci::validate(s, ground);
    if (std::find(independences.begin(), independences.end(), s) != independences.end()) {
      throw DomainError("statement " + to_string(s, ground) + " is both an independence and a dependence");
    }
  }
}

CIModelSpec counterexample_model(const InferenceFormula& phi, const GroundSet& ground) {
  CIModelSpec spec{ground, phi.antecedents, phi.consequents};
  spec.validate();
  return spec;
}

namespace {

std::vector<CIStatement> statements_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string("'") + what + "' must be an array");
  std::vector<CIStatement> out;
  for (const auto& s : j) {
    auto st = statement_from_json(s);
    if (std::find(out.begin(), out.end(), st) == out.end()) out.push_back(std::move(st));
  }
  return out;
}

}  // namespace

CIModelSpec model_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ground_set")) throw FormatError("model spec needs 'ground_set'");
  CIModelSpec spec;
  spec.ground = ground_set_from_json(j["ground_set"]);
  if (j.contains("independences")) spec.independences = statements_from_json(j["independences"], "independences");
  if (j.contains("dependences")) spec.dependences = statements_from_json(j["dependences"], "dependences");
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  return spec;
}

nlohmann::json to_json(const CIModelSpec& spec) {
  nlohmann::json ind = nlohmann::json::array();
  nlohmann::json dep = nlohmann::json::array();
  for (const auto& s : spec.independences) ind.push_back(to_json(s, spec.ground));
  for (const auto& s : spec.dependences) dep.push_back(to_json(s, spec.ground));
  return {{"ground_set", spec.ground.labels()}, {"independences", ind}, {"dependences", dep}};
}

CIStructure structure_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ground_set") || !j.contains("statements")) {
    throw FormatError("structure JSON needs 'ground_set' and 'statements'");
  }
  CIStructure g;
  g.ground = ground_set_from_json(j["ground_set"]);
  for (auto& s : statements_from_json(j["statements"], "statements")) {
    try {
      validate(s, g.ground);
    } catch (const DomainError& e) {
      throw FormatError(e.what());
    }
    g.statements.insert(std::move(s));
  }
  return g;
}

nlohmann::json to_json(const CIStructure& g) {
  // Emit in the deterministic enumeration order of all_statements.
  nlohmann::json stmts = nlohmann::json::array();
  for (const auto& s : all_statements(g.ground)) {
    if (g.contains(s)) stmts.push_back(to_json(s, g.ground));
  }
  return {{"ground_set", g.ground.labels()}, {"statements", stmts}};
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::not_applicable:
      return "not-applicable";
    case Classification::witnesses_conclusion:
      return "witnesses-conclusion";
    case Classification::counterexample:
      return "counterexample";
  }
  return "unknown";
}

// ------------------------------------------------------------ permutations

void validate_permutation(const Permutation& pi, const GroundSet& ground) {
  if (pi.size() != ground.size()) throw DomainError("permutation must map every label of the ground set");
  std::set<Label> image;
  for (const auto& [from, to] : pi) {
    if (!ground.contains(from) || !ground.contains(to)) throw DomainError("permutation leaves the ground set");
    image.insert(to);
  }
  if (image.size() != ground.size()) throw DomainError("permutation is not injective");
}

Permutation inverse(const Permutation& pi) {
  Permutation inv;
  for (const auto& [from, to] : pi) inv[to] = from;
  return inv;
}

namespace {

const Label& image_of(const Permutation& pi, const Label& l) {
  auto it = pi.find(l);
  if (it == pi.end()) throw DomainError("permutation does not map label '" + l + "'");
  return it->second;
}

}  // namespace

CIStatement apply_permutation(const CIStatement& s, const Permutation& pi) {
  LabelSet K;
  for (const auto& k : s.K) K.push_back(image_of(pi, k));
  return CIStatement::make(image_of(pi, s.i), image_of(pi, s.j), std::move(K));
}

InferenceFormula apply_permutation(const InferenceFormula& phi, const Permutation& pi) {
  InferenceFormula out;
  for (const auto& s : phi.antecedents) out.antecedents.push_back(apply_permutation(s, pi));
  for (const auto& s : phi.consequents) out.consequents.push_back(apply_permutation(s, pi));
  return out;
}

CIStructure apply_permutation(const CIStructure& g, const Permutation& pi) {
  validate_permutation(pi, g.ground);
  CIStructure out{g.ground, {}};
  for (const auto& s : g.statements) out.statements.insert(apply_permutation(s, pi));
  return out;
}

RationalCovariance apply_permutation(const RationalCovariance& sigma, const Permutation& pi) {
  const GroundSet& g = sigma.ground_set();
  validate_permutation(pi, g);
  const std::size_t n = g.size();
  std::vector<Rat> entries(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      entries[g.index(image_of(pi, g[r])) * n + g.index(image_of(pi, g[c]))] = sigma(r, c);
    }
  }
  return RationalCovariance(g, std::move(entries));
}

// ------------------------------------------------------------------ minors

CIStructure structure_delete(const CIStructure& g, const Label& m) {
  g.ground.index(m);
  CIStructure out{GroundSet(g.ground.complement({m})), {}};
  for (const auto& s : g.statements) {
    if (!s.mentions(m)) out.statements.insert(s);
  }
  return out;
}

CIStructure structure_contract(const CIStructure& g, const Label& m) {
  g.ground.index(m);
  CIStructure out{GroundSet(g.ground.complement({m})), {}};
  for (const auto& s : all_statements(out.ground)) {
    LabelSet Km = s.K;
    Km.push_back(m);
    if (g.contains(CIStatement::make(s.i, s.j, Km))) out.statements.insert(s);
  }
  return out;
}

}  // namespace gci
