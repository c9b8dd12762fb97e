#include "gci/minors.hpp"

#include <algorithm>
#include <functional>

namespace gci {

namespace {

constexpr std::string_view kForbiddenLabelChars = "_[]|,&=>#\"{}()/*^ \t\r\n";

void validate_label(const Label& l) {
  if (l.empty()) throw FormatError("empty label");
  if (l.find_first_of(kForbiddenLabelChars) != std::string::npos) {
    throw FormatError("label '" + l + "' contains a reserved character");
  }
}

}  // namespace

// --------------------------------------------------------------- GroundSet

GroundSet::GroundSet(std::vector<Label> labels) : labels_(std::move(labels)) {
  if (labels_.size() > 30) throw DomainError("ground sets are limited to 30 labels");
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    validate_label(labels_[k]);
    if (!index_.emplace(labels_[k], k).second) throw FormatError("duplicate label '" + labels_[k] + "'");
  }
}

GroundSet GroundSet::standard(std::size_t n) {
  static constexpr std::string_view kAlphabet = "ijklmnopqrstuvwxyzabcdefgh";
  if (n > kAlphabet.size()) throw DomainError("standard ground sets have at most 26 labels");
  std::vector<Label> labels;
  for (std::size_t k = 0; k < n; ++k) labels.emplace_back(1, kAlphabet[k]);
  return GroundSet(std::move(labels));
}

bool GroundSet::contains(std::string_view label) const { return index_.count(Label(label)) > 0; }

std::size_t GroundSet::index(std::string_view label) const {
  auto it = index_.find(Label(label));
  if (it == index_.end()) throw DomainError("label '" + Label(label) + "' is not in the ground set");
  return it->second;
}

LabelSet GroundSet::canonical(LabelSet labels) const {
  std::sort(labels.begin(), labels.end(), [this](const Label& a, const Label& b) { return index(a) < index(b); });
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw DomainError("repeated label in set");
  }
  return labels;
}

LabelSet GroundSet::complement(const LabelSet& exclude) const {
  LabelSet out;
  for (const auto& l : labels_) {
    if (std::find(exclude.begin(), exclude.end(), l) == exclude.end()) out.push_back(l);
  }
  return out;
}

std::vector<LabelSet> GroundSet::subsets(const LabelSet& base) const {
  const LabelSet b = canonical(base);
  std::vector<LabelSet> out;
  const std::size_t count = std::size_t{1} << b.size();
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    LabelSet s;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (mask & (std::size_t{1} << k)) s.push_back(b[k]);
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const LabelSet& x, const LabelSet& y) { return x.size() < y.size(); });
  return out;
}

std::string concat_labels(const LabelSet& labels) {
  std::string out;
  for (const auto& l : labels) out += l;
  return out;
}

// ---------------------------------------------------------------- matrices

std::string sigma_name(const GroundSet& ground, std::string_view a, std::string_view b) {
  auto ia = ground.index(a);
  auto ib = ground.index(b);
  if (ia > ib) std::swap(ia, ib);
  return "s_" + ground[ia] + "_" + ground[ib];
}

SymbolicCovariance symbolic_covariance(const GroundSet& ground) {
  const std::size_t n = ground.size();
  std::vector<Polynomial> entries;
  entries.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) entries.push_back(Polynomial::variable(sigma_name(ground, ground[r], ground[c])));
  }
  return SymbolicCovariance(ground, std::move(entries));
}

RationalCovariance identity_covariance(const GroundSet& ground) {
  const std::size_t n = ground.size();
  std::vector<Rat> entries(n * n, Rat(0));
  for (std::size_t k = 0; k < n; ++k) entries[k * n + k] = 1;
  return RationalCovariance(ground, std::move(entries));
}

RationalCovariance marginal(const RationalCovariance& sigma, const LabelSet& keep) {
  const LabelSet k = sigma.ground_set().canonical(keep);
  std::vector<Rat> entries;
  entries.reserve(k.size() * k.size());
  for (const auto& r : k) {
    for (const auto& c : k) entries.push_back(sigma.at(r, c));
  }
  return RationalCovariance(GroundSet(k), std::move(entries));
}

RationalCovariance condition_on(const RationalCovariance& sigma, const Label& m) {
  const Rat& pivot = sigma.at(m, m);
  if (pivot == 0) throw DomainError("cannot condition on a variable with zero variance");
  const LabelSet rest = sigma.ground_set().complement({m});
  std::vector<Rat> entries;
  entries.reserve(rest.size() * rest.size());
  for (const auto& r : rest) {
    for (const auto& c : rest) entries.push_back(Rat(sigma.at(r, c) - sigma.at(r, m) * sigma.at(m, c) / pivot));
  }
  return RationalCovariance(GroundSet(rest), std::move(entries));
}

// ----------------------------------------------------------------- brackets

std::string principal_bracket(const GroundSet& ground, const LabelSet& K) {
  return "p_" + concat_labels(ground.canonical(K));
}

std::string apm_bracket(const GroundSet& ground, const Label& i, const Label& j, const LabelSet& K) {
  if (i == j) throw DomainError("almost-principal bracket needs i != j");
  auto ii = ground.index(i);
  auto jj = ground.index(j);
  LabelSet k = ground.canonical(K);
  for (const auto& x : k) {
    if (x == i || x == j) throw DomainError("conditioning set overlaps {" + i + "," + j + "}");
  }
  const Label& first = ii < jj ? i : j;
  const Label& second = ii < jj ? j : i;
  return "a_" + first + "_" + second + "_" + concat_labels(k);
}

Polynomial principal_bracket_var(const GroundSet& ground, const LabelSet& K) {
  return Polynomial::variable(principal_bracket(ground, K));
}

Polynomial apm_bracket_var(const GroundSet& ground, const Label& i, const Label& j, const LabelSet& K) {
  return Polynomial::variable(apm_bracket(ground, i, j, K));
}

namespace {

// All ways to write `text` as a concatenation of ground-set labels (stops at 2).
void split_labels(const GroundSet& ground, std::string_view text, LabelSet& current, std::vector<LabelSet>& found) {
  if (found.size() > 1) return;
  if (text.empty()) {
    found.push_back(current);
    return;
  }
  for (const auto& l : ground.labels()) {
    if (text.starts_with(l)) {
      current.push_back(l);
      split_labels(ground, text.substr(l.size()), current, found);
      current.pop_back();
    }
  }
}

LabelSet parse_label_run(const GroundSet& ground, std::string_view text, std::string_view name) {
  LabelSet current;
  std::vector<LabelSet> found;
  split_labels(ground, text, current, found);
  if (found.empty()) throw FormatError("bracket '" + std::string(name) + "' uses labels outside the ground set");
  if (found.size() > 1) throw FormatError("bracket '" + std::string(name) + "' is ambiguous over this ground set");
  try {
    return ground.canonical(found.front());
  } catch (const DomainError&) {
    throw FormatError("bracket '" + std::string(name) + "' repeats a label");
  }
}

}  // namespace

Bracket parse_bracket(const GroundSet& ground, std::string_view name) {
  Bracket b;
  if (name.starts_with("p_")) {
    b.kind = Bracket::Kind::principal;
    b.K = parse_label_run(ground, name.substr(2), name);
    return b;
  }
  if (name.starts_with("a_")) {
    std::string_view rest = name.substr(2);
    auto u1 = rest.find('_');
    if (u1 == std::string_view::npos) throw FormatError("malformed bracket '" + std::string(name) + "'");
    auto u2 = rest.find('_', u1 + 1);
    if (u2 == std::string_view::npos) throw FormatError("malformed bracket '" + std::string(name) + "'");
    b.kind = Bracket::Kind::almost_principal;
    b.i = Label(rest.substr(0, u1));
    b.j = Label(rest.substr(u1 + 1, u2 - u1 - 1));
    if (!ground.contains(b.i) || !ground.contains(b.j)) {
      throw FormatError("bracket '" + std::string(name) + "' uses labels outside the ground set");
    }
    if (b.i == b.j) throw FormatError("bracket '" + std::string(name) + "' has i = j");
    b.K = parse_label_run(ground, rest.substr(u2 + 1), name);
    if (std::find(b.K.begin(), b.K.end(), b.i) != b.K.end() || std::find(b.K.begin(), b.K.end(), b.j) != b.K.end()) {
      throw FormatError("bracket '" + std::string(name) + "' has K overlapping {i,j}");
    }
    return b;
  }
  throw FormatError("'" + std::string(name) + "' is not a bracket variable");
}

void validate_bracket_polynomial(const Polynomial& f, const GroundSet& ground) {
  for (const auto& v : f.variables()) parse_bracket(ground, v);
}

Polynomial bracket_eval(const Polynomial& f, const GroundSet& ground) {
  const SymbolicCovariance sigma = symbolic_covariance(ground);
  return f.substitute([&](const std::string& var) -> Polynomial {
    const Bracket b = parse_bracket(ground, var);
    if (b.kind == Bracket::Kind::principal) return principal_minor(sigma, b.K);
    return almost_principal_minor(sigma, b.i, b.j, b.K);
  });
}

Rat bracket_eval(const Polynomial& f, const RationalCovariance& sigma) {
  std::map<std::string, Rat> values;
  for (const auto& var : f.variables()) {
    const Bracket b = parse_bracket(sigma.ground_set(), var);
    values[var] = b.kind == Bracket::Kind::principal ? principal_minor(sigma, b.K)
                                                     : almost_principal_minor(sigma, b.i, b.j, b.K);
  }
  return f.evaluate(values);
}

Polynomial matus_residual(const GroundSet& ground, const Label& i, const Label& j, const Label& k, const LabelSet& L) {
  if (i == j || i == k || j == k) throw DomainError("matus residual needs distinct i, j, k");
  for (const auto& x : L) {
    if (x == i || x == j || x == k) throw DomainError("L must avoid i, j, k");
  }
  LabelSet kL = L;
  kL.push_back(k);
  return principal_bracket_var(ground, kL) * apm_bracket_var(ground, i, j, L) -
         principal_bracket_var(ground, L) * apm_bracket_var(ground, i, j, kL) -
         apm_bracket_var(ground, i, k, L) * apm_bracket_var(ground, j, k, L);
}

bool in_eval_kernel(const Polynomial& f, const GroundSet& ground) { return bracket_eval(f, ground).is_zero(); }

// ------------------------------------------------------------------- JSON

GroundSet ground_set_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("ground_set must be an array of strings");
  std::vector<Label> labels;
  for (const auto& l : j) {
    if (!l.is_string()) throw FormatError("ground_set must be an array of strings");
    labels.push_back(l.get<std::string>());
  }
  return GroundSet(std::move(labels));
}

namespace {

Rat rat_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rat(v.get<std::string>());
  if (v.is_number_integer()) return Rat(Int(std::to_string(v.get<long long>())));
  throw FormatError("matrix entries must be rational strings");
}

}  // namespace

RationalCovariance rational_covariance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ground_set") || !j.contains("entries")) {
    throw FormatError("matrix JSON needs 'ground_set' and 'entries'");
  }
  GroundSet ground = ground_set_from_json(j["ground_set"]);
  const auto& rows = j["entries"];
  if (!rows.is_array() || rows.size() != ground.size()) throw FormatError("'entries' must have one row per label");
  std::vector<Rat> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != ground.size()) throw FormatError("matrix rows must have one entry per label");
    for (const auto& v : row) entries.push_back(rat_from_json(v));
  }
  return RationalCovariance(std::move(ground), std::move(entries));
}

nlohmann::json to_json(const RationalCovariance& sigma) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < sigma.size(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < sigma.size(); ++c) row.push_back(to_string(sigma(r, c)));
    rows.push_back(row);
  }
  return {{"ground_set", sigma.ground_set().labels()}, {"entries", rows}};
}

}  // namespace gci
