#include "gci/certify.hpp"

#include <algorithm>

namespace gci {

SemialgebraicSystem compile_model(const CIModelSpec& spec, const CompileOptions& options) {
  spec.validate();
  const GroundSet& g = spec.ground;
  const SymbolicCovariance sigma = symbolic_covariance(g);
  SemialgebraicSystem sys;
  for (const auto& s : spec.independences) sys.equations.push_back(almost_principal_minor(sigma, s.i, s.j, s.K));
  for (const auto& s : spec.dependences) sys.nonvanishing.push_back(almost_principal_minor(sigma, s.i, s.j, s.K));
  for (const auto& K : g.subsets(g.labels())) {
    if (K.empty()) continue;
    Polynomial m = principal_minor(sigma, K);
    if (options.principal_minors_nonvanishing) sys.nonvanishing.push_back(m);
    sys.nonnegative.push_back(std::move(m));
  }
  return sys;
}

// ------------------------------------------------------------ verification

namespace {

const Polynomial& at_index(const std::vector<Polynomial>& list, std::size_t idx, const char* what) {
  if (idx >= list.size()) {
    throw DomainError(std::string(what) + " index " + std::to_string(idx) + " out of range (size " +
                      std::to_string(list.size()) + ")");
  }
  return list[idx];
}

Polynomial monoid_element(const std::vector<std::size_t>& indices, const SemialgebraicSystem& system) {
  Polynomial u(1L);
  for (auto k : indices) u *= at_index(system.nonvanishing, k, "h");
  return u;
}

}  // namespace

bool verify_ideal_part(const FinalPolynomialCertificate& cert, const SemialgebraicSystem& system) {
  Polynomial sum;
  for (const auto& t : cert.ideal_part) sum += t.cofactor * at_index(system.equations, t.index, "f");
  return sum == cert.target;
}

bool verify_positivity_part(const FinalPolynomialCertificate& cert, const SemialgebraicSystem& system) {
  Polynomial sum;
  for (const auto& e : cert.cone_part) {
    if (e.weight <= 0) throw DomainError("cone weight " + to_string(e.weight) + " is not positive");
    Polynomial term = e.square * e.square;
    for (auto j : e.g_indices) term *= at_index(system.nonnegative, j, "g");
    sum += term * e.weight;
  }
  if (cert.monoid_part) {
    const Polynomial u = monoid_element(*cert.monoid_part, system);
    sum += u * u;
  }
  return sum == cert.target;
}

CertificateVerdict verify_final_polynomial(const FinalPolynomialCertificate& cert, const SemialgebraicSystem& system) {
  try {
    if (!cert.monoid_part) return {false, "no monoid part: the positivity side is not strictly positive"};
    if (!verify_ideal_part(cert, system)) return {false, "ideal identity fails: target != sum cofactor*f"};
    if (!verify_positivity_part(cert, system)) {
      return {false, "positivity identity fails: target != sum weight*s^2*prod g + u^2"};
    }
  } catch (const DomainError& e) {
    return {false, e.what()};
  }
  return {true, ""};
}

CertificateVerdict verify_final_polynomial(const FinalPolynomialCertificate& cert) {
  return verify_final_polynomial(cert, cert.system);
}

// ------------------------------------------------------------------- JSON

namespace {

nlohmann::json poly_list(const std::vector<Polynomial>& ps) {
  auto arr = nlohmann::json::array();
  for (const auto& p : ps) arr.push_back(to_json(p));
  return arr;
}

std::vector<Polynomial> poly_list_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string("'") + what + "' must be an array of polynomials");
  std::vector<Polynomial> out;
  for (const auto& p : j) out.push_back(polynomial_from_json(p));
  return out;
}

std::size_t index_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw FormatError(std::string("'") + what + "' must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j[key];
}

}  // namespace

nlohmann::json to_json(const SemialgebraicSystem& system) {
  return {{"f", poly_list(system.equations)}, {"g", poly_list(system.nonnegative)}, {"h", poly_list(system.nonvanishing)}};
}

SemialgebraicSystem system_from_json(const nlohmann::json& j) {
  SemialgebraicSystem s;
  s.equations = poly_list_from_json(field(j, "f"), "f");
  s.nonnegative = poly_list_from_json(field(j, "g"), "g");
  s.nonvanishing = poly_list_from_json(field(j, "h"), "h");
  return s;
}

nlohmann::json to_json(const FinalPolynomialCertificate& cert) {
  nlohmann::json j;
  if (!cert.name.empty()) j["name"] = cert.name;
  j["system"] = to_json(cert.system);
  j["target"] = to_json(cert.target);
  auto ideal = nlohmann::json::array();
  for (const auto& t : cert.ideal_part) ideal.push_back({{"cofactor", to_json(t.cofactor)}, {"index", t.index}});
  j["ideal_part"] = ideal;
  auto cone = nlohmann::json::array();
  for (const auto& e : cert.cone_part) {
    cone.push_back({{"weight", to_string(e.weight)}, {"square", to_json(e.square)}, {"g_indices", e.g_indices}});
  }
  j["cone_part"] = cone;
  if (cert.monoid_part) j["monoid_part"] = *cert.monoid_part;
  return j;
}

FinalPolynomialCertificate certificate_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("certificate must be a JSON object");
  FinalPolynomialCertificate cert;
  try {
    if (j.contains("name")) cert.name = j["name"].get<std::string>();
    cert.system = system_from_json(field(j, "system"));
    cert.target = polynomial_from_json(field(j, "target"));
    const auto& ideal = field(j, "ideal_part");
    if (!ideal.is_array()) throw FormatError("'ideal_part' must be an array");
    for (const auto& t : ideal) {
      cert.ideal_part.push_back({polynomial_from_json(field(t, "cofactor")), index_from_json(field(t, "index"), "index")});
    }
    const auto& cone = field(j, "cone_part");
    if (!cone.is_array()) throw FormatError("'cone_part' must be an array");
    for (const auto& e : cone) {
      ConeTerm term;
      const auto& w = field(e, "weight");
      term.weight = w.is_string() ? parse_rat(w.get<std::string>()) : Rat(Int(std::to_string(w.get<long long>())));
      term.square = polynomial_from_json(field(e, "square"));
      const auto& gi = field(e, "g_indices");
      if (!gi.is_array()) throw FormatError("'g_indices' must be an array");
      for (const auto& x : gi) term.g_indices.push_back(index_from_json(x, "g_indices"));
      cert.cone_part.push_back(std::move(term));
    }
    if (j.contains("monoid_part")) {
      const auto& m = j["monoid_part"];
      if (!m.is_array()) throw FormatError("'monoid_part' must be an array");
      std::vector<std::size_t> idx;
      for (const auto& x : m) idx.push_back(index_from_json(x, "monoid_part"));
      cert.monoid_part = std::move(idx);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("certificate: ") + e.what());
  }
  return cert;
}

// ------------------------------------------------------ bracket positivity

BracketPositivity analyze_bracket_positivity(const Polynomial& f, const GroundSet& ground) {
  validate_bracket_polynomial(f, ground);
  BracketPositivity out;
  if (f.is_zero()) return out;
  bool has_principal_term = false;
  for (const auto& [m, c] : f.terms()) {
    if (c <= 0) return out;
    bool principal_only = true;
    for (const auto& [v, e] : m.factors()) {
      if (var_kind(v) == VarKind::apm_bracket) {
        principal_only = false;
        if (e % 2 != 0) return out;
      }
    }
    has_principal_term = has_principal_term || principal_only;
  }
  out.nonnegative_on_pd = true;
  out.strictly_positive_on_pd = has_principal_term;
  return out;
}

// -------------------------------------------------------------- built-ins

namespace {

std::size_t find_index(const std::vector<Polynomial>& list, const Polynomial& p, const char* what) {
  auto it = std::find(list.begin(), list.end(), p);
  if (it == list.end()) throw std::logic_error(std::string("polynomial missing from ") + what);
  return static_cast<std::size_t>(it - list.begin());
}

LabelSet with(LabelSet K, const Label& x) {
  K.push_back(x);
  return K;
}


void require_distinct(const GroundSet& ground, const LabelSet& labels) {
  for (std::size_t a = 0; a < labels.size(); ++a) {
    ground.index(labels[a]);
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      if (labels[a] == labels[b]) throw DomainError("labels must be distinct");
    }
  }
}

}  // namespace

FinalPolynomialCertificate weak_transitivity_certificate(const GroundSet& ground, const Label& i, const Label& j,
                                                         const Label& k, const LabelSet& L_in) {
  const LabelSet L = ground.canonical(L_in);
  LabelSet all{i, j, k};
  all.insert(all.end(), L.begin(), L.end());
  require_distinct(ground, all);

  InferenceFormula psi;
  psi.antecedents = {CIStatement::make(i, j, L), CIStatement::make(i, j, with(L, k))};
  psi.consequents = {CIStatement::make(i, k, L), CIStatement::make(j, k, L)};

  FinalPolynomialCertificate cert;
  cert.name = "weak-transitivity(" + i + "," + j + "," + k + "," + (L.empty() ? std::string("∅") : L.front());
  for (std::size_t t = 1; t < L.size(); ++t) cert.name += "," + L[t];
  cert.name += ")";
  cert.system = compile_model(counterexample_model(psi, ground));

  const SymbolicCovariance sigma = symbolic_covariance(ground);
  const Polynomial f_L = almost_principal_minor(sigma, i, j, L);
  const Polynomial f_kL = almost_principal_minor(sigma, i, j, with(L, k));
  const Polynomial h_ik = almost_principal_minor(sigma, i, k, L);
  const Polynomial h_jk = almost_principal_minor(sigma, j, k, L);
  const Polynomial u = h_ik * h_jk;
  cert.target = u * u;
  cert.ideal_part.push_back({u * principal_minor(sigma, with(L, k)), find_index(cert.system.equations, f_L, "f")});
  cert.ideal_part.push_back({-(u * principal_minor(sigma, L)), find_index(cert.system.equations, f_kL, "f")});
  cert.monoid_part = std::vector<std::size_t>{find_index(cert.system.nonvanishing, h_ik, "h"),
                                              find_index(cert.system.nonvanishing, h_jk, "h")};
  return cert;
}

Polynomial lm20_positive_factor(const GroundSet& ground, const Label& i, const Label& j, const Label& k,
                                const Label& l) {
  require_distinct(ground, {i, j, k, l});
  auto p = [&](LabelSet K) { return principal_bracket_var(ground, K); };
  const Polynomial jl0 = apm_bracket_var(ground, j, l, {});
  const Polynomial kl0 = apm_bracket_var(ground, k, l, {});
  return p({j, k}) * jl0.pow(2) * kl0.pow(2) + p({j}) * p({k}).pow(2) * p({l}) * p({j, l}) +
         p({j}) * p({k}) * p({k, l}) * jl0.pow(2);
}

Polynomial lm20_final_bracket_polynomial(const GroundSet& ground, const Label& i, const Label& j, const Label& k,
                                         const Label& l) {
  return apm_bracket_var(ground, i, j, {}) * lm20_positive_factor(ground, i, j, k, l);
}

FinalPolynomialCertificate lm20_certificate(const GroundSet& ground, const Label& i, const Label& j, const Label& k,
                                            const Label& l) {
  require_distinct(ground, {i, j, k, l});
  InferenceFormula psi;
  psi.antecedents = {CIStatement::make(i, j, {k}), CIStatement::make(i, k, {l}), CIStatement::make(i, l, {j})};
  psi.consequents = {CIStatement::make(i, j, {})};

  FinalPolynomialCertificate cert;
  cert.name = "lm20(" + i + "," + j + "," + k + "," + l + ")";
  cert.system = compile_model(counterexample_model(psi, ground), CompileOptions{true});
  const auto& sys = cert.system;

  const SymbolicCovariance sigma = symbolic_covariance(ground);
  auto pm = [&](LabelSet K) { return principal_minor(sigma, K); };
  auto g = [&](LabelSet K) { return find_index(sys.nonnegative, pm(std::move(K)), "g"); };
  auto h = [&](const Polynomial& q) { return find_index(sys.nonvanishing, q, "h"); };
  const Polynomial ij0 = almost_principal_minor(sigma, i, j, {});
  const Polynomial jl0 = almost_principal_minor(sigma, j, l, {});
  const Polynomial kl0 = almost_principal_minor(sigma, k, l, {});

  // target = F * m with m = [ij|][j][l][jl], so that the middle term of the
  // positive factor becomes ([ij|][j][k][l][jl])^2.
  const Polynomial F = bracket_eval(lm20_final_bracket_polynomial(ground, i, j, k, l), ground);
  const Polynomial m = ij0 * pm({j}) * pm({l}) * pm({j, l});
  cert.target = F * m;

  const MembershipResult mem = ideal_membership(F, sys.equations, sigma_order(ground));
  if (mem.status != Membership::member || !mem.certificate) {
    throw BudgetExceeded("lm20: ideal membership not established (" + mem.diagnostic + ")");
  }
  for (std::size_t p = 0; p < sys.equations.size(); ++p) {
    cert.ideal_part.push_back({mem.certificate->cofactors[p] * m, p});
  }

  cert.cone_part.push_back({Rat(1), ij0 * jl0 * kl0, {g({j}), g({l}), g({j, l}), g({j, k})}});
  cert.cone_part.push_back({Rat(1), ij0 * pm({j}) * jl0, {g({l}), g({j, l}), g({k}), g({k, l})}});
  cert.monoid_part = std::vector<std::size_t>{h(ij0), h(pm({j})), h(pm({k})), h(pm({l})), h(pm({j, l}))};
  return cert;
}

std::map<std::string, FinalPolynomialCertificate> builtin_certificates(const GroundSet& ground) {
  std::map<std::string, FinalPolynomialCertificate> out;
  const auto& labels = ground.labels();
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      for (std::size_t c = 0; c < labels.size(); ++c) {
        if (c == a || c == b) continue;
        for (const auto& L : ground.subsets(ground.complement({labels[a], labels[b], labels[c]}))) {
          auto cert = weak_transitivity_certificate(ground, labels[a], labels[b], labels[c], L);
          out.emplace(cert.name, std::move(cert));
        }
      }
    }
  }
  if (labels.size() >= 4) {
    auto cert = lm20_certificate(ground, labels[0], labels[1], labels[2], labels[3]);
    cert.name = "lm20";
    out.emplace("lm20", std::move(cert));
  }
  return out;
}

std::optional<FinalPolynomialCertificate> find_builtin_certificate(std::string_view name, const GroundSet& ground) {
  const auto open = name.find('(');
  const std::string_view family = name.substr(0, open);
  LabelSet args;
  if (open != std::string_view::npos) {
    if (name.back() != ')') return std::nullopt;
    std::string_view inner = name.substr(open + 1, name.size() - open - 2);
    std::size_t start = 0;
    while (true) {
      const auto comma = inner.find(',', start);
      args.emplace_back(inner.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  try {
    if (family == kWeakTransitivity && args.size() >= 4) {
      LabelSet L(args.begin() + 3, args.end());
      if (L.size() == 1 && L.front() == "∅") L.clear();
      return weak_transitivity_certificate(ground, args[0], args[1], args[2], L);
    }
    if (family == "lm20") {
      if (open == std::string_view::npos) {
        if (ground.size() < 4) return std::nullopt;
        auto cert = lm20_certificate(ground, ground[0], ground[1], ground[2], ground[3]);
        cert.name = "lm20";
        return cert;
      }
      if (args.size() == 4) return lm20_certificate(ground, args[0], args[1], args[2], args[3]);
    }
  } catch (const DomainError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

namespace {

bool subset_of(const std::vector<CIStatement>& small, const std::vector<CIStatement>& big) {
  return std::all_of(small.begin(), small.end(),
                     [&](const CIStatement& s) { return std::find(big.begin(), big.end(), s) != big.end(); });
}

const InferenceRule& lm20_rule() {
  static const InferenceRule rule =
      InferenceRule::from_text("lm20", "[i,j|k] & [i,k|l] & [i,l|j] => [i,j|]", /*extend_conditioning=*/false);
  return rule;
}

}  // namespace

std::optional<CertifiedFormula> certify_with_builtins(const InferenceFormula& phi, const GroundSet& ground) {
  auto matches = [&](const RuleInstance& inst) {
    return subset_of(inst.formula.antecedents, phi.antecedents) && subset_of(inst.formula.consequents, phi.consequents);
  };
  auto accept = [&](FinalPolynomialCertificate cert, const RuleInstance& inst) -> std::optional<CertifiedFormula> {
    if (!verify_final_polynomial(cert).valid) return std::nullopt;
    return CertifiedFormula{std::move(cert), inst.formula};
  };
  for (const auto& inst : instantiate(weak_transitivity_rule(), ground)) {
    if (!matches(inst)) continue;
    const auto& a = inst.assignment;
    if (auto r = accept(weak_transitivity_certificate(ground, a.at("i"), a.at("j"), a.at("k"), inst.extension), inst)) {
      return r;
    }
  }
  for (const auto& inst : instantiate(lm20_rule(), ground)) {
    if (!matches(inst)) continue;
    const auto& a = inst.assignment;
    if (auto r = accept(lm20_certificate(ground, a.at("i"), a.at("j"), a.at("k"), a.at("l")), inst)) return r;
  }
  return std::nullopt;
}

}  // namespace gci
