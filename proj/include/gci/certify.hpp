#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gci/axioms.hpp"
#include "gci/ci.hpp"
#include "gci/groebner.hpp"
#include "gci/polynomial.hpp"

namespace gci {

// { f_i = 0, g_j >= 0, h_k != 0 }
struct SemialgebraicSystem {
  std::vector<Polynomial> equations;     // f
  std::vector<Polynomial> nonnegative;   // g
  std::vector<Polynomial> nonvanishing;  // h

  friend bool operator==(const SemialgebraicSystem&, const SemialgebraicSystem&) = default;
};

struct CompileOptions {
  // Also list every principal minor among the h_k (strict positivity).
  bool principal_minors_nonvanishing = false;
};

// f: almost-principal minors of the independences; h: those of the
// dependences (then, optionally, the principal minors); g: [K:Sigma] for
// every nonempty K, smallest K first.
SemialgebraicSystem compile_model(const CIModelSpec& spec, const CompileOptions& options = {});

struct IdealTerm {
  Polynomial cofactor;
  std::size_t index = 0;  // into equations
};

struct ConeTerm {
  Rat weight;
  Polynomial square;                   // s, contributing s^2
  std::vector<std::size_t> g_indices;  // product of these g_j multiplies s^2
};

// target = sum cofactor_t * f_{index_t}                      (ideal part)
// target = sum weight_e * s_e^2 * prod_{j in e} g_j + u^2     (positivity part)
// with u the product of the h_k listed in monoid_part. An absent monoid part
// contributes nothing; an empty one contributes u = 1.
struct FinalPolynomialCertificate {
  std::string name;
  SemialgebraicSystem system;
  Polynomial target;
  std::vector<IdealTerm> ideal_part;
  std::vector<ConeTerm> cone_part;
  std::optional<std::vector<std::size_t>> monoid_part;
};

// Throws DomainError for an equation index out of range.
bool verify_ideal_part(const FinalPolynomialCertificate& cert, const SemialgebraicSystem& system);
// Throws DomainError for a nonpositive weight or an index out of range.
bool verify_positivity_part(const FinalPolynomialCertificate& cert, const SemialgebraicSystem& system);

struct CertificateVerdict {
  bool valid = false;
  std::string reason;  // which identity failed, when invalid
};

// Valid iff both identities hold and a monoid part is present, so that the
// target is simultaneously zero and strictly positive on the system.
CertificateVerdict verify_final_polynomial(const FinalPolynomialCertificate& cert, const SemialgebraicSystem& system);
CertificateVerdict verify_final_polynomial(const FinalPolynomialCertificate& cert);

nlohmann::json to_json(const SemialgebraicSystem& system);
SemialgebraicSystem system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FinalPolynomialCertificate& cert);
// Throws FormatError on schema violations.
FinalPolynomialCertificate certificate_from_json(const nlohmann::json& j);

// ------------------------------------------------------- bracket positivity

struct BracketPositivity {
  bool nonnegative_on_pd = false;         // positive coefficients, apm brackets squared
  bool strictly_positive_on_pd = false;   // ... and some term is principal brackets only
};

// Reads positivity off the shape of a bracket polynomial: principal brackets
// are positive on the PD cone, squared almost-principal brackets nonnegative.
BracketPositivity analyze_bracket_positivity(const Polynomial& f, const GroundSet& ground);

// ----------------------------------------------------------- built-ins

// [ij|L] & [ij|kL] => [ik|L] | [jk|L], certified by the Matus identity:
// ([ik|L][jk|L])^2 = [ik|L][jk|L] ([kL][ij|L] - [L][ij|kL]).
FinalPolynomialCertificate weak_transitivity_certificate(const GroundSet& ground, const Label& i, const Label& j,
                                                         const Label& k, const LabelSet& L);

// The bracket polynomial [ij|](  [jk][jl|]^2[kl|]^2 + [j][k]^2[l][jl] + [j][k][kl][jl|]^2 ).
Polynomial lm20_final_bracket_polynomial(const GroundSet& ground, const Label& i, const Label& j, const Label& k,
                                         const Label& l);
// Its second factor.
Polynomial lm20_positive_factor(const GroundSet& ground, const Label& i, const Label& j, const Label& k,
                                const Label& l);

// [ij|k] & [ik|l] & [il|j] => [ij|], certified over the system with the
// principal minors also nonvanishing. The ideal cofactors come from the
// Groebner engine. Throws BudgetExceeded if the engine gives up.
FinalPolynomialCertificate lm20_certificate(const GroundSet& ground, const Label& i, const Label& j, const Label& k,
                                            const Label& l);

// "weak-transitivity(i,j,k,∅)" for every instantiation over the ground set,
// plus "lm20" on the first four labels when n >= 4.
std::map<std::string, FinalPolynomialCertificate> builtin_certificates(const GroundSet& ground);

// Also accepts parametric names "weak-transitivity(a,b,c,L...)" and
// "lm20(a,b,c,d)". Absent for unknown or malformed names.
std::optional<FinalPolynomialCertificate> find_builtin_certificate(std::string_view name, const GroundSet& ground);

struct CertifiedFormula {
  FinalPolynomialCertificate certificate;
  InferenceFormula certified;  // the built-in instance; phi is weaker or equal
};

// Looks for a built-in rule instance whose antecedents are among phi's and
// whose consequents are among phi's; returns its verified certificate.
std::optional<CertifiedFormula> certify_with_builtins(const InferenceFormula& phi, const GroundSet& ground);

}  // namespace gci
