#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <json.hpp>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gci/rational.hpp"

namespace gci {

// Variable names are the identity of a variable; the kind is read off the
// name prefix: s_a_b (covariance entry), p_K (principal bracket),
// a_i_j_K (almost-principal bracket), x_... (point coordinate).
enum class VarKind { sigma, principal_bracket, apm_bracket, point_coordinate, auxiliary };

VarKind var_kind(std::string_view name);

class Monomial {
 public:
  using Factor = std::pair<std::string, std::uint32_t>;

  Monomial() = default;
  // Sorts by name, merges repeated names and drops zero exponents.
  explicit Monomial(std::vector<Factor> factors);

  static Monomial variable(std::string name, std::uint32_t exponent = 1);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }
  std::uint32_t degree() const noexcept;
  std::uint32_t exponent(std::string_view var) const noexcept;

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  // Requires divisor.divides(*this).
  Monomial operator/(const Monomial& divisor) const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Factor> factors_;
};

// Total monomial order. Variables listed in `priority` rank highest, in list
// order; all others follow in name order.
class MonomialOrder {
 public:
  enum class Kind { degrevlex, deglex, lex };

  MonomialOrder() = default;
  explicit MonomialOrder(Kind kind, std::vector<std::string> priority = {});

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::string>& priority() const noexcept { return priority_; }

  // Negative if a < b, zero if equal, positive if a > b.
  int compare(const Monomial& a, const Monomial& b) const;
  // True if variable a ranks above variable b.
  bool var_greater(std::string_view a, std::string_view b) const;

 private:
  Kind kind_ = Kind::degrevlex;
  std::vector<std::string> priority_;
  std::unordered_map<std::string, std::size_t> rank_;
};

class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rat>;

  Polynomial() = default;
  Polynomial(const Rat& c);  // NOLINT: constants convert implicitly
  Polynomial(long c) : Polynomial(Rat(c)) {}  // NOLINT

  static Polynomial variable(std::string name);
  static Polynomial term(const Rat& coeff, Monomial m);

  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  Rat constant_term() const;
  std::uint32_t total_degree() const noexcept;
  std::set<std::string> variables() const;
  Rat coefficient(const Monomial& m) const;

  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(const Polynomial& q);
  Polynomial& operator*=(const Rat& c);
  // this += c * m * q, the workhorse of reduction loops
  void add_scaled(const Rat& c, const Monomial& m, const Polynomial& q);

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(Polynomial p, const Rat& c) { return p *= c; }
  friend Polynomial operator*(const Rat& c, Polynomial p) { return p *= c; }
  Polynomial operator-() const;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial pow(unsigned e) const;

  // Throws DomainError naming the first unassigned variable.
  Rat evaluate(const std::map<std::string, Rat>& assignment) const;
  double evaluate(const std::function<double(const std::string&)>& value) const;
  // Sum of |coeff * monomial| at the point; the natural scale for |evaluate|.
  double term_magnitude(const std::function<double(const std::string&)>& value) const;

  // Ring homomorphism sending each variable through `image`.
  Polynomial substitute(const std::function<Polynomial(const std::string&)>& image) const;

 private:
  void insert_term(const Monomial& m, const Rat& c);

  TermMap terms_;
};

// Canonical printing: terms sorted decreasingly in `order`, e.g.
// "s_i_j*s_k_k - s_i_k*s_j_k". The default order is deglex by name.
std::string to_string(const Polynomial& p, const MonomialOrder& order = MonomialOrder(MonomialOrder::Kind::deglex));

// Terms in decreasing order.
std::vector<std::pair<Monomial, Rat>> sorted_terms(const Polynomial& p, const MonomialOrder& order);

// JSON term-list encoding: [{"coeff": "p/q", "monomial": {"var": exp}}, ...].
nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace gci
