#pragma once

#include <memory>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gci/ci.hpp"
#include "gci/rational.hpp"

namespace gci {

// Dense univariate polynomial over Q, coefficients from degree 0 upward,
// without trailing zeros (the zero polynomial is empty).
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rat> coeffs);
  static UPoly x();

  const std::vector<Rat>& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const noexcept { return c_.empty(); }
  const Rat& lead() const { return c_.back(); }
  Rat operator()(const Rat& x) const;
  double operator()(double x) const;

  UPoly derivative() const;
  UPoly monic() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const Rat& c, const UPoly& a);
  friend bool operator==(const UPoly&, const UPoly&) = default;

 private:
  void trim();
  std::vector<Rat> c_;
};

// Quotient and remainder; throws DomainError for a zero divisor.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
// Monic gcd (zero only if both are zero).
UPoly gcd(const UPoly& a, const UPoly& b);
bool is_square_free(const UPoly& p);

std::vector<UPoly> sturm_sequence(const UPoly& p);
// Number of distinct real roots in the half-open interval (lo, hi].
std::size_t count_roots(const std::vector<UPoly>& sturm, const Rat& lo, const Rat& hi);
// Disjoint isolating intervals (lo, hi], one per distinct real root, in
// increasing order. Rational roots get the degenerate interval [r, r].
std::vector<std::pair<Rat, Rat>> isolate_real_roots(const UPoly& p);

// A real root of a square-free polynomial, pinned by an isolating interval.
// Irreducibility is not checked: a reducible m with a correctly isolating
// interval still gives correct signs.
class AlgebraicReal {
 public:
  // Throws DomainError unless m is square-free of degree >= 1 and the
  // interval contains exactly one root of m (lo == hi allowed for a rational
  // root).
  AlgebraicReal(UPoly minpoly, Rat lo, Rat hi);
  static AlgebraicReal rational(const Rat& r);

  const UPoly& minpoly() const noexcept { return m_; }
  const Rat& lo() const noexcept { return lo_; }
  const Rat& hi() const noexcept { return hi_; }
  int degree() const noexcept { return m_.degree(); }
  bool is_exact() const noexcept { return lo_ == hi_; }

  // Interval of width at most `width` (returns a narrowed copy).
  AlgebraicReal refined(const Rat& width) const;
  AlgebraicReal bisected() const;
  double approx() const;

  friend bool operator==(const AlgebraicReal&, const AlgebraicReal&) = default;

 private:
  AlgebraicReal() = default;
  UPoly m_;
  Rat lo_, hi_;
};

// An element of Q(alpha): a polynomial in alpha of degree < deg(m).
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(std::shared_ptr<const AlgebraicReal> alpha, std::vector<Rat> coeffs);
  FieldElement(std::shared_ptr<const AlgebraicReal> alpha, const Rat& c);
  static FieldElement generator(std::shared_ptr<const AlgebraicReal> alpha);

  const std::shared_ptr<const AlgebraicReal>& alpha() const noexcept { return alpha_; }
  const UPoly& poly() const noexcept { return p_; }
  bool is_zero() const noexcept { return p_.is_zero(); }

  // Throws DomainError when mixing different alphas.
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  // Throws DomainError for zero.
  FieldElement inverse() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);

  double approx() const;

 private:
  const AlgebraicReal& field_of(const FieldElement& other) const;
  std::shared_ptr<const AlgebraicReal> alpha_;
  UPoly p_;
};

// Exact sign of a(alpha): a gcd test decides zero, otherwise the interval of
// alpha is bisected until a's interval image excludes 0.
int sign_of(const FieldElement& a);
inline int sign(const FieldElement& a) { return sign_of(a); }
inline bool exact_is_zero(const FieldElement& a) { return sign_of(a) == 0; }
inline FieldElement ring_one(const FieldElement& like) { return FieldElement(like.alpha(), Rat(1)); }

// "3/2 + 2*a - a^2" in the generator a; plain rationals for degree one.
std::string to_string(const FieldElement& a);

using FieldCovariance = SymmetricMatrix<FieldElement>;

// Throws DomainError if the entries do not share one alpha.
void check_shared_alpha(const FieldCovariance& sigma);
// Rationals as the degree-one field Q(0).
FieldCovariance to_field(const RationalCovariance& sigma);

// {"ground_set": [...], "alpha": {"minpoly": ["c0","c1",...], "interval": ["lo","hi"]},
//  "entries": [[["c0","c1"], ...], ...]}. Throws FormatError.
FieldCovariance field_covariance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FieldCovariance& sigma);
// Either schema: a field matrix when "alpha" is present, else a rational one.
FieldCovariance any_covariance_from_json(const nlohmann::json& j);

template <class T>
bool is_principally_regular(const SymmetricMatrix<T>& sigma) {
  const auto& g = sigma.ground_set();
  for (const auto& K : g.subsets(g.labels())) {
    if (!K.empty() && sign(principal_minor(sigma, K)) == 0) return false;
  }
  return true;
}

struct MinorValue {
  std::string what;  // "[K]" or the statement
  FieldElement value;
  int sign = 0;
};

struct StatementCheck {
  CIStatement statement;
  bool antecedent = true;  // antecedent: must vanish; consequent: must not
  FieldElement value;
  int sign = 0;
  bool ok = false;
};

struct CounterexampleReport {
  std::vector<MinorValue> principal_minors;
  bool positive_definite = false;
  bool principally_regular = false;
  std::vector<StatementCheck> statements;
  bool statements_ok = false;
  bool confirmed = false;                       // PD and statements_ok
  bool confirmed_principally_regular = false;   // principally regular and statements_ok
  std::string reason;                           // why not confirmed
};

// Throws DomainError on mixed alphas or statements outside the ground set.
CounterexampleReport verify_counterexample(const FieldCovariance& sigma, const InferenceFormula& phi);
CounterexampleReport verify_counterexample(const RationalCovariance& sigma, const InferenceFormula& phi);

nlohmann::json to_json(const CounterexampleReport& report, const GroundSet& ground);

}  // namespace gci
