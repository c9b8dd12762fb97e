#include "gci/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gci/errors.hpp"

namespace gci {

VarKind var_kind(std::string_view name) {
  if (name.starts_with("s_")) return VarKind::sigma;
  if (name.starts_with("p_")) return VarKind::principal_bracket;
  if (name.starts_with("a_")) return VarKind::apm_bracket;
  if (name.starts_with("x_")) return VarKind::point_coordinate;
  return VarKind::auxiliary;
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(), [](const Factor& a, const Factor& b) { return a.first < b.first; });
  for (auto& f : factors) {
    if (f.second == 0) continue;
    if (!factors_.empty() && factors_.back().first == f.first) {
      factors_.back().second += f.second;
    } else {
      factors_.push_back(std::move(f));
    }
  }
}

Monomial Monomial::variable(std::string name, std::uint32_t exponent) {
  Monomial m;
  if (exponent > 0) m.factors_.emplace_back(std::move(name), exponent);
  return m;
}

std::uint32_t Monomial::degree() const noexcept {
  std::uint32_t d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

std::uint32_t Monomial::exponent(std::string_view var) const noexcept {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), var,
                             [](const Factor& f, std::string_view v) { return f.first < v; });
  return (it != factors_.end() && it->first == var) ? it->second : 0;
}

bool Monomial::divides(const Monomial& other) const {
  auto it = other.factors_.begin();
  for (const auto& f : factors_) {
    while (it != other.factors_.end() && it->first < f.first) ++it;
    if (it == other.factors_.end() || it->first != f.first || it->second < f.second) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return out;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  if (!divisor.divides(*this)) throw DomainError("monomial division is not exact");
  Monomial out;
  for (const auto& f : factors_) {
    std::uint32_t e = f.second - divisor.exponent(f.first);
    if (e > 0) out.factors_.emplace_back(f.first, e);
  }
  return out;
}

// ----------------------------------------------------------- MonomialOrder

MonomialOrder::MonomialOrder(Kind kind, std::vector<std::string> priority)
    : kind_(kind), priority_(std::move(priority)) {
  for (std::size_t r = 0; r < priority_.size(); ++r) rank_.emplace(priority_[r], r);
}

bool MonomialOrder::var_greater(std::string_view a, std::string_view b) const {
  auto ra = rank_.find(std::string(a));
  auto rb = rank_.find(std::string(b));
  bool ia = ra != rank_.end();
  bool ib = rb != rank_.end();
  if (ia && ib) return ra->second < rb->second;
  if (ia != ib) return ia;
  return a < b;
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  if (kind_ != Kind::lex) {
    auto da = a.degree();
    auto db = b.degree();
    if (da != db) return da < db ? -1 : 1;
  }
  std::vector<std::string_view> vars;
  for (const auto& f : a.factors()) vars.push_back(f.first);
  for (const auto& f : b.factors()) vars.push_back(f.first);
  std::sort(vars.begin(), vars.end(), [this](std::string_view x, std::string_view y) { return var_greater(x, y); });
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  if (kind_ == Kind::degrevlex) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      auto ea = a.exponent(*it);
      auto eb = b.exponent(*it);
      if (ea != eb) return ea < eb ? 1 : -1;
    }
    return 0;
  }
  for (auto v : vars) {
    auto ea = a.exponent(v);
    auto eb = b.exponent(v);
    if (ea != eb) return ea < eb ? -1 : 1;
  }
  return 0;
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const Rat& c) {
  if (c != 0) terms_.emplace(Monomial(), c);
}

Polynomial Polynomial::variable(std::string name) { return term(Rat(1), Monomial::variable(std::move(name))); }

Polynomial Polynomial::term(const Rat& coeff, Monomial m) {
  Polynomial p;
  if (coeff != 0) p.terms_.emplace(std::move(m), coeff);
  return p;
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rat Polynomial::constant_term() const { return coefficient(Monomial()); }

Rat Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

std::uint32_t Polynomial::total_degree() const noexcept {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

std::set<std::string> Polynomial::variables() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_) {
    for (const auto& f : m.factors()) out.insert(f.first);
  }
  return out;
}

void Polynomial::insert_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  for (const auto& [m, c] : q.terms_) insert_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  for (const auto& [m, c] : q.terms_) insert_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [m, coeff] : terms_) coeff *= c;
  }
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& q) {
  *this = *this * q;
  return *this;
}

void Polynomial::add_scaled(const Rat& c, const Monomial& m, const Polynomial& q) {
  if (c == 0) return;
  for (const auto& [qm, qc] : q.terms_) insert_term(m * qm, c * qc);
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  Polynomial out;
  for (const auto& [pm, pc] : p.terms_) {
    for (const auto& [qm, qc] : q.terms_) out.insert_term(pm * qm, pc * qc);
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(Rat(1));
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Rat Polynomial::evaluate(const std::map<std::string, Rat>& assignment) const {
  Rat total = 0;
  for (const auto& [m, c] : terms_) {
    Rat value = c;
    for (const auto& [var, e] : m.factors()) {
      auto it = assignment.find(var);
      if (it == assignment.end()) throw DomainError("no value assigned to variable '" + var + "'");
      Rat power = 1;
      for (std::uint32_t k = 0; k < e; ++k) power *= it->second;
      value *= power;
    }
    total += value;
  }
  return total;
}

namespace {

double monomial_value(const Monomial& m, const std::function<double(const std::string&)>& value) {
  double v = 1.0;
  for (const auto& [var, e] : m.factors()) v *= std::pow(value(var), static_cast<double>(e));
  return v;
}

}  // namespace

double Polynomial::evaluate(const std::function<double(const std::string&)>& value) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) total += c.get_d() * monomial_value(m, value);
  return total;
}

double Polynomial::term_magnitude(const std::function<double(const std::string&)>& value) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) total += std::abs(c.get_d() * monomial_value(m, value));
  return total;
}

Polynomial Polynomial::substitute(const std::function<Polynomial(const std::string&)>& image) const {
  std::map<std::string, Polynomial> cache;
  auto lookup = [&](const std::string& var) -> const Polynomial& {
    auto it = cache.find(var);
    if (it == cache.end()) it = cache.emplace(var, image(var)).first;
    return it->second;
  };
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Polynomial t(c);
    for (const auto& [var, e] : m.factors()) t *= lookup(var).pow(e);
    out += t;
  }
  return out;
}

// ------------------------------------------------------------ presentation

std::vector<std::pair<Monomial, Rat>> sorted_terms(const Polynomial& p, const MonomialOrder& order) {
  std::vector<std::pair<Monomial, Rat>> terms(p.terms().begin(), p.terms().end());
  std::sort(terms.begin(), terms.end(),
            [&](const auto& a, const auto& b) { return order.compare(a.first, b.first) > 0; });
  return terms;
}

namespace {

std::string monomial_string(const Monomial& m, const MonomialOrder& order) {
  auto factors = m.factors();
  std::sort(factors.begin(), factors.end(),
            [&](const auto& a, const auto& b) { return order.var_greater(a.first, b.first); });
  std::string out;
  for (const auto& [var, e] : factors) {
    if (!out.empty()) out += '*';
    out += var;
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

}  // namespace

std::string to_string(const Polynomial& p, const MonomialOrder& order) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : sorted_terms(p, order)) {
    Rat mag = abs(c);
    if (first) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + '*';
      out += monomial_string(m, order);
    }
  }
  return out;
}

nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : sorted_terms(p, MonomialOrder(MonomialOrder::Kind::deglex))) {
    nlohmann::json mono = nlohmann::json::object();
    for (const auto& [var, e] : m.factors()) mono[var] = e;
    terms.push_back({{"coeff", to_string(c)}, {"monomial", mono}});
  }
  return terms;
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("polynomial must be a JSON array of terms");
  Polynomial out;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("coeff") || !t.contains("monomial")) {
      throw FormatError("polynomial term must have 'coeff' and 'monomial'");
    }
    Rat c;
    if (t["coeff"].is_string()) {
      c = parse_rat(t["coeff"].get<std::string>());
    } else if (t["coeff"].is_number_integer()) {
      c = Rat(Int(std::to_string(t["coeff"].get<long long>())));
    } else {
      throw FormatError("term coefficient must be a rational string");
    }
    const auto& mono = t["monomial"];
    if (!mono.is_object()) throw FormatError("term monomial must be an object");
    std::vector<Monomial::Factor> factors;
    for (const auto& [var, e] : mono.items()) {
      if (var.empty()) throw FormatError("empty variable name");
      if (!e.is_number_integer() || e.get<long long>() < 0 || e.get<long long>() > 1'000'000) {
        throw FormatError("exponent of '" + var + "' must be a non-negative integer");
      }
      factors.emplace_back(var, static_cast<std::uint32_t>(e.get<long long>()));
    }
    out += Polynomial::term(c, Monomial(std::move(factors)));
  }
  return out;
}

}  // namespace gci
