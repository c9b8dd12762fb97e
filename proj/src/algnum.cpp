#include "gci/algnum.hpp"

#include <algorithm>
#include <cmath>

namespace gci {

// ------------------------------------------------------------------ UPoly

UPoly::UPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::x() { return UPoly({Rat(0), Rat(1)}); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rat UPoly::operator()(const Rat& x) const {
  Rat acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double UPoly::operator()(double x) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

UPoly UPoly::derivative() const {
  std::vector<Rat> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  const Rat inv = 1 / lead();
  return inv * *this;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] -= b.c_[k];
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t p = 0; p < a.c_.size(); ++p) {
    for (std::size_t q = 0; q < b.c_.size(); ++q) c[p + q] += a.c_[p] * b.c_[q];
  }
  return UPoly(std::move(c));
}

UPoly operator*(const Rat& c, const UPoly& a) {
  std::vector<Rat> out = a.c_;
  for (auto& x : out) x *= c;
  return UPoly(std::move(out));
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rat> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {UPoly(), a};
  std::vector<Rat> q(static_cast<std::size_t>(a.degree() - db + 1));
  for (int k = a.degree(); k >= db; --k) {
    const Rat c = r[static_cast<std::size_t>(k)] / b.lead();
    if (c == 0) continue;
    q[static_cast<std::size_t>(k - db)] = c;
    for (int t = 0; t <= db; ++t) r[static_cast<std::size_t>(k - db + t)] -= c * b.coeffs()[static_cast<std::size_t>(t)];
  }
  r.resize(static_cast<std::size_t>(db));
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a;
  UPoly y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

bool is_square_free(const UPoly& p) { return !p.is_zero() && gcd(p, p.derivative()).degree() == 0; }

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq{p};
  if (p.degree() <= 0) return seq;
  seq.push_back(p.derivative());
  while (true) {
    UPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(Rat(-1) * r);
  }
  return seq;
}

namespace {

std::size_t sign_changes(const std::vector<UPoly>& sturm, const Rat& x) {
  std::size_t changes = 0;
  int last = 0;
  for (const auto& q : sturm) {
    const int s = sgn(q(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Rat cauchy_bound(const UPoly& p) {
  Rat m = 0;
  for (int k = 0; k < p.degree(); ++k) {
    Rat r = abs(p.coeffs()[static_cast<std::size_t>(k)] / p.lead());
    if (r > m) m = r;
  }
  return m + 1;
}

}  // namespace

std::size_t count_roots(const std::vector<UPoly>& sturm, const Rat& lo, const Rat& hi) {
  if (hi <= lo) return 0;
  const std::size_t a = sign_changes(sturm, lo);
  const std::size_t b = sign_changes(sturm, hi);
  return a >= b ? a - b : 0;
}

std::vector<std::pair<Rat, Rat>> isolate_real_roots(const UPoly& p) {
  std::vector<std::pair<Rat, Rat>> out;
  if (p.degree() <= 0) return out;
  const UPoly sf = divmod(p, gcd(p, p.derivative())).first;
  const auto sturm = sturm_sequence(sf);
  const Rat b = cauchy_bound(sf);
  std::vector<std::pair<Rat, Rat>> stack{{-b, b}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    const std::size_t n = count_roots(sturm, lo, hi);
    if (n == 0) continue;
    if (n == 1) {
      if (sf(hi) == 0) {
        out.emplace_back(hi, hi);
      } else {
        out.emplace_back(lo, hi);
      }
      continue;
    }
    const Rat mid = (lo + hi) / 2;
    stack.emplace_back(lo, mid);
    stack.emplace_back(mid, hi);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  return out;
}

// ---------------------------------------------------------- AlgebraicReal

AlgebraicReal::AlgebraicReal(UPoly minpoly, Rat lo, Rat hi) : m_(std::move(minpoly)), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (m_.degree() < 1) throw DomainError("minimal polynomial must have degree >= 1");
  if (!is_square_free(m_)) throw DomainError("minimal polynomial is not square-free");
  if (lo_ > hi_) throw DomainError("isolating interval has lo > hi");
  if (lo_ == hi_) {
    if (m_(lo_) != 0) throw DomainError("degenerate interval is not a root");
    return;
  }
  if (count_roots(sturm_sequence(m_), lo_, hi_) != 1) {
    throw DomainError("interval does not isolate exactly one root");
  }
  if (m_(hi_) == 0) lo_ = hi_;
}

AlgebraicReal AlgebraicReal::rational(const Rat& r) { return AlgebraicReal(UPoly({Rat(-r), Rat(1)}), r, r); }

AlgebraicReal AlgebraicReal::bisected() const {
  if (is_exact()) return *this;
  AlgebraicReal out = *this;
  const Rat mid = (lo_ + hi_) / 2;
  if (m_(mid) == 0) {
    if (count_roots(sturm_sequence(m_), lo_, mid) == 1) {
      out.lo_ = mid;
      out.hi_ = mid;
      return out;
    }
    out.lo_ = mid;
    return out;
  }
  // One simple root in (lo, hi] with m(hi) != 0: a sign change locates it,
  // unless m(lo) == 0 where the root is not counted.
  if (m_(lo_) != 0) {
    if (sgn(m_(lo_)) != sgn(m_(mid))) {
      out.hi_ = mid;
    } else {
      out.lo_ = mid;
    }
    return out;
  }
  if (count_roots(sturm_sequence(m_), lo_, mid) == 1) {
    out.hi_ = mid;
  } else {
    out.lo_ = mid;
  }
  return out;
}

AlgebraicReal AlgebraicReal::refined(const Rat& width) const {
  AlgebraicReal out = *this;
  while (!out.is_exact() && out.hi_ - out.lo_ > width) out = out.bisected();
  return out;
}

double AlgebraicReal::approx() const {
  const AlgebraicReal r = refined(Rat(1, 1u << 30) * Rat(1, 1u << 30));
  return Rat((r.lo_ + r.hi_) / 2).get_d();
}

// ----------------------------------------------------------- FieldElement

namespace {

UPoly reduce_mod(const UPoly& p, const AlgebraicReal& alpha) { return divmod(p, alpha.minpoly()).second; }

bool same_alpha(const std::shared_ptr<const AlgebraicReal>& a, const std::shared_ptr<const AlgebraicReal>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace

FieldElement::FieldElement(std::shared_ptr<const AlgebraicReal> alpha, std::vector<Rat> coeffs)
    : alpha_(std::move(alpha)) {
  if (!alpha_) throw DomainError("field element without a generator");
  p_ = reduce_mod(UPoly(std::move(coeffs)), *alpha_);
}

FieldElement::FieldElement(std::shared_ptr<const AlgebraicReal> alpha, const Rat& c)
    : FieldElement(std::move(alpha), std::vector<Rat>{c}) {}

FieldElement FieldElement::generator(std::shared_ptr<const AlgebraicReal> alpha) {
  return FieldElement(std::move(alpha), std::vector<Rat>{Rat(0), Rat(1)});
}

const AlgebraicReal& FieldElement::field_of(const FieldElement& other) const {
  if (!same_alpha(alpha_, other.alpha_)) throw DomainError("field elements over different generators");
  return *alpha_;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  a.field_of(b);
  FieldElement out = a;
  out.p_ = a.p_ + b.p_;
  return out;
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  a.field_of(b);
  FieldElement out = a;
  out.p_ = a.p_ - b.p_;
  return out;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const AlgebraicReal& alpha = a.field_of(b);
  FieldElement out = a;
  out.p_ = reduce_mod(a.p_ * b.p_, alpha);
  return out;
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  a.field_of(b);
  return a * b.inverse();
}

FieldElement FieldElement::operator-() const {
  FieldElement out = *this;
  out.p_ = Rat(-1) * p_;
  return out;
}

FieldElement FieldElement::inverse() const {
  if (p_.is_zero()) throw DomainError("inverse of zero");
  // Extended Euclid: s*p + t*m = g.
  UPoly r0 = alpha_->minpoly(), r1 = p_;
  UPoly s0, s1({Rat(1)});
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    UPoly s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.degree() != 0) {
    if (sign_of(*this) == 0) throw DomainError("inverse of zero");
    throw DomainError("minimal polynomial is reducible; cannot invert");
  }
  FieldElement out = *this;
  out.p_ = reduce_mod((1 / r0.lead()) * s0, *alpha_);
  return out;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.p_ != b.p_) return false;
  return a.p_.degree() <= 0 || same_alpha(a.alpha_, b.alpha_);
}

double FieldElement::approx() const { return p_(alpha_->approx()); }

namespace {

// Closed interval hull of p over [lo, hi], by Horner in interval arithmetic.
std::pair<Rat, Rat> interval_image(const UPoly& p, const Rat& lo, const Rat& hi) {
  Rat a = 0, b = 0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    const Rat c[4] = {a * lo, a * hi, b * lo, b * hi};
    a = *std::min_element(c, c + 4) + *it;
    b = *std::max_element(c, c + 4) + *it;
  }
  return {a, b};
}

}  // namespace

int sign_of(const FieldElement& a) {
  if (a.is_zero()) return 0;
  const UPoly& p = a.poly();
  if (p.degree() == 0) return sgn(p.lead());
  AlgebraicReal alpha = *a.alpha();
  if (alpha.is_exact()) return sgn(p(alpha.lo()));
  const UPoly g = gcd(p, alpha.minpoly());
  if (g.degree() > 0) {
    if (count_roots(sturm_sequence(g), alpha.lo(), alpha.hi()) > 0) return 0;
  }
  while (true) {
    if (alpha.is_exact()) return sgn(p(alpha.lo()));
    auto [lo, hi] = interval_image(p, alpha.lo(), alpha.hi());
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    alpha = alpha.bisected();
  }
}

std::string to_string(const FieldElement& a) {
  const auto& c = a.poly().coeffs();
  if (c.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    const Rat mag = abs(c[k]);
    if (out.empty()) {
      if (c[k] < 0) out += "-";
    } else {
      out += c[k] < 0 ? " - " : " + ";
    }
    if (k == 0) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + "*";
      out += "a";
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

// ----------------------------------------------------------------- matrices

void check_shared_alpha(const FieldCovariance& sigma) {
  if (sigma.entries().empty()) return;
  const auto& a = sigma.entries().front().alpha();
  for (const auto& e : sigma.entries()) {
    if (!same_alpha(a, e.alpha())) throw DomainError("matrix entries over different generators");
  }
}

FieldCovariance to_field(const RationalCovariance& sigma) {
  auto alpha = std::make_shared<const AlgebraicReal>(AlgebraicReal::rational(Rat(0)));
  std::vector<FieldElement> entries;
  entries.reserve(sigma.entries().size());
  for (const auto& r : sigma.entries()) entries.emplace_back(alpha, r);
  return FieldCovariance(sigma.ground_set(), std::move(entries));
}

namespace {

Rat rat_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(Int(std::to_string(j.get<long long>())));
  throw FormatError("expected a rational as a string or integer");
}

std::vector<Rat> rat_list(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string("'") + what + "' must be an array");
  std::vector<Rat> out;
  for (const auto& x : j) out.push_back(rat_from_json(x));
  return out;
}

nlohmann::json rat_list_json(const std::vector<Rat>& v) {
  auto arr = nlohmann::json::array();
  for (const auto& x : v) arr.push_back(to_string(x));
  return arr;
}

}  // namespace

FieldCovariance field_covariance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ground_set") || !j.contains("alpha") || !j.contains("entries")) {
    throw FormatError("field matrix needs 'ground_set', 'alpha' and 'entries'");
  }
  GroundSet g = ground_set_from_json(j["ground_set"]);
  const auto& a = j["alpha"];
  if (!a.is_object() || !a.contains("minpoly") || !a.contains("interval")) {
    throw FormatError("'alpha' needs 'minpoly' and 'interval'");
  }
  const auto interval = rat_list(a["interval"], "interval");
  if (interval.size() != 2) throw FormatError("'interval' must have two endpoints");
  std::shared_ptr<const AlgebraicReal> alpha;
  try {
    alpha = std::make_shared<const AlgebraicReal>(UPoly(rat_list(a["minpoly"], "minpoly")), interval[0], interval[1]);
  } catch (const DomainError& e) {
    throw FormatError(std::string("alpha: ") + e.what());
  }
  const auto& rows = j["entries"];
  if (!rows.is_array() || rows.size() != g.size()) throw FormatError("'entries' must have one row per label");
  std::vector<FieldElement> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != g.size()) throw FormatError("'entries' rows must have one entry per label");
    for (const auto& e : row) entries.emplace_back(alpha, rat_list(e, "entry"));
  }
  return FieldCovariance(std::move(g), std::move(entries));
}

nlohmann::json to_json(const FieldCovariance& sigma) {
  check_shared_alpha(sigma);
  nlohmann::json j;
  j["ground_set"] = sigma.ground_set().labels();
  if (sigma.size() == 0) throw DomainError("empty field matrix has no generator");
  const auto& alpha = *sigma(0, 0).alpha();
  j["alpha"] = {{"minpoly", rat_list_json(alpha.minpoly().coeffs())},
                {"interval", {to_string(alpha.lo()), to_string(alpha.hi())}}};
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < sigma.size(); ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < sigma.size(); ++c) row.push_back(rat_list_json(sigma(r, c).poly().coeffs()));
    rows.push_back(row);
  }
  j["entries"] = rows;
  return j;
}

FieldCovariance any_covariance_from_json(const nlohmann::json& j) {
  if (j.is_object() && j.contains("alpha")) return field_covariance_from_json(j);
  return to_field(rational_covariance_from_json(j));
}

// ----------------------------------------------------------- verification

CounterexampleReport verify_counterexample(const FieldCovariance& sigma, const InferenceFormula& phi) {
  check_shared_alpha(sigma);
  const GroundSet& g = sigma.ground_set();
  CounterexampleReport rep;
  rep.positive_definite = true;
  rep.principally_regular = true;
  std::string pd_failure;
  for (const auto& K : g.subsets(g.labels())) {
    if (K.empty()) continue;
    MinorValue mv{"[" + concat_labels(K) + "]", principal_minor(sigma, K), 0};
    mv.sign = sign_of(mv.value);
    if (mv.sign <= 0 && rep.positive_definite) {
      rep.positive_definite = false;
      pd_failure = "not positive definite: " + mv.what + " = " + to_string(mv.value);
    }
    if (mv.sign == 0) rep.principally_regular = false;
    rep.principal_minors.push_back(std::move(mv));
  }
  rep.statements_ok = true;
  std::string stmt_failure;
  auto check = [&](const CIStatement& s, bool antecedent) {
    validate(s, g);
    StatementCheck c{s, antecedent, almost_principal_minor(sigma, s.i, s.j, s.K), 0, false};
    c.sign = sign_of(c.value);
    c.ok = antecedent ? c.sign == 0 : c.sign != 0;
    if (!c.ok && rep.statements_ok) {
      rep.statements_ok = false;
      stmt_failure = antecedent ? "antecedent " + to_string(s, g) + " does not hold: minor = " + to_string(c.value)
                                : "consequent " + to_string(s, g) + " holds: minor = 0";
    }
    rep.statements.push_back(std::move(c));
  };
  for (const auto& s : phi.antecedents) check(s, true);
  for (const auto& s : phi.consequents) check(s, false);
  rep.confirmed = rep.positive_definite && rep.statements_ok;
  rep.confirmed_principally_regular = rep.principally_regular && rep.statements_ok;
  rep.reason = pd_failure;
  if (!stmt_failure.empty()) rep.reason += (rep.reason.empty() ? "" : "; ") + stmt_failure;
  return rep;
}

CounterexampleReport verify_counterexample(const RationalCovariance& sigma, const InferenceFormula& phi) {
  return verify_counterexample(to_field(sigma), phi);
}

nlohmann::json to_json(const CounterexampleReport& report, const GroundSet& ground) {
  nlohmann::json j;
  j["confirmed"] = report.confirmed;
  j["confirmed_principally_regular"] = report.confirmed_principally_regular;
  j["positive_definite"] = report.positive_definite;
  j["principally_regular"] = report.principally_regular;
  j["statements_ok"] = report.statements_ok;
  if (!report.reason.empty()) j["reason"] = report.reason;
  auto pm = nlohmann::json::array();
  for (const auto& m : report.principal_minors) {
    pm.push_back({{"minor", m.what}, {"value", to_string(m.value)}, {"sign", m.sign}});
  }
  j["principal_minors"] = pm;
  auto st = nlohmann::json::array();
  for (const auto& s : report.statements) {
    st.push_back({{"statement", to_string(s.statement, ground)},
                  {"role", s.antecedent ? "antecedent" : "consequent"},
                  {"value", to_string(s.value)},
                  {"sign", s.sign},
                  {"ok", s.ok}});
  }
  j["statements"] = st;
  return j;
}

}  // namespace gci
