#include "gci/groebner.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "gci/errors.hpp"

namespace gci {

namespace {

// Dense exponent vectors over a fixed variable list (index 0 ranks highest).
struct DMono {
  std::vector<std::uint32_t> exp;
  std::uint32_t degree = 0;
};

struct DTerm {
  DMono mono;
  Rat coeff;
};

using DPoly = std::vector<DTerm>;  // strictly decreasing in the order

class Context {
 public:
  Context(const MonomialOrder& order, const std::set<std::string>& vars) : kind_(order.kind()) {
    vars_.assign(vars.begin(), vars.end());
    std::sort(vars_.begin(), vars_.end(),
              [&](const std::string& a, const std::string& b) { return order.var_greater(a, b); });
  }

  int compare(const DMono& a, const DMono& b) const {
    if (kind_ != MonomialOrder::Kind::lex && a.degree != b.degree) return a.degree < b.degree ? -1 : 1;
    const std::size_t n = vars_.size();
    if (kind_ == MonomialOrder::Kind::degrevlex) {
      for (std::size_t k = n; k-- > 0;) {
        if (a.exp[k] != b.exp[k]) return a.exp[k] < b.exp[k] ? 1 : -1;
      }
      return 0;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (a.exp[k] != b.exp[k]) return a.exp[k] < b.exp[k] ? -1 : 1;
    }
    return 0;
  }

  DPoly to_dense(const Polynomial& p) const {
    DPoly out;
    for (const auto& [m, c] : p.terms()) {
      DMono d{std::vector<std::uint32_t>(vars_.size(), 0), m.degree()};
      for (const auto& [var, e] : m.factors()) d.exp[index(var)] = e;
      out.push_back({std::move(d), c});
    }
    std::sort(out.begin(), out.end(), [&](const DTerm& a, const DTerm& b) { return compare(a.mono, b.mono) > 0; });
    return out;
  }

  Monomial to_monomial(const DMono& d) const {
    std::vector<Monomial::Factor> f;
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      if (d.exp[k] > 0) f.emplace_back(vars_[k], d.exp[k]);
    }
    return Monomial(std::move(f));
  }

  Polynomial to_sparse(const DPoly& p) const {
    Polynomial out;
    for (const auto& t : p) out += Polynomial::term(t.coeff, to_monomial(t.mono));
    return out;
  }

  // p - c * m * q
  DPoly sub_scaled(const DPoly& p, const Rat& c, const DMono& m, const DPoly& q) const {
    DPoly out;
    out.reserve(p.size() + q.size());
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < p.size() || b < q.size()) {
      if (b == q.size()) {
        out.push_back(p[a++]);
        continue;
      }
      DTerm shifted{mul(m, q[b].mono), Rat(-c * q[b].coeff)};
      int cmp = a == p.size() ? -1 : compare(p[a].mono, shifted.mono);
      if (cmp > 0) {
        out.push_back(p[a++]);
      } else if (cmp < 0) {
        out.push_back(std::move(shifted));
        ++b;
      } else {
        Rat sum = p[a].coeff + shifted.coeff;
        if (sum != 0) out.push_back({std::move(shifted.mono), std::move(sum)});
        ++a;
        ++b;
      }
    }
    return out;
  }

  static DMono mul(const DMono& a, const DMono& b) {
    DMono out{a.exp, a.degree + b.degree};
    for (std::size_t k = 0; k < out.exp.size(); ++k) out.exp[k] += b.exp[k];
    return out;
  }

  static bool divides(const DMono& a, const DMono& b) {
    if (a.degree > b.degree) return false;
    for (std::size_t k = 0; k < a.exp.size(); ++k) {
      if (a.exp[k] > b.exp[k]) return false;
    }
    return true;
  }

  static DMono quotient(const DMono& num, const DMono& den) {
    DMono out{num.exp, num.degree - den.degree};
    for (std::size_t k = 0; k < out.exp.size(); ++k) out.exp[k] -= den.exp[k];
    return out;
  }

  static DMono lcm(const DMono& a, const DMono& b) {
    DMono out{a.exp, 0};
    for (std::size_t k = 0; k < out.exp.size(); ++k) {
      out.exp[k] = std::max(a.exp[k], b.exp[k]);
      out.degree += out.exp[k];
    }
    return out;
  }

  static bool coprime(const DMono& a, const DMono& b) {
    for (std::size_t k = 0; k < a.exp.size(); ++k) {
      if (a.exp[k] > 0 && b.exp[k] > 0) return false;
    }
    return true;
  }

 private:
  std::size_t index(const std::string& var) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) throw std::logic_error("variable missing from Groebner context");
    return static_cast<std::size_t>(it - vars_.begin());
  }

  MonomialOrder::Kind kind_;
  std::vector<std::string> vars_;
};

struct Element {
  DPoly poly;
  std::vector<Polynomial> cof;  // over the input generators
};

void add_scaled_cofactors(std::vector<Polynomial>& target, const Rat& c, const Monomial& m,
                          const std::vector<Polynomial>& source) {
  for (std::size_t p = 0; p < target.size(); ++p) target[p].add_scaled(c, m, source[p]);
}

// Full reduction of e by `basis` (skipping index `skip`), tracking cofactors.
void reduce(Element& e, const std::vector<Element>& basis, const Context& ctx, std::size_t skip = SIZE_MAX) {
  DPoly remainder;
  DPoly p = std::move(e.poly);
  while (!p.empty()) {
    const DTerm& lt = p.front();
    bool reduced = false;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (b == skip || basis[b].poly.empty()) continue;
      const DTerm& blt = basis[b].poly.front();
      if (!Context::divides(blt.mono, lt.mono)) continue;
      DMono q = Context::quotient(lt.mono, blt.mono);
      Rat c = lt.coeff / blt.coeff;
      add_scaled_cofactors(e.cof, Rat(-c), ctx.to_monomial(q), basis[b].cof);
      p = ctx.sub_scaled(p, c, q, basis[b].poly);
      reduced = true;
      break;
    }
    if (!reduced) {
      remainder.push_back(std::move(p.front()));
      p.erase(p.begin());
    }
  }
  e.poly = std::move(remainder);
}

void make_monic(Element& e) {
  if (e.poly.empty()) return;
  Rat inv = 1 / e.poly.front().coeff;
  if (inv == 1) return;
  for (auto& t : e.poly) t.coeff *= inv;
  for (auto& c : e.cof) c *= inv;
}

std::set<std::string> variables_of(const std::vector<Polynomial>& ps) {
  std::set<std::string> vars;
  for (const auto& p : ps) {
    auto v = p.variables();
    vars.insert(v.begin(), v.end());
  }
  return vars;
}

}  // namespace

GroebnerBasis buchberger(std::vector<Polynomial> generators, const MonomialOrder& order,
                         const GroebnerBudget& budget) {
  GroebnerBasis result;
  result.order_ = order;
  result.generators_ = std::move(generators);
  const auto& gens = result.generators_;
  const Context ctx(order, variables_of(gens));

  std::vector<Element> basis;
  std::set<std::pair<std::size_t, std::size_t>> pending;

  auto add_element = [&](Element e) {
    make_monic(e);
    const std::size_t idx = basis.size();
    basis.push_back(std::move(e));
    for (std::size_t b = 0; b < idx; ++b) pending.emplace(b, idx);
    if (basis.size() > budget.max_basis_size) throw BudgetExceeded("Groebner basis exceeded the size budget");
  };

  for (std::size_t p = 0; p < gens.size(); ++p) {
    Element e{ctx.to_dense(gens[p]), std::vector<Polynomial>(gens.size())};
    e.cof[p] = Polynomial(Rat(1));
    reduce(e, basis, ctx);
    if (!e.poly.empty()) add_element(std::move(e));
  }

  while (!pending.empty()) {
    // Normal strategy: the pair with the smallest lcm.
    auto best = pending.begin();
    DMono best_lcm = Context::lcm(basis[best->first].poly.front().mono, basis[best->second].poly.front().mono);
    for (auto it = std::next(pending.begin()); it != pending.end(); ++it) {
      DMono l = Context::lcm(basis[it->first].poly.front().mono, basis[it->second].poly.front().mono);
      if (ctx.compare(l, best_lcm) < 0) {
        best = it;
        best_lcm = std::move(l);
      }
    }
    const auto [i, j] = *best;
    pending.erase(best);
    if (++result.pairs_considered_ > budget.max_pairs) throw BudgetExceeded("Groebner computation exceeded the pair budget");

    const DTerm& lti = basis[i].poly.front();
    const DTerm& ltj = basis[j].poly.front();
    if (Context::coprime(lti.mono, ltj.mono)) continue;
    bool chain = false;
    for (std::size_t k = 0; k < basis.size() && !chain; ++k) {
      if (k == i || k == j) continue;
      if (!Context::divides(basis[k].poly.front().mono, best_lcm)) continue;
      auto key = [](std::size_t a, std::size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
      chain = !pending.count(key(i, k)) && !pending.count(key(j, k));
    }
    if (chain) continue;

    DMono qi = Context::quotient(best_lcm, lti.mono);
    DMono qj = Context::quotient(best_lcm, ltj.mono);
    Rat ci = 1 / lti.coeff;
    Rat cj = 1 / ltj.coeff;
    Element s{DPoly{}, std::vector<Polynomial>(gens.size())};
    s.poly = ctx.sub_scaled(s.poly, Rat(-ci), qi, basis[i].poly);
    s.poly = ctx.sub_scaled(s.poly, cj, qj, basis[j].poly);
    add_scaled_cofactors(s.cof, ci, ctx.to_monomial(qi), basis[i].cof);
    add_scaled_cofactors(s.cof, Rat(-cj), ctx.to_monomial(qj), basis[j].cof);
    ++result.pairs_reduced_;
    reduce(s, basis, ctx);
    if (!s.poly.empty()) add_element(std::move(s));
  }

  // Minimalize: drop elements whose leading monomial is divisible by another's.
  std::vector<bool> redundant(basis.size(), false);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size() && !redundant[a]; ++b) {
      if (a == b) continue;
      const auto& la = basis[a].poly.front().mono;
      const auto& lb = basis[b].poly.front().mono;
      if (Context::divides(lb, la) && (ctx.compare(la, lb) != 0 || b < a)) redundant[a] = true;
    }
  }
  std::vector<Element> minimal;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (!redundant[a]) minimal.push_back(std::move(basis[a]));
  }
  // Interreduce tails.
  for (std::size_t a = 0; a < minimal.size(); ++a) {
    Element e = minimal[a];
    DTerm lead = e.poly.front();
    Element tail{DPoly(e.poly.begin() + 1, e.poly.end()), e.cof};
    reduce(tail, minimal, ctx, a);
    tail.poly.insert(tail.poly.begin(), lead);
    minimal[a] = std::move(tail);
    make_monic(minimal[a]);
  }
  std::sort(minimal.begin(), minimal.end(),
            [&](const Element& x, const Element& y) { return ctx.compare(x.poly.front().mono, y.poly.front().mono) < 0; });

  for (auto& e : minimal) {
    result.elements_.push_back(ctx.to_sparse(e.poly));
    result.cofactors_.push_back(std::move(e.cof));
  }
  return result;
}

bool GroebnerBasis::verify_cofactors() const {
  for (std::size_t b = 0; b < elements_.size(); ++b) {
    Polynomial combo;
    for (std::size_t p = 0; p < generators_.size(); ++p) combo += cofactors_[b][p] * generators_[p];
    if (!(combo == elements_[b])) return false;
  }
  return true;
}

NormalForm normal_form(const Polynomial& f, const GroebnerBasis& basis) {
  auto vars = variables_of(basis.elements());
  auto fv = f.variables();
  vars.insert(fv.begin(), fv.end());
  const Context ctx(basis.order(), vars);

  // Track cofactors over the basis elements themselves.
  std::vector<Element> elems;
  const std::size_t nb = basis.elements().size();
  for (std::size_t b = 0; b < nb; ++b) {
    Element e{ctx.to_dense(basis.elements()[b]), std::vector<Polynomial>(nb)};
    e.cof[b] = Polynomial(Rat(1));
    elems.push_back(std::move(e));
  }
  Element target{ctx.to_dense(f), std::vector<Polynomial>(nb)};
  reduce(target, elems, ctx);
  NormalForm nf;
  nf.remainder = ctx.to_sparse(target.poly);
  nf.cofactors.reserve(nb);
  for (auto& c : target.cof) nf.cofactors.push_back(-c);
  return nf;
}

bool verify_ideal_certificate(const Polynomial& f, const std::vector<Polynomial>& generators,
                              const IdealCertificate& cert) {
  if (cert.cofactors.size() != generators.size()) return false;
  Polynomial combo;
  for (std::size_t p = 0; p < generators.size(); ++p) combo += cert.cofactors[p] * generators[p];
  return combo == f;
}

MembershipResult ideal_membership(const Polynomial& f, const std::vector<Polynomial>& generators,
                                  const MonomialOrder& order, const GroebnerBudget& budget) {
  MembershipResult result;
  GroebnerBasis gb;
  try {
    gb = buchberger(generators, order, budget);
  } catch (const BudgetExceeded& e) {
    result.status = Membership::indeterminate;
    result.diagnostic = e.what();
    return result;
  }
  NormalForm nf = normal_form(f, gb);
  if (!nf.remainder.is_zero()) {
    result.status = Membership::non_member;
    result.diagnostic = "normal form is nonzero";
    return result;
  }
  IdealCertificate cert;
  cert.cofactors.assign(generators.size(), Polynomial());
  for (std::size_t b = 0; b < gb.elements().size(); ++b) {
    for (std::size_t p = 0; p < generators.size(); ++p) cert.cofactors[p] += nf.cofactors[b] * gb.cofactors()[b][p];
  }
  if (!verify_ideal_certificate(f, generators, cert)) {
    throw std::logic_error("ideal certificate failed re-verification");
  }
  result.status = Membership::member;
  result.certificate = std::move(cert);
  return result;
}

MonomialOrder sigma_order(const GroundSet& ground, MonomialOrder::Kind kind) {
  std::vector<std::string> priority;
  for (std::size_t a = 0; a < ground.size(); ++a) {
    for (std::size_t b = a; b < ground.size(); ++b) priority.push_back(sigma_name(ground, ground[a], ground[b]));
  }
  return MonomialOrder(kind, std::move(priority));
}

}  // namespace gci
