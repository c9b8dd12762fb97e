#include <doctest.h>

#include <random>

#include "gci/certify.hpp"
#include "gci/errors.hpp"
#include "support.hpp"

using namespace gci;
using gci::test::var;

namespace {

const GroundSet g3 = GroundSet::standard(3);
const GroundSet g4 = GroundSet::standard(4);

SemialgebraicSystem weak_system() {
  CIModelSpec spec{g3, {CIStatement::make("i", "j"), CIStatement::make("i", "j", {"k"})}, {}};
  return compile_model(spec);
}

Rat eval_at(const Polynomial& f, const RationalCovariance& sigma) {
  std::map<std::string, Rat> a;
  const auto& g = sigma.ground_set();
  for (const auto& x : g.labels()) {
    for (const auto& y : g.labels()) a[sigma_name(g, x, y)] = sigma.at(x, y);
  }
  return f.evaluate(a);
}

}  // namespace

TEST_SUITE("certify") {
  TEST_CASE("compiling models") {
    const auto empty = compile_model(CIModelSpec{g3, {}, {}});
    CHECK(empty.equations.empty());
    CHECK(empty.nonvanishing.empty());
    CHECK(empty.nonnegative.size() == 7);
    CHECK(empty.nonnegative.front() == var("s_i_i"));
    const auto four = compile_model(CIModelSpec{g4, {}, {}});
    CHECK(four.nonnegative.size() == 15);
    const auto spec = counterexample_model(parse_formula("[i,j|] => [i,j|k]", g3), g3);
    const auto sys = compile_model(spec);
    CHECK(sys.equations == std::vector<Polynomial>{var("s_i_j")});
    REQUIRE(sys.nonvanishing.size() == 1);
    CHECK(to_string(sys.nonvanishing[0]) == "s_i_j*s_k_k - s_i_k*s_j_k");
    CompileOptions with_pm;
    with_pm.principal_minors_nonvanishing = true;
    CHECK(compile_model(spec, with_pm).nonvanishing.size() == 8);
    CHECK(system_from_json(to_json(sys)) == sys);
  }

  TEST_CASE("ideal part") {
    FinalPolynomialCertificate c;
    c.system = weak_system();
    c.target = var("s_i_k") * var("s_j_k");
    c.ideal_part = {{var("s_k_k"), 0}, {Polynomial(-1), 1}};
    CHECK(verify_ideal_part(c, c.system));
    c.ideal_part[1].cofactor = Polynomial(-2);
    CHECK_FALSE(verify_ideal_part(c, c.system));
    c.target = Polynomial();
    c.ideal_part = {{Polynomial(), 0}, {Polynomial(), 1}};
    CHECK(verify_ideal_part(c, c.system));
    c.ideal_part = {{Polynomial(), 7}};
    CHECK_THROWS_AS(verify_ideal_part(c, c.system), DomainError);
  }

  TEST_CASE("positivity part") {
    FinalPolynomialCertificate c;
    CIModelSpec spec{g3, {}, {CIStatement::make("i", "k"), CIStatement::make("j", "k")}};
    c.system = compile_model(spec);
    const Polynomial u = var("s_i_k") * var("s_j_k");
    c.target = u * u;
    c.monoid_part = std::vector<std::size_t>{0, 1};
    CHECK(verify_positivity_part(c, c.system));

    FinalPolynomialCertificate d;
    d.system = compile_model(CIModelSpec{g3, {}, {}});
    d.target = d.system.nonnegative[0];
    d.cone_part = {{Rat(1), Polynomial(1), {0}}};
    CHECK(verify_positivity_part(d, d.system));
    d.cone_part[0].weight = Rat(2);
    CHECK_FALSE(verify_positivity_part(d, d.system));
    d.cone_part[0].weight = Rat(-1);
    CHECK_THROWS_AS(verify_positivity_part(d, d.system), DomainError);
    d.cone_part[0].weight = Rat(1);
    d.cone_part[0].g_indices = {99};
    CHECK_THROWS_AS(verify_positivity_part(d, d.system), DomainError);
  }

  TEST_CASE("weak transitivity certificate") {
    const auto c = weak_transitivity_certificate(g3, "i", "j", "k", {});
    CHECK(c.name == "weak-transitivity(i,j,k,∅)");
    const Polynomial u = var("s_i_k") * var("s_j_k");
    CHECK(c.target == u * u);
    REQUIRE(c.monoid_part.has_value());
    CHECK(c.cone_part.empty());
    const auto v = verify_final_polynomial(c);
    CHECK(v.valid);
    CHECK(verify_final_polynomial(weak_transitivity_certificate(g4, "j", "l", "i", {"k"})).valid);
  }

  TEST_CASE("LM20 certificate") {
    const auto c = lm20_certificate(g4, "i", "j", "k", "l");
    const auto v = verify_final_polynomial(c);
    CHECK(v.valid);
    CHECK(v.reason.empty());
    CHECK(c.system.equations.size() == 3);
    CHECK(verify_ideal_part(c, c.system));
    CHECK(verify_positivity_part(c, c.system));
    // every cone term is a positive weight times a square times principal minors
    const auto id = identity_covariance(g4);
    for (const auto& t : c.cone_part) {
      CHECK(t.weight > 0);
      for (auto idx : t.g_indices) {
        REQUIRE(idx < c.system.nonnegative.size());
        bool principal = false;
        for (const auto& K : g4.subsets(g4.labels())) {
          if (!K.empty() && c.system.nonnegative[idx] == principal_minor(symbolic_covariance(g4), K)) principal = true;
        }
        CHECK(principal);
      }
    }
    const auto pos = analyze_bracket_positivity(lm20_positive_factor(g4, "i", "j", "k", "l"), g4);
    CHECK(pos.nonnegative_on_pd);
    CHECK(pos.strictly_positive_on_pd);
    CHECK(lm20_final_bracket_polynomial(g4, "i", "j", "k", "l") ==
          Polynomial::variable("a_i_j_") * lm20_positive_factor(g4, "i", "j", "k", "l"));
    (void)id;
  }

  TEST_CASE("bracket positivity analysis") {
    CHECK_FALSE(analyze_bracket_positivity(Polynomial::variable("a_i_j_"), g3).nonnegative_on_pd);
    const auto sq = analyze_bracket_positivity(Polynomial::variable("a_i_j_").pow(2), g3);
    CHECK(sq.nonnegative_on_pd);
    CHECK_FALSE(sq.strictly_positive_on_pd);
    const auto pm = analyze_bracket_positivity(Polynomial::variable("p_ij") * Polynomial::variable("p_k"), g3);
    CHECK(pm.strictly_positive_on_pd);
  }

  TEST_CASE("built-in certificates") {
    const auto all = builtin_certificates(g4);
    CHECK(all.size() == 25);
    CHECK(all.count("lm20") == 1);
    CHECK(all.count("weak-transitivity(i,j,k,∅)") == 1);
    for (const auto& [name, cert] : all) {
      INFO(name);
      CHECK(verify_final_polynomial(cert).valid);
      const auto back = certificate_from_json(nlohmann::json::parse(to_json(cert).dump()));
      CHECK(verify_final_polynomial(back).valid);
      CHECK(back.target == cert.target);
    }
    CHECK(find_builtin_certificate("weak-transitivity(i,j,k,∅)", g3).has_value());
    CHECK(find_builtin_certificate("weak-transitivity(i,j,k,l)", g4).has_value());
    CHECK(find_builtin_certificate("lm20", g4).has_value());
    CHECK(find_builtin_certificate("lm20(j,i,l,k)", g4).has_value());
    CHECK_FALSE(find_builtin_certificate("pappus", g4).has_value());
    CHECK_FALSE(find_builtin_certificate("weak-transitivity(i,i,k,∅)", g3).has_value());
  }

  TEST_CASE("corrupted certificates are rejected") {
    std::mt19937_64 rng(77);
    const auto base = lm20_certificate(g4, "i", "j", "k", "l");
    const auto wt = weak_transitivity_certificate(g3, "i", "j", "k", {});
    for (int t = 0; t < 20; ++t) {
      auto c = t % 2 ? base : wt;
      std::uniform_int_distribution<int> pick(0, 3);
      switch (pick(rng)) {
        case 0:
          c.target += Polynomial::variable("s_i_i");
          break;
        case 1: {
          std::uniform_int_distribution<std::size_t> i(0, c.ideal_part.size() - 1);
          c.ideal_part[i(rng)].cofactor *= Rat(3);
          break;
        }
        case 2:
          c.monoid_part.reset();
          break;
        default:
          c.ideal_part[0].index = 42;
          break;
      }
      const auto v = verify_final_polynomial(c);
      CHECK_FALSE(v.valid);
      CHECK_FALSE(v.reason.empty());
    }
    auto c = base;
    REQUIRE_FALSE(c.cone_part.empty());
    c.cone_part[0].weight = -c.cone_part[0].weight;
    CHECK_FALSE(verify_final_polynomial(c).valid);
  }

  TEST_CASE("certificate JSON schema") {
    const auto wt = weak_transitivity_certificate(g3, "i", "j", "k", {});
    auto j = to_json(wt);
    CHECK(j.contains("target"));
    CHECK(j.contains("ideal_part"));
    CHECK(j.contains("cone_part"));
    CHECK(j.contains("monoid_part"));
    j.erase("target");
    CHECK_THROWS_AS(certificate_from_json(j), FormatError);
    CHECK_THROWS_AS(certificate_from_json(nlohmann::json::array()), FormatError);
  }

  TEST_CASE("certificates are sound on their own variety") {
    std::mt19937_64 rng(90);
    const auto wt = weak_transitivity_certificate(g3, "i", "j", "k", {});
    const auto lm = lm20_certificate(g4, "i", "j", "k", "l");
    for (int t = 0; t < 100; ++t) {
      // sigma_ij = 0 and sigma_ik = 0 solve both weak transitivity equations
      auto m = test::random_pd(g3, rng);
      auto e = m.entries();
      e[1] = e[3] = e[2] = e[6] = 0;
      const RationalCovariance w(g3, e);
      for (const auto& f : wt.system.equations) CHECK(eval_at(f, w) == 0);
      CHECK(eval_at(wt.target, w) == 0);
      bool some_h_vanishes = false;
      for (const auto& h : wt.system.nonvanishing) some_h_vanishes |= eval_at(h, w) == 0;
      CHECK(some_h_vanishes);

      // i independent of everything: the LM20 equations hold
      auto r = test::random_pd(g4, rng);
      auto x = r.entries();
      for (std::size_t c = 1; c < 4; ++c) x[c] = x[4 * c] = 0;
      const RationalCovariance s(g4, x);
      REQUIRE(is_positive_definite(s));
      for (const auto& f : lm.system.equations) CHECK(eval_at(f, s) == 0);
      CHECK(eval_at(lm.target, s) == 0);
      Rat cone = 0;
      for (const auto& term : lm.cone_part) {
        Rat v = term.weight * eval_at(term.square, s) * eval_at(term.square, s);
        for (auto g : term.g_indices) v *= eval_at(lm.system.nonnegative[g], s);
        cone += v;
      }
      CHECK(cone >= 0);
      some_h_vanishes = false;
      for (const auto& h : lm.system.nonvanishing) some_h_vanishes |= eval_at(h, s) == 0;
      CHECK(some_h_vanishes);
    }
  }

  TEST_CASE("certifying formulas with built-ins") {
    const auto lm20 = parse_formula("[i,j|k] & [i,k|l] & [i,l|j] => [i,j|]", g4);
    const auto c = certify_with_builtins(lm20, g4);
    REQUIRE(c.has_value());
    CHECK(c->certified == lm20);
    CHECK(verify_final_polynomial(c->certificate).valid);
    // a stronger antecedent set is still covered
    const auto more = parse_formula("[i,j|k] & [i,k|l] & [i,l|j] & [j,k|] => [i,j|] | [k,l|]", g4);
    CHECK(certify_with_builtins(more, g4).has_value());
    const auto wt = parse_formula("[i,j|] & [i,j|k] => [i,k|] | [j,k|]", g3);
    CHECK(certify_with_builtins(wt, g3).has_value());
    CHECK_FALSE(certify_with_builtins(parse_formula("[i,j|] => [i,j|k]", g3), g3).has_value());
  }
}
