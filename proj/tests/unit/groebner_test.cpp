#include <doctest.h>

#include <algorithm>
#include <random>

#include "gci/certify.hpp"
#include "gci/errors.hpp"
#include "gci/groebner.hpp"
#include "support.hpp"

using namespace gci;
using gci::test::var;

TEST_SUITE("groebner") {
  const GroundSet g3 = GroundSet::standard(3);
  const GroundSet g4 = GroundSet::standard(4);

  TEST_CASE("monomial ideal") {
    const auto b = buchberger({var("x"), var("y")});
    CHECK(b.elements().size() == 2);
    CHECK(b.verify_cofactors());
  }

  TEST_CASE("principal ideal") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
      const auto f = test::random_polynomial({"x", "y", "z"}, rng);
      if (f.is_zero() || f.is_constant()) continue;
      const auto b = buchberger({f});
      REQUIRE(b.elements().size() == 1);
      // reduced bases are monic, so f is a rational multiple of the element
      const auto nf = normal_form(f, b);
      CHECK(nf.remainder.is_zero());
      CHECK(nf.cofactors[0].is_constant());
    }
  }

  TEST_CASE("weak transitivity membership") {
    const auto s = symbolic_covariance(g3);
    const std::vector<Polynomial> gens{almost_principal_minor(s, "i", "j", {}),
                                       almost_principal_minor(s, "i", "j", {"k"})};
    const auto basis = buchberger(gens, sigma_order(g3));
    CHECK(basis.verify_cofactors());
    const Polynomial target = var("s_i_k") * var("s_j_k");
    bool found = false;
    for (const auto& e : basis.elements()) {
      // up to a unit
      if (!e.is_zero() && (e - target).is_zero()) found = true;
      if (!e.is_zero() && (e + target).is_zero()) found = true;
    }
    CHECK(found);
    const auto m = ideal_membership(target, gens, sigma_order(g3));
    REQUIRE(m.status == Membership::member);
    REQUIRE(m.certificate.has_value());
    CHECK(verify_ideal_certificate(target, gens, *m.certificate));
    // f = s_kk * [ij|] - [ij|k]
    CHECK(target == m.certificate->cofactors[0] * gens[0] + m.certificate->cofactors[1] * gens[1]);
  }

  TEST_CASE("non-membership") {
    const auto m = ideal_membership(var("s_i_k"), {var("s_i_j")});
    CHECK(m.status == Membership::non_member);
    CHECK_FALSE(m.certificate.has_value());
  }

  TEST_CASE("LM20 final polynomial lies in the assumption ideal") {
    const auto s = symbolic_covariance(g4);
    const std::vector<Polynomial> gens{almost_principal_minor(s, "i", "j", {"k"}),
                                       almost_principal_minor(s, "i", "k", {"l"}),
                                       almost_principal_minor(s, "i", "l", {"j"})};
    const Polynomial f = bracket_eval(lm20_final_bracket_polynomial(g4, "i", "j", "k", "l"), g4);
    const auto m = ideal_membership(f, gens, sigma_order(g4));
    REQUIRE(m.status == Membership::member);
    CHECK(verify_ideal_certificate(f, gens, *m.certificate));
    Polynomial sum;
    for (std::size_t p = 0; p < gens.size(); ++p) sum += m.certificate->cofactors[p] * gens[p];
    CHECK(sum == f);
    // a corrupted cofactor is rejected
    auto bad = *m.certificate;
    bad.cofactors[0] += Polynomial(1);
    CHECK_FALSE(verify_ideal_certificate(f, gens, bad));
  }

  TEST_CASE("normal form") {
    const auto b = buchberger({var("x") * var("y") - Polynomial(1), var("y") * var("y") - var("x")});
    for (const auto& e : b.elements()) CHECK(normal_form(e, b).remainder.is_zero());
    const auto z = normal_form(Polynomial(), b);
    CHECK(z.remainder.is_zero());
    for (const auto& c : z.cofactors) CHECK(c.is_zero());
    const Polynomial f = var("x").pow(3) + var("y") * var("x") + Polynomial(4);
    const auto nf = normal_form(f, b);
    Polynomial back = nf.remainder;
    for (std::size_t t = 0; t < b.elements().size(); ++t) back += nf.cofactors[t] * b.elements()[t];
    CHECK(back == f);
  }

  TEST_CASE("normal forms do not depend on generator order") {
    std::mt19937_64 rng(44);
    const std::vector<std::string> vars{"x", "y", "z"};
    for (int t = 0; t < 8; ++t) {
      std::vector<Polynomial> gens;
      for (int g = 0; g < 3; ++g) gens.push_back(test::random_polynomial(vars, rng, 2, 1));
      auto shuffled = gens;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      try {
        const auto a = buchberger(gens);
        const auto b = buchberger(shuffled);
        CHECK(a.elements() == b.elements());
        for (int q = 0; q < 5; ++q) {
          const auto f = test::random_polynomial(vars, rng, 3, 2);
          CHECK(normal_form(f, a).remainder == normal_form(f, b).remainder);
        }
      } catch (const BudgetExceeded&) {
      }
    }
  }

  TEST_CASE("budget") {
    GroebnerBudget tiny;
    tiny.max_pairs = 1;
    tiny.max_basis_size = 2;
    const auto s = symbolic_covariance(g4);
    const std::vector<Polynomial> gens{almost_principal_minor(s, "i", "j", {"k"}),
                                       almost_principal_minor(s, "i", "k", {"l"}),
                                       almost_principal_minor(s, "i", "l", {"j"})};
    CHECK_THROWS_AS(buchberger(gens, sigma_order(g4), tiny), BudgetExceeded);
    const auto m = ideal_membership(Polynomial(1), gens, sigma_order(g4), tiny);
    CHECK(m.status == Membership::indeterminate);
  }
}
