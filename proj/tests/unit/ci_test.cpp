#include <doctest.h>

#include <random>

#include "gci/ci.hpp"
#include "gci/errors.hpp"
#include "support.hpp"

using namespace gci;

TEST_SUITE("ci-core") {
  const GroundSet g3 = GroundSet::standard(3);
  const GroundSet g4 = GroundSet::standard(4);

  TEST_CASE("parse formulas") {
    const auto wt = parse_formula("[i,j|] & [i,j|k] => [i,k|] | [j,k|]", g3);
    CHECK(wt.antecedents.size() == 2);
    CHECK(wt.consequents.size() == 2);
    CHECK(wt.antecedents[1] == CIStatement::make("j", "i", {"k"}));
    CHECK(to_string(wt, g3) == "[i,j|] & [i,j|k] => [i,k|] | [j,k|]");

    const GroundSet abc = infer_ground_set("[A,C|B] & [A,B|] => [A,C|]");
    CHECK(abc.labels() == std::vector<Label>{"A", "C", "B"});
    CHECK(parse_formula("[A,C|B] & [A,B|] => [A,C|]", abc).consequents[0] == CIStatement::make("A", "C"));

    CHECK_THROWS_AS(parse_formula("[i,i|k] => [i,i|]", g3), ParseError);
    CHECK_THROWS_AS(parse_formula("[i,j|i] => [i,j|]", g3), ParseError);
    CHECK_THROWS_AS(parse_formula("[i,j|m] => [i,j|]", g3), ParseError);
    CHECK_THROWS_AS(parse_formula("[i,j|] =>", g3), ParseError);
  }

  TEST_CASE("positive definiteness") {
    CHECK(is_positive_definite(identity_covariance(g4)));
    CHECK_FALSE(is_positive_definite(test::indefinite_matrix()));
    CHECK(principal_minor(test::indefinite_matrix(), {"i", "j"}) == -15);
    CHECK(is_positive_definite(test::not2_witness()));
    const auto w = test::not2_witness();
    CHECK(principal_minor(w, {"i"}) == 1);
    CHECK(principal_minor(w, {"i", "j"}) == Rat(15, 16));
    CHECK(principal_minor(w, {"i", "j", "k"}) == Rat(9, 16));
  }

  TEST_CASE("CI statements on fixtures") {
    for (const auto& s : all_statements(g4)) CHECK(ci_holds(identity_covariance(g4), s));
    const auto p = test::indefinite_matrix();
    CHECK(ci_holds(p, CIStatement::make("i", "j", {"k"})));
    CHECK(ci_holds(p, CIStatement::make("i", "k", {"l"})));
    CHECK(ci_holds(p, CIStatement::make("i", "l", {"j"})));
    CHECK_FALSE(ci_holds(p, CIStatement::make("i", "j")));
    CHECK(almost_principal_minor(p, "i", "j", {}) == 4);
    const auto w = test::not1_witness();
    CHECK(ci_holds(w, CIStatement::make("i", "j")));
    CHECK_FALSE(ci_holds(w, CIStatement::make("i", "j", {"k"})));
    CHECK(almost_principal_minor(w, "i", "j", {"k"}) == Rat(-1, 4));
  }

  TEST_CASE("classification") {
    const auto wt = parse_formula("[i,j|] & [i,j|k] => [i,k|] | [j,k|]", g3);
    CHECK(classify_against_formula(identity_covariance(g3), wt) == Classification::witnesses_conclusion);
    CHECK(classify_against_formula(test::not1_witness(), parse_formula("[i,j|] => [i,j|k]", g3)) ==
          Classification::counterexample);
    CHECK(classify_against_formula(test::not1_witness(), wt) == Classification::not_applicable);
    const auto lm20 = parse_formula("[i,j|k] & [i,k|l] & [i,l|j] => [i,j|]", g4);
    CHECK_THROWS_AS(classify_against_formula(test::indefinite_matrix(), lm20), DomainError);
  }

  TEST_CASE("structures") {
    CHECK(all_statements(g3).size() == 6);
    CHECK(all_statements(g4).size() == 24);
    CHECK(all_statements(GroundSet::standard(5)).size() == 80);
    CHECK(structure_of(identity_covariance(g4)).statements.size() == 24);
    std::mt19937_64 rng(4);
    int empty = 0;
    for (int t = 0; t < 50; ++t) empty += structure_of(test::random_pd(g4, rng, 6)).statements.empty();
    CHECK(empty >= 40);
    const auto s = structure_of(test::not1_witness());
    CHECK(structure_from_json(to_json(s)) == s);
  }

  TEST_CASE("permutations") {
    const Permutation id{{"i", "i"}, {"j", "j"}, {"k", "k"}};
    const Permutation swap{{"i", "j"}, {"j", "i"}, {"k", "k"}};
    const auto s = CIStatement::make("i", "k", {"j"});
    CHECK(apply_permutation(s, id) == s);
    CHECK(apply_permutation(s, swap) == CIStatement::make("j", "k", {"i"}));
    CHECK_THROWS_AS(validate_permutation(Permutation{{"i", "j"}, {"j", "j"}, {"k", "k"}}, g3), DomainError);
    // structure_of commutes with relabeling
    std::mt19937_64 rng(9);
    const Permutation cyc{{"i", "j"}, {"j", "k"}, {"k", "l"}, {"l", "i"}};
    for (int t = 0; t < 10; ++t) {
      auto m = test::random_pd(g4, rng, 1);
      CHECK(structure_of(apply_permutation(m, cyc)) == apply_permutation(structure_of(m), cyc));
    }
  }

  TEST_CASE("minors of structures") {
    const auto full = structure_of(identity_covariance(g4));
    const auto del = structure_delete(full, "l");
    const auto con = structure_contract(full, "l");
    CHECK(del == structure_of(identity_covariance(g3)));
    CHECK(con == del);
  }

  TEST_CASE("CI is symmetric in i and j") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 20; ++t) {
      const auto m = test::random_pd(g4, rng, 1);
      for (const auto& s : all_statements(g4)) {
        CHECK(ci_holds(m, s) == exact_is_zero(almost_principal_minor(m, s.j, s.i, s.K)));
      }
    }
  }

  TEST_CASE("contraction matches the conditional covariance") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; ++t) {
      const auto m = test::random_pd(g4, rng, 1);
      for (const auto& x : g4.labels()) {
        CHECK(structure_contract(structure_of(m), x) == structure_of(condition_on(m, x)));
        CHECK(structure_delete(structure_of(m), x) == structure_of(marginal(m, g4.complement({x}))));
      }
    }
  }

  TEST_CASE("valid rules never have PD counterexamples") {
    std::mt19937_64 rng(2024);
    std::size_t violations = 0;
    for (const GroundSet& g : {g3, g4}) {
      std::vector<InferenceFormula> rules;
      for (const auto& i : g.labels()) {
        for (const auto& j : g.labels()) {
          for (const auto& k : g.labels()) {
            if (i == j || j == k || i == k) continue;
            for (const auto& L : g.subsets(g.complement({i, j, k}))) {
              LabelSet kL = L;
              kL.push_back(k);
              rules.push_back({{CIStatement::make(i, j, L), CIStatement::make(i, j, kL)},
                               {CIStatement::make(i, k, L), CIStatement::make(j, k, L)}});
              LabelSet jL = L;
              jL.push_back(j);
              rules.push_back({{CIStatement::make(i, k, jL), CIStatement::make(i, j, L)}, {CIStatement::make(i, k, L)}});
            }
          }
        }
      }
      for (int t = 0; t < 500; ++t) {
        // small entries make CI coincidences frequent
        const auto m = test::random_pd(g, rng, 1);
        for (const auto& phi : rules) violations += classify_against_formula(m, phi) == Classification::counterexample;
      }
    }
    CHECK(violations == 0);
  }
}
