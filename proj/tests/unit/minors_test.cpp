#include <doctest.h>

#include <algorithm>
#include <random>

#include "gci/errors.hpp"
#include "gci/minors.hpp"
#include "support.hpp"

using namespace gci;
using gci::test::var;

namespace {

// Independent oracle: expands det(rows iK, cols jK) over permutations.
Polynomial permutation_expansion(const GroundSet& g, const LabelSet& rows, const LabelSet& cols) {
  const auto sigma = symbolic_covariance(g);
  std::vector<std::size_t> perm(rows.size());
  for (std::size_t t = 0; t < perm.size(); ++t) perm[t] = t;
  Polynomial det;
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < perm.size(); ++a) {
      for (std::size_t b = a + 1; b < perm.size(); ++b) inversions += perm[a] > perm[b];
    }
    Polynomial term(1);
    for (std::size_t r = 0; r < perm.size(); ++r) term *= sigma.at(rows[r], cols[perm[r]]);
    det += inversions % 2 ? -term : term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace

TEST_SUITE("minors") {
  const GroundSet g3 = GroundSet::standard(3);
  const GroundSet g4 = GroundSet::standard(4);

  TEST_CASE("principal minor examples") {
    const auto s = symbolic_covariance(g3);
    CHECK(principal_minor(s, {}) == Polynomial(1));
    CHECK(principal_minor(s, {"k"}) == var("s_k_k"));
    CHECK(principal_minor(s, {"j", "k"}) == var("s_j_j") * var("s_k_k") - var("s_j_k") * var("s_j_k"));
  }

  TEST_CASE("almost-principal minor examples") {
    const auto s = symbolic_covariance(g3);
    CHECK(almost_principal_minor(s, "i", "j", {}) == var("s_i_j"));
    CHECK(to_string(almost_principal_minor(s, "i", "j", {"k"})) == "s_i_j*s_k_k - s_i_k*s_j_k");
    CHECK(almost_principal_minor(test::indefinite_matrix(), "i", "k", {"l"}) == 0);
    CHECK_THROWS_AS(almost_principal_minor(s, "i", "i", {}), DomainError);
    CHECK_THROWS_AS(almost_principal_minor(s, "i", "j", {"i"}), DomainError);
    CHECK_THROWS_AS(principal_minor(s, {"z"}), DomainError);
  }

  TEST_CASE("minors agree with a permutation expansion") {
    for (const auto& K : g4.subsets(g4.labels())) {
      CHECK(principal_minor(symbolic_covariance(g4), K) == permutation_expansion(g4, K, K));
    }
    for (const auto& i : g4.labels()) {
      for (const auto& j : g4.labels()) {
        if (i == j) continue;
        for (const auto& K : g4.subsets(g4.complement({i, j}))) {
          LabelSet rows{i}, cols{j};
          rows.insert(rows.end(), K.begin(), K.end());
          cols.insert(cols.end(), K.begin(), K.end());
          CHECK(almost_principal_minor(symbolic_covariance(g4), i, j, K) == permutation_expansion(g4, rows, cols));
        }
      }
    }
  }

  TEST_CASE("symmetry and order independence") {
    const auto s = symbolic_covariance(g4);
    CHECK(almost_principal_minor(s, "i", "j", {"k", "l"}) == almost_principal_minor(s, "j", "i", {"l", "k"}));
    CHECK(principal_minor(s, {"l", "i", "k"}) == principal_minor(s, {"i", "k", "l"}));
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
      const auto r = test::random_pd(g4, rng);
      CHECK(almost_principal_minor(r, "k", "i", {"l"}) == almost_principal_minor(r, "i", "k", {"l"}));
    }
  }

  TEST_CASE("bracket ring evaluation") {
    CHECK(bracket_eval(principal_bracket_var(g3, {}), g3) == Polynomial(1));
    CHECK(to_string(bracket_eval(Polynomial::variable("a_i_j_k"), g3)) == "s_i_j*s_k_k - s_i_k*s_j_k");
    CHECK(principal_bracket(g4, {"l", "j"}) == "p_jl");
    CHECK(apm_bracket(g4, "k", "i", {"l", "j"}) == "a_i_k_jl");
    const Bracket b = parse_bracket(g4, "a_i_k_jl");
    CHECK(b.kind == Bracket::Kind::almost_principal);
    CHECK(b.K == LabelSet{"j", "l"});
    CHECK_THROWS_AS(parse_bracket(g4, "a_i_i_"), FormatError);
    CHECK_THROWS_AS(parse_bracket(g4, "q_ij"), FormatError);
  }

  TEST_CASE("bracket evaluation is multiplicative") {
    std::mt19937_64 rng(21);
    const std::vector<std::string> vars{"p_ij", "a_i_j_", "a_i_k_l", "p_k"};
    for (int t = 0; t < 10; ++t) {
      const auto f = test::random_polynomial(vars, rng, 3, 1);
      const auto h = test::random_polynomial(vars, rng, 3, 1);
      CHECK(bracket_eval(f * h, g4) == bracket_eval(f, g4) * bracket_eval(h, g4));
      const auto sigma = test::random_pd(g4, rng);
      CHECK(bracket_eval(f * h, sigma) == bracket_eval(f, sigma) * bracket_eval(h, sigma));
    }
  }

  TEST_CASE("Matus identity holds for every instantiation up to n = 4") {
    for (const GroundSet& g : {g3, g4}) {
      std::size_t count = 0;
      for (const auto& i : g.labels()) {
        for (const auto& j : g.labels()) {
          for (const auto& k : g.labels()) {
            if (i == j || j == k || i == k) continue;
            for (const auto& L : g.subsets(g.complement({i, j, k}))) {
              const Polynomial r = matus_residual(g, i, j, k, L);
              CHECK_FALSE(r.is_zero());
              CHECK(bracket_eval(r, g).is_zero());
              CHECK(in_eval_kernel(r, g));
              ++count;
            }
          }
        }
      }
      CHECK(count == (g.size() == 3 ? 6u : 48u));
    }
    const auto id = identity_covariance(g3);
    CHECK(bracket_eval(matus_residual(g3, "i", "j", "k", {}), id) == 0);
  }

  TEST_CASE("evaluation kernel examples") {
    CHECK_FALSE(in_eval_kernel(Polynomial::variable("a_i_j_"), g3));
    CHECK(in_eval_kernel(Polynomial(), g3));
    CHECK(in_eval_kernel(principal_bracket_var(g3, {}) - Polynomial(1), g3));
  }

  TEST_CASE("marginal and conditional covariance") {
    std::mt19937_64 rng(2);
    const auto s = test::random_pd(g4, rng);
    const auto m = marginal(s, {"i", "k"});
    CHECK(m.at("i", "k") == s.at("i", "k"));
    const auto c = condition_on(s, "l");
    // [ij|l] / [l] is the conditional covariance entry
    CHECK(c.at("i", "j") == almost_principal_minor(s, "i", "j", {"l"}) / s.at("l", "l"));
  }

  TEST_CASE("matrix JSON") {
    const auto p = test::indefinite_matrix();
    const auto back = rational_covariance_from_json(to_json(p));
    CHECK(back.entries() == p.entries());
    auto j = to_json(p);
    j["entries"][0][1] = "5";
    CHECK_THROWS_AS(rational_covariance_from_json(j), FormatError);
    CHECK_THROWS_AS(rational_covariance_from_json(nlohmann::json{{"ground_set", {"i"}}}), FormatError);
  }
}
