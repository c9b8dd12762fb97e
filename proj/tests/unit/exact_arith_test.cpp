#include <doctest.h>

#include <random>

#include "gci/determinant.hpp"
#include "gci/errors.hpp"
#include "gci/polynomial.hpp"
#include "gci/rational.hpp"
#include "support.hpp"

using namespace gci;
using gci::test::var;

TEST_SUITE("exact-arith") {
  TEST_CASE("rationals parse canonically") {
    CHECK(parse_rat("6/4") == Rat(3, 2));
    CHECK(parse_rat("-7") == Rat(-7));
    CHECK(to_string(parse_rat("-2/4")) == "-1/2");
    CHECK_THROWS_AS(parse_rat("2/-4"), FormatError);
    CHECK_THROWS_AS(parse_rat("1/0"), FormatError);
    CHECK_THROWS_AS(parse_rat("x"), FormatError);
    CHECK_THROWS_AS(parse_rat(""), FormatError);
  }

  TEST_CASE("ring operation examples") {
    const Polynomial x = var("x"), y = var("y");
    CHECK((x + y) + (x - y) == Rat(2) * x);
    CHECK((x + y) * (x - y) == x * x - y * y);
    CHECK(to_string((x + y) * (x - y)) == "x^2 - y^2");
    CHECK((x - x).is_zero());
  }

  TEST_CASE("evaluation examples") {
    const Polynomial x = var("x"), y = var("y");
    CHECK((x * x - y * y).evaluate(std::map<std::string, Rat>{{"x", Rat(3)}, {"y", Rat(2)}}) == 5);
    CHECK(Polynomial(Rat(7, 2)).evaluate(std::map<std::string, Rat>{}) == Rat(7, 2));
    CHECK_THROWS_AS((x + y).evaluate(std::map<std::string, Rat>{{"x", Rat(1)}}), DomainError);
  }

  TEST_CASE("ring laws on random triples") {
    std::mt19937_64 rng(11);
    const std::vector<std::string> vars{"x", "y", "z"};
    for (int t = 0; t < 50; ++t) {
      const auto p = test::random_polynomial(vars, rng);
      const auto q = test::random_polynomial(vars, rng);
      const auto r = test::random_polynomial(vars, rng);
      CHECK((p + q) + r == p + (q + r));
      CHECK((p * q) * r == p * (q * r));
      CHECK(p * (q + r) == p * q + p * r);
      CHECK(p * q == q * p);
      CHECK(p + q == q + p);
      CHECK(p + Polynomial() == p);
      CHECK((p - p).is_zero());
      CHECK(-(-p) == p);
    }
  }

  TEST_CASE("JSON round trip") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
      const auto p = test::random_polynomial({"s_i_j", "p_ik", "x"}, rng);
      CHECK(polynomial_from_json(to_json(p)) == p);
    }
  }

  TEST_CASE("monomial orders") {
    const Monomial xy({{"x", 1}, {"y", 1}}), x2({{"x", 2}}), z3({{"z", 3}});
    const MonomialOrder lex(MonomialOrder::Kind::lex), grevlex;
    CHECK(lex.compare(x2, xy) > 0);
    CHECK(lex.compare(xy, z3) > 0);
    CHECK(grevlex.compare(z3, xy) > 0);
    CHECK(grevlex.compare(x2, xy) > 0);
  }

  TEST_CASE("determinant examples") {
    SquareMatrix<Polynomial> empty;
    CHECK(laplace_determinant(empty, Polynomial(1)) == Polynomial(1));
    SquareMatrix<Polynomial> one{1, {var("s_k_k")}};
    CHECK(laplace_determinant(one, Polynomial(1)) == var("s_k_k"));
    SquareMatrix<Polynomial> two{2, {var("s_i_j"), var("s_i_k"), var("s_j_k"), var("s_k_k")}};
    CHECK(to_string(laplace_determinant(two, Polynomial(1))) == "s_i_j*s_k_k - s_i_k*s_j_k");
  }

  TEST_CASE("swapping rows negates a symbolic determinant") {
    SquareMatrix<Polynomial> m{3, {}};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m.a.push_back(var("m" + std::to_string(r) + std::to_string(c)));
    }
    const Polynomial d = laplace_determinant(m, Polynomial(1));
    CHECK(d.size() == 6);
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        auto s = m;
        for (int c = 0; c < 3; ++c) std::swap(s(a, c), s(b, c));
        CHECK(laplace_determinant(s, Polynomial(1)) == -d);
      }
    }
    // multilinear in the first row
    auto scaled = m;
    for (int c = 0; c < 3; ++c) scaled(0, c) = scaled(0, c) * var("t");
    CHECK(laplace_determinant(scaled, Polynomial(1)) == d * var("t"));
  }

  TEST_CASE("Bareiss agrees with cofactor expansion") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5), zero(0, 4);
    for (std::size_t n = 1; n <= 6; ++n) {
      for (int t = 0; t < 30; ++t) {
        SquareMatrix<Rat> m{n, {}};
        for (std::size_t e = 0; e < n * n; ++e) {
          Rat q(num(rng), den(rng));
          q.canonicalize();
          m.a.push_back(zero(rng) == 0 ? Rat(0) : q);
        }
        CHECK(bareiss_determinant(m, Rat(1)) == laplace_determinant(m, Rat(1)));
      }
    }
  }
}
