#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "zeroform/errors.hpp"
#include "zeroform/expr.hpp"

using namespace zeroform;

namespace {

const std::vector<std::string> kXY = {"x", "y1", "y2"};

double eval_at(const std::string& text, const std::vector<std::string>& vars, const std::vector<double>& p) {
  return evaluate(parse(text, std::span<const std::string>(vars)), p);
}

}  // namespace

TEST_CASE("parse accepts the documented grammar") {
  const Expr e = parse("x^2 + y1*y2", std::span<const std::string>(kXY));
  const auto counts = e.variable_counts(3);
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 1);
  CHECK(counts[2] == 1);
  CHECK(evaluate(e, std::vector<double>{2.0, 3.0, 5.0}) == doctest::Approx(19.0));

  CHECK(eval_at("2^3^2", {}, {}) == 512.0);
  CHECK(eval_at("-2^2", {}, {}) == -4.0);
  CHECK(eval_at("1.5e1 - 3/2*4", {}, {}) == 9.0);
  CHECK(eval_at("atan(1)*4", {}, {}) == doctest::Approx(M_PI));
  CHECK(eval_at("tanh(0) + cos(0) + sqrt(16) + log(exp(2))", {}, {}) == doctest::Approx(7.0));
  CHECK(eval_at("x - -x", {"x"}, {1.25}) == 2.5);
}

TEST_CASE("ball-model conformal factor parses and evaluates") {
  const std::vector<std::string> vars = {"y1", "y2"};
  const Expr e = parse("1/(1 - (y1^2 + y2^2))", std::span<const std::string>(vars));
  CHECK(e.arity() == 2);
  CHECK(evaluate(e, std::vector<double>{0.3, 0.4}) == doctest::Approx(1.0 / 0.75));
}

TEST_CASE("parse errors carry offsets and names") {
  const std::vector<std::string> vars = {"x", "y1"};
  try {
    parse("exp(phi)*x", std::span<const std::string>(vars));
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name() == "phi");
  }
  try {
    parse("x + * y1", std::span<const std::string>(vars));
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("", std::span<const std::string>(vars)), SyntaxError);
  CHECK_THROWS_AS(parse("(x", std::span<const std::string>(vars)), SyntaxError);
  CHECK_THROWS_AS(parse("x y1", std::span<const std::string>(vars)), SyntaxError);
  CHECK_THROWS_AS(parse("foo(x)", std::span<const std::string>(vars)), UnknownIdentifier);
}

TEST_CASE("render round-trips through parse") {
  const Expr e = parse("x*sin(y1)^2 - 3/(1 + x)", std::span<const std::string>(kXY));
  const Expr back = parse(e.to_string(), std::span<const std::string>(kXY));
  const std::vector<double> p = {0.7, -0.3, 0.1};
  CHECK(evaluate(back, p) == evaluate(e, p));
}

TEST_CASE("eval_jet on bilinear and exponential inputs") {
  const TaylorJet j = eval_jet(parse("x*y1", {"x", "y1"}), std::vector<double>{2.0, 3.0}, 2);
  CHECK(j.value() == 6.0);
  CHECK(j.d(0) == 3.0);
  CHECK(j.d(1) == 2.0);
  CHECK(j.d2(0, 1) == 1.0);
  CHECK(j.d2(0, 0) == 0.0);
  CHECK(j.d2(1, 1) == 0.0);

  const TaylorJet e = eval_jet(parse("exp(x)", {"x"}), std::vector<double>{0.0}, 4);
  const double want[] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
  REQUIRE(e.coefficients().size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(e.coefficients()[static_cast<std::size_t>(k)] == doctest::Approx(want[k]).epsilon(1e-15));
}

TEST_CASE("eval_jet matches finite differences on a rational function") {
  const std::vector<std::string> vars = {"x", "y1"};
  const Expr e = parse("x^2/(x^2+y1^2)", std::span<const std::string>(vars));
  const std::vector<double> p = {1.0, 1.0};
  const TaylorJet j = eval_jet(e, p, 2);
  const oracle::Scalar f = [&](const std::vector<double>& q) { return evaluate(e, q); };
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(j.d(i) == doctest::Approx(oracle::central(f, p, i, 1e-5)).epsilon(1e-6));
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(j.d2(i, k) == doctest::Approx(oracle::second_partial(f, p, i, k)).epsilon(1e-6));
    }
  }
}

TEST_CASE("domain and non-finite errors") {
  CHECK_THROWS_AS(eval_jet(parse("log(x)", {"x"}), std::vector<double>{-1.0}, 2), DomainError);
  CHECK_THROWS_AS(eval_jet(parse("sqrt(x)", {"x"}), std::vector<double>{0.0}, 2), DomainError);
  CHECK_THROWS_AS(eval_jet(parse("1/x", {"x"}), std::vector<double>{0.0}, 1), DomainError);
  CHECK_THROWS_AS(evaluate(parse("exp(x)", {"x"}), std::vector<double>{1e4}), NonFiniteError);
  CHECK_THROWS_AS(eval_jet(parse("x^y1", {"x", "y1"}), std::vector<double>{-1.0, 0.5}, 1), DomainError);
}

TEST_CASE("integer powers of jets are exact for polynomials") {
  const TaylorJet j = eval_jet(parse("(x + 2*y1)^3", {"x", "y1"}), std::vector<double>{0.5, -0.25}, 3);
  // (x + 2y)^3: third derivative in x is 6, in y is 48, mixed xxy is 12.
  const int xxx[] = {3, 0};
  const int yyy[] = {0, 3};
  const int xxy[] = {2, 1};
  CHECK(j.partial(xxx) == 6.0);
  CHECK(j.partial(yyy) == 48.0);
  CHECK(j.partial(xxy) == 12.0);
  CHECK(j.value() == 0.0);
}
