#include <doctest.h>

#include <cmath>

#include "zeroform/errors.hpp"
#include "zeroform/jet.hpp"

using namespace zeroform;

TEST_CASE("jet sizes are binomial") {
  CHECK(jet_size(1, 4) == 5);
  CHECK(jet_size(3, 2) == 10);
  CHECK(jet_size(8, 4) == 495);
  CHECK(jet_size(2, 0) == 1);
  CHECK_THROWS_AS(TaylorJet(9, 1), ShapeMismatch);
}

TEST_CASE("variables and constants") {
  const TaylorJet x = TaylorJet::variable(2, 3, 0, 1.5);
  CHECK(x.value() == 1.5);
  CHECK(x.d(0) == 1.0);
  CHECK(x.d(1) == 0.0);
  const TaylorJet c = TaylorJet::constant(2, 3, -2.0);
  CHECK(c.value() == -2.0);
  CHECK(c.d(0) == 0.0);
}

TEST_CASE("products of polynomials are exact") {
  const auto v = coordinate_jets(std::vector<double>{0.5, 2.0}, 4);
  const TaylorJet p = v[0] * v[0] * v[1] - 3.0 * v[1] * v[1];
  // x^2 y - 3 y^2 at (0.5, 2).
  CHECK(p.value() == 0.5 - 12.0);
  CHECK(p.d(0) == 2.0);
  CHECK(p.d(1) == 0.25 - 12.0);
  CHECK(p.d2(0, 0) == 4.0);
  CHECK(p.d2(0, 1) == 1.0);
  CHECK(p.d2(1, 1) == -6.0);
  const int xxy[] = {2, 1};
  CHECK(p.partial(xxy) == 2.0);
  CHECK(p.coeff(xxy) == 1.0);
}

TEST_CASE("elementary functions match their series") {
  const auto v = coordinate_jets(std::vector<double>{0.3}, 4);
  const TaylorJet s = sin(v[0]);
  const TaylorJet c = cos(v[0]);
  const TaylorJet one = s * s + c * c;
  CHECK(one.value() == doctest::Approx(1.0));
  for (std::size_t k = 1; k < one.coefficients().size(); ++k) CHECK(std::abs(one.coefficients()[k]) < 1e-15);

  const TaylorJet l = log(exp(v[0]));
  CHECK(l.value() == doctest::Approx(0.3));
  CHECK(l.d(0) == doctest::Approx(1.0));
  CHECK(std::abs(l.coefficients()[2]) < 1e-15);

  const TaylorJet q = sqrt(v[0]) * sqrt(v[0]);
  CHECK(q.d(0) == doctest::Approx(1.0));
  CHECK(std::abs(q.coefficients()[3]) < 1e-14);

  const TaylorJet t = tanh(v[0]);
  CHECK(t.d(0) == doctest::Approx(1.0 - std::tanh(0.3) * std::tanh(0.3)));
  const TaylorJet a = atan(v[0]);
  CHECK(a.d(0) == doctest::Approx(1.0 / 1.09));
  const TaylorJet r = pow(v[0], 2.5);
  CHECK(r.d(0) == doctest::Approx(2.5 * std::pow(0.3, 1.5)));
}

TEST_CASE("division and reciprocal") {
  const auto v = coordinate_jets(std::vector<double>{2.0, -1.0}, 3);
  const TaylorJet f = (v[0] * v[1]) / v[0];
  CHECK(f.value() == doctest::Approx(-1.0));
  CHECK(f.d(1) == doctest::Approx(1.0));
  CHECK(std::abs(f.d(0)) < 1e-15);
  CHECK_THROWS_AS(reciprocal(v[0] - 2.0), DomainError);
  CHECK_THROWS_AS(log(v[1]), DomainError);
}

TEST_CASE("truncation and derivatives") {
  const auto v = coordinate_jets(std::vector<double>{0.2, 0.4}, 4);
  const TaylorJet f = exp(v[0] * v[1]) + sin(v[1]);
  const TaylorJet g = f.truncated(2);
  CHECK(g.order() == 2);
  CHECK(g.coefficients().size() == jet_size(2, 2));
  const TaylorJet df = f.derivative(1);
  CHECK(df.order() == 3);
  CHECK(df.value() == doctest::Approx(f.d(1)));
  CHECK(df.d(0) == doctest::Approx(f.d2(0, 1)));
}

TEST_CASE("composition with a jet map") {
  // f(u, w) = u * w composed with u = x^2, w = x + 1.
  const auto xs = coordinate_jets(std::vector<double>{0.5}, 3);
  const auto uw = coordinate_jets(std::vector<double>{0.25, 1.5}, 3);
  const TaylorJet f = uw[0] * uw[1];
  const std::vector<TaylorJet> g = {xs[0] * xs[0], xs[0] + 1.0};
  const TaylorJet h = compose(f, g);
  // x^3 + x^2: value 0.375, first 1.75, second 5.
  CHECK(h.value() == doctest::Approx(0.375));
  CHECK(h.d(0) == doctest::Approx(1.75));
  CHECK(h.d2(0, 0) == doctest::Approx(5.0));
}
