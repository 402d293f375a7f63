#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fla/expr.hpp"
#include "fla/numdiff.hpp"
#include "fla/sampling.hpp"

using namespace fla;

namespace {

Point pt(std::vector<double> x, std::vector<double> y) { return Point{std::move(x), std::move(y)}; }

// Random expression trees over polynomials and trig, for the symbolic-vs-FD
// cross-check. Depth-limited so FD stays well conditioned.
Expr random_tree(SampleRng& rng, Dims dims, int depth) {
  if (depth == 0 || rng.uniform01() < 0.25) {
    if (rng.uniform01() < 0.4) return Expr::constant(rng.uniform(-2.0, 2.0));
    const int total = dims.m + dims.n;
    const int pick = static_cast<int>(rng.uniform01() * total) % total;
    return pick < dims.m ? Expr::variable(bx(pick)) : Expr::variable(fy(pick - dims.m));
  }
  const double r = rng.uniform01();
  Expr a = random_tree(rng, dims, depth - 1);
  Expr b = random_tree(rng, dims, depth - 1);
  if (r < 0.3) return a + b;
  if (r < 0.5) return a - b;
  if (r < 0.75) return a * b;
  if (r < 0.85) return sin(a);
  if (r < 0.95) return cos(a);
  return pow(a, 2.0);
}

}  // namespace

TEST_CASE("parse and evaluate basic expressions") {
  Dims d{2, 2};
  CHECK(parse_expr("y1^2 + y2^2", d).eval(pt({0, 0}, {3, 4})) == doctest::Approx(25.0));
  CHECK(parse_expr("exp(2*x1)*y1*y2", d).eval(pt({0, 0.7}, {2, 5})) == doctest::Approx(10.0));
  CHECK(parse_expr("1e-2 + 2", d).eval(pt({0, 0}, {1, 1})) == doctest::Approx(2.01));
  CHECK(parse_expr("-y1 + 1", d).eval(pt({0, 0}, {3, 0})) == doctest::Approx(-2.0));
  CHECK(parse_expr("2^y1^2", d).eval(pt({0, 0}, {2, 0})) == doctest::Approx(16.0));
}

TEST_CASE("parse errors carry byte offsets") {
  Dims d{2, 2};
  CHECK_THROWS_AS(parse_expr("y3 + 1", d), ParseError);
  CHECK_THROWS_AS(parse_expr("foo(y1)", d), ParseError);
  CHECK_THROWS_AS(parse_expr("y1 + ", d), ParseError);
  CHECK_THROWS_AS(parse_expr("(y1", d), ParseError);
  try {
    parse_expr("y1 + z2", d);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 5);
  }
  try {
    parse_expr("x9", Dims{2, 2});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("out of range") != std::string::npos);
  }
}

TEST_CASE("round trip print/parse preserves values") {
  Dims d{2, 3};
  SampleRng rng(7);
  const auto pts = sample_points(d, SampleSpec{7, 20});
  for (int k = 0; k < 30; ++k) {
    Expr e = random_tree(rng, d, 3);
    Expr back = parse_expr(e.str(), d);
    for (const auto& p : pts) {
      const double a = e.eval(p);
      const double b = back.eval(p);
      CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    }
  }
}

TEST_CASE("differentiation matches hand results") {
  Dims d{2, 2};
  Expr e = parse_expr("y1^2+y2^2", d);
  Expr de = e.diff(fy(0));
  CHECK(de.eval(pt({0, 0}, {3, 4})) == doctest::Approx(6.0));

  Expr s = parse_expr("sin(x1*x2)", d);
  Expr ds = s.diff(bx(0));
  const Point p = pt({0.3, 0.8}, {1, 1});
  CHECK(ds.eval(p) == doctest::Approx(0.8 * std::cos(0.24)));
}

TEST_CASE("sixth-order mixed derivative against finite differences") {
  Dims d{2, 2};
  Expr e = parse_expr("0.5*exp(2*x1)*(y1^2+y2^2)", d);
  const auto pts = sample_points(d, SampleSpec{42, 10});
  const std::vector<Var> order6 = {bx(0), bx(0), bx(0), fy(0), fy(1), fy(1)};
  for (const auto& p : pts) {
    Expr sym = e;
    for (const auto& v : order6) sym = sym.diff(v);
    // FD on the symbolic order-3 intermediate, matching how high orders are
    // validated everywhere else.
    Expr mid = e.diff(bx(0)).diff(bx(0)).diff(bx(0));
    const double fd =
        fd_oracle([&](const Point& q) { return mid.diff(fy(0)).diff(fy(1)).eval(q); }, p, fy(1), 1);
    const double sv = sym.eval(p);
    CHECK(std::abs(sv - fd) <= 1e-4 * (1.0 + std::abs(sv)));
  }
}

TEST_CASE("fd oracle basics") {
  Dims d{1, 1};
  Expr e = parse_expr("y1^2", d);
  CHECK(std::abs(fd_oracle(e, pt({0}, {2}), fy(0), 1) - 4.0) <= 1e-8);
  Expr g = parse_expr("exp(x1)", d);
  CHECK(std::abs(fd_oracle(g, pt({0}, {1}), bx(0), 2) - 1.0) <= 1e-6);
}

TEST_CASE("randomized symbolic vs fd agreement") {
  Dims d{2, 2};
  SampleRng rng(123);
  const auto pts = sample_points(d, SampleSpec{99, 3});
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    Expr e = random_tree(rng, d, 3);
    for (int vi = 0; vi < 4; ++vi) {
      const Var v = vi < 2 ? bx(vi) : fy(vi - 2);
      Expr de = e.diff(v);
      for (const auto& p : pts) {
        const double sym = de.eval(p);
        const double fd = fd_oracle(e, p, v, 1);
        CHECK(std::abs(sym - fd) <= 1e-5 * (1.0 + std::abs(sym)));
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("simplify preserves values") {
  Dims d{2, 2};
  SampleRng rng(5);
  const auto pts = sample_points(d, SampleSpec{314, 20});
  for (int k = 0; k < 40; ++k) {
    Expr e = random_tree(rng, d, 4);
    Expr s = e.simplified();
    for (const auto& p : pts) {
      const double a = e.eval(p);
      const double b = s.eval(p);
      CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    }
  }
}

TEST_CASE("euler identity for homogeneous functions") {
  Dims d{1, 2};
  Expr f = parse_expr("sqrt(y1^2+y2^2)", d);
  Expr euler = Expr::variable(fy(0)) * f.diff(fy(0)) + Expr::variable(fy(1)) * f.diff(fy(1)) - f;
  for (const auto& p : sample_points(d, SampleSpec{11, 12}))
    CHECK(std::abs(euler.eval(p)) <= 1e-12);
}
