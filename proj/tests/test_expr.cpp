#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common/error.hpp"
#include "parser/printer.hpp"
#include "support.hpp"

using namespace fjtest;

TEST_CASE("relation surface reduces to zero") {
  auto ctx = make_context({"t"});
  CHECK(parse(ctx, "sin(t)^2 + cos(t)^2 - 1").is_zero());
  CHECK(parse(ctx, "sin(t)^3 + sin(t)*cos(t)^2") == parse(ctx, "sin(t)"));
  CHECK(parse(ctx, "sin(t)^2") == parse(ctx, "1 - cos(t)^2"));
}

TEST_CASE("gcd cancellation") {
  auto ctx = make_context({"x", "y"});
  const Expr e = parse(ctx, "(x^2 - y^2)/(x - y)");
  CHECK(e == parse(ctx, "x + y"));
  CHECK(e.is_polynomial());
  CHECK(print_expression(e) == "x + y");
}

TEST_CASE("spring constraint expands to canonical order") {
  auto ctx = make_context({"x1", "x2", "p1"});
  for (const char* p : {"m", "g", "k1", "k2", "l1", "l2"}) ctx->add_symbol(p, SymbolKind::parameter);
  const Expr omega = parse(ctx, "k1*(x1 - l1) - k2*(x2 - l2)");
  CHECK(print_expression(omega) == "x1*k1 - x2*k2 - k1*l1 + k2*l2");
  CHECK(omega == parse(ctx, "x1*k1 - x2*k2 - k1*l1 + k2*l2"));
}

TEST_CASE("canonical form invariants") {
  auto ctx = make_context({"x", "y"});
  SUBCASE("zero is unique") {
    const Expr z = parse(ctx, "x/y - x/y");
    CHECK(z.is_zero());
    CHECK(z.denominator() == Polynomial(1));
    CHECK(z == Expr(0));
  }
  SUBCASE("denominator leading coefficient positive") {
    const Expr e = parse(ctx, "1/(-x - y)");
    CHECK(e.denominator().leading().coeff > 0);
    CHECK(e == parse(ctx, "-1/(x + y)"));
  }
  SUBCASE("division by an expression that vanishes") {
    CHECK(code_of([&] { parse(ctx, "x/(x - x)"); }) == ErrorCode::DivisionByZeroExpression);
    CHECK(code_of([&] { (void)(sym(ctx, "x") / Expr(0)); }) == ErrorCode::DivisionByZeroExpression);
  }
  SUBCASE("undeclared symbol id") {
    CHECK(code_of([&] { Expr::symbol(ctx, 99); }) == ErrorCode::UndeclaredSymbol);
  }
  SUBCASE("radicals rationalize out of the denominator") {
    auto c2 = make_context({"x", "y"});
    c2->add_symbol("r", SymbolKind::auxiliary);
    c2->add_quadratic_relation(id(*c2, "r"), parse(c2, "r^2 - x^2 - y^2").numerator(), +1);
    const Expr e = parse(c2, "1/(r + x)");
    CHECK_FALSE(e.denominator().contains(id(*c2, "r")));
    CHECK(e * parse(c2, "r + x") == Expr(1));
  }
}

TEST_CASE("differentiate") {
  auto ctx = make_context({"p1"});
  ctx->add_symbol("m", SymbolKind::parameter);
  CHECK(differentiate(parse(ctx, "p1^2/(2*m)"), id(*ctx, "p1")) == parse(ctx, "p1/m"));

  SUBCASE("implicit differentiation of a radical") {
    auto c = make_context({"x", "y"});
    c->add_symbol("r", SymbolKind::auxiliary);
    c->add_quadratic_relation(id(*c, "r"), parse(c, "r^2 - x^2 - y^2").numerator(), +1);
    CHECK(differentiate(sym(c, "r"), id(*c, "x")) == parse(c, "x/r"));
    CHECK(differentiate(parse(c, "r^2"), id(*c, "y")) == parse(c, "2*y"));
  }
  SUBCASE("trig pair rules") {
    auto c = make_context({"theta", "px", "py"});
    c->add_symbol("l", SymbolKind::parameter);
    const Expr a = parse(c, "px*l*cos(theta) + py*l*sin(theta)");
    CHECK(differentiate(a, id(*c, "theta")) == parse(c, "-px*l*sin(theta) + py*l*cos(theta)"));
  }
  SUBCASE("sqrt builtin") {
    auto c = make_context({"x", "y"});
    const Expr r = parse(c, "sqrt(x^2 + y^2)");
    CHECK(differentiate(r, id(*c, "x")) == parse(c, "x/sqrt(x^2 + y^2)"));
  }
  SUBCASE("gauge parameters are rejected") {
    auto c = make_context({"q"});
    const SymbolId eps = c->add_symbol("epsilon1", SymbolKind::gauge_parameter);
    CHECK(code_of([&] { differentiate(parse(c, "q*q"), eps); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("substitute") {
  auto ctx = make_context({"x1", "x2", "p1"});
  for (const char* p : {"m", "g", "k1", "k2", "l1", "l2"}) ctx->add_symbol(p, SymbolKind::parameter);
  const Expr v0 = parse(ctx, "p1^2/(2*m) - m*g*(x1 + x2) + k1/2*(x1 - l1)^2 + k2/2*(x2 - l2)^2");

  SUBCASE("restriction of the spring potential") {
    const Expr x2 = parse(ctx, "l2 + (k1/k2)*(x1 - l1)");
    const Expr v1 = substitute(v0, {{id(*ctx, "x2"), x2}});
    CHECK(v1 == parse(ctx, "p1^2/(2*m) - m*g*(x1 + l2 + (k1/k2)*(x1 - l1)) + (x1 - l1)^2*(k1 + k1^2/k2)/2"));
    CHECK_FALSE(v1.depends_on(id(*ctx, "x2")));
  }
  SUBCASE("identity binding") {
    CHECK(substitute(v0, {{id(*ctx, "x1"), sym(ctx, "x1")}}) == v0);
    CHECK(substitute(v0, {}) == v0);
  }
  SUBCASE("simultaneous") {
    auto c = make_context({"x", "y"});
    const Expr e = substitute(parse(c, "x - 2*y"), {{id(*c, "x"), sym(c, "y")}, {id(*c, "y"), sym(c, "x")}});
    CHECK(e == parse(c, "y - 2*x"));
  }
  SUBCASE("pendulum trig substitution vanishes on the surface") {
    // x*(-y/r) + y*(x/r) cancels identically; hand expansion gives 0.
    auto c = make_context({"x", "y", "theta"});
    c->add_symbol("k", SymbolKind::parameter);
    c->add_symbol("l", SymbolKind::parameter);
    c->add_symbol("r", SymbolKind::auxiliary);
    c->add_quadratic_relation(id(*c, "r"), parse(c, "r^2 - x^2 - y^2").numerator(), +1);
    const Expr omega = parse(c, "2*k*l*(x*cos(theta) + y*sin(theta))");
    const auto [s, co] = c->trig_pair(id(*c, "theta"));
    const Expr on = substitute(omega, {{s, parse(c, "x/r")}, {co, parse(c, "-y/r")}});
    CHECK(on.is_zero());
    const Expr off = substitute(omega, {{s, parse(c, "x/r")}, {co, parse(c, "y/r")}});
    CHECK(off == parse(c, "4*k*l*x*y/r"));
  }
}

TEST_CASE("evaluate_numeric") {
  auto ctx = make_context({"k1", "k2", "m"}, SymbolKind::parameter);
  CHECK(evaluate_numeric(parse(ctx, "k2/(k1 + k2)"), {{0, 1.0}, {1, 3.0}}) == doctest::Approx(0.75));
  CHECK(evaluate_numeric(parse(ctx, "sqrt(k1*k2)/sqrt(m*(k1 + k2))"), {{0, 2.0}, {1, 2.0}, {2, 1.0}}) ==
        doctest::Approx(1.0));
  CHECK(code_of([&] { evaluate_numeric(parse(ctx, "k1 + m"), {{0, 1.0}}); }) == ErrorCode::UnboundSymbol);
  CHECK(code_of([&] { evaluate_numeric(parse(ctx, "1/(k1 - k2)"), {{0, 2.0}, {1, 2.0}}); }) ==
        ErrorCode::NumericDivisionByZero);

  auto c = make_context({"x", "y"});
  const SymbolId r = c->add_symbol("r", SymbolKind::auxiliary);
  c->add_quadratic_relation(r, parse(c, "r^2 - x^2 - y^2").numerator(), +1);
  CHECK(evaluate_numeric(sym(c, "r"), {{0, 3.0}, {1, 4.0}}) == doctest::Approx(5.0));
  CHECK(code_of([&] { evaluate_numeric(sym(c, "r"), {{0, 3.0}, {1, 4.0}, {r, 4.0}}); }) ==
        ErrorCode::RelationViolated);
  CHECK(code_of([&] { evaluate_numeric(sym(c, "r"), {{0, 3.0}, {1, 4.0}, {r, -5.0}}); }) ==
        ErrorCode::RelationViolated);
  CHECK(evaluate_numeric(sym(c, "r"), {{0, 3.0}, {1, 4.0}, {r, 5.0 + 1e-12}}) == doctest::Approx(5.0));
}

// ---- properties ----------------------------------------------------------

TEST_CASE("property: addition commutes and e * (1/e) = 1") {
  Rng rng(0xC0FFEE);
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  auto ctx = make_context(names);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const Expr e1 = parse(ctx, random_expression_text(rng, names, 3, false, false));
    const Expr e2 = parse(ctx, random_expression_text(rng, names, 3, false, false));
    CHECK(e1 + e2 == e2 + e1);
    CHECK(e1 * e2 == e2 * e1);
    if (!e1.is_zero()) {
      CHECK(e1 * (Expr(1) / e1) == Expr(1));
      ++checked;
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("property: differentiation is linear and obeys the product rule") {
  Rng rng(42);
  const std::vector<std::string> names = {"x", "y", "z"};
  auto ctx = make_context(names);
  int done = 0;
  while (done < 100) {
    Expr f, g;
    try {
      f = parse(ctx, random_expression_text(rng, names, 3, true));
      g = parse(ctx, random_expression_text(rng, names, 3, true));
    } catch (const Error&) {
      continue;  // generated a vanishing denominator
    }
    const SymbolId v = id(*ctx, rng.pick(names));
    const Expr c(Rational(rng.uniform_int(-5, 5), rng.uniform_int(1, 4)));
    CHECK(differentiate(f + c * g, v) == differentiate(f, v) + c * differentiate(g, v));
    CHECK(differentiate(f * g, v) == differentiate(f, v) * g + f * differentiate(g, v));
    ++done;
  }
}

TEST_CASE("property: canonical form evaluates like the raw tree") {
  Rng rng(7);
  const std::vector<std::string> names = {"x", "y", "z"};
  auto ctx = make_context(names);
  int done = 0;
  int points = 0;
  while (done < 40) {
    const std::string text = random_expression_text(rng, names, 3, true);
    const RawExpr raw = parse_raw_expression(text, *ctx);
    Expr e;
    try {
      e = normalize(raw, ctx);
    } catch (const Error&) {
      continue;
    }
    ++done;
    for (int k = 0; k < 5; ++k) {  // 40 expressions x 5 = 200 bindings
      std::map<SymbolId, double> v;
      for (const auto& n : names) v[id(*ctx, n)] = rng.uniform(-2.0, 2.0);
      const double expected = eval_raw(*raw, v);
      if (!std::isfinite(expected) || std::abs(expected) > 1e6) continue;
      double got = 0.0;
      try {
        got = evaluate_numeric(e, v);
      } catch (const Error&) {
        continue;  // removable singularity cancelled by the canonical form
      }
      CHECK_MESSAGE(close(got, expected, 1e-9, 1e-9), text);
      ++points;
    }
  }
  CHECK(points > 150);
}

TEST_CASE("property: 200 relation-consistent bindings of one expression") {
  auto ctx = make_context({"x", "y", "t"});
  const std::string text = "(x*sin(t) - y*cos(t))^2/(1 + x^2) + sqrt(x^2 + y^2 + 1)*cos(t)^3 - sin(t)^2";
  const RawExpr raw = parse_raw_expression(text, *ctx);
  const Expr e = normalize(raw, ctx);
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    std::map<SymbolId, double> v = {{0, rng.uniform(-3, 3)}, {1, rng.uniform(-3, 3)}, {2, rng.uniform(-4, 4)}};
    CHECK(close(evaluate_numeric(e, v), eval_raw(*raw, v), 1e-9, 1e-12));
  }
}

TEST_CASE("property: substitution commutes with differentiation in other variables") {
  Rng rng(99);
  const std::vector<std::string> names = {"x", "y", "w"};
  auto ctx = make_context(names);
  const SymbolId x = id(*ctx, "x");
  const SymbolId w = id(*ctx, "w");
  int done = 0;
  while (done < 60) {
    Expr e, g;
    try {
      e = parse(ctx, random_expression_text(rng, names, 3, false));
      g = parse(ctx, random_expression_text(rng, {"y"}, 2, false));
    } catch (const Error&) {
      continue;
    }
    Expr lhs, rhs;
    try {
      lhs = differentiate(substitute(e, {{x, g}}), w);
      rhs = substitute(differentiate(e, w), {{x, g}});
    } catch (const Error& err) {
      CHECK_MESSAGE(err.code() == ErrorCode::DivisionByZeroExpression, std::string(err.what()));
      continue;
    }
    CHECK(lhs == rhs);
    ++done;
  }
}
