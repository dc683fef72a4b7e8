#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linalg/matrix.hpp"
#include "report/report.hpp"
#include "support.hpp"

using namespace fjtest;

namespace {

Problem load(const std::string& name) { return parse_system_file(fixture(name)); }

/// Correspondence between our final-system variables and a published
/// variable ordering. Multipliers are matched through their constraints:
/// a published multiplier paired with Omega_p relates to ours (paired with
/// Omega_o) by lambda_o = c lambda_p with c = Omega_p / Omega_o.
struct Frame {
  std::vector<std::size_t> index;  // published position of each of our variables
  std::vector<Rational> scale;     // c per variable (1 for non-multipliers)
};

Frame frame_of(const AnalysisReport& r, const std::vector<std::string>& names,
               const std::vector<std::pair<std::string, std::string>>& multipliers) {
  const auto& sys = r.final_system;
  const auto& ctx = *sys.ctx;
  Frame f;
  for (SymbolId v : sys.variables) {
    const std::string& name = ctx.name(v);
    if (ctx.kind(v) != SymbolKind::multiplier) {
      const auto it = std::find(names.begin(), names.end(), name);
      REQUIRE(it != names.end());
      f.index.push_back(static_cast<std::size_t>(it - names.begin()));
      f.scale.push_back(1);
      continue;
    }
    const Expr* omega = nullptr;
    for (const auto* list : {&r.constraints.constraints(), &r.constraints.conditions()}) {
      for (const auto& c : *list) {
        if (c.multiplier == v) omega = &c.expr;
      }
    }
    REQUIRE(omega != nullptr);
    bool found = false;
    for (const auto& [published_name, published_omega] : multipliers) {
      const auto c = rational_ratio(in_report(r, published_omega), *omega);
      if (!c) continue;
      const auto it = std::find(names.begin(), names.end(), published_name);
      REQUIRE(it != names.end());
      f.index.push_back(static_cast<std::size_t>(it - names.begin()));
      f.scale.push_back(*c);
      found = true;
    }
    REQUIRE_MESSAGE(found, "no published constraint matches " << name);
  }
  return f;
}

/// Published two-form entry (i, j) expressed in our variables.
Expr form_in_frame(const Frame& f, const SymMatrix& published, std::size_t i, std::size_t j) {
  return published(f.index[i], f.index[j]) * Expr(Rational(1) / (f.scale[i] * f.scale[j]));
}

/// Published inverse entry (i, j) expressed in our variables.
Expr inverse_in_frame(const Frame& f, const SymMatrix& published, std::size_t i, std::size_t j) {
  return published(f.index[i], f.index[j]) * Expr(f.scale[i] * f.scale[j]);
}

std::vector<Expr> mode_in_frame(const Frame& f, const std::vector<long>& published) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < f.index.size(); ++i) out.emplace_back(Rational(published[f.index[i]]) * f.scale[i]);
  return out;
}

const IterationRecord& record(const AnalysisReport& r, int level, IterationRecord::Kind kind) {
  for (const auto& rec : r.records) {
    if (rec.level == level && rec.kind == kind) return rec;
  }
  FAIL("missing iteration record");
  return r.records.front();
}

/// Published orderings and constraints for the gauge system.
const std::vector<std::string> kGaugeNames = {"q1", "q2", "q3", "q4", "p3", "p4",
                                              "lambda^1", "lambda^2", "eta^1", "eta^2"};
const std::vector<std::pair<std::string, std::string>> kGaugeMultipliers = {
    {"lambda^1", "2*(q1 + q2 + q4)"}, {"lambda^2", "q1 + q2 + q4 + p3"},
    {"eta^1", "q1 - q2"},             {"eta^2", "q3 + p4"}};

// Published f^(2) of the gauge-fixed system.
SymMatrix gauge_f2_published() {
  return int_matrix({{0, 0, 0, 0, 0, 0, 2, 1, 1, 0},
                     {0, 0, 0, 0, -1, 1, 2, 1, -1, 0},
                     {0, 0, 0, 0, -1, 0, 0, 0, 0, 1},
                     {0, 0, 0, 0, 0, -1, 2, 1, 0, 0},
                     {0, 1, 1, 0, 0, 0, 0, 1, 0, 0},
                     {0, -1, 0, 1, 0, 0, 0, 0, 0, 1},
                     {-2, -2, 0, -2, 0, 0, 0, 0, 0, 0},
                     {-1, -1, 0, -1, -1, 0, 0, 0, 0, 0},
                     {-1, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                     {0, 0, -1, 0, 0, -1, 0, 0, 0, 0}});
}

// Published inverse of f^(2), in sixths.
SymMatrix gauge_inverse_published() {
  const std::vector<std::vector<long>> sixths = {
      {0, 0, 2, 0, 0, -2, 0, -2, -4, 0},     {0, 0, 2, 0, 0, -2, 0, -2, 2, 0},
      {-2, -2, 0, 4, 0, 0, -1, 2, 0, -6},    {0, 0, -4, 0, 0, 4, -3, 4, 2, 0},
      {0, 0, 0, 0, 0, 0, 3, -6, 0, 0},       {2, 2, 0, -4, 0, 0, 1, -2, 0, 0},
      {0, 0, 1, 3, -3, -1, 0, -1, 1, -3},    {2, 2, -2, -4, 6, 2, 1, 0, -2, 6},
      {4, -2, 0, -2, 0, 0, -1, 2, 0, 0},     {0, 0, 6, 0, 0, 0, 3, -6, 0, 0}};
  SymMatrix m(10, 10);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) m(i, j) = Expr(Rational(sixths[i][j], 6));
  }
  return m;
}

}  // namespace

// ---- build_symplectic_matrix / potential_gradient ------------------------

TEST_CASE("symplectic matrix examples") {
  SUBCASE("compound spring") {
    const Problem p = load("compound_spring.fj");
    CHECK(build_symplectic_matrix(p.system) == int_matrix({{0, 0, -1}, {0, 0, -1}, {1, 1, 0}}));
    CHECK(build_symplectic_matrix(p.system).row_labels == std::vector<std::string>{"x1", "x2", "p1"});
  }
  SUBCASE("pendulum") {
    const Problem p = load("pendulum.fj");
    const SymMatrix f = build_symplectic_matrix(p.system);
    const SymMatrix expected = matrix(p.system.ctx, {{"0", "0", "0", "-1", "0"},
                                                     {"0", "0", "0", "0", "-1"},
                                                     {"0", "0", "0", "-l*cos(theta)", "-l*sin(theta)"},
                                                     {"1", "0", "l*cos(theta)", "0", "0"},
                                                     {"0", "1", "l*sin(theta)", "0", "0"}});
    CHECK(f == expected);
  }
  SUBCASE("zero one-form") {
    Problem p = load("free_particle.fj");
    for (auto& a : p.system.one_form) a = Expr(0);
    CHECK(build_symplectic_matrix(p.system).is_zero());
  }
}

TEST_CASE("potential gradient examples") {
  {
    const Problem p = load("compound_spring.fj");
    const auto grad = potential_gradient(p.system);
    CHECK(grad[0] == parse(p.system.ctx, "-m*g + k1*(x1 - l1)"));
    CHECK(grad[2] == parse(p.system.ctx, "p1/m"));
  }
  {
    const Problem p = load("gauge.fj");
    CHECK(potential_gradient(p.system)[2].is_zero());
  }
  {
    Problem p = load("free_particle.fj");
    p.system.potential = Expr(7);
    for (const auto& g : potential_gradient(p.system)) CHECK(g.is_zero());
  }
}

// ---- constraints ---------------------------------------------------------

TEST_CASE("constraints from zero modes") {
  SUBCASE("compound spring") {
    const auto r = analyze_fixture("compound_spring.fj");
    const auto& cs = r.constraints.constraints();
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].label == "Omega^(0)_1");
    CHECK(rational_ratio(cs[0].expr, in_report(r, "k1*(x1 - l1) - k2*(x2 - l2)")).has_value());
    CHECK(proportional(cs[0].source_mode.components, int_vector({-1, 1, 0})));
  }
  SUBCASE("gauge system matches the published pair up to scale") {
    const auto r = analyze_fixture("gauge.fj");
    const auto& cs = r.constraints.constraints();
    REQUIRE(cs.size() == 2);
    const Expr a = in_report(r, "2*(q1 + q2 + q4)");
    const Expr b = in_report(r, "q1 + q2 + q4 + p3");
    const bool direct = rational_ratio(cs[0].expr, a) && rational_ratio(cs[1].expr, b);
    const bool swapped = rational_ratio(cs[0].expr, b) && rational_ratio(cs[1].expr, a);
    CHECK((direct || swapped));
    for (const auto& c : cs) CHECK(c.expr.numerator().content() == 1);
  }
  SUBCASE("pendulum second pass yields an identity") {
    const auto r = analyze_fixture("pendulum.fj");
    REQUIRE(r.constraints.constraints().size() == 1);
    CHECK(rational_ratio(r.constraints.constraints()[0].expr, in_report(r, "2*k*l*(x*cos(theta) + y*sin(theta))")));
    const auto& stacked = record(r, 0, IterationRecord::Kind::stacked);
    REQUIRE(stacked.modes.size() == 1);
    const auto mode = stacked.modes[0].components;
    const std::vector<Expr> published = {in_report(r, "-l*cos(theta)"), in_report(r, "-l*sin(theta)"), Expr(1),
                                         Expr(0), Expr(0), Expr(0)};
    CHECK(proportional(mode, published));
    CHECK(stacked.new_constraints.empty());
    for (const auto& c : stacked.candidates) CHECK(c.reduced.is_zero());
  }
  SUBCASE("scale of a zero mode does not change the stored constraint") {
    const Problem p = load("compound_spring.fj");
    const auto grad = potential_gradient(p.system);
    std::optional<Expr> first;
    for (const Rational& c : {Rational(1), Rational(-3), Rational(2, 7)}) {
      ConstraintSet set;
      std::vector<std::size_t> fresh;
      ZeroMode mode{{Expr(-c), Expr(c), Expr(0)}, 0};
      constraints_from_modes({mode}, grad, set, p.system, fresh);
      REQUIRE(set.constraints().size() == 1);
      if (!first) first = set.constraints()[0].expr;
      CHECK(set.constraints()[0].expr == *first);
    }
  }
}

TEST_CASE("stacked consistency matrix") {
  SUBCASE("compound spring bottom row is the constraint gradient") {
    const auto r = analyze_fixture("compound_spring.fj");
    const SymMatrix& m = record(r, 0, IterationRecord::Kind::stacked).matrix;
    REQUIRE(m.rows() == 4);
    REQUIRE(m.cols() == 3);
    CHECK(proportional({m(3, 0), m(3, 1), m(3, 2)},
                       {in_report(r, "k1"), in_report(r, "-k2"), Expr(0)}));
  }
  SUBCASE("gauge system rows match the published stacked matrix up to row scale") {
    const auto r = analyze_fixture("gauge.fj");
    const SymMatrix& m = record(r, 0, IterationRecord::Kind::stacked).matrix;
    REQUIRE(m.rows() == 8);
    const SymMatrix top = int_matrix({{0, 0, 0, 0, 0, 0},
                                      {0, 0, 0, 0, -1, 1},
                                      {0, 0, 0, 0, -1, 0},
                                      {0, 0, 0, 0, 0, -1},
                                      {0, 1, 1, 0, 0, 0},
                                      {0, -1, 0, 1, 0, 0}});
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) CHECK(m(i, j) == top(i, j));
    }
    const std::vector<std::vector<Expr>> published = {int_vector({2, 2, 0, 2, 0, 0}), int_vector({1, 1, 0, 1, 1, 0})};
    for (std::size_t i = 6; i < 8; ++i) {
      std::vector<Expr> row;
      for (std::size_t j = 0; j < 6; ++j) row.push_back(m(i, j));
      CHECK((proportional(row, published[0]) || proportional(row, published[1])));
    }
    CHECK(same_span({{m(6, 0), m(6, 1), m(6, 2), m(6, 3), m(6, 4), m(6, 5)},
                     {m(7, 0), m(7, 1), m(7, 2), m(7, 3), m(7, 4), m(7, 5)}},
                    published));
  }
  SUBCASE("no constraints leaves f unchanged") {
    const Problem p = load("compound_spring.fj");
    const SymMatrix f = build_symplectic_matrix(p.system);
    CHECK(stack_consistency_matrix(f, {}, p.system) == f);
  }
}

TEST_CASE("restricted potentials") {
  SUBCASE("compound spring eliminates x2") {
    const auto r = analyze_fixture("compound_spring.fj");
    CHECK(r.final_system.potential ==
          in_report(r, "p1^2/(2*m) - m*g*(x1 + k1*(x1 - l1)/k2 + l2) + (x1 - l1)^2*(k1 + k1^2/k2)/2"));
    const auto& cs = r.constraints.constraints();
    REQUIRE(cs[0].multiplier);
    const auto idx = r.final_system.index_of(*cs[0].multiplier);
    REQUIRE(idx);
    CHECK(r.final_system.one_form[*idx] == cs[0].expr);
    CHECK(r.final_system.iteration == 1);
  }
  SUBCASE("pendulum") {
    const auto r = analyze_fixture("pendulum.fj");
    CHECK(r.final_system.potential ==
          in_report(r, "(px^2 + py^2)/(2*m) + k*(x^2 + y^2 + d^2) + m*g*y*(1 + l/sqrt(x^2 + y^2))"));
  }
  SUBCASE("gauge system agrees with the published V on the constraint surface") {
    const auto r = analyze_fixture("gauge.fj");
    const Expr published = in_report(r, "(p4^2 - (q1 + 2*q2)*(q1 + 2*q4))/2");
    CHECK(r.constraints.restrict(r.final_system.potential) == r.constraints.restrict(published));
  }
  SUBCASE("gauge-fixed potential, with the published p2 read as -p4") {
    const auto r = analyze_fixture("gauge_fixed.fj");
    const Expr published = in_report(r, "((-p4)^2 + 9/4*q4^2)/2");
    CHECK(r.constraints.restrict(r.final_system.potential) == r.constraints.restrict(published));
  }
}

// ---- gauge ---------------------------------------------------------------

TEST_CASE("gauge detection and transformations") {
  const auto r = analyze_fixture("gauge.fj");
  CHECK(r.status == AnalysisStatus::gauge);
  CHECK_FALSE(r.inverse);
  CHECK(r.brackets.empty());
  REQUIRE(r.generators.size() == 2);

  SUBCASE("generators span the published zero modes") {
    const Frame f = frame_of(r, kGaugeNames, kGaugeMultipliers);
    std::vector<std::vector<Expr>> ours;
    for (const auto& g : r.generators) ours.push_back(g.mode.components);
    CHECK(same_span(ours, {mode_in_frame(f, {0, 0, 2, 0, 0, 0, 1, -2, 0, 0}),
                           mode_in_frame(f, {2, -1, 1, -1, 0, 0, 0, 0, 0, 0})}));
  }
  SUBCASE("published iterated matrix, upper triangle") {
    // the printed lower triangle has one entry that breaks antisymmetry
    const Frame f = frame_of(r, kGaugeNames, kGaugeMultipliers);
    const SymMatrix published = gauge_f2_published();
    const SymMatrix& m = r.final_matrix;
    REQUIRE(m.rows() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = i + 1; j < 8; ++j) CHECK(m(i, j) == form_in_frame(f, published, i, j));
    }
    CHECK(m.is_antisymmetric());
  }
  SUBCASE("transformations agree with the published rules up to a basis change") {
    std::vector<std::vector<Expr>> ours;
    for (const auto& g : r.generators) {
      // coefficient of this parameter: set it to 1 and the others to 0
      Substitution pick;
      for (const auto& h : r.generators) pick.emplace_back(h.parameter, Expr(h.parameter == g.parameter ? 1 : 0));
      std::vector<Expr> row;
      for (const auto& [v, delta] : r.transformations) row.push_back(substitute(delta, pick));
      ours.push_back(row);
    }
    // delta over (q1, q2, q3, q4, p3, p4) per published parameter
    CHECK(same_span(ours, {int_vector({0, 0, 2, 0, 0, 0}), int_vector({2, -1, 1, -1, 0, 0})}));
    REQUIRE(r.transformations.size() == 6);
  }
  SUBCASE("generator invariants") {
    std::vector<Expr> grad = potential_gradient(r.final_system);
    for (const auto& g : r.generators) {
      CHECK(is_zero_vector(left_multiply(g.mode.components, r.final_matrix)));
      Expr contraction;
      for (std::size_t i = 0; i < grad.size(); ++i) contraction += g.mode.components[i] * grad[i];
      CHECK(r.constraints.restrict(contraction).is_zero());
      CHECK(r.context()->kind(g.parameter) == SymbolKind::gauge_parameter);
    }
  }
}

TEST_CASE("gauge transformation rules from single modes") {
  Problem p = load("gauge.fj");
  const auto& sys = p.system;
  const SymbolId eps = p.system.ctx->add_symbol("epsilon1", SymbolKind::gauge_parameter);
  std::vector<Expr> unit(sys.variables.size(), Expr(0));
  unit[0] = Expr(1);
  const auto single = gauge_transformations({GaugeGenerator{ZeroMode{unit, 0}, eps}}, sys);
  REQUIRE(single.size() == 6);
  CHECK(single[0].second == Expr::symbol(sys.ctx, eps));
  for (std::size_t i = 1; i < single.size(); ++i) CHECK(single[i].second.is_zero());

  std::vector<Expr> v = int_vector({2, -1, 1, -1, 0, 0});
  std::vector<Expr> scaled;
  for (const auto& e : v) scaled.push_back(e * Expr(Rational(-5, 3)));
  const auto base = gauge_transformations({GaugeGenerator{ZeroMode{v, 0}, eps}}, sys);
  const auto times = gauge_transformations({GaugeGenerator{ZeroMode{scaled, 0}, eps}}, sys);
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(times[i].second == base[i].second * Expr(Rational(-5, 3)));
}

TEST_CASE("gauge fixing") {
  const auto r = analyze_fixture("gauge_fixed.fj");
  CHECK(r.status == AnalysisStatus::constrained_invertible);
  REQUIRE(r.inverse);
  const Frame f = frame_of(r, kGaugeNames, kGaugeMultipliers);

  SUBCASE("published fixed matrix") {
    const SymMatrix published = gauge_f2_published();
    REQUIRE(r.final_matrix.rows() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) CHECK(r.final_matrix(i, j) == form_in_frame(f, published, i, j));
    }
  }
  SUBCASE("published inverse") {
    const SymMatrix published = gauge_inverse_published();
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) {
        CAPTURE(i);
        CAPTURE(j);
        CHECK((*r.inverse)(i, j) == inverse_in_frame(f, published, i, j));
      }
    }
    CHECK(r.final_matrix * *r.inverse == SymMatrix::identity(10));
  }
  SUBCASE("condition implied by a constraint does not fix the gauge") {
    Problem p = load("gauge_fixed.fj");
    p.gauge_conditions[0].expr = parse(p.system.ctx, "q1 + q2 + q4");
    p.gauge_conditions[0].text = "q1 + q2 + q4";
    CHECK(code_of([&] { run_analysis(p); }) == ErrorCode::GaugeNotFixing);
  }
  SUBCASE("wrong number of conditions") {
    Problem p = load("gauge_fixed.fj");
    p.gauge_conditions.pop_back();
    CHECK(code_of([&] { run_analysis(p); }) == ErrorCode::InvalidArgument);
  }
}

// ---- brackets ------------------------------------------------------------

TEST_CASE("brackets") {
  SUBCASE("compound spring") {
    const auto r = analyze_fixture("compound_spring.fj");
    CHECK(*r.bracket(var(r, "x1"), var(r, "p1")) == in_report(r, "k2/(k1 + k2)"));
    CHECK(*r.bracket(var(r, "x2"), var(r, "p1")) == in_report(r, "k1/(k1 + k2)"));
    CHECK(r.bracket(var(r, "x1"), var(r, "x2"))->is_zero());
    // the published x-lambda brackets, with lambda matched through its constraint
    const Frame f = frame_of(r, {"x1", "x2", "p1", "lambda"}, {{"lambda", "k1*(x1 - l1) - k2*(x2 - l2)"}});
    const Rational c = f.scale[3];
    CHECK(*r.bracket(var(r, "x1"), var(r, "lambda1")) == in_report(r, "-1/(k1 + k2)") * Expr(c));
    CHECK(*r.bracket(var(r, "x2"), var(r, "lambda1")) == in_report(r, "1/(k1 + k2)") * Expr(c));
    // default table lists physical variables only
    CHECK(r.brackets.size() == 3);
  }
  SUBCASE("gauge-fixed") {
    const auto r = analyze_fixture("gauge_fixed.fj");
    CHECK(*r.bracket(var(r, "q1"), var(r, "q3")) == Expr(Rational(1, 3)));
    CHECK(*r.bracket(var(r, "q1"), var(r, "p4")) == Expr(Rational(-1, 3)));
    CHECK(*r.bracket(var(r, "q2"), var(r, "q3")) == Expr(Rational(1, 3)));
    CHECK(*r.bracket(var(r, "q2"), var(r, "p4")) == Expr(Rational(-1, 3)));
    CHECK(*r.bracket(var(r, "q3"), var(r, "q4")) == Expr(Rational(2, 3)));
    CHECK(*r.bracket(var(r, "q4"), var(r, "p4")) == Expr(Rational(2, 3)));
    CHECK(r.brackets.size() == 15);
  }
  SUBCASE("pendulum on the surface") {
    const auto r = analyze_fixture("pendulum.fj");
    const Frame f = frame_of(r, {"x", "y", "theta", "px", "py", "lambda"},
                             {{"lambda", "2*k*l*(x*cos(theta) + y*sin(theta))"}});
    const Expr c(f.scale[5]);
    auto on = [&](const char* a, const char* b) { return r.constraints.restrict(*r.bracket(var(r, a), var(r, b))); };
    CHECK(on("x", "px") == in_report(r, "(r + l*x^2/r^2)/(r + l)"));
    CHECK(on("x", "py") == in_report(r, "(l*x*y/r^2)/(r + l)"));
    CHECK(on("y", "px") == in_report(r, "(l*x*y/r^2)/(r + l)"));
    CHECK(on("y", "py") == in_report(r, "(r + l*y^2/r^2)/(r + l)"));
    CHECK(on("theta", "px") == in_report(r, "-y/(r*(r + l))"));
    CHECK(on("theta", "py") == in_report(r, "x/(r*(r + l))"));
    CHECK(on("x", "lambda1") == in_report(r, "y/(2*k*r*(r + l))") * c);
    CHECK(on("y", "lambda1") == in_report(r, "-x/(2*k*r*(r + l))") * c);
    CHECK(on("theta", "lambda1") == in_report(r, "1/(2*k*l*(l + r))") * c);
  }
  SUBCASE("pendulum inverse off the surface against the published block") {
    const auto r = analyze_fixture("pendulum.fj");
    const Frame f = frame_of(r, {"x", "y", "theta", "px", "py", "lambda"},
                             {{"lambda", "2*k*l*(x*cos(theta) + y*sin(theta))"}});
    const double c = f.scale[5].get_d();
    Rng rng(3);
    const auto& ctx = *r.context();
    for (int n = 0; n < 25; ++n) {
      const double x = rng.uniform(-2, 2), y = rng.uniform(-2, 2), th = rng.uniform(0.1, 1.4);
      const double k = rng.uniform(0.5, 3), l = rng.uniform(0.5, 3);
      const double s = std::sin(th), co = std::cos(th);
      const double den = l + x * s - y * co;
      // rows x, y, theta; columns px, py, lambda
      const double block[3][3] = {
          {(s * (l * s + x) - y * co) / den, -l * s * co / den, 1 / (-2 * k * l / co - 2 * k * x * s / co + 2 * k * y)},
          {-l * s * co / den, 1 - l * s * s / den, 1 / (-2 * k * l / s - 2 * k * x + 2 * k * y * co / s)},
          {1 / (l / co + x * s / co - y), 1 / (l / s + x - y * co / s), 1 / (2 * k * l * l + 2 * k * l * x * s - 2 * k * l * y * co)}};
      NumericBindings b{{id(ctx, "x"), x}, {id(ctx, "y"), y}, {id(ctx, "theta"), th}, {id(ctx, "k"), k},
                        {id(ctx, "l"), l}, {id(ctx, "m"), 1.0}, {id(ctx, "g"), 1.0}, {id(ctx, "d"), 1.0}};
      const char* rows[] = {"x", "y", "theta"};
      const char* cols[] = {"px", "py", "lambda1"};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double scale = j == 2 ? c : 1.0;
          const double ours = evaluate_numeric(*r.bracket(var(r, rows[i]), var(r, cols[j])), b);
          CHECK(close(ours, block[i][j] * scale, 1e-9, 1e-12));
        }
      }
    }
  }
}

// ---- run_analysis / count_dof --------------------------------------------

TEST_CASE("run_analysis examples") {
  {
    const auto r = analyze_fixture("compound_spring.fj");
    CHECK(r.status == AnalysisStatus::constrained_invertible);
    CHECK(r.constraints.constraints().size() == 1);
    CHECK(r.final_system.iteration == 1);
    CHECK(r.dof == 2);
    CHECK(r.inverse);
  }
  {
    const auto r = analyze_fixture("gauge.fj");
    CHECK(r.status == AnalysisStatus::gauge);
    CHECK(r.dof == 2);
  }
  {
    const auto r = analyze_fixture("free_particle.fj");
    CHECK(r.status == AnalysisStatus::regular);
    CHECK(*r.bracket(var(r, "q"), var(r, "p")) == Expr(1));
    CHECK(r.dof == 2);
    CHECK(r.constraints.constraints().empty());
  }
  CHECK(analyze_fixture("pendulum.fj").dof == 4);
  CHECK(analyze_fixture("gauge_fixed.fj").dof == 2);
}

TEST_CASE("count_dof") {
  CHECK(count_dof(3, 1, 0) == 2);
  CHECK(count_dof(6, 2, 2) == 2);
  CHECK(count_dof(2, 0, 0) == 2);
  CHECK(code_of([] { count_dof(2, 2, 1); }) == ErrorCode::NegativeDof);
  CHECK(code_of([] { count_dof(-1, 0, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("iteration cap") {
  Problem p = load("gauge_fixed.fj");
  p.options.max_iterations = 1;
  CHECK(code_of([&] { run_analysis(p); }) == ErrorCode::IterationLimitExceeded);
  p.options.max_iterations = 12;
  CHECK_NOTHROW(run_analysis(p));
}

// ---- properties ----------------------------------------------------------

TEST_CASE("property: symplectic matrices are antisymmetric") {
  Rng rng(11);
  const std::vector<std::string> names = {"a", "b", "c"};
  for (int n = 0; n < 40; ++n) {
    auto ctx = make_context(names);
    SymplecticSystem sys;
    sys.ctx = ctx;
    for (const auto& name : names) {
      sys.variables.push_back(id(*ctx, name));
      sys.one_form.push_back(parse(ctx, random_expression_text(rng, names, 2, true, false)));
    }
    sys.potential = parse(ctx, random_expression_text(rng, names, 2, false, false));
    CHECK(build_symplectic_matrix(sys).is_antisymmetric());
  }
}

TEST_CASE("property: every recorded zero mode annihilates its matrix") {
  for (const char* name : {"compound_spring.fj", "pendulum.fj", "gauge.fj", "gauge_fixed.fj", "free_particle.fj"}) {
    CAPTURE(std::string(name));
    const auto r = analyze_fixture(name);
    for (const auto& rec : r.records) {
      for (const auto& m : rec.modes) CHECK(is_zero_vector(left_multiply(m.components, rec.matrix)));
      CHECK(rank(rec.matrix) + rec.modes.size() == rec.matrix.rows());
    }
    if (r.inverse) {
      CHECK(r.final_matrix * *r.inverse == SymMatrix::identity(r.final_matrix.rows()));
      CHECK(r.inverse->is_antisymmetric());
    }
  }
}

TEST_CASE("property: first-level constraints are the contraction of their mode with the gradient") {
  for (const char* name : {"compound_spring.fj", "pendulum.fj", "gauge.fj"}) {
    const Problem p = load(name);
    const auto r = run_analysis(p);
    const auto grad = potential_gradient(r.initial_system);
    for (const auto& c : r.constraints.constraints()) {
      if (c.iteration_found != 0) continue;
      Expr contraction;
      for (std::size_t i = 0; i < grad.size(); ++i) contraction += c.source_mode.components[i] * grad[i];
      CHECK(rational_ratio(contraction, c.expr).has_value());
    }
  }
}

TEST_CASE("property: canonical regular systems have unit brackets") {
  Rng rng(19);
  for (int n = 0; n < 20; ++n) {
    const int dim = rng.uniform_int(1, 3);
    std::string text = "[variables]\n";
    std::vector<std::string> names;
    for (int i = 1; i <= dim; ++i) names.push_back("q" + std::to_string(i));
    for (int i = 1; i <= dim; ++i) names.push_back("p" + std::to_string(i));
    for (int i = 1; i <= dim; ++i) text += "q" + std::to_string(i) + " dynamical\n";
    for (int i = 1; i <= dim; ++i) text += "p" + std::to_string(i) + " momentum\n";
    text += "[one_form]\n";
    for (int i = 1; i <= dim; ++i) text += "q" + std::to_string(i) + " = p" + std::to_string(i) + "\n";
    for (int i = 1; i <= dim; ++i) text += "p" + std::to_string(i) + " = 0\n";
    text += "[potential]\n" + random_expression_text(rng, names, 3, false, false) + "\n";
    CAPTURE(text);
    const auto r = run_analysis(parse_system(text));
    REQUIRE(r.status == AnalysisStatus::regular);
    REQUIRE(r.inverse);
    for (int i = 0; i < 2 * dim; ++i) {
      for (int j = 0; j < 2 * dim; ++j) {
        const Expr value = *r.bracket(var(r, names[i]), var(r, names[j]));
        long expected = 0;
        if (i < dim && j == i + dim) expected = 1;
        if (j < dim && i == j + dim) expected = -1;
        CHECK(value == Expr(expected));
      }
    }
  }
}

TEST_CASE("property: analysis is deterministic") {
  for (const char* name : {"compound_spring.fj", "pendulum.fj", "gauge.fj", "gauge_fixed.fj"}) {
    const Problem p = load(name);
    const std::string first = render_json(build_report_tree(run_analysis(p)));
    const std::string second = render_json(build_report_tree(run_analysis(p)));
    const std::string fresh = render_json(build_report_tree(analyze_fixture(name)));
    CHECK(first == second);
    CHECK(first == fresh);
  }
}
