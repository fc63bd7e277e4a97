#include <cmath>
#include <random>

#include "doctest.h"
#include "gamet/qmu.hpp"
#include "gamet/random_game.hpp"
#include "support.hpp"

using namespace gamet;

TEST_CASE("parser: reachability and safety shapes") {
  Formula reach = parse_formula("mu X. (goal | pre1(X))");
  CHECK(reach->kind == FormulaKind::Mu);
  CHECK(reach->left->kind == FormulaKind::Or);
  CHECK(reach->left->left->name == "goal");
  CHECK(reach->left->right->kind == FormulaKind::Pre);

  Formula safe = parse_formula("nu X. (safe & pre1(X))");
  CHECK(safe->kind == FormulaKind::Nu);
  CHECK(safe->left->kind == FormulaKind::And);

  CHECK_THROWS_AS(parse_formula("mu X. ~X"), FormulaParseError);
}

TEST_CASE("parser: precedence and binder extent") {
  // (+) binds tighter than &, which binds tighter than |
  Formula f = parse_formula("~a | b & c (+) 0.5");
  REQUIRE(f->kind == FormulaKind::Or);
  CHECK(f->left->kind == FormulaKind::Neg);
  REQUIRE(f->right->kind == FormulaKind::And);
  CHECK(f->right->right->kind == FormulaKind::ShiftUp);
  CHECK(f->right->right->value == doctest::Approx(0.5));

  // binders extend maximally to the right
  Formula g = parse_formula("a | mu X. b | X");
  REQUIRE(g->kind == FormulaKind::Or);
  REQUIRE(g->right->kind == FormulaKind::Mu);
  CHECK(g->right->left->kind == FormulaKind::Or);
}

TEST_CASE("parser: errors carry positions; constants stay in the unit interval") {
  CHECK_THROWS_AS(parse_formula("1.5"), FormulaParseError);
  CHECK_THROWS_AS(parse_formula("pre1(0.5"), FormulaParseError);
  CHECK_THROWS_AS(parse_formula("a | "), FormulaParseError);
  CHECK_THROWS_AS(parse_formula("a (+) b"), FormulaParseError);
  try {
    parse_formula("a || b");
    CHECK(false);
  } catch (const FormulaParseError& e) {
    CHECK(e.position == 3);
  }
}

TEST_CASE("printer round-trips random trees") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    Formula f = testsupport::random_tree(rng, 4);
    Formula reparsed = parse_formula(print_formula(f));
    CHECK(formula_equal(f, reparsed));
  }
}

TEST_CASE("wellformedness report") {
  WellformednessReport a = check_wellformed(parse_formula("pre1(0.5)"));
  CHECK(a.is_closed);
  CHECK(a.is_positive);
  CHECK(a.player_restriction == PlayerRestriction::Player1);

  WellformednessReport b = check_wellformed(parse_formula("pre1(pre2(x))"));
  CHECK(b.player_restriction == PlayerRestriction::None);

  WellformednessReport c = check_wellformed(parse_formula("mu X. (x | pre1(X))"));
  CHECK(c.is_closed);
  CHECK(c.is_positive);
  CHECK(c.player_restriction == PlayerRestriction::Player1);

  CHECK_FALSE(check_wellformed(FormulaNode::var("X")).is_closed);
  CHECK_FALSE(check_wellformed(parse_formula("~pre1(x)")).is_positive);
  CHECK(check_wellformed(parse_formula("~x & 0.5")).player_restriction ==
        PlayerRestriction::Both);
}

TEST_CASE("pre: known stage values") {
  GameStructure fig5 = testsupport::corpus("fig5");
  Valuation u = testsupport::indicator(fig5, "u");
  CHECK(pre_at(fig5, 1, testsupport::state_of(fig5, "s"), u) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(pre_at(fig5, 1, testsupport::state_of(fig5, "t"), u) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-7));

  GameStructure fig1 = testsupport::corpus("fig1");
  Valuation w = testsupport::indicator(fig1, "w");
  CHECK(pre_at(fig1, 1, testsupport::state_of(fig1, "t"), w) ==
        doctest::Approx(4.0 / 9.0).epsilon(1e-7));

  std::mt19937_64 rng(77);
  GameStructure r = random_game(rng);
  Valuation c = Valuation::constant(r.state_count(), 0.3);
  for (int s = 0; s < r.state_count(); ++s) {
    CHECK(pre_at(r, 1, s, c) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(pre_at(r, 2, s, c) == doctest::Approx(0.3).epsilon(1e-9));
  }
}

TEST_CASE("dpre: pure penny matching loses") {
  GameStructure fig5 = testsupport::corpus("fig5");
  Valuation u = testsupport::indicator(fig5, "u");
  CHECK(dpre_at(fig5, 1, testsupport::state_of(fig5, "s"), u) == 0.0);
  CHECK(dpre_at(fig5, 1, testsupport::state_of(fig5, "t"), u) == 0.0);
}

TEST_CASE("pre properties: monotone, nonexpansive, determined; dpre below pre") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    GameStructure g = random_game(rng);
    const int n = g.state_count();
    Valuation k1(std::vector<double>(static_cast<size_t>(n)));
    Valuation k2 = k1;
    for (int s = 0; s < n; ++s) {
      k1[s] = unit(rng);
      k2[s] = std::min(1.0, k1[s] + unit(rng) * 0.4);
    }
    Valuation p1 = pre(g, 1, k1);
    Valuation p2 = pre(g, 1, k2);
    Valuation d1 = dpre(g, 1, k1);
    Valuation flip = k1;
    for (double& v : flip.v) v = 1.0 - v;
    Valuation determined = pre(g, 2, flip);
    for (int s = 0; s < n; ++s) {
      CHECK(p1[s] <= p2[s] + 1e-7);                               // monotone
      CHECK(std::fabs(p1[s] - p2[s]) <= k1.sup_delta(k2) + 1e-7);  // nonexpansive
      CHECK(p1[s] == doctest::Approx(1.0 - determined[s]).epsilon(1e-6));
      CHECK(d1[s] <= p1[s] + 1e-7);  // pure moves are a subset of mixed
    }
  }
}

TEST_CASE("evaluate: constants, reachability on fig5, both semantics") {
  GameStructure fig5 = testsupport::corpus("fig5");
  EvalResult constant = evaluate(fig5, parse_formula("0.3"));
  for (int s = 0; s < fig5.state_count(); ++s) CHECK(constant.value[s] == doctest::Approx(0.3));

  Formula reach = parse_formula("mu X. (u_flag | pre1(X))");
  EvalResult mixed = evaluate(fig5, reach);
  CHECK(mixed.converged);
  CHECK(mixed.value[testsupport::state_of(fig5, "u")] == doctest::Approx(1.0));
  CHECK(mixed.value[testsupport::state_of(fig5, "v")] == doctest::Approx(0.0));
  CHECK(mixed.value[testsupport::state_of(fig5, "s")] == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(mixed.value[testsupport::state_of(fig5, "t")] ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-5));

  EvalOptions pure_opts;
  pure_opts.semantics = Semantics::Pure;
  EvalResult pure = evaluate(fig5, reach, pure_opts);
  CHECK(pure.value[testsupport::state_of(fig5, "s")] == doctest::Approx(0.0));
  CHECK(pure.value[testsupport::state_of(fig5, "t")] == doctest::Approx(0.0));
}

TEST_CASE("evaluate: unbound variables fail; exhausted budgets are flagged") {
  GameStructure fig5 = testsupport::corpus("fig5");
  CHECK_THROWS_AS(evaluate(fig5, FormulaNode::var("X")), std::domain_error);

  // a slowly climbing fixpoint that cannot converge in 5 iterations
  EvalOptions opts;
  opts.max_iters = 5;
  opts.tol = 1e-9;
  EvalResult slow = evaluate(fig5, parse_formula("mu X. (X (+) 0.001)"), opts);
  CHECK_FALSE(slow.converged);
  REQUIRE(slow.fixpoints.size() == 1);
  CHECK(slow.fixpoints[0].iterations == 5);
  CHECK(slow.fixpoints[0].last_delta > 0.0);

  VariableEnvironment env;
  env.bindings.emplace("X", Valuation::constant(fig5.state_count(), 0.25));
  EvalResult open = evaluate(fig5, FormulaNode::var("X"), env, EvalOptions{});
  CHECK(open.value[0] == doctest::Approx(0.25));
}

TEST_CASE("evaluate: double negation cancels and values stay in the unit interval") {
  // 1 - (1 - x) re-rounds once for x below one half, so the strongest
  // true statement is equality within one rounding of the complement
  const double one_rounding = std::ldexp(1.0, -50);
  std::mt19937_64 rng(555);
  GameStructure fig1 = testsupport::corpus("fig1");
  std::vector<std::string> vars = fig1.variables;
  for (int trial = 0; trial < 40; ++trial) {
    Formula f = testsupport::random_formula(rng, vars, 3, false);
    EvalResult base = evaluate(fig1, f);
    EvalResult doubled = evaluate(fig1, FormulaNode::neg(FormulaNode::neg(f)));
    for (int s = 0; s < fig1.state_count(); ++s) {
      CHECK(std::fabs(base.value[s] - doubled.value[s]) <= one_rounding);
      CHECK(base.value[s] >= 0.0);
      CHECK(base.value[s] <= 1.0);
    }
  }
}

TEST_CASE("witness synthesis: base case attains the observation distance exactly") {
  GameStructure fig2 = testsupport::corpus("fig2");
  WitnessReport uv = synthesize_witness(fig2, testsupport::state_of(fig2, "u"),
                                        testsupport::state_of(fig2, "v"), 0, 0.05);
  CHECK(uv.gap == doctest::Approx(1.0));
  CHECK(uv.target_distance == doctest::Approx(1.0));

  WitnessReport st = synthesize_witness(fig2, testsupport::state_of(fig2, "s"),
                                        testsupport::state_of(fig2, "t"), 0, 0.05);
  CHECK(st.gap == doctest::Approx(0.0));
}

TEST_CASE("witness synthesis: fig2 pair reaches the one-step distance") {
  GameStructure fig2 = testsupport::corpus("fig2");
  WitnessReport w = synthesize_witness(fig2, testsupport::state_of(fig2, "t"),
                                       testsupport::state_of(fig2, "s"), 1, 0.05);
  CHECK(w.gap >= 0.45);
  WellformednessReport wf = check_wellformed(w.formula);
  CHECK(wf.is_closed);
  CHECK(wf.is_positive);
  CHECK(wf.player_restriction == PlayerRestriction::Player1);
  // the reported values agree with a fresh evaluation of the formula
  EvalResult direct = evaluate(fig2, w.formula);
  CHECK(direct.value[testsupport::state_of(fig2, "t")] == doctest::Approx(w.value_at_s));
}

TEST_CASE("witness synthesis: zero-distance pairs stay capped (bound direction)") {
  GameStructure fig1 = testsupport::corpus("fig1");
  for (int depth : {0, 1, 2}) {
    WitnessReport w = synthesize_witness(fig1, testsupport::state_of(fig1, "s"),
                                         testsupport::state_of(fig1, "t"), depth, 0.01);
    CHECK(w.gap <= 0.01);
    // soundness: the gap never exceeds the targeted iterate
    CHECK(w.gap <= w.target_distance + 1e-6);
  }
}

TEST_CASE("witness synthesis rejects bad arguments") {
  GameStructure fig2 = testsupport::corpus("fig2");
  CHECK_THROWS_AS(synthesize_witness(fig2, 0, 0, 1, 0.05), std::domain_error);
  CHECK_THROWS_AS(synthesize_witness(fig2, 0, 1, -1, 0.05), std::domain_error);
  CHECK_THROWS_AS(synthesize_witness(fig2, 0, 1, 1, 0.0), std::domain_error);
}
