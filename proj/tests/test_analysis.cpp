#include <doctest.h>

#include "consfree/analysis.hpp"
#include "consfree/engine.hpp"
#include "consfree/harness.hpp"
#include "consfree/interpreter.hpp"
#include "test_helpers.hpp"

using namespace consfree;
using namespace consfree::testing;

TEST_CASE("cons-free pass and fail cases") {
  // projection passes: no constructor subterm in the rhs
  TrsPtr proj = must_parse_trs("sort d;\ncons c : d;\nfun f : [d] => d;\nrule f(x) -> x;\n");
  CHECK(check_cons_free(*proj).passed);

  // building new data fails
  TrsPtr build = must_parse_trs(
      "sort d;\ncons c : [d] => d;\ncons c0 : d;\nfun f : [d] => d;\nrule f(x) -> c(f(x));\n");
  CheckReport r = check_cons_free(*build);
  CHECK_FALSE(r.passed);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].rule_index == 1);
  CHECK(print_term(r.violations[0].subterm) == "c(f(x))");

  // a constructor subterm copied from the lhs passes
  TrsPtr copy = must_parse_trs(
      "sort d;\ncons c : [d] => d;\ncons c0 : d;\nfun f : [d] => d;\nrule f(c(x)) -> c(x);\n");
  CHECK(check_cons_free(*copy).passed);

  // ground data terms in the rhs pass
  TrsPtr data = must_parse_trs(
      "sort d;\ncons c : [d] => d;\ncons c0 : d;\nfun f : [d] => d;\nrule f(x) -> c(c0);\n");
  CHECK(check_cons_free(*data).passed);
}

TEST_CASE("cons-free requires left-linearity at system level") {
  TrsPtr nl = must_parse_trs(
      "sort d;\ncons c : d;\nfun g : [d * d] => d;\nrule g(x, x) -> x;\n");
  CheckReport r = check_cons_free(*nl);
  CHECK_FALSE(r.passed);
  CHECK(r.violations[0].reason.find("left-linear") != std::string::npos);
}

TEST_CASE("left-linearity per rule") {
  TrsPtr sig = must_parse_trs(
      "sort d;\ncons c : d;\nfun g : [d * d] => d;\nfun h : [d * d] => d;\n"
      "rule g(x, x) -> x;\nrule h(x, y) -> x;\n");
  CHECK_FALSE(check_left_linear(sig->rules()[0]));
  CHECK(check_left_linear(sig->rules()[1]));
  // ground patterns are trivially left-linear
  TrsPtr ground = must_parse_trs(
      "sort d;\ncons c : d;\nfun f : [d * d] => d;\nrule f(c, c) -> c;\n");
  CHECK(check_left_linear(ground->rules()[0]));
}

TEST_CASE("orthogonality") {
  TrsPtr ok = must_parse_trs(
      "sort bool;\ncons true : bool;\ncons false : bool;\nfun not : [bool] => bool;\n"
      "rule not(true) -> false;\nrule not(false) -> true;\n");
  CHECK(check_orthogonal(*ok).passed);

  TrsPtr overlap = must_parse_trs(
      "sort d;\ncons c : d;\nfun f : [d] => d;\nrule f(x) -> x;\nrule f(c) -> c;\n");
  CheckReport r = check_orthogonal(*overlap);
  CHECK_FALSE(r.passed);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].reason.find("rule 2") != std::string::npos);

  // same variable names in different rules must not block unification
  TrsPtr renamed = must_parse_trs(
      "sort d;\ncons c1 : d;\ncons c2 : d;\nfun f : [d * d] => d;\n"
      "rule f(c1, x) -> x;\nrule f(x, c2) -> x;\n");
  CHECK_FALSE(check_orthogonal(*renamed).passed);  // overlap at f(c1, c2)
}

TEST_CASE("unify_patterns") {
  TrsPtr sig = must_parse_trs(
      "sort d;\ncons c0 : d;\ncons c1 : [d] => d;\nfun f : [d * d] => d;\n");
  std::map<std::string, TypePtr> vars{
      {"x", Type::base("d")}, {"y", Type::base("d")}, {"z", Type::base("d")}};
  TermPtr a = must_parse_term("f(c1(x), y)", *sig, &vars);
  TermPtr b = must_parse_term("f(z, c0)", *sig, &vars);
  auto mgu = unify_patterns(a, b);
  REQUIRE(mgu.has_value());
  // a shared variable constrained two ways blocks unification
  TermPtr b2 = must_parse_term("f(y, c0)", *sig, &vars);
  CHECK_FALSE(unify_patterns(a, b2).has_value());
  // apply the unifier to a fixpoint; bindings may chain through variables
  TermPtr ax = apply_subst(apply_subst(a, *mgu), *mgu);
  TermPtr bx = apply_subst(apply_subst(b, *mgu), *mgu);
  CHECK(term_eq(ax, bx));

  TermPtr c = must_parse_term("f(c0, x)", *sig, &vars);
  TermPtr d = must_parse_term("f(c1(y), x)", *sig, &vars);
  CHECK_FALSE(unify_patterns(c, d).has_value());

  // occurs check: x against c1(x)
  TermPtr e = must_parse_term("f(x, c0)", *sig, &vars);
  TermPtr g = must_parse_term("f(c1(x), c0)", *sig, &vars);
  CHECK_FALSE(unify_patterns(e, g).has_value());
}

TEST_CASE("compute_B collects data subterms of start and rhss, closed under subterms") {
  TrsPtr sig = must_parse_trs(
      "sort d;\ncons c0 : d;\ncons c1 : [d] => d;\ncons c2 : [d * d] => d;\n"
      "fun f : [d * d] => d;\nrule f(x, y) -> x;\n");
  TermPtr start = must_parse_term("f(c1(c0), c0)", *sig);
  BSet b = compute_B(start, *sig);
  CHECK(b.contains(must_parse_term("c1(c0)", *sig)));
  CHECK(b.contains(must_parse_term("c0", *sig)));
  CHECK(b.size() == 2);

  // subterm closure on every element
  for (const auto& e : b.elements())
    for (const auto& sub : subterms(e)) CHECK(b.contains(sub));

  // rhs data terms are included
  TrsPtr sig2 = must_parse_trs(
      "sort d;\ncons c0 : d;\ncons c1 : [d] => d;\nfun f : [d] => d;\nrule f(x) -> c1(c1(c0));\n");
  BSet b2 = compute_B(must_parse_term("f(c0)", *sig2), *sig2);
  CHECK(b2.contains(must_parse_term("c1(c1(c0))", *sig2)));
  CHECK(b2.contains(must_parse_term("c1(c0)", *sig2)));
  CHECK(b2.size() == 3);

  // no data anywhere
  TrsPtr sig3 = must_parse_trs("sort d;\ncons c0 : d;\nfun f : [d] => d;\nrule f(x) -> x;\n");
  // start must be ground, and f(c0)'s only data subterm is c0
  BSet b3 = compute_B(must_parse_term("f(c0)", *sig3), *sig3);
  CHECK(b3.size() == 1);
}

TEST_CASE("the interpreter program's B-set contains Var(rhd) and rhd") {
  const QProgram& q = q_program();
  TermPtr some_ground = must_parse_term("bot", *q.trs);
  BSet b = compute_B(some_ground, *q.trs);
  CHECK(b.contains(must_parse_term("Var(rhd)", *q.trs)));
  CHECK(b.contains(must_parse_term("rhd", *q.trs)));
}

TEST_CASE("check_B_safe") {
  TrsPtr sig = must_parse_trs(
      "sort d;\ncons c0 : d;\ncons c1 : [d] => d;\nfun f : [d] => d;\nrule f(x) -> x;\n");
  BSet b;
  b.insert(must_parse_term("c0", *sig));
  CHECK(check_B_safe(must_parse_term("f(c0)", *sig), b));
  CHECK_FALSE(check_B_safe(must_parse_term("c1(c0)", *sig), b));
  std::map<std::string, TypePtr> vars{{"x", Type::base("d")}};
  CHECK(check_B_safe(must_parse_term("f(x)", *sig, &vars), b));  // no constructor subterm
}

TEST_CASE("B-safety is preserved along reductions of cons-free systems") {
  // Lemma-style property, sampled over generated systems.
  for (uint64_t seed : {3u, 14u, 159u, 2653u}) {
    GenParams gp;
    gp.seed = seed;
    TrsPtr trs = gen_object_trs(gp);
    REQUIRE(check_cons_free(*trs).passed);
    for (uint64_t salt = 0; salt < 5; ++salt) {
      TermPtr start = gen_start_term(*trs, gp, salt);
      BSet b = compute_B(start, *trs);
      REQUIRE(check_B_safe(start, b));
      NormalizeOptions opts;
      opts.fuel = 20'000;
      opts.b_check = &b;
      CHECK_NOTHROW(normalize(*trs, start, opts));
    }
  }
}
