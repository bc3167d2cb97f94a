#include <doctest.h>

#include "consfree/engine.hpp"
#include "consfree/interpreter.hpp"
#include "test_helpers.hpp"

using namespace consfree;
using namespace consfree::testing;

namespace {

const TrsPtr& not_sys() {
  static TrsPtr s = must_parse_trs(
      "sort bool;\ncons true : bool;\ncons false : bool;\n"
      "fun not : [bool] => bool;\n"
      "rule not(true) -> false;\nrule not(false) -> true;\n");
  return s;
}

}  // namespace

TEST_CASE("match_pattern") {
  const Trs& sig = *not_sys();
  TermPtr pattern = sig.rules()[0].lhs;  // not(true)
  auto hit = match_pattern(pattern, must_parse_term("not(true)", sig));
  REQUIRE(hit.has_value());
  CHECK(hit->empty());
  CHECK_FALSE(match_pattern(pattern, must_parse_term("not(false)", sig)).has_value());

  // variables bind whole subterms; apply_subst(lhs, bindings) recovers the subject
  TrsPtr s2 = must_parse_trs(
      "sort d;\ncons c0 : d;\ncons c1 : [d] => d;\nfun f : [d] => d;\nrule f(c1(x)) -> x;\n");
  TermPtr subject = must_parse_term("f(c1(c1(c0)))", *s2);
  auto m = match_pattern(s2->rules()[0].lhs, subject);
  REQUIRE(m.has_value());
  CHECK(term_eq(m->at("x"), must_parse_term("c1(c0)", *s2)));
  CHECK(alpha_eq(apply_subst(s2->rules()[0].lhs, *m), subject));
  CHECK_FALSE(match_pattern(s2->rules()[0].lhs, must_parse_term("f(c0)", *s2)).has_value());
}

TEST_CASE("match_pattern binds functional-type variables on interpreter states") {
  const QProgram& q = q_program();
  // the rule firing on a successful match: test2(bot, delta, ...) -> ...
  const Rule* test2_bot = nullptr;
  for (const auto& rule : q.trs->rules()) {
    const auto& f = rule.lhs->as_fun_app();
    if (f.symbol->name == "test2" && f.args[0]->kind() == TermKind::FunApp &&
        f.args[0]->as_fun_app().symbol->name == "bot")
      test2_bot = &rule;
  }
  REQUIRE(test2_bot != nullptr);
  TermPtr subject = must_parse_term(
      "test2(bot, \\x:bitstring. bot, Fun(1(rhd), []), \\x:bitstring. bot, Fun(1(rhd), []), "
      "Var(1(rhd)), empty, empty, [])",
      *q.trs);
  auto m = match_pattern(test2_bot->lhs, subject);
  REQUIRE(m.has_value());
  CHECK(alpha_eq(m->at("delta"), must_parse_term("\\x:bitstring. bot", *q.trs)));
  CHECK(term_eq(m->at("r"), must_parse_term("Var(1(rhd))", *q.trs)));
}

TEST_CASE("non-left-linear patterns need alpha-equal subjects") {
  TrsPtr s = must_parse_trs(
      "sort d;\ncons c0 : d;\ncons c1 : [d] => d;\nfun g : [d * d] => d;\n"
      "rule g(x, x) -> x;\n");
  auto yes = match_pattern(s->rules()[0].lhs, must_parse_term("g(c1(c0), c1(c0))", *s));
  CHECK(yes.has_value());
  auto no = match_pattern(s->rules()[0].lhs, must_parse_term("g(c1(c0), c0)", *s));
  CHECK_FALSE(no.has_value());
}

TEST_CASE("pick_redex is leftmost-innermost") {
  const Trs& sig = *not_sys();
  TermPtr t = must_parse_term("not(not(true))", sig);
  auto pos = pick_redex(t, sig);
  REQUIRE(pos.has_value());
  CHECK(*pos == Position{1});  // the inner not(true)

  // no reductions below an abstraction
  TermPtr frozen = Term::abs("x", Type::base("bool"), must_parse_term("not(true)", sig));
  CHECK_FALSE(pick_redex(frozen, sig).has_value());

  // a beta redex at the root once the argument is a normal form
  TermPtr beta = Term::app(Term::abs("x", Type::base("bool"), Term::var("x", Type::base("bool"))),
                           must_parse_term("true", sig));
  auto bpos = pick_redex(beta, sig);
  REQUIRE(bpos.has_value());
  CHECK(bpos->empty());

  // but an argument redex fires first
  TermPtr beta2 = Term::app(Term::abs("x", Type::base("bool"), Term::var("x", Type::base("bool"))),
                            must_parse_term("not(true)", sig));
  auto bpos2 = pick_redex(beta2, sig);
  REQUIRE(bpos2.has_value());
  CHECK(*bpos2 == Position{2});

  // data terms are normal forms
  CHECK_FALSE(pick_redex(must_parse_term("true", sig), sig).has_value());
}

TEST_CASE("a defined application whose arguments match no rule is a normal form") {
  TrsPtr s = must_parse_trs(
      "sort d;\ncons c1 : d;\ncons c2 : d;\nfun f : [d] => d;\nrule f(c1) -> c1;\n");
  CHECK_FALSE(pick_redex(must_parse_term("f(c2)", *s), *s).has_value());
  CHECK_FALSE(rewrite_step(*s, must_parse_term("f(c2)", *s)).has_value());
}

TEST_CASE("rewrite_step") {
  const Trs& sig = *not_sys();
  auto out = rewrite_step(sig, must_parse_term("not(true)", sig));
  REQUIRE(out.has_value());
  CHECK(term_eq(*out, must_parse_term("false", sig)));

  // beta contraction
  TermPtr beta = Term::app(Term::abs("x", Type::base("bool"), Term::var("x", Type::base("bool"))),
                           must_parse_term("true", sig));
  auto bout = rewrite_step(sig, beta);
  REQUIRE(bout.has_value());
  CHECK(term_eq(*bout, must_parse_term("true", sig)));

  CHECK_FALSE(rewrite_step(sig, must_parse_term("false", sig)).has_value());
}

TEST_CASE("normalize reaches the normal form and counts steps") {
  const Trs& sig = *not_sys();
  NormalizeOptions opts;
  opts.fuel = 10;
  NormalizeResult r = normalize(sig, must_parse_term("not(not(true))", sig), opts);
  CHECK(r.status == FinalStatus::NormalForm);
  CHECK(term_eq(r.final_term, must_parse_term("true", sig)));
  CHECK(r.steps == 2);

  // normalizing a data term takes zero steps
  NormalizeResult r0 = normalize(sig, must_parse_term("true", sig), opts);
  CHECK(r0.status == FinalStatus::NormalForm);
  CHECK(r0.steps == 0);
}

TEST_CASE("fuel exhaustion is reported, never a hang") {
  TrsPtr loop = must_parse_trs(
      "sort d;\ncons c : d;\nfun f : [d] => d;\nrule f(x) -> f(x);\n");
  NormalizeOptions opts;
  opts.fuel = 1000;
  NormalizeResult r = normalize(*loop, must_parse_term("f(c)", *loop), opts);
  CHECK(r.status == FinalStatus::FuelExhausted);
  CHECK(r.steps == 1000);
}

TEST_CASE("weak normal forms are sound") {
  Rng rng(5);
  GenParams gp;
  for (uint64_t seed : {11u, 22u, 33u}) {
    gp.seed = seed;
    TrsPtr trs = gen_object_trs(gp);
    for (uint64_t salt = 0; salt < 4; ++salt) {
      TermPtr start = gen_start_term(*trs, gp, salt);
      NormalizeOptions opts;
      opts.fuel = 50'000;
      NormalizeResult r = normalize(*trs, start, opts);
      if (r.status != FinalStatus::NormalForm) continue;
      CHECK_FALSE(pick_redex(r.final_term, *trs).has_value());
      for (const auto& rule : trs->rules()) {
        for (const auto& sub : subterms(r.final_term))
          CHECK_FALSE(match_pattern(rule.lhs, sub).has_value());
      }
    }
  }
}

TEST_CASE("determinism: identical runs give identical traces") {
  const Trs& sig = *not_sys();
  NormalizeOptions opts;
  opts.fuel = 100;
  opts.keep_trace = true;
  NormalizeResult a = normalize(sig, must_parse_term("not(not(not(true)))", sig), opts);
  NormalizeResult b = normalize(sig, must_parse_term("not(not(not(true)))", sig), opts);
  CHECK(a.trace.render() == b.trace.render());
}

TEST_CASE("doubling fuel does not change the normal form of orthogonal systems") {
  GenParams gp;
  for (uint64_t seed : {101u, 202u, 303u}) {
    gp.seed = seed;
    TrsPtr trs = gen_object_trs(gp);
    TermPtr start = gen_start_term(*trs, gp, 1);
    NormalizeOptions opts;
    opts.fuel = 10'000;
    NormalizeResult a = normalize(*trs, start, opts);
    opts.fuel = 20'000;
    NormalizeResult b = normalize(*trs, start, opts);
    if (a.status == FinalStatus::NormalForm && b.status == FinalStatus::NormalForm)
      CHECK(term_eq(a.final_term, b.final_term));
  }
}

TEST_CASE("trace export format") {
  const Trs& sig = *not_sys();
  NormalizeOptions opts;
  opts.fuel = 10;
  opts.keep_trace = true;
  NormalizeResult r = normalize(sig, must_parse_term("not(not(true))", sig), opts);
  std::string text = r.trace.render();
  CHECK(text.find("1  rule=1  pos=/1  term=not(false)") != std::string::npos);
  CHECK(text.find("2  rule=2  pos=/  term=true") != std::string::npos);
}

TEST_CASE("beta steps are recorded in traces") {
  const Trs& sig = *not_sys();
  TermPtr beta = Term::app(Term::abs("x", Type::base("bool"), Term::var("x", Type::base("bool"))),
                           must_parse_term("not(true)", sig));
  NormalizeOptions opts;
  opts.fuel = 10;
  opts.keep_trace = true;
  NormalizeResult r = normalize(sig, beta, opts);
  CHECK(r.trace.steps.size() == 2);
  CHECK(r.trace.steps[0].rule_index == 1);      // argument first
  CHECK(r.trace.steps[1].rule_index == kBetaStep);
  CHECK(r.trace.render().find("rule=beta") != std::string::npos);
}

TEST_CASE("higher-order systems: functional arguments and beta chains") {
  TrsPtr ho = must_parse_trs(
      "sort d;\n"
      "cons c0 : d;\n"
      "cons c1 : [d] => d;\n"
      "fun apply : [(d => d) * d] => d;\n"
      "fun twice : [(d => d) * d] => d;\n"
      "fun peel : [d] => d;\n"
      "rule apply(g, x) -> g x;\n"
      "rule twice(g, x) -> g (g x);\n"
      "rule peel(c1(x)) -> x;\n");

  // rule step, then a beta step
  NormalizeResult r1 = normalize(*ho, must_parse_term("apply(\\y:d. c1(y), c0)", *ho));
  REQUIRE(r1.status == FinalStatus::NormalForm);
  CHECK(print_term(r1.final_term) == "c1(c0)");
  CHECK(r1.steps == 2);

  // nested applications of a bound function value
  NormalizeResult r2 = normalize(*ho, must_parse_term("twice(\\y:d. c1(c1(y)), c0)", *ho));
  REQUIRE(r2.status == FinalStatus::NormalForm);
  CHECK(print_term(r2.final_term) == "c1(c1(c1(c1(c0))))");

  // a defined call inside the abstraction body stays frozen until applied
  TermPtr frozen = must_parse_term("\\y:d. peel(c1(y))", *ho);
  CHECK_FALSE(pick_redex(frozen, *ho).has_value());
  NormalizeResult r3 = normalize(*ho, must_parse_term("apply(\\y:d. peel(c1(y)), c0)", *ho));
  REQUIRE(r3.status == FinalStatus::NormalForm);
  CHECK(print_term(r3.final_term) == "c0");

  // ((\x. \y. x) a) b reduces the inner beta redex first
  TypePtr dd = Type::base("d");
  TermPtr k = Term::abs("x", dd, Term::abs("y", dd, Term::var("x", dd)));
  TermPtr staged =
      Term::app(Term::app(k, must_parse_term("c1(c0)", *ho)), must_parse_term("c0", *ho));
  NormalizeOptions topts;
  topts.keep_trace = true;
  NormalizeResult r4 = normalize(*ho, staged, topts);
  REQUIRE(r4.status == FinalStatus::NormalForm);
  CHECK(print_term(r4.final_term) == "c1(c0)");
  REQUIRE(r4.trace.steps.size() == 2);
  CHECK(r4.trace.steps[0].position == Position{1});
  CHECK(r4.trace.steps[1].position == Position{});

  // functional-type variables match whole function values
  auto m = match_pattern(ho->rules()[1].lhs,
                         must_parse_term("twice(\\y:d. y, c1(c0))", *ho));
  REQUIRE(m.has_value());
  CHECK(m->at("g")->kind() == TermKind::Abs);
}

TEST_CASE("traces replay: each step is the unique permitted step at its position") {
  const QProgram& q = q_program();
  TrsPtr obj = must_parse_trs(
      "sort bool;\ncons true : bool;\ncons false : bool;\nfun not : [bool] => bool;\n"
      "rule not(true) -> false;\nrule not(false) -> true;\n");
  TermPtr goal = build_interpretation_term(obj, must_parse_term("not(true)", *obj));
  NormalizeOptions opts;
  opts.keep_trace = true;
  NormalizeResult r = normalize(*q.trs, goal, opts);
  REQUIRE(r.status == FinalStatus::NormalForm);
  TermPtr prev = r.trace.initial;
  for (const auto& step : r.trace.steps) {
    auto pos = pick_redex(prev, *q.trs);
    REQUIRE(pos.has_value());
    CHECK(*pos == step.position);
    auto next = rewrite_step(*q.trs, prev);
    REQUIRE(next.has_value());
    CHECK(term_eq(*next, step.term));
    prev = step.term;
  }
  CHECK(term_eq(prev, r.final_term));
}

TEST_CASE("B-safety instrumentation throws on violating systems") {
  // not cons-free: the rhs builds new data
  TrsPtr bad = must_parse_trs(
      "sort d;\ncons c0 : d;\ncons c1 : [d] => d;\nfun f : [d] => d;\nrule f(x) -> c1(x);\n");
  TermPtr start = must_parse_term("f(c0)", *bad);
  BSet b = compute_B(start, *bad);
  NormalizeOptions opts;
  opts.fuel = 10;
  opts.b_check = &b;
  CHECK_THROWS_AS(normalize(*bad, start, opts), BSafetyViolation);
}
