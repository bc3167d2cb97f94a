#include <doctest.h>

#include "consfree/analysis.hpp"
#include "consfree/harness.hpp"
#include "test_helpers.hpp"

using namespace consfree;
using namespace consfree::testing;

TEST_CASE("generated systems pass the static checks by construction") {
  GenParams gp;
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    gp.seed = seed;
    TrsPtr trs = gen_object_trs(gp);
    CHECK(check_cons_free(*trs).passed);
    CHECK(check_orthogonal(*trs).passed);
    CHECK(trs->is_first_order());
    CHECK(type_order(*trs) <= 1);
  }
}

TEST_CASE("generation is a pure function of seed and parameters") {
  GenParams gp;
  gp.seed = 77;
  TrsPtr a = gen_object_trs(gp);
  TrsPtr b = gen_object_trs(gp);
  CHECK(print_trs(*a) == print_trs(*b));
  CHECK(print_term(gen_start_term(*a, gp, 3)) == print_term(gen_start_term(*b, gp, 3)));
  gp.seed = 78;
  CHECK(print_trs(*gen_object_trs(gp)) != print_trs(*a));
}

TEST_CASE("generated start terms are basic") {
  GenParams gp;
  for (uint64_t seed : {5u, 6u, 7u}) {
    gp.seed = seed;
    TrsPtr trs = gen_object_trs(gp);
    for (uint64_t salt = 0; salt < 10; ++salt) {
      TermPtr start = gen_start_term(*trs, gp, salt);
      REQUIRE(start->kind() == TermKind::FunApp);
      CHECK(start->as_fun_app().symbol->kind == SymbolKind::Defined);
      for (const auto& arg : start->as_fun_app().args) CHECK(is_data_term(arg));
    }
  }
}

TEST_CASE("small difftest agrees everywhere") {
  DiffParams params;
  params.seed = 7;
  params.cases = 8;
  params.fuel_oracle = 50'000;
  params.fuel_interp = 2'000'000;
  DiffReport report = difftest(params);
  CHECK(report.disagree == 0);
  CHECK(report.b_safety_violations == 0);
  CHECK(report.agree > 0);
  for (const auto& c : report.cases) {
    CHECK(c.error.empty());
    if (c.verdict == Verdict::Agree) CHECK(c.interp_steps >= c.oracle_steps);
  }
}

TEST_CASE("difftest reports are byte-identical across runs") {
  DiffParams params;
  params.seed = 11;
  params.cases = 5;
  params.fuel_oracle = 20'000;
  params.fuel_interp = 500'000;
  params.include_corpus = false;
  DiffReport a = difftest(params);
  DiffReport b = difftest(params);
  CHECK(a.render() == b.render());
  CHECK_FALSE(a.render().empty());
}

TEST_CASE("exhaustion verdicts are inconclusive, not failures") {
  // a looping corpus-free run: hand the difftest a seed whose cases all
  // terminate, then check verdict accounting directly on a looping system
  TrsPtr loop = must_parse_trs(
      "sort d;\ncons c : d;\nfun f : [d] => d;\nrule f(x) -> f(x);\n");
  NormalizeOptions opts;
  opts.fuel = 100;
  CHECK(normalize(*loop, must_parse_term("f(c)", *loop), opts).status ==
        FinalStatus::FuelExhausted);
  InterpretOptions iopts;
  iopts.fuel = 1000;
  CHECK(interpret(loop, must_parse_term("f(c)", *loop), iopts).status ==
        InterpretStatus::FuelExhausted);
}

TEST_CASE("bottom corpus systems oracle to non-data and interpret to bottom") {
  for (const auto& entry : bottom_corpus()) {
    TrsPtr trs = must_parse_trs(entry.source);
    for (const auto& start_text : entry.starts) {
      TermPtr start = must_parse_term(start_text, *trs);
      NormalizeResult oracle = normalize(*trs, start);
      REQUIRE(oracle.status == FinalStatus::NormalForm);
      CHECK_FALSE(oracle.final_term->is_data());
      CHECK(interpret(trs, start).status == InterpretStatus::Bottom);
    }
  }
}
