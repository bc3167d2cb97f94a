// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run through ctest or directly; timings go to the same lines.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "consfree/analysis.hpp"
#include "consfree/encoding.hpp"
#include "consfree/engine.hpp"
#include "consfree/harness.hpp"
#include "consfree/interpreter.hpp"
#include "consfree/syntax.hpp"

using namespace consfree;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
  printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
         detail.empty() ? "" : " -- ", detail.c_str());
  fflush(stdout);
  if (!ok) ++g_failures;
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& message) {
    if (!cond) {
      ok = false;
      if (!detail.str().empty()) detail << "; ";
      detail << message;
    }
  }
};

std::string fmt_seconds(double s) {
  char buf[32];
  snprintf(buf, sizeof(buf), "%.2fs", s);
  return buf;
}

TermPtr must_have_term(const TrsPtr& trs, const std::string& text, Check& c) {
  TermParse parsed = parse_term(text, *trs);
  c.expect(parsed.ok(), "start term '" + text + "' failed to parse");
  return parsed.term;
}

// ---------------------------------------------------------------------------

// Criterion 1: the exported interpreter file passes every static check and
// has type order 2, in under a second.
void criterion_1() {
  Check c;
  auto start = Clock::now();
  std::string exported = print_trs(*q_program().trs);
  TrsParse back = parse_trs(exported, "q.trs");
  c.expect(back.ok(), "exported file does not parse");
  if (back.ok()) {
    c.expect(check_cons_free(*back.trs).passed, "cons-free check failed");
    bool ll = true;
    for (const auto& rule : back.trs->rules()) ll = ll && check_left_linear(rule);
    c.expect(ll, "left-linearity failed");
    c.expect(check_orthogonal(*back.trs).passed, "orthogonality failed");
    c.expect(type_order(*back.trs) == 2, "type order is not 2");
  }
  double elapsed = seconds_since(start);
  c.expect(elapsed < 1.0, "took " + fmt_seconds(elapsed) + " (budget 1s)");
  report(1, "interpreter self-checks (cons-free, left-linear, orthogonal, order 2)", c.ok,
         c.ok ? fmt_seconds(elapsed) : c.detail.str());
}

DiffParams criterion_2_params(bool assert_b_safe) {
  DiffParams params;
  params.seed = 42;
  params.cases = 100;
  params.fuel_oracle = 100'000;
  params.fuel_interp = 10'000'000;
  params.include_corpus = true;
  params.assert_b_safe = assert_b_safe;
  return params;
}

std::string g_criterion2_report;

void criterion_2() {
  Check c;
  auto start = Clock::now();
  DiffReport report2 = difftest(criterion_2_params(false));
  double elapsed = seconds_since(start);
  g_criterion2_report = report2.render();
  c.expect(report2.disagree == 0,
           "disagreements: " + std::to_string(report2.disagree));
  c.expect(report2.inconclusive <= 10,
           "inconclusive verdicts: " + std::to_string(report2.inconclusive) + " (budget 10)");
  c.expect(elapsed < 300.0, "took " + fmt_seconds(elapsed) + " (budget 300s)");
  report(2, "simulation equivalence over corpus plus 100 seeded systems", c.ok,
         c.ok ? ("agree=" + std::to_string(report2.agree) +
                 " inconclusive=" + std::to_string(report2.inconclusive) + " " +
                 fmt_seconds(elapsed))
               : c.detail.str());
}

// All bitstring terms of length <= 6, including leading zeros: 127 values.
std::vector<TermPtr> all_bitstrings(const InterpreterSignature& sig, int max_len) {
  std::vector<TermPtr> values = {Term::fun_app(sig.bit_end, {})};
  size_t lo = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t hi = values.size();
    for (size_t i = lo; i < hi; ++i) {
      values.push_back(Term::fun_app(sig.bit0, {values[i]}));
      values.push_back(Term::fun_app(sig.bit1, {values[i]}));
    }
    lo = hi;
  }
  return values;
}

std::string run_eqbits_sweep(bool b_check_on, long long* violations_out) {
  const QProgram& q = q_program();
  SymbolPtr eqbits = q.trs->find_symbol("eqbits");
  std::vector<TermPtr> values = all_bitstrings(q.sig, 6);
  std::ostringstream out;
  long long violations = 0;
  for (const auto& u : values) {
    for (const auto& v : values) {
      TermPtr goal = Term::fun_app(eqbits, {u, v});
      NormalizeOptions opts;
      opts.fuel = 10'000;
      BSet b;
      if (b_check_on) {
        b = compute_B(goal, *q.trs);
        opts.b_check = &b;
      }
      std::string got;
      try {
        NormalizeResult r = normalize(*q.trs, goal, opts);
        got = r.status == FinalStatus::NormalForm ? print_term(r.final_term) : "exhausted";
      } catch (const BSafetyViolation&) {
        ++violations;
        got = "violation";
      }
      out << print_term(u) << " " << print_term(v) << " " << got << " "
          << (term_eq(u, v) ? "true" : "false") << "\n";
    }
  }
  if (violations_out) *violations_out = violations;
  return out.str();
}

std::string g_criterion3_report;

void criterion_3() {
  Check c;
  auto start = Clock::now();
  const QProgram& q = q_program();
  std::vector<TermPtr> values = all_bitstrings(q.sig, 6);
  c.expect(values.size() == 127, "expected 127 bitstrings, got " +
                                     std::to_string(values.size()));
  g_criterion3_report = run_eqbits_sweep(false, nullptr);
  int cases = 0, wrong = 0;
  std::istringstream lines(g_criterion3_report);
  std::string line;
  while (std::getline(lines, line)) {
    ++cases;
    auto mid = line.rfind(' ');
    std::string expect = line.substr(mid + 1);
    auto prev = line.rfind(' ', mid - 1);
    std::string got = line.substr(prev + 1, mid - prev - 1);
    if (got != expect) ++wrong;
  }
  double elapsed = seconds_since(start);
  c.expect(cases == 16129, "expected 16129 pairs, got " + std::to_string(cases));
  c.expect(wrong == 0, std::to_string(wrong) + " disagreements with meta-level equality");
  c.expect(elapsed < 30.0, "took " + fmt_seconds(elapsed) + " (budget 30s)");
  report(3, "eqbits agrees with meta-level equality on all 16129 pairs", c.ok,
         c.ok ? fmt_seconds(elapsed) : c.detail.str());
}

void criterion_4() {
  Check c;
  auto start = Clock::now();
  // Every corpus run, object level and interpreter level, under the
  // B-safety assertion.
  try {
    for (const auto* corpus : {&golden_corpus(), &bottom_corpus()}) {
      for (const auto& entry : *corpus) {
        TrsParse parsed = parse_trs(entry.source, entry.name);
        c.expect(parsed.ok(), "corpus '" + entry.name + "' failed to parse");
        if (!parsed.ok()) continue;
        for (const auto& start_text : entry.starts) {
          TermPtr term = must_have_term(parsed.trs, start_text, c);
          if (!term) continue;
          BSet b = compute_B(term, *parsed.trs);
          NormalizeOptions opts;
          opts.b_check = &b;
          normalize(*parsed.trs, term, opts);
          InterpretOptions iopts;
          iopts.assert_b_safe = true;
          interpret(parsed.trs, term, iopts);
        }
      }
    }
  } catch (const BSafetyViolation& e) {
    c.expect(false, e.what());
  }
  // Criterion 2 and 3 workloads re-run with the assertion armed.
  DiffReport instrumented = difftest(criterion_2_params(true));
  c.expect(instrumented.b_safety_violations == 0,
           std::to_string(instrumented.b_safety_violations) + " violations in difftest");
  c.expect(instrumented.disagree == 0, "instrumented difftest disagreed");
  long long eqbits_violations = 0;
  run_eqbits_sweep(true, &eqbits_violations);
  c.expect(eqbits_violations == 0,
           std::to_string(eqbits_violations) + " violations in the eqbits sweep");
  report(4, "B-safety holds at every step of every instrumented run", c.ok,
         c.ok ? fmt_seconds(seconds_since(start)) : c.detail.str());
}

void criterion_5() {
  Check c;
  auto start = Clock::now();
  const InterpreterSignature sig = InterpreterSignature::standalone();

  // 10,000 random first-order ground terms across 2,000 generated systems.
  int terms_done = 0;
  Rng seeder(0xC0FFEE);
  while (terms_done < 10'000 && c.ok) {
    GenParams gp;
    gp.seed = seeder.next();
    TrsPtr obj = gen_object_trs(gp);
    SymbolTable table(obj);
    std::map<std::string, std::string> enc_by_term;
    std::map<std::string, std::string> term_by_enc;
    for (uint64_t salt = 0; salt < 5 && terms_done < 10'000; ++salt, ++terms_done) {
      TermPtr t = gen_start_term(*obj, gp, salt);
      TermPtr e = encode_term(sig, t, table);
      DecodeResult back = decode_term(sig, e, table);
      if (back.is_bottom || !term_eq(back.term, t)) {
        c.expect(false, "decode(encode(t)) != t for " + print_term(t));
        break;
      }
      std::string ts = print_term(t), es = print_term(e);
      auto [it1, fresh1] = enc_by_term.emplace(ts, es);
      if (!fresh1 && it1->second != es) c.expect(false, "same term, two encodings: " + ts);
      auto [it2, fresh2] = term_by_enc.emplace(es, ts);
      if (!fresh2 && it2->second != ts) c.expect(false, "encoding collision: " + es);
    }
  }
  c.expect(terms_done == 10'000, "only " + std::to_string(terms_done) + " terms checked");

  // A larger same-signature pool for the injectivity half.
  GenParams gp;
  gp.seed = 0xABCDEF;
  gp.max_depth = 4;
  TrsPtr obj = gen_object_trs(gp);
  SymbolTable table(obj);
  std::map<std::string, std::string> enc_to_term;
  for (uint64_t salt = 0; salt < 3000; ++salt) {
    TermPtr t = gen_start_term(*obj, gp, salt);
    std::string es = print_term(encode_term(sig, t, table));
    auto [it, fresh] = enc_to_term.emplace(es, print_term(t));
    if (!fresh && it->second != print_term(t))
      c.expect(false, "encoding collision in the fixed signature pool");
  }

  for (long long i = 1; i <= (1 << 16); ++i) {
    if (bit_decode(sig, bit_encode(sig, i)) != i) {
      c.expect(false, "bit round trip failed at " + std::to_string(i));
      break;
    }
  }
  double elapsed = seconds_since(start);
  c.expect(elapsed < 10.0, "took " + fmt_seconds(elapsed) + " (budget 10s)");
  report(5, "encoding laws (round trip, injectivity, bitstrings to 2^16)", c.ok,
         c.ok ? fmt_seconds(elapsed) : c.detail.str());
}

void criterion_6() {
  Check c;
  for (const auto& entry : bottom_corpus()) {
    TrsParse parsed = parse_trs(entry.source, entry.name);
    c.expect(parsed.ok(), "'" + entry.name + "' failed to parse");
    if (!parsed.ok()) continue;
    for (const auto& start_text : entry.starts) {
      TermPtr term = must_have_term(parsed.trs, start_text, c);
      if (!term) continue;
      NormalizeResult oracle = normalize(*parsed.trs, term);
      c.expect(oracle.status == FinalStatus::NormalForm,
               entry.name + ": oracle did not reach a normal form");
      if (oracle.status == FinalStatus::NormalForm)
        c.expect(!oracle.final_term->is_data(),
                 entry.name + ": oracle normal form is a data term");
      InterpretResult r = interpret(parsed.trs, term);
      c.expect(r.status == InterpretStatus::Bottom,
               entry.name + ": interpreter did not answer bottom");
    }
  }
  report(6, "non-data normal forms interpret to bottom on the regression set", c.ok,
         c.detail.str());
}

void criterion_7() {
  Check c;
  auto start = Clock::now();
  DiffReport again = difftest(criterion_2_params(false));
  c.expect(again.render() == g_criterion2_report, "difftest reports differ between runs");
  std::string eqbits_again = run_eqbits_sweep(false, nullptr);
  c.expect(eqbits_again == g_criterion3_report, "eqbits reports differ between runs");
  report(7, "identical seeds reproduce byte-identical reports", c.ok,
         c.ok ? fmt_seconds(seconds_since(start)) : c.detail.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  if (g_failures == 0) {
    printf("acceptance: all 7 criteria passed\n");
    return 0;
  }
  printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
