#include "consfree/harness.hpp"

#include <algorithm>
#include <sstream>

#include "consfree/analysis.hpp"
#include "consfree/engine.hpp"
#include "consfree/syntax.hpp"

namespace consfree {

uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct GenSig {
  std::vector<std::string> sorts;
  std::vector<SymbolPtr> symbols;
  std::vector<SymbolPtr> constructors;
  std::vector<SymbolPtr> defined;

  std::vector<SymbolPtr> constructors_of(const TypePtr& sort) const {
    std::vector<SymbolPtr> out;
    for (const auto& c : constructors)
      if (c->decl.result_type == sort) out.push_back(c);
    return out;
  }
};

TermPtr gen_data_term(const GenSig& sig, const TypePtr& sort, int depth, Rng& rng) {
  auto cands = sig.constructors_of(sort);
  std::vector<SymbolPtr> usable;
  for (const auto& c : cands)
    if (depth > 0 || c->decl.arity() == 0) usable.push_back(c);
  if (usable.empty()) usable = cands;  // every sort has a nullary constructor
  // Lean toward structured constructors while depth remains, so start
  // arguments give recursive rules something to walk.
  std::vector<SymbolPtr> pool;
  for (const auto& c : usable) {
    pool.push_back(c);
    if (depth > 0 && c->decl.arity() > 0) {
      pool.push_back(c);
      pool.push_back(c);
    }
  }
  SymbolPtr c = pool[rng.below(pool.size())];
  std::vector<TermPtr> args;
  for (const auto& ty : c->decl.arg_types) args.push_back(gen_data_term(sig, ty, depth - 1, rng));
  return Term::fun_app(c, std::move(args));
}

// Variables visible in a rule body, tagged by whether they came from below
// the destructured pattern argument (structurally smaller).
struct RhsEnv {
  std::vector<TermPtr> smaller;
  std::vector<TermPtr> whole;
  TermPtr lhs_pattern_arg;  // reusable constructor pattern piece, may be null
};

std::vector<TermPtr> vars_of_sort(const std::vector<TermPtr>& vars, const TypePtr& sort) {
  std::vector<TermPtr> out;
  for (const auto& v : vars)
    if (v->type() == sort) out.push_back(v);
  return out;
}

// A defined call whose arguments are smaller variables, nested consuming
// calls, or (rarely) data terms. `consuming` reports whether anything
// structurally smaller went in; callers drop non-consuming calls, which is
// what keeps most generated systems terminating.
TermPtr gen_call(const GenSig& sig, const RhsEnv& env, const SymbolPtr& f, int depth, Rng& rng,
                 bool& consuming) {
  std::vector<TermPtr> args;
  consuming = false;
  for (const auto& ty : f->decl.arg_types) {
    auto s = vars_of_sort(env.smaller, ty);
    if (!s.empty() && rng.chance(9, 10)) {
      args.push_back(s[rng.below(s.size())]);
      consuming = true;
      continue;
    }
    if (depth > 0 && rng.chance(1, 5)) {
      std::vector<SymbolPtr> callable;
      for (const auto& g : sig.defined)
        if (g->decl.result_type == ty) callable.push_back(g);
      if (!callable.empty()) {
        bool sub = false;
        TermPtr nested =
            gen_call(sig, env, callable[rng.below(callable.size())], depth - 1, rng, sub);
        if (sub) {
          args.push_back(nested);
          consuming = true;
          continue;
        }
      }
    }
    if (!s.empty()) {
      args.push_back(s[rng.below(s.size())]);
      consuming = true;
    } else if (rng.chance(1, 12)) {
      args.push_back(gen_data_term(sig, ty, 1, rng));
    } else {
      auto w = vars_of_sort(env.whole, ty);
      if (!w.empty() && rng.chance(1, 4))
        args.push_back(w[rng.below(w.size())]);
      else
        args.push_back(gen_data_term(sig, ty, 1, rng));
    }
  }
  return Term::fun_app(f, std::move(args));
}

// Builds a rhs of the given sort out of variables, data terms, the verbatim
// lhs pattern piece and consuming defined calls; cons-freeness holds because
// constructors only appear inside ground data terms or the lhs piece.
TermPtr gen_rhs(const GenSig& sig, const RhsEnv& env, const TypePtr& sort, int depth, Rng& rng) {
  auto small = vars_of_sort(env.smaller, sort);
  auto whole = vars_of_sort(env.whole, sort);

  if (env.lhs_pattern_arg && env.lhs_pattern_arg->type() == sort && rng.chance(1, 10))
    return env.lhs_pattern_arg;

  // Calls can only consume structure when the pattern bound smaller
  // variables, so only bother then, and usually do recurse.
  if (depth > 0 && !env.smaller.empty() && rng.chance(18, 20)) {
    std::vector<SymbolPtr> callable;
    for (const auto& f : sig.defined)
      if (f->decl.result_type == sort) callable.push_back(f);
    if (!callable.empty()) {
      bool consuming = false;
      TermPtr call =
          gen_call(sig, env, callable[rng.below(callable.size())], depth - 1, rng, consuming);
      if (consuming) return call;
    }
  }

  std::vector<TermPtr> pool;
  pool.insert(pool.end(), small.begin(), small.end());
  pool.insert(pool.end(), small.begin(), small.end());
  pool.insert(pool.end(), whole.begin(), whole.end());
  if (pool.empty() || rng.chance(1, 4)) return gen_data_term(sig, sort, 1, rng);
  return pool[rng.below(pool.size())];
}

}  // namespace

TrsPtr gen_object_trs(const GenParams& params) {
  Rng rng(params.seed);

  GenSig sig;
  int n_sorts = 1 + static_cast<int>(rng.below(2));
  std::vector<TypePtr> sorts;
  for (int i = 0; i < n_sorts; ++i) {
    std::string name = "s" + std::to_string(i + 1);
    sig.sorts.push_back(name);
    sorts.push_back(Type::base(name));
  }

  int index = 1;
  for (int i = 0; i < n_sorts; ++i) {
    int n_cons = 2 + static_cast<int>(rng.below(params.max_symbols));
    for (int j = 0; j < n_cons; ++j) {
      TypeDecl decl;
      decl.result_type = sorts[i];
      if (j > 0) {
        // The first constructor of each sort is nullary, the second has
        // arguments; the rest are free.
        int arity = j == 1 ? 1 + static_cast<int>(rng.below(params.max_arity))
                           : static_cast<int>(rng.below(params.max_arity + 1));
        for (int k = 0; k < arity; ++k) {
          bool cross = sorts.size() > 1 && rng.chance(1, 2);
          decl.arg_types.push_back(cross ? sorts[rng.below(sorts.size())] : sorts[i]);
        }
      }
      auto c = make_symbol("c" + std::to_string(index), std::move(decl), SymbolKind::Constructor,
                           index);
      ++index;
      sig.symbols.push_back(c);
      sig.constructors.push_back(c);
    }
  }

  int n_defined = 1 + static_cast<int>(rng.below(params.max_symbols));
  for (int i = 0; i < n_defined; ++i) {
    TypeDecl decl;
    decl.result_type = sorts[rng.below(sorts.size())];
    int arity = 1 + static_cast<int>(rng.below(params.max_arity));
    if (i > 0 && rng.chance(1, 6)) arity = 0;  // keep at least one unary-or-wider symbol
    for (int k = 0; k < arity; ++k) decl.arg_types.push_back(sorts[rng.below(sorts.size())]);
    auto f =
        make_symbol("f" + std::to_string(i + 1), std::move(decl), SymbolKind::Defined, index);
    ++index;
    sig.symbols.push_back(f);
    sig.defined.push_back(f);
  }

  std::vector<std::pair<TermPtr, TermPtr>> rules;
  int var_counter = 0;
  auto fresh_var = [&](const TypePtr& ty) {
    return Term::var("x" + std::to_string(++var_counter), ty);
  };

  for (size_t fi = 0; fi < sig.defined.size(); ++fi) {
    const SymbolPtr& f = sig.defined[fi];
    if (static_cast<int>(rules.size()) >= params.max_rules) break;
    var_counter = 0;

    if (f->decl.arity() == 0) {
      if (rng.chance(3, 4)) {
        RhsEnv env;
        TermPtr rhs = gen_rhs(sig, env, f->decl.result_type, 1, rng);
        rules.emplace_back(Term::fun_app(f, {}), rhs);
      }
      continue;
    }

    // Split on the constructor head of the first argument, or emit a single
    // catch-all rule; mixing the two would overlap.
    bool catch_all = rng.chance(1, 5);
    if (catch_all) {
      std::vector<TermPtr> args;
      RhsEnv env;
      for (const auto& ty : f->decl.arg_types) {
        TermPtr v = fresh_var(ty);
        args.push_back(v);
        env.whole.push_back(v);
      }
      // Catch-all bodies never call defined symbols: every argument would be
      // passed whole, which loops too easily.
      auto usable = vars_of_sort(env.whole, f->decl.result_type);
      TermPtr rhs = !usable.empty() && rng.chance(2, 3)
                        ? usable[rng.below(usable.size())]
                        : gen_data_term(sig, f->decl.result_type, 1, rng);
      rules.emplace_back(Term::fun_app(f, std::move(args)), rhs);
      continue;
    }

    auto heads = sig.constructors_of(f->decl.arg_types[0]);
    for (const auto& c : heads) {
      if (static_cast<int>(rules.size()) >= params.max_rules) break;
      if (!rng.chance(7, 8)) continue;  // leave an occasional head uncovered
      var_counter = 0;
      RhsEnv env;
      std::vector<TermPtr> pattern_args;
      std::vector<TermPtr> c_args;
      for (const auto& ty : c->decl.arg_types) {
        TermPtr v = fresh_var(ty);
        c_args.push_back(v);
        env.smaller.push_back(v);
      }
      TermPtr pat = Term::fun_app(c, std::move(c_args));
      env.lhs_pattern_arg = pat;
      pattern_args.push_back(pat);
      for (size_t k = 1; k < f->decl.arity(); ++k) {
        TermPtr v = fresh_var(f->decl.arg_types[k]);
        pattern_args.push_back(v);
        env.whole.push_back(v);
      }
      TermPtr rhs = gen_rhs(sig, env, f->decl.result_type, 2, rng);
      rules.emplace_back(Term::fun_app(f, std::move(pattern_args)), rhs);
    }
  }

  return std::make_shared<Trs>(sig.sorts, sig.symbols, std::move(rules));
}

TermPtr gen_start_term(const Trs& trs, const GenParams& params, uint64_t salt) {
  Rng rng(params.seed ^ (salt * 0xA24BAED4963EE407ULL + 1));
  GenSig sig;
  std::vector<SymbolPtr> defined;
  for (const auto& sym : trs.symbols()) {
    sig.symbols.push_back(sym);
    if (sym->kind == SymbolKind::Constructor)
      sig.constructors.push_back(sym);
    else
      defined.push_back(sym);
  }
  if (defined.empty()) throw TrsError("no defined symbol to build a start term from");
  std::vector<SymbolPtr> with_rules;
  for (const auto& f : defined)
    if (!trs.rules_for(f.get()).empty()) with_rules.push_back(f);
  SymbolPtr f = (!with_rules.empty() && rng.chance(9, 10))
                    ? with_rules[rng.below(with_rules.size())]
                    : defined[rng.below(defined.size())];
  std::vector<TermPtr> args;
  for (const auto& ty : f->decl.arg_types)
    args.push_back(gen_data_term(sig, ty, params.max_depth, rng));
  return Term::fun_app(f, std::move(args));
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Agree: return "Agree";
    case Verdict::Disagree: return "Disagree";
    case Verdict::BothFuelExhausted: return "BothFuelExhausted";
    case Verdict::OracleOnlyExhausted: return "OracleOnlyExhausted";
    case Verdict::InterpOnlyExhausted: return "InterpOnlyExhausted";
  }
  return "?";
}

namespace {

void run_case(DiffCase& c, const DiffParams& params, long long& b_violations) {
  try {
    NormalizeOptions oracle_opts;
    oracle_opts.fuel = params.fuel_oracle;
    BSet b;
    if (params.assert_b_safe) {
      b = compute_B(c.start, *c.trs);
      oracle_opts.b_check = &b;
    }
    NormalizeResult oracle = normalize(*c.trs, c.start, oracle_opts);
    c.oracle_steps = oracle.steps;
    if (oracle.status == FinalStatus::FuelExhausted) {
      c.oracle_exhausted = true;
    } else {
      c.oracle_nf = oracle.final_term;
      c.oracle_data = oracle.final_term->is_data();
    }

    InterpretOptions iopts;
    iopts.fuel = params.fuel_interp;
    iopts.assert_b_safe = params.assert_b_safe;
    InterpretResult interp = interpret(c.trs, c.start, iopts);
    c.interp_status = interp.status;
    c.interp_data = interp.data;
    c.interp_steps = interp.steps;

    bool interp_exhausted = interp.status == InterpretStatus::FuelExhausted;
    if (c.oracle_exhausted && interp_exhausted)
      c.verdict = Verdict::BothFuelExhausted;
    else if (c.oracle_exhausted)
      c.verdict = Verdict::OracleOnlyExhausted;
    else if (interp_exhausted)
      c.verdict = Verdict::InterpOnlyExhausted;
    else if (c.oracle_data)
      c.verdict = (interp.status == InterpretStatus::Data && term_eq(interp.data, c.oracle_nf))
                      ? Verdict::Agree
                      : Verdict::Disagree;
    else
      c.verdict =
          interp.status == InterpretStatus::Bottom ? Verdict::Agree : Verdict::Disagree;
  } catch (const BSafetyViolation& e) {
    ++b_violations;
    c.error = e.what();
    c.verdict = Verdict::Disagree;
  } catch (const std::exception& e) {
    c.error = e.what();
    c.verdict = Verdict::Disagree;
  }
}

}  // namespace

DiffReport difftest(const DiffParams& params) {
  DiffReport report;
  report.params = params;

  std::vector<DiffCase> cases;
  if (params.include_corpus) {
    for (const auto* corpus : {&golden_corpus(), &bottom_corpus()}) {
      for (const auto& entry : *corpus) {
        TrsParse parsed = parse_trs(entry.source, "corpus/" + entry.name);
        if (!parsed.ok()) throw TrsError("corpus system '" + entry.name + "' does not parse");
        int i = 0;
        for (const auto& start_text : entry.starts) {
          ++i;
          TermParse t = parse_term(start_text, *parsed.trs, entry.name);
          if (!t.ok()) throw TrsError("corpus start term does not parse: " + start_text);
          DiffCase c;
          c.id = "corpus/" + entry.name + "#" + std::to_string(i);
          c.trs = parsed.trs;
          c.start = t.term;
          cases.push_back(std::move(c));
        }
      }
    }
  }
  for (int i = 0; i < params.cases; ++i) {
    GenParams gp = params.gen;
    gp.seed = Rng(params.seed + 0x51ED2701ULL * (i + 1)).next();
    DiffCase c;
    c.id = "gen/" + std::to_string(i + 1);
    c.trs = gen_object_trs(gp);
    c.start = gen_start_term(*c.trs, gp, params.seed + i);
    cases.push_back(std::move(c));
  }

  // Force the shared interpreter program to exist before the parallel loop.
  q_program();

  std::vector<long long> violations(cases.size(), 0);
  long long n_cases = static_cast<long long>(cases.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n_cases; ++i) run_case(cases[i], params, violations[i]);

  for (size_t i = 0; i < cases.size(); ++i) {
    report.b_safety_violations += violations[i];
    switch (cases[i].verdict) {
      case Verdict::Agree: ++report.agree; break;
      case Verdict::Disagree: ++report.disagree; break;
      default: ++report.inconclusive; break;
    }
  }
  report.cases = std::move(cases);
  return report;
}

std::string DiffReport::render() const {
  std::ostringstream os;
  os << "consfree difftest report\n";
  os << "seed=" << params.seed << " cases=" << params.cases
     << " fuel-oracle=" << params.fuel_oracle << " fuel-interp=" << params.fuel_interp
     << " bsafe=" << (params.assert_b_safe ? "on" : "off")
     << " corpus=" << (params.include_corpus ? "on" : "off") << "\n";
  os << "note: agreement is sampled on normal-form instances only; fuel-capped runs are "
        "inconclusive\n\n";
  for (const auto& c : cases) {
    os << "case " << c.id << " start=" << print_term(c.start);
    os << " oracle=";
    if (c.oracle_exhausted)
      os << "exhausted";
    else if (c.oracle_data)
      os << "data " << print_term(c.oracle_nf);
    else
      os << "nondata " << print_term(c.oracle_nf);
    os << " interp=";
    switch (c.interp_status) {
      case InterpretStatus::Data: os << "data " << print_term(c.interp_data); break;
      case InterpretStatus::Bottom: os << "bot"; break;
      case InterpretStatus::FuelExhausted: os << "exhausted"; break;
    }
    os << " steps=" << c.oracle_steps << "/" << c.interp_steps;
    os << " verdict=" << verdict_name(c.verdict);
    if (!c.error.empty()) os << " error=" << c.error;
    os << "\n";
    if (c.verdict == Verdict::Disagree) {
      os << "  system:\n";
      std::istringstream src(print_trs(*c.trs));
      std::string line;
      while (std::getline(src, line)) os << "    " << line << "\n";
      NormalizeOptions topts;
      topts.fuel = std::min<long long>(params.fuel_oracle, 2000);
      topts.keep_trace = true;
      topts.trace_cap = 500;
      try {
        NormalizeResult rerun = normalize(*c.trs, c.start, topts);
        os << "  oracle trace (first steps):\n";
        std::istringstream tr(rerun.trace.render());
        while (std::getline(tr, line)) os << "    " << line << "\n";
      } catch (const std::exception& e) {
        os << "  oracle trace unavailable: " << e.what() << "\n";
      }
    }
  }
  os << "\nsummary agree=" << agree << " disagree=" << disagree
     << " inconclusive=" << inconclusive << " bsafe-violations=" << b_safety_violations << "\n";
  return os.str();
}

const std::vector<CorpusEntry>& golden_corpus() {
  static const std::vector<CorpusEntry> corpus = {
      {"bool-ops",
       "sort bool;\n"
       "cons true : bool;\n"
       "cons false : bool;\n"
       "fun not : [bool] => bool;\n"
       "fun and : [bool * bool] => bool;\n"
       "rule not(true) -> false;\n"
       "rule not(false) -> true;\n"
       "rule and(true, y) -> y;\n"
       "rule and(false, y) -> false;\n",
       {"not(true)", "not(false)", "and(true, false)", "and(false, true)", "and(true, true)"}},
      {"bits-eq",
       "sort bits;\nsort bool;\n"
       "cons nil : bits;\n"
       "cons o : [bits] => bits;\n"
       "cons i : [bits] => bits;\n"
       "cons true : bool;\n"
       "cons false : bool;\n"
       "fun eq : [bits * bits] => bool;\n"
       "rule eq(nil, nil) -> true;\n"
       "rule eq(nil, o(y)) -> false;\n"
       "rule eq(nil, i(y)) -> false;\n"
       "rule eq(o(x), nil) -> false;\n"
       "rule eq(i(x), nil) -> false;\n"
       "rule eq(o(x), o(y)) -> eq(x, y);\n"
       "rule eq(i(x), i(y)) -> eq(x, y);\n"
       "rule eq(o(x), i(y)) -> false;\n"
       "rule eq(i(x), o(y)) -> false;\n",
       {"eq(i(o(nil)), i(o(nil)))", "eq(o(nil), i(nil))", "eq(nil, nil)",
        "eq(i(i(nil)), i(nil))", "eq(i(o(i(o(i(nil))))), i(o(i(o(i(nil))))))",
        "eq(o(o(i(i(o(nil))))), o(o(i(o(o(nil))))))"}},
      {"list-member",
       "sort elem;\nsort list;\nsort bool;\n"
       "cons a : elem;\n"
       "cons b : elem;\n"
       "cons c : elem;\n"
       "cons lnil : list;\n"
       "cons lcons : [elem * list] => list;\n"
       "cons true : bool;\n"
       "cons false : bool;\n"
       "fun member : [elem * list] => bool;\n"
       "fun step : [bool * elem * list] => bool;\n"
       "fun eqe : [elem * elem] => bool;\n"
       "rule member(e, lnil) -> false;\n"
       "rule member(e, lcons(x, xs)) -> step(eqe(e, x), e, xs);\n"
       "rule step(true, e, xs) -> true;\n"
       "rule step(false, e, xs) -> member(e, xs);\n"
       "rule eqe(a, a) -> true;\n"
       "rule eqe(a, b) -> false;\n"
       "rule eqe(a, c) -> false;\n"
       "rule eqe(b, a) -> false;\n"
       "rule eqe(b, b) -> true;\n"
       "rule eqe(b, c) -> false;\n"
       "rule eqe(c, a) -> false;\n"
       "rule eqe(c, b) -> false;\n"
       "rule eqe(c, c) -> true;\n",
       {"member(b, lcons(a, lcons(b, lnil)))", "member(c, lcons(a, lcons(b, lnil)))",
        "member(a, lcons(a, lnil))", "member(a, lnil)",
        "member(c, lcons(a, lcons(b, lcons(a, lcons(b, lcons(c, lnil))))))",
        "member(c, lcons(a, lcons(b, lcons(a, lcons(b, lcons(a, lnil))))))"}},
      {"parity",
       "sort bits;\nsort bool;\n"
       "cons nil : bits;\n"
       "cons o : [bits] => bits;\n"
       "cons i : [bits] => bits;\n"
       "cons true : bool;\n"
       "cons false : bool;\n"
       "fun par : [bits] => bool;\n"
       "fun flip : [bool] => bool;\n"
       "rule par(nil) -> true;\n"
       "rule par(o(x)) -> par(x);\n"
       "rule par(i(x)) -> flip(par(x));\n"
       "rule flip(true) -> false;\n"
       "rule flip(false) -> true;\n",
       {"par(i(o(i(nil))))", "par(nil)", "par(i(i(i(nil))))", "par(o(o(nil)))",
        "par(i(i(o(i(o(i(nil)))))))"}},
      {"const-fn",
       "sort d;\nsort r;\n"
       "cons c0 : d;\n"
       "cons c1 : [d] => d;\n"
       "cons k : r;\n"
       "fun konst : [d] => r;\n"
       "fun ignore2 : [d * d] => r;\n"
       "rule konst(x) -> k;\n"
       "rule ignore2(x, y) -> k;\n",
       {"konst(c1(c1(c0)))", "ignore2(c0, c1(c0))", "konst(c0)"}},
  };
  return corpus;
}

const std::vector<CorpusEntry>& bottom_corpus() {
  static const std::vector<CorpusEntry> corpus = {
      {"stuck-ruleless",
       "sort d;\n"
       "cons c : d;\n"
       "fun f : [d] => d;\n"
       "fun g : [d] => d;\n"
       "rule f(c) -> g(c);\n",
       {"f(c)"}},
      {"stuck-mismatch",
       "sort d;\n"
       "cons c1 : d;\n"
       "cons c2 : d;\n"
       "fun f : [d] => d;\n"
       "rule f(c1) -> c1;\n",
       {"f(c2)"}},
      {"stuck-in-rhs",
       "sort d;\n"
       "cons c1 : d;\n"
       "cons c2 : d;\n"
       "fun h : [d] => d;\n"
       "fun f : [d] => d;\n"
       "rule h(x) -> f(c2);\n"
       "rule f(c1) -> c1;\n",
       {"h(c1)"}},
      {"stuck-binary",
       "sort d;\n"
       "cons c1 : d;\n"
       "cons c2 : d;\n"
       "fun f2 : [d * d] => d;\n"
       "rule f2(c1, y) -> y;\n",
       {"f2(c2, c1)"}},
      {"stuck-nested",
       "sort d;\n"
       "cons c1 : d;\n"
       "cons c2 : d;\n"
       "fun top : [d] => d;\n"
       "fun mid : [d] => d;\n"
       "fun leaf : [d] => d;\n"
       "rule top(c1) -> mid(leaf(c1));\n"
       "rule mid(c2) -> c2;\n",
       {"top(c1)"}},
  };
  return corpus;
}

}  // namespace consfree
