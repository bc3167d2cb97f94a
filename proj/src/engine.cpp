#include "consfree/engine.hpp"

#include <atomic>
#include <sstream>

#include "consfree/syntax.hpp"

namespace consfree {

std::string print_position(const Position& pos) {
  if (pos.empty()) return "/";
  std::string out;
  for (int i : pos) {
    out += "/";
    out += std::to_string(i);
  }
  return out;
}

namespace {

// Per-run scratch marks stored in term nodes: (stamp << 4) | flags.
// Marks are only trusted when the stamp matches the current run, so shared
// subterms can participate in concurrent runs over different systems.
constexpr uint64_t kWnfKnown = 1;
constexpr uint64_t kWnfTrue = 2;
constexpr uint64_t kSafeKnown = 4;
constexpr uint64_t kSafeTrue = 8;

std::atomic<uint64_t> g_run_stamps{1};

class Marks {
 public:
  Marks() : stamp_(g_run_stamps.fetch_add(1)) {}

  uint64_t get(const Term& t) const {
    uint64_t m = t.mark.load(std::memory_order_relaxed);
    return (m >> 4) == stamp_ ? (m & 15) : 0;
  }
  void add(const Term& t, uint64_t flags) const {
    uint64_t bits = get(t) | flags;
    t.mark.store((stamp_ << 4) | bits, std::memory_order_relaxed);
  }

 private:
  uint64_t stamp_;
};

struct Binding {
  const std::string* name;
  TermPtr value;
};

struct RedexInfo {
  Position position;
  const Rule* rule = nullptr;  // null marks a beta redex
  std::vector<Binding> bindings;
};

bool match_rec(const TermPtr& pattern, const TermPtr& subject, std::vector<Binding>& bindings) {
  switch (pattern->kind()) {
    case TermKind::Var: {
      if (subject->type() != pattern->type()) return false;
      const std::string& name = pattern->as_var().name;
      for (const auto& b : bindings)
        if (*b.name == name) return alpha_eq(b.value, subject);
      bindings.push_back(Binding{&name, subject});
      return true;
    }
    case TermKind::FunApp: {
      if (subject->kind() != TermKind::FunApp) return false;
      const auto& fp = pattern->as_fun_app();
      const auto& fs = subject->as_fun_app();
      if (fp.symbol != fs.symbol) return false;
      for (size_t i = 0; i < fp.args.size(); ++i)
        if (!match_rec(fp.args[i], fs.args[i], bindings)) return false;
      return true;
    }
    default:
      // Patterns never contain applications or abstractions.
      return false;
  }
}

class Run {
 public:
  explicit Run(const Trs& trs) : trs_(trs) {}

  // Leftmost-innermost permitted redex within t; path holds the position of
  // t itself. Marks weak normal forms as they are discovered.
  bool find(const TermPtr& t, Position& path, RedexInfo& out) {
    if (marks_.get(*t) & kWnfKnown) return false;  // only WNF results are cached
    switch (t->kind()) {
      case TermKind::Var:
      case TermKind::Abs:
        // No reductions below an abstraction.
        marks_.add(*t, kWnfKnown | kWnfTrue);
        return false;
      case TermKind::App: {
        const auto& a = t->as_app();
        path.push_back(1);
        if (find(a.fun, path, out)) return true;
        path.back() = 2;
        if (find(a.arg, path, out)) return true;
        path.pop_back();
        if (a.fun->kind() == TermKind::Abs) {
          out.position = path;
          out.rule = nullptr;
          out.bindings.clear();
          return true;
        }
        marks_.add(*t, kWnfKnown | kWnfTrue);
        return false;
      }
      case TermKind::FunApp: {
        const auto& f = t->as_fun_app();
        path.push_back(0);
        for (size_t i = 0; i < f.args.size(); ++i) {
          path.back() = static_cast<int>(i) + 1;
          if (find(f.args[i], path, out)) return true;
        }
        path.pop_back();
        if (f.symbol->kind == SymbolKind::Defined) {
          for (const Rule* rule : trs_.rules_for(f.symbol.get())) {
            out.bindings.clear();
            if (match_rec(rule->lhs, t, out.bindings)) {
              out.position = path;
              out.rule = rule;
              return true;
            }
          }
        }
        marks_.add(*t, kWnfKnown | kWnfTrue);
        return false;
      }
    }
    return false;
  }

  std::optional<RedexInfo> find_redex(const TermPtr& t) {
    RedexInfo info;
    Position path;
    if (find(t, path, info)) return info;
    return std::nullopt;
  }

  TermPtr contract(const TermPtr& t, const RedexInfo& info) {
    return replace_at(t, info, 0);
  }

  // B-safety of every constructor-headed subterm, memoized per run.
  bool b_safe(const TermPtr& t, const BSet& b) {
    uint64_t m = marks_.get(*t);
    if (m & kSafeKnown) return m & kSafeTrue;
    bool ok = true;
    if (t->kind() == TermKind::FunApp &&
        t->as_fun_app().symbol->kind == SymbolKind::Constructor && !b.contains(t))
      ok = false;
    if (ok) {
      switch (t->kind()) {
        case TermKind::Var:
          break;
        case TermKind::Abs:
          ok = b_safe(t->as_abs().body, b);
          break;
        case TermKind::App:
          ok = b_safe(t->as_app().fun, b) && b_safe(t->as_app().arg, b);
          break;
        case TermKind::FunApp:
          for (const auto& a : t->as_fun_app().args)
            if (!(ok = b_safe(a, b))) break;
          break;
      }
    }
    marks_.add(*t, kSafeKnown | (ok ? kSafeTrue : 0));
    return ok;
  }

 private:
  TermPtr instantiate(const RedexInfo& info, const TermPtr& redex) {
    if (!info.rule) {
      const auto& a = redex->as_app();
      const auto& lam = a.fun->as_abs();
      return apply_subst(lam.body, {{lam.binder, a.arg}});
    }
    Subst subst;
    for (const auto& b : info.bindings) subst.emplace(*b.name, b.value);
    return apply_subst(info.rule->rhs, subst);
  }

  TermPtr replace_at(const TermPtr& t, const RedexInfo& info, size_t depth) {
    if (depth == info.position.size()) return instantiate(info, t);
    int child = info.position[depth];
    switch (t->kind()) {
      case TermKind::App: {
        const auto& a = t->as_app();
        if (child == 1) return Term::app(replace_at(a.fun, info, depth + 1), a.arg);
        return Term::app(a.fun, replace_at(a.arg, info, depth + 1));
      }
      case TermKind::FunApp: {
        const auto& f = t->as_fun_app();
        std::vector<TermPtr> args = f.args;
        args[child - 1] = replace_at(args[child - 1], info, depth + 1);
        return Term::fun_app(f.symbol, std::move(args));
      }
      default:
        throw TermError("invalid redex position");
    }
  }

  const Trs& trs_;
  Marks marks_;
};

}  // namespace

std::optional<Subst> match_pattern(const TermPtr& pattern, const TermPtr& subject) {
  std::vector<Binding> bindings;
  if (!match_rec(pattern, subject, bindings)) return std::nullopt;
  Subst out;
  for (const auto& b : bindings) out.emplace(*b.name, b.value);
  return out;
}

std::optional<Position> pick_redex(const TermPtr& t, const Trs& trs) {
  Run run(trs);
  auto info = run.find_redex(t);
  if (!info) return std::nullopt;
  return info->position;
}

std::optional<TermPtr> rewrite_step(const Trs& trs, const TermPtr& t) {
  Run run(trs);
  auto info = run.find_redex(t);
  if (!info) return std::nullopt;
  return run.contract(t, *info);
}

std::string Trace::render() const {
  std::ostringstream os;
  os << "0  rule=start  pos=/  term=" << print_term(initial) << "\n";
  size_t n = 0;
  for (const auto& step : steps) {
    os << ++n << "  rule=";
    if (step.rule_index == kBetaStep)
      os << "beta";
    else
      os << step.rule_index;
    os << "  pos=" << print_position(step.position) << "  term=" << print_term(step.term) << "\n";
  }
  os << "final status: "
     << (final_status == FinalStatus::NormalForm ? "normal form" : "fuel exhausted") << "\n";
  return os.str();
}

NormalizeResult normalize(const Trs& trs, const TermPtr& start, const NormalizeOptions& opts) {
  Run run(trs);
  NormalizeResult result;
  result.trace.initial = start;

  TermPtr current = start;
  if (opts.b_check && !run.b_safe(current, *opts.b_check))
    throw BSafetyViolation(print_term(current));

  for (long long i = 0; i < opts.fuel; ++i) {
    auto info = run.find_redex(current);
    if (!info) {
      result.status = FinalStatus::NormalForm;
      result.final_term = current;
      result.trace.final_status = FinalStatus::NormalForm;
      return result;
    }
    TermPtr before = current;
    current = run.contract(current, *info);
    ++result.steps;
    int rule_index = info->rule ? info->rule->index : kBetaStep;
    if (opts.keep_trace && result.trace.steps.size() < opts.trace_cap)
      result.trace.steps.push_back(TraceStep{current, info->position, rule_index});
    if (opts.observer) {
      Subst bindings;
      for (const auto& b : info->bindings) bindings.emplace(*b.name, b.value);
      opts.observer(before, info->position, rule_index, bindings, current);
    }
    if (opts.b_check && !run.b_safe(current, *opts.b_check))
      throw BSafetyViolation(print_term(current));
  }

  if (!run.find_redex(current)) {
    result.status = FinalStatus::NormalForm;
    result.trace.final_status = FinalStatus::NormalForm;
  } else {
    result.status = FinalStatus::FuelExhausted;
    result.trace.final_status = FinalStatus::FuelExhausted;
  }
  result.final_term = current;
  return result;
}

}  // namespace consfree
