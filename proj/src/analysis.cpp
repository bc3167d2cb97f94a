#include "consfree/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <sstream>

#include "consfree/syntax.hpp"

namespace consfree {

std::string CheckReport::render_text(const std::string& title) const {
  std::ostringstream os;
  os << title << ": " << (passed ? "pass" : "fail") << "\n";
  for (const auto& v : violations) {
    os << "  rule " << v.rule_index << ": " << v.reason;
    if (v.subterm) os << ": " << print_term(v.subterm);
    os << "\n";
  }
  return os.str();
}

std::string CheckReport::render_machine(const std::string& tag) const {
  std::ostringstream os;
  os << tag << "\t" << (passed ? "pass" : "fail") << "\n";
  for (const auto& v : violations)
    os << "violation\t" << v.rule_index << "\t" << v.reason << "\t"
       << (v.subterm ? print_term(v.subterm) : "") << "\n";
  return os.str();
}

namespace {

bool is_subterm_of(const TermPtr& needle, const TermPtr& haystack) {
  if (term_eq(needle, haystack)) return true;
  switch (haystack->kind()) {
    case TermKind::Var:
      return false;
    case TermKind::Abs:
      return is_subterm_of(needle, haystack->as_abs().body);
    case TermKind::App:
      return is_subterm_of(needle, haystack->as_app().fun) ||
             is_subterm_of(needle, haystack->as_app().arg);
    case TermKind::FunApp:
      for (const auto& a : haystack->as_fun_app().args)
        if (is_subterm_of(needle, a)) return true;
      return false;
  }
  return false;
}

void collect_var_occurrences(const TermPtr& t, std::vector<std::string>& out) {
  switch (t->kind()) {
    case TermKind::Var:
      out.push_back(t->as_var().name);
      break;
    case TermKind::Abs:
      collect_var_occurrences(t->as_abs().body, out);
      break;
    case TermKind::App:
      collect_var_occurrences(t->as_app().fun, out);
      collect_var_occurrences(t->as_app().arg, out);
      break;
    case TermKind::FunApp:
      for (const auto& a : t->as_fun_app().args) collect_var_occurrences(a, out);
      break;
  }
}

// Renames every variable by prefixing; patterns are binder-free.
TermPtr prefix_vars(const TermPtr& t, const std::string& prefix) {
  switch (t->kind()) {
    case TermKind::Var:
      return Term::var(prefix + t->as_var().name, t->type());
    case TermKind::FunApp: {
      const auto& f = t->as_fun_app();
      std::vector<TermPtr> args;
      for (const auto& a : f.args) args.push_back(prefix_vars(a, prefix));
      return Term::fun_app(f.symbol, std::move(args));
    }
    default:
      throw TrsError("pattern contains an application or abstraction");
  }
}

bool unify_rec(const TermPtr& a, const TermPtr& b, Subst& out);

TermPtr walk(const TermPtr& t, const Subst& s) {
  TermPtr cur = t;
  while (cur->kind() == TermKind::Var) {
    auto it = s.find(cur->as_var().name);
    if (it == s.end()) break;
    cur = it->second;
  }
  return cur;
}

bool occurs_in(const std::string& var, const TermPtr& t, const Subst& s) {
  TermPtr w = walk(t, s);
  if (w->kind() == TermKind::Var) return w->as_var().name == var;
  if (w->kind() == TermKind::FunApp)
    for (const auto& a : w->as_fun_app().args)
      if (occurs_in(var, a, s)) return true;
  return false;
}

bool unify_rec(const TermPtr& a0, const TermPtr& b0, Subst& out) {
  TermPtr a = walk(a0, out);
  TermPtr b = walk(b0, out);
  if (a->kind() == TermKind::Var) {
    if (b->kind() == TermKind::Var && a->as_var().name == b->as_var().name) return true;
    if (a->type() != b->type()) return false;
    if (occurs_in(a->as_var().name, b, out)) return false;
    out.emplace(a->as_var().name, b);
    return true;
  }
  if (b->kind() == TermKind::Var) return unify_rec(b, a, out);
  const auto& fa = a->as_fun_app();
  const auto& fb = b->as_fun_app();
  if (fa.symbol != fb.symbol) return false;
  for (size_t i = 0; i < fa.args.size(); ++i)
    if (!unify_rec(fa.args[i], fb.args[i], out)) return false;
  return true;
}

}  // namespace

std::optional<Subst> unify_patterns(const TermPtr& a, const TermPtr& b) {
  Subst subst;
  if (!unify_rec(a, b, subst)) return std::nullopt;
  return subst;
}

bool check_left_linear(const Rule& rule) {
  std::vector<std::string> names;
  collect_var_occurrences(rule.lhs, names);
  std::sort(names.begin(), names.end());
  return std::adjacent_find(names.begin(), names.end()) == names.end();
}

CheckReport check_cons_free(const Trs& trs) {
  CheckReport report;
  for (const auto& rule : trs.rules()) {
    if (!check_left_linear(rule)) {
      report.violations.push_back(
          Violation{rule.index, rule.lhs, "lhs is not left-linear"});
    }
    // Rule rhss are stored with binders renamed apart from the rule's free
    // variables, as the definition requires.
    for (const auto& sub : subterms(rule.rhs)) {
      if (sub->kind() != TermKind::FunApp) continue;
      if (sub->as_fun_app().symbol->kind != SymbolKind::Constructor) continue;
      if (is_subterm_of(sub, rule.lhs)) continue;
      if (sub->is_data()) continue;
      report.violations.push_back(Violation{
          rule.index, sub,
          "constructor-headed rhs subterm is neither a subterm of the lhs nor a data term"});
    }
  }
  report.passed = report.violations.empty();
  return report;
}

CheckReport check_orthogonal(const Trs& trs) {
  CheckReport report;
  for (const auto& rule : trs.rules())
    if (!check_left_linear(rule))
      report.violations.push_back(Violation{rule.index, rule.lhs, "lhs is not left-linear"});

  const auto& rules = trs.rules();
  for (size_t i = 0; i < rules.size(); ++i) {
    for (size_t j = i + 1; j < rules.size(); ++j) {
      TermPtr li = prefix_vars(rules[i].lhs, "L#");
      TermPtr lj = prefix_vars(rules[j].lhs, "R#");
      if (unify_patterns(li, lj)) {
        report.violations.push_back(Violation{
            rules[i].index, rules[i].lhs,
            "lhs overlaps with the lhs of rule " + std::to_string(rules[j].index)});
      }
    }
  }
  report.passed = report.violations.empty();
  return report;
}

namespace {
std::atomic<uint64_t> g_bset_ids{1};
}

BSet::BSet() : id_(g_bset_ids.fetch_add(1)) {}

void BSet::insert(const TermPtr& t) { elems_.insert(t); }

bool BSet::contains(const TermPtr& t) const { return elems_.count(t) > 0; }

std::vector<TermPtr> BSet::elements() const {
  std::vector<TermPtr> out(elems_.begin(), elems_.end());
  std::sort(out.begin(), out.end(), [](const TermPtr& a, const TermPtr& b) {
    return print_term(a) < print_term(b);
  });
  return out;
}

BSet compute_B(const TermPtr& start, const Trs& trs) {
  BSet b;
  auto sweep = [&b](const TermPtr& t) {
    for (const auto& sub : subterms(t))
      if (sub->is_data()) b.insert(sub);
  };
  sweep(start);
  for (const auto& rule : trs.rules()) sweep(rule.rhs);
  return b;
}

bool check_B_safe(const TermPtr& t, const BSet& b) {
  if (t->kind() == TermKind::FunApp &&
      t->as_fun_app().symbol->kind == SymbolKind::Constructor && !b.contains(t))
    return false;
  switch (t->kind()) {
    case TermKind::Var:
      return true;
    case TermKind::Abs:
      return check_B_safe(t->as_abs().body, b);
    case TermKind::App:
      return check_B_safe(t->as_app().fun, b) && check_B_safe(t->as_app().arg, b);
    case TermKind::FunApp:
      for (const auto& a : t->as_fun_app().args)
        if (!check_B_safe(a, b)) return false;
      return true;
  }
  return true;
}

}  // namespace consfree
