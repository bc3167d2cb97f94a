#include "consfree/trs.hpp"

#include <algorithm>
#include <set>

namespace consfree {

namespace {

void collect_symbols(const TermPtr& t, std::set<const FunctionSymbol*>& out) {
  if (t->kind() == TermKind::FunApp) out.insert(t->as_fun_app().symbol.get());
  switch (t->kind()) {
    case TermKind::Abs:
      collect_symbols(t->as_abs().body, out);
      break;
    case TermKind::App:
      collect_symbols(t->as_app().fun, out);
      collect_symbols(t->as_app().arg, out);
      break;
    case TermKind::FunApp:
      for (const auto& a : t->as_fun_app().args) collect_symbols(a, out);
      break;
    default:
      break;
  }
}

void check_sorts_declared(const TypePtr& ty, const std::set<std::string>& sorts,
                          const std::string& context) {
  if (ty->is_base()) {
    if (!sorts.count(ty->sort()))
      throw TrsError(context + " uses undeclared sort '" + ty->sort() + "'");
    return;
  }
  check_sorts_declared(ty->domain(), sorts, context);
  check_sorts_declared(ty->codomain(), sorts, context);
}

// Renames rhs binders so no binder clashes with a free variable of the rule.
TermPtr rename_binders_apart(const TermPtr& t, const std::vector<std::string>& rule_vars) {
  switch (t->kind()) {
    case TermKind::Var:
      return t;
    case TermKind::App: {
      TermPtr fun = rename_binders_apart(t->as_app().fun, rule_vars);
      TermPtr arg = rename_binders_apart(t->as_app().arg, rule_vars);
      if (fun.get() == t->as_app().fun.get() && arg.get() == t->as_app().arg.get()) return t;
      return Term::app(fun, arg);
    }
    case TermKind::FunApp: {
      const auto& f = t->as_fun_app();
      std::vector<TermPtr> args;
      bool changed = false;
      for (const auto& a : f.args) {
        args.push_back(rename_binders_apart(a, rule_vars));
        changed = changed || args.back().get() != a.get();
      }
      return changed ? Term::fun_app(f.symbol, std::move(args)) : t;
    }
    case TermKind::Abs: {
      const auto& a = t->as_abs();
      std::string binder = a.binder;
      TermPtr body = a.body;
      if (std::find(rule_vars.begin(), rule_vars.end(), binder) != rule_vars.end()) {
        std::vector<std::string> avoid = rule_vars;
        for (const auto& [n, ty] : body->free_vars()) avoid.push_back(n);
        std::sort(avoid.begin(), avoid.end());
        binder = fresh_name(a.binder, avoid);
        body = apply_subst(body, {{a.binder, Term::var(binder, a.binder_type)}});
      }
      TermPtr body2 = rename_binders_apart(body, rule_vars);
      if (binder == a.binder && body2.get() == a.body.get()) return t;
      return Term::abs(binder, a.binder_type, body2);
    }
  }
  return t;
}

}  // namespace

bool is_constructor_term(const TermPtr& t) {
  switch (t->kind()) {
    case TermKind::Var:
      return true;
    case TermKind::Abs:
    case TermKind::App:
      return false;
    case TermKind::FunApp: {
      const auto& f = t->as_fun_app();
      if (f.symbol->kind != SymbolKind::Constructor) return false;
      for (const auto& a : f.args)
        if (!is_constructor_term(a)) return false;
      return true;
    }
  }
  return false;
}

bool is_valid_lhs(const TermPtr& t) {
  if (t->kind() != TermKind::FunApp) return false;
  const auto& f = t->as_fun_app();
  if (f.symbol->kind != SymbolKind::Defined) return false;
  for (const auto& a : f.args)
    if (!is_constructor_term(a)) return false;
  return true;
}

Trs::Trs(std::vector<std::string> sorts, std::vector<SymbolPtr> symbols,
         std::vector<std::pair<TermPtr, TermPtr>> rules)
    : sorts_(std::move(sorts)), symbols_(std::move(symbols)) {
  std::set<std::string> sort_set;
  for (const auto& s : sorts_) {
    if (s.empty()) throw TrsError("empty sort name");
    if (!sort_set.insert(s).second) throw TrsError("duplicate sort '" + s + "'");
  }

  std::set<int> indices;
  std::set<const FunctionSymbol*> known;
  for (const auto& sym : symbols_) {
    if (!sym) throw TrsError("null symbol");
    if (sym->index < 1) throw TrsError("symbol '" + sym->name + "' has index < 1");
    if (!indices.insert(sym->index).second)
      throw TrsError("duplicate symbol index " + std::to_string(sym->index));
    if (!by_name_.emplace(sym->name, sym).second)
      throw TrsError("duplicate symbol '" + sym->name + "'");
    for (const auto& ty : sym->decl.arg_types)
      check_sorts_declared(ty, sort_set, "symbol '" + sym->name + "'");
    check_sorts_declared(sym->decl.result_type, sort_set, "symbol '" + sym->name + "'");
    known.insert(sym.get());
  }

  int index = 0;
  for (auto& [lhs, rhs] : rules) {
    ++index;
    std::string where = "rule " + std::to_string(index);
    if (!lhs || !rhs) throw TrsError(where + ": missing side");
    if (!is_valid_lhs(lhs))
      throw TrsError(where + ": lhs is not a defined symbol applied to constructor terms");
    if (lhs->type() != rhs->type()) throw TrsError(where + ": lhs and rhs types differ");
    for (const auto& [v, ty] : rhs->free_vars())
      if (!lhs->has_free_var(v))
        throw TrsError(where + ": rhs variable '" + v + "' does not occur in the lhs");
    std::set<const FunctionSymbol*> used;
    collect_symbols(lhs, used);
    collect_symbols(rhs, used);
    for (const auto* sym : used)
      if (!known.count(sym))
        throw TrsError(where + ": symbol '" + sym->name + "' is not part of this signature");
    // Free-variable lists carry types, so lhs/rhs agreement is a plain scan.
    for (const auto& [v, ty] : rhs->free_vars()) {
      for (const auto& [lv, lty] : lhs->free_vars())
        if (lv == v && lty != ty)
          throw TrsError(where + ": variable '" + v + "' used at two different types");
    }

    std::vector<std::string> lhs_vars;
    for (const auto& [v, ty] : lhs->free_vars()) lhs_vars.push_back(v);
    TermPtr clean_rhs = rename_binders_apart(rhs, lhs_vars);
    rules_.push_back(Rule{lhs, clean_rhs, index});
  }

  for (const auto& rule : rules_) {
    const auto* head = rule.lhs->as_fun_app().symbol.get();
    by_head_[head].push_back(&rule);
  }
}

SymbolPtr Trs::find_symbol(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

SymbolPtr Trs::symbol_by_index(int index) const {
  for (const auto& sym : symbols_)
    if (sym->index == index) return sym;
  return nullptr;
}

std::span<const Rule* const> Trs::rules_for(const FunctionSymbol* symbol) const {
  auto it = by_head_.find(symbol);
  if (it == by_head_.end()) return {};
  return {it->second.data(), it->second.size()};
}

bool Trs::is_first_order() const {
  for (const auto& sym : symbols_) {
    for (const auto& ty : sym->decl.arg_types)
      if (!ty->is_base()) return false;
    if (!sym->decl.result_type->is_base()) return false;
  }
  return true;
}

int type_order(const Trs& trs) {
  int order = 0;
  for (const auto& sym : trs.symbols()) order = std::max(order, type_order(sym->decl));
  return order;
}

}  // namespace consfree
