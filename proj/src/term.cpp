#include "consfree/term.hpp"

#include <algorithm>
#include <functional>

namespace consfree {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

uint64_t str_hash(const std::string& s) { return std::hash<std::string>{}(s); }

using FreeVars = std::vector<std::pair<std::string, TypePtr>>;

FreeVars merge_free_vars(const std::vector<const FreeVars*>& parts) {
  FreeVars out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  FreeVars dedup;
  for (const auto& entry : out) {
    if (!dedup.empty() && dedup.back().first == entry.first) {
      if (dedup.back().second != entry.second)
        throw TermError("variable '" + entry.first + "' used at two types in one scope");
      continue;
    }
    dedup.push_back(entry);
  }
  return dedup;
}

}  // namespace

SymbolPtr make_symbol(std::string name, TypeDecl decl, SymbolKind kind, int index) {
  auto sym = std::make_shared<FunctionSymbol>();
  sym->name = std::move(name);
  sym->decl = std::move(decl);
  sym->kind = kind;
  sym->index = index;
  return sym;
}

Term::Term(std::variant<VarNode, AbsNode, AppNode, FunAppNode> node) : node_(std::move(node)) {
  switch (kind()) {
    case TermKind::Var: {
      const auto& v = as_var();
      type_ = v.type;
      hash_ = mix(mix(1, str_hash(v.name)), reinterpret_cast<uintptr_t>(type_.get()));
      size_ = 1;
      data_ = false;
      free_vars_ = {{v.name, v.type}};
      break;
    }
    case TermKind::Abs: {
      const auto& a = as_abs();
      type_ = Type::arrow(a.binder_type, a.body->type());
      hash_ = mix(mix(mix(2, str_hash(a.binder)), a.body->hash()),
                  reinterpret_cast<uintptr_t>(a.binder_type.get()));
      size_ = 1 + a.body->node_count();
      data_ = false;
      free_vars_ = a.body->free_vars();
      auto it = std::find_if(free_vars_.begin(), free_vars_.end(),
                             [&](const auto& e) { return e.first == a.binder; });
      if (it != free_vars_.end()) {
        if (it->second != a.binder_type)
          throw TermError("binder '" + a.binder + "' does not match the type of its occurrences");
        free_vars_.erase(it);
      }
      break;
    }
    case TermKind::App: {
      const auto& a = as_app();
      type_ = a.fun->type()->codomain();
      hash_ = mix(mix(3, a.fun->hash()), a.arg->hash());
      size_ = 1 + a.fun->node_count() + a.arg->node_count();
      data_ = false;
      free_vars_ = merge_free_vars({&a.fun->free_vars(), &a.arg->free_vars()});
      break;
    }
    case TermKind::FunApp: {
      const auto& f = as_fun_app();
      type_ = f.symbol->decl.result_type;
      uint64_t h = mix(4, str_hash(f.symbol->name));
      size_ = 1;
      data_ = f.symbol->kind == SymbolKind::Constructor;
      std::vector<const FreeVars*> parts;
      for (const auto& arg : f.args) {
        h = mix(h, arg->hash());
        size_ += arg->node_count();
        data_ = data_ && arg->is_data();
        parts.push_back(&arg->free_vars());
      }
      hash_ = h;
      free_vars_ = merge_free_vars(parts);
      break;
    }
  }
}

TermPtr Term::var(std::string name, TypePtr type) {
  if (name.empty()) throw TermError("variable name must be nonempty");
  if (!type) throw TermError("variable requires a type");
  return TermPtr(new Term(VarNode{std::move(name), std::move(type)}));
}

TermPtr Term::abs(std::string binder, TypePtr binder_type, TermPtr body) {
  if (binder.empty()) throw TermError("binder name must be nonempty");
  if (!binder_type || !body) throw TermError("abstraction requires a binder type and body");
  return TermPtr(new Term(AbsNode{std::move(binder), std::move(binder_type), std::move(body)}));
}

TermPtr Term::app(TermPtr fun, TermPtr arg) {
  if (!fun || !arg) throw TermError("application requires both subterms");
  if (!fun->type()->is_arrow())
    throw TermError("application head does not have an arrow type");
  if (fun->type()->domain() != arg->type())
    throw TermError("application argument type mismatch");
  return TermPtr(new Term(AppNode{std::move(fun), std::move(arg)}));
}

TermPtr Term::fun_app(SymbolPtr symbol, std::vector<TermPtr> args) {
  if (!symbol) throw TermError("function application requires a symbol");
  if (args.size() != symbol->decl.arity())
    throw TermError("arity mismatch for symbol '" + symbol->name + "': expected " +
                    std::to_string(symbol->decl.arity()) + " arguments, got " +
                    std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); ++i) {
    if (!args[i]) throw TermError("null argument for symbol '" + symbol->name + "'");
    if (args[i]->type() != symbol->decl.arg_types[i])
      throw TermError("argument " + std::to_string(i + 1) + " of '" + symbol->name +
                      "' has the wrong type");
  }
  return TermPtr(new Term(FunAppNode{std::move(symbol), std::move(args)}));
}

namespace {
void collect_subterms(const TermPtr& t, std::vector<TermPtr>& out) {
  out.push_back(t);
  switch (t->kind()) {
    case TermKind::Var:
      break;
    case TermKind::Abs:
      collect_subterms(t->as_abs().body, out);
      break;
    case TermKind::App:
      collect_subterms(t->as_app().fun, out);
      collect_subterms(t->as_app().arg, out);
      break;
    case TermKind::FunApp:
      for (const auto& a : t->as_fun_app().args) collect_subterms(a, out);
      break;
  }
}
}  // namespace

std::vector<TermPtr> subterms(const TermPtr& t) {
  std::vector<TermPtr> out;
  out.reserve(t->node_count());
  collect_subterms(t, out);
  return out;
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash() != b->hash() || a->kind() != b->kind() || a->type() != b->type()) return false;
  switch (a->kind()) {
    case TermKind::Var:
      return a->as_var().name == b->as_var().name;
    case TermKind::Abs:
      return a->as_abs().binder == b->as_abs().binder &&
             a->as_abs().binder_type == b->as_abs().binder_type &&
             term_eq(a->as_abs().body, b->as_abs().body);
    case TermKind::App:
      return term_eq(a->as_app().fun, b->as_app().fun) && term_eq(a->as_app().arg, b->as_app().arg);
    case TermKind::FunApp: {
      const auto& fa = a->as_fun_app();
      const auto& fb = b->as_fun_app();
      if (fa.symbol != fb.symbol) return false;
      for (size_t i = 0; i < fa.args.size(); ++i)
        if (!term_eq(fa.args[i], fb.args[i])) return false;
      return true;
    }
  }
  return false;
}

namespace {

// Environments map binder names to the nesting depth of their binder.
using BinderEnv = std::vector<std::pair<std::string, int>>;

int env_lookup(const BinderEnv& env, const std::string& name) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == name) return it->second;
  return -1;
}

// Symbols from different signature instances count as equal when they agree
// on name, kind and declaration; this lets round-tripped systems compare.
bool symbol_alpha_eq(const SymbolPtr& a, const SymbolPtr& b) {
  if (a == b) return true;
  return a->name == b->name && a->kind == b->kind && a->decl == b->decl;
}

bool alpha_eq_rec(const TermPtr& a, const TermPtr& b, BinderEnv& ea, BinderEnv& eb, int depth) {
  if (a->kind() != b->kind() || a->type() != b->type()) return false;
  switch (a->kind()) {
    case TermKind::Var: {
      int la = env_lookup(ea, a->as_var().name);
      int lb = env_lookup(eb, b->as_var().name);
      if (la != lb) return false;
      return la >= 0 || a->as_var().name == b->as_var().name;
    }
    case TermKind::Abs: {
      if (a->as_abs().binder_type != b->as_abs().binder_type) return false;
      ea.emplace_back(a->as_abs().binder, depth);
      eb.emplace_back(b->as_abs().binder, depth);
      bool ok = alpha_eq_rec(a->as_abs().body, b->as_abs().body, ea, eb, depth + 1);
      ea.pop_back();
      eb.pop_back();
      return ok;
    }
    case TermKind::App:
      return alpha_eq_rec(a->as_app().fun, b->as_app().fun, ea, eb, depth) &&
             alpha_eq_rec(a->as_app().arg, b->as_app().arg, ea, eb, depth);
    case TermKind::FunApp: {
      const auto& fa = a->as_fun_app();
      const auto& fb = b->as_fun_app();
      if (!symbol_alpha_eq(fa.symbol, fb.symbol)) return false;
      for (size_t i = 0; i < fa.args.size(); ++i)
        if (!alpha_eq_rec(fa.args[i], fb.args[i], ea, eb, depth)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  BinderEnv ea, eb;
  return alpha_eq_rec(a, b, ea, eb, 0);
}

std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid) {
  auto taken = [&](const std::string& n) {
    return std::find(avoid.begin(), avoid.end(), n) != avoid.end();
  };
  if (!taken(base)) return base;
  std::string name = base;
  do {
    name += '\'';
  } while (taken(name));
  return name;
}

bool Term::has_free_var(const std::string& name) const {
  auto it = std::lower_bound(free_vars_.begin(), free_vars_.end(), name,
                             [](const auto& e, const std::string& n) { return e.first < n; });
  return it != free_vars_.end() && it->first == name;
}

TermPtr apply_subst(const TermPtr& t, const Subst& subst) {
  if (subst.empty()) return t;
  switch (t->kind()) {
    case TermKind::Var: {
      auto it = subst.find(t->as_var().name);
      if (it == subst.end()) return t;
      if (it->second->type() != t->type())
        throw TermError("substitution image for '" + t->as_var().name + "' has the wrong type");
      return it->second;
    }
    case TermKind::App: {
      const auto& a = t->as_app();
      TermPtr fun = apply_subst(a.fun, subst);
      TermPtr arg = apply_subst(a.arg, subst);
      if (fun.get() == a.fun.get() && arg.get() == a.arg.get()) return t;
      return Term::app(fun, arg);
    }
    case TermKind::FunApp: {
      const auto& f = t->as_fun_app();
      std::vector<TermPtr> args;
      args.reserve(f.args.size());
      bool changed = false;
      for (const auto& a : f.args) {
        args.push_back(apply_subst(a, subst));
        changed = changed || args.back().get() != a.get();
      }
      if (!changed) return t;
      return Term::fun_app(f.symbol, std::move(args));
    }
    case TermKind::Abs: {
      const auto& a = t->as_abs();
      // Keep only bindings for variables actually free in the body, minus the binder.
      Subst inner;
      bool capture = false;
      std::vector<std::string> avoid;
      for (const auto& [n, ty] : a.body->free_vars()) avoid.push_back(n);
      for (const auto& [name, image] : subst) {
        if (name == a.binder || !a.body->has_free_var(name)) continue;
        inner.emplace(name, image);
        if (image->has_free_var(a.binder)) capture = true;
        for (const auto& [n, ty] : image->free_vars()) avoid.push_back(n);
      }
      if (inner.empty()) return t;
      std::string binder = a.binder;
      TermPtr body = a.body;
      if (capture) {
        std::sort(avoid.begin(), avoid.end());
        binder = fresh_name(a.binder, avoid);
        Subst rename{{a.binder, Term::var(binder, a.binder_type)}};
        body = apply_subst(body, rename);
      }
      return Term::abs(binder, a.binder_type, apply_subst(body, inner));
    }
  }
  return t;
}

}  // namespace consfree
