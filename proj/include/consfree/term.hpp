#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "consfree/type.hpp"

namespace consfree {

enum class SymbolKind { Constructor, Defined };

/// A function symbol of a signature. Symbols are shared immutable objects;
/// two occurrences of the same symbol compare equal by pointer.
struct FunctionSymbol {
  std::string name;
  TypeDecl decl;
  SymbolKind kind = SymbolKind::Constructor;
  int index = 0;  // 1-based, unique within its signature
};
using SymbolPtr = std::shared_ptr<const FunctionSymbol>;

SymbolPtr make_symbol(std::string name, TypeDecl decl, SymbolKind kind, int index);

class Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind { Var, Abs, App, FunApp };

struct VarNode {
  std::string name;
  TypePtr type;
};
struct AbsNode {
  std::string binder;
  TypePtr binder_type;
  TermPtr body;
};
struct AppNode {
  TermPtr fun;
  TermPtr arg;
};
struct FunAppNode {
  SymbolPtr symbol;
  std::vector<TermPtr> args;
};

struct TermError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Immutable well-typed term. Construction validates typing; every node
/// caches its type, a structural hash, and groundness/data flags.
class Term {
 public:
  static TermPtr var(std::string name, TypePtr type);
  static TermPtr abs(std::string binder, TypePtr binder_type, TermPtr body);
  static TermPtr app(TermPtr fun, TermPtr arg);
  static TermPtr fun_app(SymbolPtr symbol, std::vector<TermPtr> args);

  TermKind kind() const { return static_cast<TermKind>(node_.index()); }
  const VarNode& as_var() const { return std::get<VarNode>(node_); }
  const AbsNode& as_abs() const { return std::get<AbsNode>(node_); }
  const AppNode& as_app() const { return std::get<AppNode>(node_); }
  const FunAppNode& as_fun_app() const { return std::get<FunAppNode>(node_); }

  const TypePtr& type() const { return type_; }
  uint64_t hash() const { return hash_; }
  uint32_t node_count() const { return size_; }
  bool is_ground() const { return free_vars_.empty(); }
  /// Ground constructor term with no abstractions or applications.
  bool is_data() const { return data_; }
  /// Free variables with their types, sorted by name. A name carries one
  /// type per scope; conflicting uses are rejected at construction.
  const std::vector<std::pair<std::string, TypePtr>>& free_vars() const { return free_vars_; }
  bool has_free_var(const std::string& name) const;

  /// Scratch word for per-run memoization in the engine. Not part of the value.
  mutable std::atomic<uint64_t> mark{0};

 private:
  explicit Term(std::variant<VarNode, AbsNode, AppNode, FunAppNode> node);

  std::variant<VarNode, AbsNode, AppNode, FunAppNode> node_;
  TypePtr type_;
  uint64_t hash_ = 0;
  uint32_t size_ = 1;
  bool data_ = false;
  std::vector<std::pair<std::string, TypePtr>> free_vars_;
};

/// t and all nested subterms, depth-first, left to right, including bodies
/// of abstractions.
std::vector<TermPtr> subterms(const TermPtr& t);

inline bool is_data_term(const TermPtr& t) { return t->is_data(); }

/// Exact syntactic equality (variable and binder names included).
bool term_eq(const TermPtr& a, const TermPtr& b);

/// Equality up to consistent renaming of bound variables.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

using Subst = std::map<std::string, TermPtr>;

/// Capture-avoiding simultaneous substitution of free variables.
/// Throws TermError if an image's type differs from its variable's type.
TermPtr apply_subst(const TermPtr& t, const Subst& subst);

/// A name based on `base` that does not occur in `avoid`.
std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid);

}  // namespace consfree
