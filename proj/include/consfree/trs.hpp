#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "consfree/term.hpp"

namespace consfree {

struct TrsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A rewrite rule f(l1,...,ln) -> r. The lhs head is a defined symbol and
/// every li is a constructor term (variables and constructor applications
/// only). Indices are 1-based positions in the rule list.
struct Rule {
  TermPtr lhs;
  TermPtr rhs;
  int index = 0;
};

/// A signature (sorts plus function symbols in declaration order) together
/// with an ordered rule list. Validated on construction; immutable after.
class Trs {
 public:
  Trs(std::vector<std::string> sorts, std::vector<SymbolPtr> symbols,
      std::vector<std::pair<TermPtr, TermPtr>> rules);

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::vector<SymbolPtr>& symbols() const { return symbols_; }
  const std::vector<Rule>& rules() const { return rules_; }

  SymbolPtr find_symbol(const std::string& name) const;
  SymbolPtr symbol_by_index(int index) const;
  /// Rules whose lhs head is the given symbol, in rule-list order.
  std::span<const Rule* const> rules_for(const FunctionSymbol* symbol) const;

  /// True when every declaration uses base sorts only (no arrows anywhere).
  bool is_first_order() const;

 private:
  std::vector<std::string> sorts_;
  std::vector<SymbolPtr> symbols_;
  std::vector<Rule> rules_;
  std::unordered_map<std::string, SymbolPtr> by_name_;
  std::unordered_map<const FunctionSymbol*, std::vector<const Rule*>> by_head_;
};

using TrsPtr = std::shared_ptr<const Trs>;

/// Max order over the symbols' curried declaration types; 0 for an empty
/// signature.
int type_order(const Trs& trs);

/// True iff the term is f(l1,...,ln) with f defined and each li a
/// constructor term (no applications, abstractions, or defined symbols).
bool is_valid_lhs(const TermPtr& t);

/// True iff every FunApp node below the root is constructor-headed and the
/// term contains no App or Abs nodes (variables allowed).
bool is_constructor_term(const TermPtr& t);

}  // namespace consfree
