#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "consfree/trs.hpp"

namespace consfree {

struct Diagnostic {
  std::string path;
  int line = 0;
  int col = 0;
  std::string message;

  std::string render() const;
};

struct TrsParse {
  TrsPtr trs;  // null on failure
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return trs != nullptr; }
};

struct TermParse {
  TermPtr term;  // null on failure
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return term != nullptr; }
};

/// Parses a .trs source: `sort s;`, `cons name : [t1 * ... * tn] => t;`,
/// `fun name : ...;`, `rule lhs -> rhs;`. Line comments start with `--`.
/// Symbols receive indices 1,2,... in declaration order.
TrsParse parse_trs(std::string_view text, const std::string& path = "<input>");

/// Parses a term against an existing signature. `vars`, when given, supplies
/// the types of variables that may occur free; otherwise free variables are
/// diagnosed.
TermParse parse_term(std::string_view text, const Trs& signature,
                     const std::string& path = "<term>",
                     const std::map<std::string, TypePtr>* vars = nullptr);

std::string print_type(const TypePtr& ty);
std::string print_decl(const TypeDecl& decl);

/// Prints a term in the concrete syntax; parse_term(print_term(t)) is
/// alpha-equal to t. A binary symbol named "::" prints infix,
/// right-associatively.
std::string print_term(const TermPtr& t);

/// Full .trs file for the system; re-parsing yields an alpha-equal system
/// with identical symbol indices.
std::string print_trs(const Trs& trs);

}  // namespace consfree
