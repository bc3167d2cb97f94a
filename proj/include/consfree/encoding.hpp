#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "consfree/trs.hpp"

namespace consfree {

struct EncodingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The fixed carrier signature for encoded systems: bitstrings, terms, term
/// lists and rule lists. Handles are resolved against a host signature so
/// encoded terms share the host's symbol objects.
struct InterpreterSignature {
  TrsPtr carrier;
  TypePtr bitstring, term, termlist, rules;
  SymbolPtr bit0, bit1, bit_end;       // 0, 1, rhd
  SymbolPtr list_nil, list_cons;       // [], ::
  SymbolPtr enc_var, enc_fun, bottom;  // Var, Fun, bot
  SymbolPtr rules_nil, rule_cons;      // empty, Rule

  /// Resolves the ten carrier constructors inside an existing system (for
  /// example the interpreter program). Throws when a declaration differs.
  static InterpreterSignature from_trs(const TrsPtr& host);
  /// A minimal standalone carrier (the ten constructors, no rules).
  static InterpreterSignature standalone();
};

/// Object-signature side tables: symbol indices (identity on the symbol's
/// own index) and per-rule variable numbering.
class SymbolTable {
 public:
  explicit SymbolTable(const TrsPtr& object);

  const TrsPtr& object() const { return object_; }
  int index_of(const SymbolPtr& sym) const;
  SymbolPtr symbol_for(int index) const;  // null when unknown

  /// Variable numbering for one rule: x -> 1, 2, ... in order of first
  /// occurrence in the lhs.
  static std::map<std::string, int> number_vars(const TermPtr& lhs);

 private:
  TrsPtr object_;
  std::map<int, SymbolPtr> by_index_;
};

/// Most-significant-bit-first binary of i >= 1, without leading zeros,
/// applied to the end marker.
TermPtr bit_encode(const InterpreterSignature& sig, long long i);

/// Inverse of bit_encode; rejects the bare end marker, leading zeros and
/// foreign symbols.
long long bit_decode(const InterpreterSignature& sig, const TermPtr& t);

/// Structural encoding of a first-order term: variables become Var(<i>)
/// using `vars`, applications f(s1,...,sn) become Fun(<index>, [s1,...,sn]).
TermPtr encode_term(const InterpreterSignature& sig, const TermPtr& s, const SymbolTable& table,
                    const std::map<std::string, int>* vars = nullptr);

struct DecodeResult {
  bool is_bottom = false;
  TermPtr term;  // set when not bottom
};

/// Inverse of encode_term on ground encodings; the bottom constant decodes
/// to the distinguished bottom answer. Variable encodings and malformed
/// structure raise EncodingError.
DecodeResult decode_term(const InterpreterSignature& sig, const TermPtr& t,
                         const SymbolTable& table);

/// Rule(<l1>, <r1>, Rule(..., Rule(<lm>, <rm>, empty)...)) in rule-list
/// order, with per-rule variable numbering.
TermPtr encode_trs(const InterpreterSignature& sig, const SymbolTable& table);

}  // namespace consfree
