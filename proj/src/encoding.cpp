#include "consfree/encoding.hpp"

#include <algorithm>
#include <functional>

namespace consfree {

namespace {

SymbolPtr require(const TrsPtr& host, const std::string& name, const TypeDecl& decl,
                  SymbolKind kind) {
  SymbolPtr sym = host->find_symbol(name);
  if (!sym) throw EncodingError("carrier symbol '" + name + "' is missing");
  if (sym->kind != kind || !(sym->decl == decl))
    throw EncodingError("carrier symbol '" + name + "' has an unexpected declaration");
  return sym;
}

}  // namespace

InterpreterSignature InterpreterSignature::from_trs(const TrsPtr& host) {
  InterpreterSignature sig;
  sig.carrier = host;
  sig.bitstring = Type::base("bitstring");
  sig.term = Type::base("term");
  sig.termlist = Type::base("termlist");
  sig.rules = Type::base("rules");
  auto k = SymbolKind::Constructor;
  sig.bit0 = require(host, "0", TypeDecl{{sig.bitstring}, sig.bitstring}, k);
  sig.bit1 = require(host, "1", TypeDecl{{sig.bitstring}, sig.bitstring}, k);
  sig.bit_end = require(host, "rhd", TypeDecl{{}, sig.bitstring}, k);
  sig.list_nil = require(host, "[]", TypeDecl{{}, sig.termlist}, k);
  sig.list_cons = require(host, "::", TypeDecl{{sig.term, sig.termlist}, sig.termlist}, k);
  sig.enc_var = require(host, "Var", TypeDecl{{sig.bitstring}, sig.term}, k);
  sig.enc_fun = require(host, "Fun", TypeDecl{{sig.bitstring, sig.termlist}, sig.term}, k);
  sig.bottom = require(host, "bot", TypeDecl{{}, sig.term}, k);
  sig.rules_nil = require(host, "empty", TypeDecl{{}, sig.rules}, k);
  sig.rule_cons = require(host, "Rule", TypeDecl{{sig.term, sig.term, sig.rules}, sig.rules}, k);
  return sig;
}

InterpreterSignature InterpreterSignature::standalone() {
  TypePtr bits = Type::base("bitstring");
  TypePtr term = Type::base("term");
  TypePtr list = Type::base("termlist");
  TypePtr rules = Type::base("rules");
  auto k = SymbolKind::Constructor;
  std::vector<SymbolPtr> symbols = {
      make_symbol("0", TypeDecl{{bits}, bits}, k, 1),
      make_symbol("1", TypeDecl{{bits}, bits}, k, 2),
      make_symbol("rhd", TypeDecl{{}, bits}, k, 3),
      make_symbol("[]", TypeDecl{{}, list}, k, 4),
      make_symbol("::", TypeDecl{{term, list}, list}, k, 5),
      make_symbol("Var", TypeDecl{{bits}, term}, k, 6),
      make_symbol("Fun", TypeDecl{{bits, list}, term}, k, 7),
      make_symbol("bot", TypeDecl{{}, term}, k, 8),
      make_symbol("empty", TypeDecl{{}, rules}, k, 9),
      make_symbol("Rule", TypeDecl{{term, term, rules}, rules}, k, 10),
  };
  auto host = std::make_shared<Trs>(
      std::vector<std::string>{"bitstring", "term", "termlist", "rules"}, std::move(symbols),
      std::vector<std::pair<TermPtr, TermPtr>>{});
  return from_trs(host);
}

SymbolTable::SymbolTable(const TrsPtr& object) : object_(object) {
  for (const auto& sym : object->symbols()) by_index_.emplace(sym->index, sym);
}

int SymbolTable::index_of(const SymbolPtr& sym) const {
  auto it = by_index_.find(sym->index);
  if (it == by_index_.end() || it->second != sym)
    throw EncodingError("symbol '" + sym->name + "' is not part of the object signature");
  return sym->index;
}

SymbolPtr SymbolTable::symbol_for(int index) const {
  auto it = by_index_.find(index);
  return it == by_index_.end() ? nullptr : it->second;
}

std::map<std::string, int> SymbolTable::number_vars(const TermPtr& lhs) {
  std::map<std::string, int> numbering;
  int next = 1;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
    switch (t->kind()) {
      case TermKind::Var:
        if (!numbering.count(t->as_var().name)) numbering.emplace(t->as_var().name, next++);
        break;
      case TermKind::FunApp:
        for (const auto& a : t->as_fun_app().args) walk(a);
        break;
      default:
        throw EncodingError("higher-order construct in a first-order rule");
    }
  };
  walk(lhs);
  return numbering;
}

TermPtr bit_encode(const InterpreterSignature& sig, long long i) {
  if (i < 1) throw EncodingError("bit_encode requires a positive number");
  TermPtr t = Term::fun_app(sig.bit_end, {});
  while (i > 0) {
    // Builds innermost-first, so the least significant bit is applied first
    // and the most significant bit ends up outermost.
    t = Term::fun_app((i & 1) ? sig.bit1 : sig.bit0, {t});
    i >>= 1;
  }
  return t;
}

long long bit_decode(const InterpreterSignature& sig, const TermPtr& t) {
  long long value = 0;
  const Term* cur = t.get();
  bool first = true;
  while (true) {
    if (cur->kind() != TermKind::FunApp) throw EncodingError("malformed bitstring");
    const auto& f = cur->as_fun_app();
    if (f.symbol == sig.bit_end) break;
    int bit;
    if (f.symbol == sig.bit0)
      bit = 0;
    else if (f.symbol == sig.bit1)
      bit = 1;
    else
      throw EncodingError("foreign symbol in bitstring: " + f.symbol->name);
    if (first && bit == 0) throw EncodingError("leading zero in bitstring");
    first = false;
    if (value > (1LL << 56)) throw EncodingError("bitstring too long");
    value = value * 2 + bit;
    cur = f.args[0].get();
  }
  if (first) throw EncodingError("empty bitstring encodes no number");
  return value;
}

namespace {

TermPtr encode_rec(const InterpreterSignature& sig, const TermPtr& s, const SymbolTable& table,
                   const std::map<std::string, int>* vars) {
  switch (s->kind()) {
    case TermKind::Var: {
      if (!vars) throw EncodingError("free variable '" + s->as_var().name + "' in a ground term");
      auto it = vars->find(s->as_var().name);
      if (it == vars->end())
        throw EncodingError("variable '" + s->as_var().name + "' has no number");
      return Term::fun_app(sig.enc_var, {bit_encode(sig, it->second)});
    }
    case TermKind::FunApp: {
      const auto& f = s->as_fun_app();
      int index = table.index_of(f.symbol);
      TermPtr list = Term::fun_app(sig.list_nil, {});
      for (auto it = f.args.rbegin(); it != f.args.rend(); ++it)
        list = Term::fun_app(sig.list_cons, {encode_rec(sig, *it, table, vars), list});
      return Term::fun_app(sig.enc_fun, {bit_encode(sig, index), list});
    }
    default:
      throw EncodingError("abstractions and applications cannot be encoded");
  }
}

TermPtr decode_rec(const InterpreterSignature& sig, const TermPtr& t, const SymbolTable& table) {
  if (t->kind() != TermKind::FunApp) throw EncodingError("malformed encoding");
  const auto& f = t->as_fun_app();
  if (f.symbol == sig.bottom) throw EncodingError("bottom nested inside an encoded term");
  if (f.symbol == sig.enc_var) {
    if (f.args[0]->kind() == TermKind::FunApp &&
        f.args[0]->as_fun_app().symbol == sig.bit_end)
      throw EncodingError("Var(rhd) is not a representation of any term");
    throw EncodingError("variable encoding in a ground result");
  }
  if (f.symbol != sig.enc_fun) throw EncodingError("malformed encoding: expected Fun");
  long long index = bit_decode(sig, f.args[0]);
  SymbolPtr sym = table.symbol_for(static_cast<int>(index));
  if (!sym) throw EncodingError("unknown symbol index " + std::to_string(index));
  std::vector<TermPtr> args;
  const Term* cur = f.args[1].get();
  while (true) {
    if (cur->kind() != TermKind::FunApp) throw EncodingError("malformed term list");
    const auto& node = cur->as_fun_app();
    if (node.symbol == sig.list_nil) break;
    if (node.symbol != sig.list_cons) throw EncodingError("malformed term list");
    args.push_back(decode_rec(sig, node.args[0], table));
    cur = node.args[1].get();
  }
  if (args.size() != sym->decl.arity())
    throw EncodingError("arity mismatch in encoding of '" + sym->name + "'");
  return Term::fun_app(sym, std::move(args));
}

}  // namespace

TermPtr encode_term(const InterpreterSignature& sig, const TermPtr& s, const SymbolTable& table,
                    const std::map<std::string, int>* vars) {
  return encode_rec(sig, s, table, vars);
}

DecodeResult decode_term(const InterpreterSignature& sig, const TermPtr& t,
                         const SymbolTable& table) {
  if (t->kind() == TermKind::FunApp && t->as_fun_app().symbol == sig.bottom)
    return DecodeResult{true, nullptr};
  return DecodeResult{false, decode_rec(sig, t, table)};
}

TermPtr encode_trs(const InterpreterSignature& sig, const SymbolTable& table) {
  const Trs& object = *table.object();
  if (!object.is_first_order())
    throw EncodingError("only first-order systems can be encoded");
  TermPtr acc = Term::fun_app(sig.rules_nil, {});
  const auto& rules = object.rules();
  for (auto it = rules.rbegin(); it != rules.rend(); ++it) {
    auto numbering = SymbolTable::number_vars(it->lhs);
    TermPtr l = encode_term(sig, it->lhs, table, &numbering);
    TermPtr r = encode_term(sig, it->rhs, table, &numbering);
    acc = Term::fun_app(sig.rule_cons, {l, r, acc});
  }
  return acc;
}

}  // namespace consfree
