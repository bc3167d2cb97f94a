#include "consfree/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <memory>
#include <set>
#include <sstream>

namespace consfree {

std::string Diagnostic::render() const {
  std::ostringstream os;
  os << path << ":" << line << ":" << col << ": " << message;
  return os.str();
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBracket,
  RBracket,
  BracketPair,  // "[]", usable as a symbol name
  Star,
  Comma,
  Semi,
  Colon,
  ColonColon,  // "::", usable as a symbol name and as infix sugar
  Arrow,       // "->"
  FatArrow,    // "=>"
  Backslash,
  Dot,
  End,
  Error,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

bool ident_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '\'' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token tok;
    tok.line = line_;
    tok.col = col_;
    if (pos_ >= text_.size()) {
      tok.kind = Tok::End;
      return tok;
    }
    char c = text_[pos_];
    if (ident_char(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && ident_char(static_cast<unsigned char>(text_[pos_]))) advance();
      tok.kind = Tok::Ident;
      tok.text = std::string(text_.substr(start, pos_ - start));
      return tok;
    }
    switch (c) {
      case '(': advance(); tok.kind = Tok::LParen; return tok;
      case ')': advance(); tok.kind = Tok::RParen; return tok;
      case '[':
        advance();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          advance();
          tok.kind = Tok::BracketPair;
          tok.text = "[]";
        } else {
          tok.kind = Tok::LBracket;
        }
        return tok;
      case ']': advance(); tok.kind = Tok::RBracket; return tok;
      case '*': advance(); tok.kind = Tok::Star; return tok;
      case ',': advance(); tok.kind = Tok::Comma; return tok;
      case ';': advance(); tok.kind = Tok::Semi; return tok;
      case '\\': advance(); tok.kind = Tok::Backslash; return tok;
      case '.': advance(); tok.kind = Tok::Dot; return tok;
      case ':':
        advance();
        if (pos_ < text_.size() && text_[pos_] == ':') {
          advance();
          tok.kind = Tok::ColonColon;
          tok.text = "::";
        } else {
          tok.kind = Tok::Colon;
        }
        return tok;
      case '-':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          advance();
          tok.kind = Tok::Arrow;
          return tok;
        }
        tok.kind = Tok::Error;
        tok.text = "-";
        return tok;
      case '=':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          advance();
          tok.kind = Tok::FatArrow;
          return tok;
        }
        tok.kind = Tok::Error;
        tok.text = "=";
        return tok;
      default:
        advance();
        tok.kind = Tok::Error;
        tok.text = std::string(1, c);
        return tok;
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Surface syntax

struct SType;
using STypePtr = std::shared_ptr<SType>;
struct SType {
  // base name when args empty and arrow parts null
  std::string name;
  STypePtr dom, cod;
  int line = 0, col = 0;
};

struct STerm;
using STermPtr = std::shared_ptr<STerm>;
struct STerm {
  enum Kind { Name, Call, Apply, Lambda } kind = Name;
  std::string name;              // Name, Call
  std::vector<STermPtr> args;    // Call
  STermPtr fun, arg;             // Apply
  std::string binder;            // Lambda
  STypePtr binder_type;          // Lambda
  STermPtr body;                 // Lambda
  int line = 0, col = 0;
};

struct SDecl {
  enum Kind { Sort, Symbol, RuleDecl } kind = Sort;
  std::string name;          // Sort, Symbol
  bool is_constructor = false;
  std::vector<STypePtr> arg_types;
  STypePtr result_type;
  STermPtr lhs, rhs;  // RuleDecl
  int line = 0, col = 0;
};

// ---------------------------------------------------------------------------
// Parser (surface)

class Parser {
 public:
  Parser(std::string_view text, std::string path)
      : lexer_(text), path_(std::move(path)) {
    bump();
  }

  std::vector<SDecl> parse_file() {
    std::vector<SDecl> decls;
    while (cur_.kind != Tok::End) {
      if (cur_.kind == Tok::Ident && cur_.text == "sort") {
        SDecl d;
        d.kind = SDecl::Sort;
        d.line = cur_.line;
        d.col = cur_.col;
        bump();
        if (!expect_name(d.name)) { sync(); continue; }
        if (!expect(Tok::Semi, "';'")) { sync(); continue; }
        decls.push_back(std::move(d));
      } else if (cur_.kind == Tok::Ident && (cur_.text == "cons" || cur_.text == "fun")) {
        SDecl d;
        d.kind = SDecl::Symbol;
        d.is_constructor = cur_.text == "cons";
        d.line = cur_.line;
        d.col = cur_.col;
        bump();
        if (!expect_name(d.name)) { sync(); continue; }
        if (!expect(Tok::Colon, "':'")) { sync(); continue; }
        if (!parse_decl_type(d)) { sync(); continue; }
        if (!expect(Tok::Semi, "';'")) { sync(); continue; }
        decls.push_back(std::move(d));
      } else if (cur_.kind == Tok::Ident && cur_.text == "rule") {
        SDecl d;
        d.kind = SDecl::RuleDecl;
        d.line = cur_.line;
        d.col = cur_.col;
        bump();
        d.lhs = parse_term();
        if (!d.lhs) { sync(); continue; }
        if (!expect(Tok::Arrow, "'->'")) { sync(); continue; }
        d.rhs = parse_term();
        if (!d.rhs) { sync(); continue; }
        if (!expect(Tok::Semi, "';'")) { sync(); continue; }
        decls.push_back(std::move(d));
      } else {
        error("expected 'sort', 'cons', 'fun' or 'rule'");
        sync();
      }
    }
    return decls;
  }

  STermPtr parse_standalone_term() {
    STermPtr t = parse_term();
    if (t && cur_.kind != Tok::End) {
      error("unexpected input after term");
      return nullptr;
    }
    return t;
  }

  std::vector<Diagnostic>& diagnostics() { return diags_; }

 private:
  void bump() { cur_ = lexer_.next(); }

  void error(const std::string& msg) { error_at(cur_.line, cur_.col, msg); }

  void error_at(int line, int col, const std::string& msg) {
    diags_.push_back(Diagnostic{path_, line, col, msg});
  }

  bool expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind) {
      error("expected " + what);
      return false;
    }
    bump();
    return true;
  }

  // A symbol name: identifier, "::" or "[]".
  bool expect_name(std::string& out) {
    if (cur_.kind == Tok::Ident || cur_.kind == Tok::ColonColon ||
        cur_.kind == Tok::BracketPair) {
      out = cur_.kind == Tok::Ident ? cur_.text : (cur_.kind == Tok::ColonColon ? "::" : "[]");
      bump();
      return true;
    }
    error("expected a name");
    return false;
  }

  void sync() {
    while (cur_.kind != Tok::Semi && cur_.kind != Tok::End) bump();
    if (cur_.kind == Tok::Semi) bump();
  }

  STypePtr parse_type() {
    STypePtr left = parse_atomic_type();
    if (!left) return nullptr;
    if (cur_.kind == Tok::FatArrow) {
      bump();
      STypePtr right = parse_type();
      if (!right) return nullptr;
      auto arrow = std::make_shared<SType>();
      arrow->dom = left;
      arrow->cod = right;
      arrow->line = left->line;
      arrow->col = left->col;
      return arrow;
    }
    return left;
  }

  STypePtr parse_atomic_type() {
    if (cur_.kind == Tok::Ident) {
      auto ty = std::make_shared<SType>();
      ty->name = cur_.text;
      ty->line = cur_.line;
      ty->col = cur_.col;
      bump();
      return ty;
    }
    if (cur_.kind == Tok::LParen) {
      bump();
      STypePtr inner = parse_type();
      if (!inner) return nullptr;
      if (!expect(Tok::RParen, "')'")) return nullptr;
      return inner;
    }
    error("expected a type");
    return nullptr;
  }

  bool parse_decl_type(SDecl& d) {
    if (cur_.kind == Tok::LBracket) {
      bump();
      while (true) {
        STypePtr ty = parse_type();
        if (!ty) return false;
        d.arg_types.push_back(ty);
        if (cur_.kind == Tok::Star) {
          bump();
          continue;
        }
        break;
      }
      if (!expect(Tok::RBracket, "']'")) return false;
      if (!expect(Tok::FatArrow, "'=>'")) return false;
      d.result_type = parse_type();
      return d.result_type != nullptr;
    }
    d.result_type = parse_type();
    return d.result_type != nullptr;
  }

  STermPtr parse_term() {
    if (cur_.kind == Tok::Backslash) {
      auto lam = std::make_shared<STerm>();
      lam->kind = STerm::Lambda;
      lam->line = cur_.line;
      lam->col = cur_.col;
      bump();
      if (!expect_name(lam->binder)) return nullptr;
      if (!expect(Tok::Colon, "':'")) return nullptr;
      lam->binder_type = parse_type();
      if (!lam->binder_type) return nullptr;
      if (!expect(Tok::Dot, "'.'")) return nullptr;
      lam->body = parse_term();
      if (!lam->body) return nullptr;
      return lam;
    }
    return parse_cons();
  }

  STermPtr parse_cons() {
    STermPtr left = parse_apply();
    if (!left) return nullptr;
    if (cur_.kind == Tok::ColonColon) {
      int line = cur_.line, col = cur_.col;
      bump();
      STermPtr right = parse_cons();
      if (!right) return nullptr;
      auto call = std::make_shared<STerm>();
      call->kind = STerm::Call;
      call->name = "::";
      call->args = {left, right};
      call->line = line;
      call->col = col;
      return call;
    }
    return left;
  }

  bool starts_atom() const {
    return cur_.kind == Tok::Ident || cur_.kind == Tok::BracketPair || cur_.kind == Tok::LParen;
  }

  STermPtr parse_apply() {
    STermPtr t = parse_atom();
    if (!t) return nullptr;
    while (starts_atom()) {
      STermPtr arg = parse_atom();
      if (!arg) return nullptr;
      auto app = std::make_shared<STerm>();
      app->kind = STerm::Apply;
      app->fun = t;
      app->arg = arg;
      app->line = t->line;
      app->col = t->col;
      t = app;
    }
    return t;
  }

  STermPtr parse_atom() {
    if (cur_.kind == Tok::LParen) {
      bump();
      STermPtr inner = parse_term();
      if (!inner) return nullptr;
      if (!expect(Tok::RParen, "')'")) return nullptr;
      return inner;
    }
    if (cur_.kind == Tok::Ident || cur_.kind == Tok::BracketPair ||
        cur_.kind == Tok::ColonColon) {
      auto t = std::make_shared<STerm>();
      t->line = cur_.line;
      t->col = cur_.col;
      t->name = cur_.kind == Tok::Ident ? cur_.text
                                        : (cur_.kind == Tok::ColonColon ? "::" : "[]");
      bump();
      if (cur_.kind == Tok::LParen) {
        bump();
        t->kind = STerm::Call;
        if (cur_.kind != Tok::RParen) {
          while (true) {
            STermPtr arg = parse_term();
            if (!arg) return nullptr;
            t->args.push_back(arg);
            if (cur_.kind == Tok::Comma) {
              bump();
              continue;
            }
            break;
          }
        }
        if (!expect(Tok::RParen, "')'")) return nullptr;
      } else {
        t->kind = STerm::Name;
      }
      return t;
    }
    error("expected a term");
    return nullptr;
  }

  Lexer lexer_;
  std::string path_;
  Token cur_;
  std::vector<Diagnostic> diags_;
};

// ---------------------------------------------------------------------------
// Elaboration: surface -> typed terms against a signature

class Elaborator {
 public:
  Elaborator(const std::string& path, std::vector<Diagnostic>& diags)
      : path_(path), diags_(diags) {}

  void error(const STerm& at, const std::string& msg) {
    diags_.push_back(Diagnostic{path_, at.line, at.col, msg});
  }
  void error_at(int line, int col, const std::string& msg) {
    diags_.push_back(Diagnostic{path_, line, col, msg});
  }

  TypePtr resolve_type(const SType& sty, const std::set<std::string>& sorts) {
    if (sty.dom) {
      TypePtr d = resolve_type(*sty.dom, sorts);
      TypePtr c = resolve_type(*sty.cod, sorts);
      if (!d || !c) return nullptr;
      return Type::arrow(d, c);
    }
    if (!sorts.count(sty.name)) {
      error_at(sty.line, sty.col, "unknown sort '" + sty.name + "'");
      return nullptr;
    }
    return Type::base(sty.name);
  }

  // Pattern positions: variables and constructor applications only.
  // `root` permits the defined head symbol.
  TermPtr elaborate_pattern(const STerm& s, const TypePtr& expected,
                            std::map<std::string, TypePtr>& env,
                            const std::map<std::string, SymbolPtr>& symbols, bool root) {
    if (s.kind == STerm::Lambda) {
      error(s, "lhs argument contains an abstraction; patterns are constructor terms");
      return nullptr;
    }
    if (s.kind == STerm::Apply) {
      error(s, "lhs argument contains an application; patterns are constructor terms");
      return nullptr;
    }
    auto sym_it = symbols.find(s.name);
    if (s.kind == STerm::Call || (sym_it != symbols.end() && sym_it->second->decl.arity() == 0)) {
      if (sym_it == symbols.end()) {
        error(s, "unknown symbol '" + s.name + "'");
        return nullptr;
      }
      const SymbolPtr& sym = sym_it->second;
      if (!root && sym->kind != SymbolKind::Constructor) {
        error(s, "lhs argument not a constructor term: '" + s.name + "' is a defined symbol");
        return nullptr;
      }
      if (root && sym->kind != SymbolKind::Defined) {
        error(s, "rule lhs must be headed by a defined symbol");
        return nullptr;
      }
      if (s.args.size() != sym->decl.arity()) {
        error(s, "symbol '" + s.name + "' expects " + std::to_string(sym->decl.arity()) +
                     " arguments, got " + std::to_string(s.args.size()));
        return nullptr;
      }
      std::vector<TermPtr> args;
      for (size_t i = 0; i < s.args.size(); ++i) {
        TermPtr a = elaborate_pattern(*s.args[i], sym->decl.arg_types[i], env, symbols, false);
        if (!a) return nullptr;
        args.push_back(a);
      }
      if (expected && sym->decl.result_type != expected) {
        error(s, "pattern '" + s.name + "' has sort " + print_type(sym->decl.result_type) +
                     " where " + print_type(expected) + " is required");
        return nullptr;
      }
      return Term::fun_app(sym, std::move(args));
    }
    // Variable occurrence.
    if (root) {
      error(s, "rule lhs must be a function application");
      return nullptr;
    }
    if (!expected) {
      error(s, "cannot infer the type of variable '" + s.name + "'");
      return nullptr;
    }
    auto [it, inserted] = env.emplace(s.name, expected);
    if (!inserted && it->second != expected) {
      error(s, "variable '" + s.name + "' already used at type " + print_type(it->second));
      return nullptr;
    }
    return Term::var(s.name, expected);
  }

  // General terms, bidirectional: `expected` may be null (infer).
  TermPtr elaborate_term(const STerm& s, const TypePtr& expected,
                         std::map<std::string, TypePtr>& env,
                         const std::map<std::string, SymbolPtr>& symbols) {
    switch (s.kind) {
      case STerm::Lambda: {
        TypePtr bt = resolve_type(*s.binder_type, sort_names_);
        if (!bt) return nullptr;
        if (expected) {
          if (!expected->is_arrow()) {
            error(s, "abstraction where a term of type " + print_type(expected) +
                         " is required");
            return nullptr;
          }
          if (expected->domain() != bt) {
            error(s, "binder type " + print_type(bt) + " does not match expected domain " +
                         print_type(expected->domain()));
            return nullptr;
          }
        }
        auto saved = env.find(s.binder) != env.end()
                         ? std::optional<TypePtr>(env[s.binder])
                         : std::nullopt;
        env[s.binder] = bt;
        TermPtr body = elaborate_term(*s.body, expected ? expected->codomain() : nullptr, env,
                                      symbols);
        if (saved)
          env[s.binder] = *saved;
        else
          env.erase(s.binder);
        if (!body) return nullptr;
        return Term::abs(s.binder, bt, body);
      }
      case STerm::Apply: {
        TermPtr fun = elaborate_term(*s.fun, nullptr, env, symbols);
        if (!fun) return nullptr;
        if (!fun->type()->is_arrow()) {
          error(*s.fun, "applied term does not have an arrow type");
          return nullptr;
        }
        TermPtr arg = elaborate_term(*s.arg, fun->type()->domain(), env, symbols);
        if (!arg) return nullptr;
        TermPtr out = Term::app(fun, arg);
        if (expected && out->type() != expected) {
          error(s, "term has type " + print_type(out->type()) + " where " +
                       print_type(expected) + " is required");
          return nullptr;
        }
        return out;
      }
      case STerm::Call: {
        // `v(a, b)` where v is a bound variable is the application (v a) b;
        // the lexer cannot tell `v (a)` from a symbol call.
        auto env_it = env.find(s.name);
        if (env_it != env.end()) {
          TermPtr acc = Term::var(s.name, env_it->second);
          for (const auto& arg : s.args) {
            if (!acc->type()->is_arrow()) {
              error(s, "variable '" + s.name + "' is applied to too many arguments");
              return nullptr;
            }
            TermPtr a = elaborate_term(*arg, acc->type()->domain(), env, symbols);
            if (!a) return nullptr;
            acc = Term::app(acc, a);
          }
          if (expected && acc->type() != expected) {
            error(s, "term has type " + print_type(acc->type()) + " where " +
                         print_type(expected) + " is required");
            return nullptr;
          }
          return acc;
        }
        auto sym_it = symbols.find(s.name);
        if (sym_it == symbols.end()) {
          error(s, "unknown symbol '" + s.name + "'");
          return nullptr;
        }
        const SymbolPtr& sym = sym_it->second;
        if (s.args.size() != sym->decl.arity()) {
          error(s, "symbol '" + s.name + "' expects " + std::to_string(sym->decl.arity()) +
                       " arguments, got " + std::to_string(s.args.size()));
          return nullptr;
        }
        std::vector<TermPtr> args;
        for (size_t i = 0; i < s.args.size(); ++i) {
          TermPtr a = elaborate_term(*s.args[i], sym->decl.arg_types[i], env, symbols);
          if (!a) return nullptr;
          args.push_back(a);
        }
        if (expected && sym->decl.result_type != expected) {
          error(s, "'" + s.name + "' has result type " + print_type(sym->decl.result_type) +
                       " where " + print_type(expected) + " is required");
          return nullptr;
        }
        return Term::fun_app(sym, std::move(args));
      }
      case STerm::Name: {
        auto env_it = env.find(s.name);
        if (env_it != env.end()) {
          if (expected && env_it->second != expected) {
            error(s, "variable '" + s.name + "' has type " + print_type(env_it->second) +
                         " where " + print_type(expected) + " is required");
            return nullptr;
          }
          return Term::var(s.name, env_it->second);
        }
        auto sym_it = symbols.find(s.name);
        if (sym_it != symbols.end()) {
          const SymbolPtr& sym = sym_it->second;
          if (sym->decl.arity() != 0) {
            error(s, "symbol '" + s.name + "' expects " + std::to_string(sym->decl.arity()) +
                         " arguments");
            return nullptr;
          }
          if (expected && sym->decl.result_type != expected) {
            error(s, "'" + s.name + "' has sort " + print_type(sym->decl.result_type) +
                         " where " + print_type(expected) + " is required");
            return nullptr;
          }
          return Term::fun_app(sym, {});
        }
        error(s, "unbound variable '" + s.name + "'");
        return nullptr;
      }
    }
    return nullptr;
  }

  std::set<std::string> sort_names_;

 private:
  const std::string& path_;
  std::vector<Diagnostic>& diags_;
};

}  // namespace

TrsParse parse_trs(std::string_view text, const std::string& path) {
  TrsParse result;
  Parser parser(text, path);
  std::vector<SDecl> decls = parser.parse_file();
  result.diagnostics = std::move(parser.diagnostics());

  Elaborator elab(path, result.diagnostics);
  std::vector<std::string> sorts;
  std::vector<SymbolPtr> symbols;
  std::map<std::string, SymbolPtr> by_name;
  int next_index = 1;

  for (const auto& d : decls) {
    if (d.kind == SDecl::Sort) {
      if (elab.sort_names_.count(d.name)) {
        elab.error_at(d.line, d.col, "duplicate sort '" + d.name + "'");
        continue;
      }
      elab.sort_names_.insert(d.name);
      sorts.push_back(d.name);
    } else if (d.kind == SDecl::Symbol) {
      if (by_name.count(d.name)) {
        elab.error_at(d.line, d.col, "duplicate symbol '" + d.name + "'");
        continue;
      }
      TypeDecl decl;
      bool ok = true;
      for (const auto& sty : d.arg_types) {
        TypePtr ty = elab.resolve_type(*sty, elab.sort_names_);
        if (!ty) { ok = false; break; }
        decl.arg_types.push_back(ty);
      }
      if (ok) {
        decl.result_type = elab.resolve_type(*d.result_type, elab.sort_names_);
        ok = decl.result_type != nullptr;
      }
      if (!ok) continue;
      SymbolPtr sym = make_symbol(d.name, std::move(decl),
                                  d.is_constructor ? SymbolKind::Constructor : SymbolKind::Defined,
                                  next_index++);
      symbols.push_back(sym);
      by_name.emplace(d.name, sym);
    }
  }

  std::vector<std::pair<TermPtr, TermPtr>> rules;
  for (const auto& d : decls) {
    if (d.kind != SDecl::RuleDecl) continue;
    std::map<std::string, TypePtr> env;
    TermPtr lhs = elab.elaborate_pattern(*d.lhs, nullptr, env, by_name, true);
    if (!lhs) continue;
    TermPtr rhs = elab.elaborate_term(*d.rhs, lhs->type(), env, by_name);
    if (!rhs) continue;
    rules.emplace_back(lhs, rhs);
  }

  if (!result.diagnostics.empty()) return result;
  try {
    result.trs = std::make_shared<Trs>(std::move(sorts), std::move(symbols), std::move(rules));
  } catch (const TrsError& e) {
    result.diagnostics.push_back(Diagnostic{path, 0, 0, e.what()});
  }
  return result;
}

TermParse parse_term(std::string_view text, const Trs& signature, const std::string& path,
                     const std::map<std::string, TypePtr>* vars) {
  TermParse result;
  Parser parser(text, path);
  STermPtr surface = parser.parse_standalone_term();
  result.diagnostics = std::move(parser.diagnostics());
  if (!surface) return result;

  Elaborator elab(path, result.diagnostics);
  for (const auto& s : signature.sorts()) elab.sort_names_.insert(s);
  std::map<std::string, SymbolPtr> by_name;
  for (const auto& sym : signature.symbols()) by_name.emplace(sym->name, sym);
  std::map<std::string, TypePtr> env;
  if (vars) env = *vars;
  TermPtr term = elab.elaborate_term(*surface, nullptr, env, by_name);
  if (!result.diagnostics.empty()) return result;
  result.term = term;
  return result;
}

// ---------------------------------------------------------------------------
// Printing

std::string print_type(const TypePtr& ty) {
  if (ty->is_base()) return ty->sort();
  std::string dom = print_type(ty->domain());
  if (ty->domain()->is_arrow()) dom = "(" + dom + ")";
  return dom + " => " + print_type(ty->codomain());
}

std::string print_decl(const TypeDecl& decl) {
  if (decl.arity() == 0) return print_type(decl.result_type);
  std::string out = "[";
  for (size_t i = 0; i < decl.arg_types.size(); ++i) {
    if (i) out += " * ";
    std::string ty = print_type(decl.arg_types[i]);
    if (decl.arg_types[i]->is_arrow()) ty = "(" + ty + ")";
    out += ty;
  }
  out += "] => " + print_type(decl.result_type);
  return out;
}

namespace {

// Precedence levels: lambda bodies bind weakest, then infix '::', then
// application; atoms need no parentheses.
enum Prec { PrecLambda = 0, PrecCons = 1, PrecApp = 2, PrecAtom = 3 };

void print_rec(const TermPtr& t, int prec, std::vector<std::pair<std::string, std::string>>& scope,
               std::string& out);

void print_child(const TermPtr& t, int prec,
                 std::vector<std::pair<std::string, std::string>>& scope, std::string& out) {
  print_rec(t, prec, scope, out);
}

std::string scoped_name(const std::vector<std::pair<std::string, std::string>>& scope,
                        const std::string& name) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it)
    if (it->first == name) return it->second;
  return name;
}

void print_rec(const TermPtr& t, int prec, std::vector<std::pair<std::string, std::string>>& scope,
               std::string& out) {
  switch (t->kind()) {
    case TermKind::Var:
      out += scoped_name(scope, t->as_var().name);
      return;
    case TermKind::FunApp: {
      const auto& f = t->as_fun_app();
      if (f.symbol->name == "::" && f.args.size() == 2) {
        bool parens = prec > PrecCons;
        if (parens) out += "(";
        print_child(f.args[0], PrecApp, scope, out);
        out += " :: ";
        print_child(f.args[1], PrecCons, scope, out);
        if (parens) out += ")";
        return;
      }
      out += f.symbol->name;
      if (!f.args.empty()) {
        out += "(";
        for (size_t i = 0; i < f.args.size(); ++i) {
          if (i) out += ", ";
          print_child(f.args[i], PrecLambda, scope, out);
        }
        out += ")";
      }
      return;
    }
    case TermKind::App: {
      bool parens = prec > PrecApp;
      if (parens) out += "(";
      print_child(t->as_app().fun, PrecApp, scope, out);
      out += " ";
      print_child(t->as_app().arg, PrecAtom, scope, out);
      if (parens) out += ")";
      return;
    }
    case TermKind::Abs: {
      const auto& a = t->as_abs();
      bool parens = prec > PrecLambda;
      // Choose a printed binder name that cannot capture free variables of
      // the body (after applying enclosing renamings).
      std::vector<std::string> avoid;
      for (const auto& [v, ty] : a.body->free_vars())
        if (v != a.binder) avoid.push_back(scoped_name(scope, v));
      std::string printed = fresh_name(a.binder, avoid);
      if (parens) out += "(";
      out += "\\" + printed + ":" + print_type(a.binder_type) + ". ";
      scope.emplace_back(a.binder, printed);
      print_child(a.body, PrecLambda, scope, out);
      scope.pop_back();
      if (parens) out += ")";
      return;
    }
  }
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::string out;
  std::vector<std::pair<std::string, std::string>> scope;
  print_rec(t, PrecLambda, scope, out);
  return out;
}

std::string print_trs(const Trs& trs) {
  std::ostringstream os;
  for (const auto& s : trs.sorts()) os << "sort " << s << ";\n";
  os << "\n";
  // Declaration order is preserved so re-parsing assigns the same indices.
  for (const auto& sym : trs.symbols())
    os << (sym->kind == SymbolKind::Constructor ? "cons " : "fun ") << sym->name << " : "
       << print_decl(sym->decl) << ";\n";
  os << "\n";
  for (const auto& rule : trs.rules())
    os << "rule " << print_term(rule.lhs) << " -> " << print_term(rule.rhs) << ";\n";
  return os.str();
}

}  // namespace consfree
