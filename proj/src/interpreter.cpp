#include "consfree/interpreter.hpp"

#include "consfree/analysis.hpp"
#include "consfree/syntax.hpp"

namespace consfree {

// The interpreter operates on pairs (encoded term, substitution): the
// substitution is a function value of type bitstring => term mapping encoded
// variable indices to data-term encodings, or to bot for normal forms that
// are not data terms. Matching a rule produces the extended substitution in
// one pass; applying rhd to it distinguishes success (bot) from failure
// (Var(rhd), which encodes no term since variable numbers start at 1).
//
// Because the system is cons-free it can never assemble result terms; data
// normal forms are instead located by equality search among the encodings
// already present: the start term's arguments (bs) and the rule right-hand
// sides. A head that drives some rule cannot occur in a data normal form, so
// the search answers bot for such heads without scanning.
const std::string& q_source() {
  static const std::string source = R"(sort bitstring;
sort term;
sort termlist;
sort rules;
sort bool;

cons 0 : [bitstring] => bitstring;
cons 1 : [bitstring] => bitstring;
cons rhd : bitstring;
cons [] : termlist;
cons :: : [term * termlist] => termlist;
cons Var : [bitstring] => term;
cons Fun : [bitstring * termlist] => term;
cons bot : term;
cons empty : rules;
cons Rule : [term * term * rules] => rules;
cons true : bool;
cons false : bool;

fun normalform : [rules * term] => term;
fun normalise : [term * (bitstring => term) * rules * termlist] => term;
fun findrule : [term * (bitstring => term) * rules * rules * termlist] => term;
fun test : [(bitstring => term) * term * (bitstring => term) * term * term * rules * rules * termlist] => term;
fun test2 : [term * (bitstring => term) * term * (bitstring => term) * term * term * rules * rules * termlist] => term;
fun eqbits : [bitstring * bitstring] => bool;
fun eqsubst : [term * (bitstring => term) * term] => bool;
fun eqcheck : [bool * termlist * (bitstring => term) * termlist] => bool;
fun substitute : [term * (bitstring => term) * termlist * rules] => term;
fun subst : [term * (bitstring => term) * termlist] => term;
fun subst2 : [bool * term * term * (bitstring => term) * termlist] => term;
fun subst3 : [term * term * (bitstring => term) * termlist] => term;
fun substcheckbs : [term * term * (bitstring => term) * rules] => term;
fun consterm : [term * (bitstring => term) * rules * rules] => term;
fun consterm2 : [bool * term * (bitstring => term) * rules * rules] => term;
fun substR : [term * (bitstring => term) * rules] => term;
fun substR2 : [term * term * (bitstring => term) * rules] => term;
fun substT : [term * (bitstring => term) * term] => term;
fun substT2 : [bool * term * (bitstring => term) * term] => term;
fun match : [term * (bitstring => term) * term * (bitstring => term) * rules * termlist] => (bitstring => term);
fun matchcheck : [bool * termlist * (bitstring => term) * termlist * (bitstring => term) * rules * termlist] => (bitstring => term);
fun matchall : [termlist * (bitstring => term) * termlist * (bitstring => term) * rules * termlist] => (bitstring => term);
fun instantiate : [term * term * (bitstring => term)] => (bitstring => term);
fun install : [bool * termlist * termlist * (bitstring => term)] => (bitstring => term);
fun ifelse : [bool * term * term] => term;

-- rule lookup; the full rule list and the start arguments ride along
rule normalform(R, Fun(f, args)) -> normalise(Fun(f, args), \x:bitstring. bot, R, args);
rule normalise(Var(x), gamma, R, bs) -> gamma x;
rule normalise(Fun(f, args), gamma, R, bs) -> findrule(Fun(f, args), gamma, R, R, bs);
rule findrule(w, gamma, empty, R, bs) -> substitute(w, gamma, bs, R);
rule findrule(w, gamma, Rule(l, r, tl), R, bs) -> test(match(w, gamma, l, \x:bitstring. bot, R, bs), w, gamma, l, r, tl, R, bs);
rule test(delta, w, gamma, l, r, tl, R, bs) -> test2(delta rhd, delta, w, gamma, l, r, tl, R, bs);
rule test2(bot, delta, w, gamma, l, r, tl, R, bs) -> normalise(r, delta, R, bs);
rule test2(Var(rhd), delta, w, gamma, l, r, tl, R, bs) -> findrule(w, gamma, tl, R, bs);

-- bitstring equality
rule eqbits(rhd, rhd) -> true;
rule eqbits(rhd, 0(ys)) -> false;
rule eqbits(rhd, 1(ys)) -> false;
rule eqbits(0(xs), rhd) -> false;
rule eqbits(1(xs), rhd) -> false;
rule eqbits(0(xs), 0(ys)) -> eqbits(xs, ys);
rule eqbits(1(xs), 1(ys)) -> eqbits(xs, ys);
rule eqbits(0(xs), 1(ys)) -> false;
rule eqbits(1(xs), 0(ys)) -> false;

-- does w gamma equal the candidate term t?
rule eqsubst(Var(x), gamma, t) -> eqsubst(gamma x, \y:bitstring. bot, t);
rule eqsubst(bot, gamma, t) -> false;
rule eqsubst(Fun(f, as), gamma, Var(y)) -> false;
rule eqsubst(Fun(f, as), gamma, Fun(g, bs)) -> eqcheck(eqbits(f, g), as, gamma, bs);
rule eqcheck(false, as, gamma, bs) -> false;
rule eqcheck(true, [], gamma, []) -> true;
rule eqcheck(true, s :: ss, gamma, t :: ts) -> eqcheck(eqsubst(s, gamma, t), ss, gamma, ts);

-- locate the data normal form among the start arguments, then among the
-- rule right-hand sides; bot when it is not a data term
rule substitute(w, gamma, bs, R) -> substcheckbs(subst(w, gamma, bs), w, gamma, R);
rule subst(w, gamma, []) -> bot;
rule subst(w, gamma, b :: bs) -> subst2(eqsubst(w, gamma, b), b, w, gamma, bs);
rule subst2(true, b, w, gamma, bs) -> b;
rule subst2(false, Fun(f, as), w, gamma, bs) -> subst3(subst(w, gamma, as), w, gamma, bs);
rule subst2(false, Var(y), w, gamma, bs) -> subst(w, gamma, bs);
rule subst3(bot, w, gamma, bs) -> subst(w, gamma, bs);
rule subst3(Fun(f, as), w, gamma, bs) -> Fun(f, as);
rule substcheckbs(Fun(f, as), w, gamma, R) -> Fun(f, as);
rule substcheckbs(bot, w, gamma, R) -> consterm(w, gamma, R, R);

-- a head that drives some rule cannot head a data normal form
rule consterm(w, gamma, empty, R) -> substR(w, gamma, R);
rule consterm(Fun(f, as), gamma, Rule(Fun(g, ls), r, tl), R) -> consterm2(eqbits(f, g), Fun(f, as), gamma, tl, R);
rule consterm2(true, w, gamma, tl, R) -> bot;
rule consterm2(false, w, gamma, tl, R) -> consterm(w, gamma, tl, R);

rule substR(w, gamma, empty) -> bot;
rule substR(w, gamma, Rule(l, r, tl)) -> substR2(substT(w, gamma, r), w, gamma, tl);
rule substR2(bot, w, gamma, tl) -> substR(w, gamma, tl);
rule substR2(Fun(f, as), w, gamma, tl) -> Fun(f, as);
rule substT(w, gamma, Var(y)) -> bot;
rule substT(w, gamma, Fun(g, ts)) -> substT2(eqsubst(w, gamma, Fun(g, ts)), w, gamma, Fun(g, ts));
rule substT2(true, w, gamma, Fun(g, ts)) -> Fun(g, ts);
rule substT2(false, w, gamma, Fun(g, ts)) -> subst(w, gamma, ts);

-- match w gamma against a lhs pattern, extending delta variable by variable
rule match(Fun(f, ss), gamma, Fun(g, ts), delta, R, bs) -> matchcheck(eqbits(f, g), ss, gamma, ts, delta, R, bs);
rule matchcheck(false, ss, gamma, ts, delta, R, bs) -> \x:bitstring. Var(rhd);
rule matchcheck(true, ss, gamma, ts, delta, R, bs) -> matchall(ss, gamma, ts, delta, R, bs);
rule matchall([], gamma, [], delta, R, bs) -> delta;
rule matchall(s :: ss, gamma, t :: ts, delta, R, bs) -> matchall(ss, gamma, ts, instantiate(normalise(s, gamma, R, bs), t, delta), R, bs);
rule instantiate(w, Var(y), delta) -> \x:bitstring. ifelse(eqbits(x, y), w, delta x);
rule instantiate(bot, Fun(g, ts), delta) -> \x:bitstring. Var(rhd);
rule instantiate(Fun(f, ss), Fun(g, ts), delta) -> install(eqbits(f, g), ss, ts, delta);
rule install(false, ss, ts, delta) -> \x:bitstring. Var(rhd);
rule install(true, [], [], delta) -> delta;
rule install(true, s :: ss, t :: ts, delta) -> install(true, ss, ts, instantiate(s, t, delta));
rule ifelse(true, x, y) -> x;
rule ifelse(false, x, y) -> y;
)";
  return source;
}

namespace {

QProgram build_q() {
  TrsParse parse = parse_trs(q_source(), "<interpreter>");
  if (!parse.ok()) {
    std::string message = "interpreter program failed to parse:";
    for (const auto& d : parse.diagnostics) message += "\n  " + d.render();
    throw std::logic_error(message);
  }
  QProgram q;
  q.trs = parse.trs;
  q.sig = InterpreterSignature::from_trs(parse.trs);
  q.normalform = parse.trs->find_symbol("normalform");
  if (!q.normalform || q.normalform->kind != SymbolKind::Defined)
    throw std::logic_error("interpreter program lacks the start symbol");
  return q;
}

}  // namespace

const QProgram& q_program() {
  static const QProgram q = build_q();
  return q;
}

TermPtr build_interpretation_term(const TrsPtr& object, const TermPtr& start) {
  const QProgram& q = q_program();
  SymbolTable table(object);
  TermPtr encoded_rules = encode_trs(q.sig, table);
  TermPtr encoded_start = encode_term(q.sig, start, table);
  return Term::fun_app(q.normalform, {encoded_rules, encoded_start});
}

namespace {

bool is_basic_start(const TrsPtr& object, const TermPtr& start) {
  if (start->kind() != TermKind::FunApp) return false;
  const auto& f = start->as_fun_app();
  if (f.symbol->kind != SymbolKind::Defined) return false;
  if (object->find_symbol(f.symbol->name) != f.symbol) return false;
  for (const auto& a : f.args)
    if (!a->is_data()) return false;
  return true;
}

}  // namespace

InterpretResult interpret(const TrsPtr& object, const TermPtr& start,
                          const InterpretOptions& opts) {
  if (!object->is_first_order())
    throw PreconditionFailure("object system is not first-order");
  if (!check_cons_free(*object).passed)
    throw PreconditionFailure("object system is not cons-free");
  if (!check_orthogonal(*object).passed)
    throw PreconditionFailure("object system is not orthogonal");
  if (!is_basic_start(object, start))
    throw PreconditionFailure(
        "start term must be a defined symbol of the object system applied to data terms");

  const QProgram& q = q_program();
  SymbolTable table(object);
  TermPtr goal = build_interpretation_term(object, start);

  NormalizeOptions nopts;
  nopts.fuel = opts.fuel;
  nopts.observer = opts.observer;
  BSet b;
  if (opts.assert_b_safe) {
    b = compute_B(goal, *q.trs);
    nopts.b_check = &b;
  }
  NormalizeResult run = normalize(*q.trs, goal, nopts);

  InterpretResult result;
  result.steps = run.steps;
  if (run.status == FinalStatus::FuelExhausted) {
    result.status = InterpretStatus::FuelExhausted;
    return result;
  }
  DecodeResult decoded;
  try {
    decoded = decode_term(q.sig, run.final_term, table);
  } catch (const EncodingError& e) {
    throw MalformedOutput(std::string("interpreter produced an undecodable result: ") + e.what());
  }
  if (decoded.is_bottom) {
    result.status = InterpretStatus::Bottom;
    return result;
  }
  // The encoding cannot record which symbols were declared defined but head
  // no rule; such heads behave like constructors inside the interpreter. A
  // decoded result that is not a data term of the declared signature means
  // the object normal form is not data.
  if (!decoded.term->is_data()) {
    result.status = InterpretStatus::Bottom;
    return result;
  }
  result.status = InterpretStatus::Data;
  result.data = decoded.term;
  return result;
}

}  // namespace consfree
