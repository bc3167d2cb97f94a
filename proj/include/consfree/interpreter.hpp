#pragma once

#include <stdexcept>
#include <string>

#include "consfree/encoding.hpp"
#include "consfree/engine.hpp"
#include "consfree/trs.hpp"

namespace consfree {

/// The second-order interpreter system: cons-free, orthogonal, type order 2.
/// Evaluating normalform(<R>, <w>) under it with the weak-innermost strategy
/// yields <nf(w)> when the object normal form is a data term, bot otherwise.
struct QProgram {
  TrsPtr trs;
  InterpreterSignature sig;
  SymbolPtr normalform;
};

/// Source text of the interpreter system in the .trs concrete syntax.
const std::string& q_source();

/// The parsed and validated interpreter program (built once).
const QProgram& q_program();

struct PreconditionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedOutput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InterpretStatus { Data, Bottom, FuelExhausted };

struct InterpretResult {
  InterpretStatus status = InterpretStatus::Bottom;
  TermPtr data;  // object-signature data term when status == Data
  long long steps = 0;
};

struct InterpretOptions {
  long long fuel = 10'000'000;
  bool assert_b_safe = false;
  StepObserver observer;
};

/// Encodes the object system and start term, normalizes under the
/// interpreter program, and decodes the result. The object system must be a
/// first-order cons-free orthogonal constructor TRS and the start term a
/// basic ground term f(d1,...,dn) with every di a data term; anything else
/// raises PreconditionFailure.
InterpretResult interpret(const TrsPtr& object, const TermPtr& start,
                          const InterpretOptions& opts = {});

/// The term normalform(<object>, <start>) over the interpreter signature.
TermPtr build_interpretation_term(const TrsPtr& object, const TermPtr& start);

}  // namespace consfree
