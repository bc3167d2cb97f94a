#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "consfree/analysis.hpp"
#include "consfree/trs.hpp"

namespace consfree {

/// Path from the root: 1-based child indices. FunApp children are the
/// arguments; App children are 1 (function) and 2 (argument).
using Position = std::vector<int>;

std::string print_position(const Position& pos);

/// Rule index 0 marks a beta step in traces; rules are 1-based.
inline constexpr int kBetaStep = 0;

/// Syntactic matching of a lhs pattern against a subject. Variables
/// (including functional-type ones) bind whole subterms; repeated pattern
/// variables require alpha-equal subjects.
std::optional<Subst> match_pattern(const TermPtr& pattern, const TermPtr& subject);

/// Leftmost-innermost permitted redex under the weak-innermost strategy:
/// no positions below abstractions; a function application is a redex only
/// when all arguments are weak normal forms and some rule matches; a beta
/// redex fires only when its argument is a weak normal form. Returns nothing
/// iff t is a weak normal form.
std::optional<Position> pick_redex(const TermPtr& t, const Trs& trs);

/// One step at the picked redex (first matching rule in rule-list order, or
/// the beta contraction). Nothing iff t is a weak normal form.
std::optional<TermPtr> rewrite_step(const Trs& trs, const TermPtr& t);

struct TraceStep {
  TermPtr term;  // term after the step
  Position position;
  int rule_index = kBetaStep;
};

enum class FinalStatus { NormalForm, FuelExhausted };

struct Trace {
  TermPtr initial;
  std::vector<TraceStep> steps;
  FinalStatus final_status = FinalStatus::NormalForm;

  /// Line-oriented export: `step#  rule=<idx|beta>  pos=<path>  term=<printed>`.
  std::string render() const;
};

struct BSafetyViolation : std::runtime_error {
  explicit BSafetyViolation(std::string term_text)
      : std::runtime_error("B-safety violation at term: " + term_text) {}
};

/// Called after each step with the redex details and the new whole term.
using StepObserver = std::function<void(const TermPtr& before, const Position& pos,
                                        int rule_index, const Subst& bindings,
                                        const TermPtr& after)>;

struct NormalizeOptions {
  long long fuel = 10'000'000;
  bool keep_trace = false;
  size_t trace_cap = 100'000;      // recorded steps in keep_trace mode
  const BSet* b_check = nullptr;  // assert B-safety after every step
  StepObserver observer;          // optional instrumentation
};

struct NormalizeResult {
  FinalStatus status = FinalStatus::NormalForm;
  TermPtr final_term;
  long long steps = 0;
  Trace trace;  // populated when keep_trace was set
};

/// Iterates rewrite steps up to the fuel bound. Throws BSafetyViolation when
/// a b_check set is given and a step leaves it.
NormalizeResult normalize(const Trs& trs, const TermPtr& start,
                          const NormalizeOptions& opts = {});

}  // namespace consfree
