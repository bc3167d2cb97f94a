#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "consfree/interpreter.hpp"
#include "consfree/trs.hpp"

namespace consfree {

/// Deterministic generator state (splitmix64).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t next();
  /// Uniform-ish value in [0, n).
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  /// True with probability num/den.
  bool chance(uint64_t num, uint64_t den) { return below(den) < num; }

 private:
  uint64_t state_;
};

struct GenParams {
  uint64_t seed = 1;
  int max_symbols = 4;  // per role: constructors per sort / defined symbols
  int max_rules = 16;
  int max_depth = 5;
  int max_arity = 2;
};

/// A first-order constructor TRS that is cons-free and orthogonal by
/// construction: rhss are built from lhs variables, lhs subterms, small data
/// terms and defined-symbol calls; lhs patterns split on the head of the
/// first argument.
TrsPtr gen_object_trs(const GenParams& params);

/// A basic ground start term f(d1,...,dn) with data arguments of depth at
/// most max_depth.
TermPtr gen_start_term(const Trs& trs, const GenParams& params, uint64_t salt);

enum class Verdict { Agree, Disagree, BothFuelExhausted, OracleOnlyExhausted, InterpOnlyExhausted };

std::string verdict_name(Verdict v);

struct DiffCase {
  std::string id;
  TrsPtr trs;
  TermPtr start;
  // oracle outcome
  bool oracle_exhausted = false;
  bool oracle_data = false;
  TermPtr oracle_nf;  // null when exhausted
  long long oracle_steps = 0;
  // interpreter outcome
  InterpretStatus interp_status = InterpretStatus::FuelExhausted;
  TermPtr interp_data;
  long long interp_steps = 0;
  std::string error;  // unexpected failure text (counts as Disagree)
  Verdict verdict = Verdict::Disagree;
};

struct DiffParams {
  uint64_t seed = 42;
  int cases = 100;
  long long fuel_oracle = 100'000;
  long long fuel_interp = 10'000'000;
  bool assert_b_safe = false;
  bool include_corpus = true;
  GenParams gen;
};

struct DiffReport {
  DiffParams params;
  std::vector<DiffCase> cases;
  int agree = 0;
  int disagree = 0;
  int inconclusive = 0;
  long long b_safety_violations = 0;

  /// Byte-stable text rendering (no wall-clock content).
  std::string render() const;
};

/// Runs the golden corpus (when enabled) plus `cases` generated systems.
/// Cases are independent and may execute on multiple threads; the report is
/// assembled in case order either way.
DiffReport difftest(const DiffParams& params);

struct CorpusEntry {
  std::string name;
  std::string source;                // .trs text
  std::vector<std::string> starts;   // start terms in concrete syntax
};

/// Five hand-written systems with data normal forms.
const std::vector<CorpusEntry>& golden_corpus();

/// Five systems whose picked starts have normal forms that are not data
/// terms; the interpreter must answer bottom on each.
const std::vector<CorpusEntry>& bottom_corpus();

}  // namespace consfree
