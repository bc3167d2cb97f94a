#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "consfree/trs.hpp"

namespace consfree {

struct Violation {
  int rule_index = 0;  // 0 when the violation is not tied to a rule pair
  TermPtr subterm;     // may be null
  std::string reason;
};

struct CheckReport {
  bool passed = true;
  std::vector<Violation> violations;

  std::string render_text(const std::string& title) const;
  /// Tab-separated, one violation per line: ruleIndex, reason, printed subterm.
  std::string render_machine(const std::string& tag) const;
};

/// A rule is cons-free when every constructor-headed subterm of its rhs is a
/// subterm of the lhs or a data term. The system-level check also requires
/// left-linearity of every lhs.
CheckReport check_cons_free(const Trs& trs);

/// No variable occurs twice in the lhs.
bool check_left_linear(const Rule& rule);

/// Left-linear and no two rules have unifiable lhss (after renaming apart).
/// For constructor systems this is a sufficient condition for confluence.
CheckReport check_orthogonal(const Trs& trs);

/// First-order syntactic unification of two lhs patterns (variables treated
/// alike regardless of type order). Returns a unifier when one exists.
std::optional<Subst> unify_patterns(const TermPtr& a, const TermPtr& b);

/// Deduplicated set of data terms, closed under subterms.
class BSet {
 public:
  void insert(const TermPtr& t);
  bool contains(const TermPtr& t) const;
  size_t size() const { return elems_.size(); }
  /// Elements in a deterministic order (by printed size/hash).
  std::vector<TermPtr> elements() const;
  uint64_t id() const { return id_; }

  BSet();

 private:
  struct Hash {
    size_t operator()(const TermPtr& t) const { return t->hash(); }
  };
  struct Eq {
    bool operator()(const TermPtr& a, const TermPtr& b) const { return term_eq(a, b); }
  };
  std::unordered_set<TermPtr, Hash, Eq> elems_;
  uint64_t id_;
};

/// All data terms occurring as subterms of `start` or of some rule rhs.
/// The result is closed under subterms.
BSet compute_B(const TermPtr& start, const Trs& trs);

/// Every constructor-headed subterm of t (including under binders) is an
/// element of b.
bool check_B_safe(const TermPtr& t, const BSet& b);

}  // namespace consfree
