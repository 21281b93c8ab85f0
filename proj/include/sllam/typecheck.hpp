#pragma once

// Syntax-directed type checking that elaborates into declarative derivation
// trees. Every node of a Derivation is an instance of one typing rule, with
// exchange, weakening and contraction made explicit.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sllam/syntax.hpp"

namespace sllam {

enum class Rule {
  Zero,     // (z)
  Succ,     // (s)
  Pred,     // (p)
  LIf,      // (lif)
  Exchange, // (ex)
  GroundVar,       // (gv)
  GroundWeaken,    // (gw)
  GroundContract,  // (gc)
  HigherVar,       // (hv)
  App,             // (ap)
  Lam,             // (lambda)
  StableVar,       // (sv)
  StableContract,  // (sc)
  StableWeaken,    // (sw)
  Mu,              // (mu)
  // ILL extension
  Promote,   // (pr_iota)
  Discard,   // (ds_iota), also at !iota
  Copy,      // (cp_iota), also at !iota
  Derelict,
};

const char* rule_tag(Rule r);

class Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

class Derivation {
 public:
  Derivation(Rule rule, Basis basis, Term term, Type type, std::vector<DerivationPtr> premises,
             std::size_t swap_index = 0)
      : rule_(rule),
        basis_(std::move(basis)),
        term_(std::move(term)),
        type_(std::move(type)),
        premises_(std::move(premises)),
        swap_index_(swap_index) {}

  Rule rule() const { return rule_; }
  const Basis& basis() const { return basis_; }
  const Term& term() const { return term_; }
  const Type& type() const { return type_; }
  const std::vector<DerivationPtr>& premises() const { return premises_; }
  const Derivation& premise(std::size_t i) const { return *premises_.at(i); }
  /// For (ex): the conclusion swaps positions i and i+1 of the premise basis.
  std::size_t swap_index() const { return swap_index_; }

  std::size_t node_count() const;

 private:
  Rule rule_;
  Basis basis_;
  Term term_;
  Type type_;
  std::vector<DerivationPtr> premises_;
  std::size_t swap_index_;
};

class TypeError : public std::runtime_error {
 public:
  enum class Code {
    UnboundVariable,
    KindMismatch,
    NotAFunction,
    ArgTypeMismatch,
    LinearVariableUnused,
    LinearVariableReused,
    BranchLinearityMismatch,
    MuBodyHasLinearFreeVars,
    ConditionNotGround,
    BranchNotGround,
    TypeMismatch,
    IllFormedBasis,
    ExtensionDisabled,
    NoTypingRule,
  };

  TypeError(Code code, std::string explanation, std::optional<Term> at = std::nullopt);

  Code code() const { return code_; }
  const std::string& explanation() const { return explanation_; }
  const std::optional<Term>& subterm() const { return at_; }

 private:
  Code code_;
  std::string explanation_;
  std::optional<Term> at_;
};

const char* to_string(TypeError::Code c);

enum class TypingMode { Core, Extended };

/// Choices that are free in the declarative system. `Canonical` is what the
/// interpreter uses; `Alternative` exists so tests can compare two
/// elaborations of the same judgment.
enum class ElabCanon { Canonical, Alternative };

struct TypingOptions {
  TypingMode mode = TypingMode::Core;
  ElabCanon canon = ElabCanon::Canonical;
};

struct Typing {
  Type type;
  DerivationPtr derivation;
};

/// Conclusion basis of the returned derivation is exactly `basis`.
Typing infer(const Basis& basis, const Term& t, const TypingOptions& opts = {});
DerivationPtr check(const Basis& basis, const Term& t, const Type& claimed,
                    const TypingOptions& opts = {});

struct ValidationReport {
  bool ok = true;
  std::string failure;  // first failing node and reason
  explicit operator bool() const { return ok; }
};

ValidationReport validate_derivation(const Derivation& d, TypingMode mode = TypingMode::Core);

/// Nested rule-tag records, one node per line, two-space indentation.
std::string serialize(const Derivation& d);

}  // namespace sllam
