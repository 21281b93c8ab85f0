#pragma once

// Contextual reduction: redex sites, single steps, strategies, bounded
// normalization and a semi-decision probe for local confluence.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sllam/syntax.hpp"

namespace sllam {

enum class RuleTag {
  BetaHigher,
  BetaIota,
  Y,
  DeltaPredSucc,
  DeltaIfZero,
  DeltaIfSucc,
  // extension rewrites
  DiscardSucc,
  DiscardZero,
  CopySucc,
  CopyZero,
  PromoteComonoidDiscard,
  PromoteComonoidCopy,
  DerelictPromote,
  PromotePromote,
};

const char* to_string(RuleTag t);
bool is_extension_rule(RuleTag t);

using Path = std::vector<std::size_t>;
std::string path_string(const Path& p);  // "." for the root, otherwise "0.1.2"

struct RedexSite {
  Path path;
  RuleTag tag = RuleTag::BetaHigher;
  bool operator==(const RedexSite&) const = default;
};

class InvalidSite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The rule whose left-hand side matches `t` at its root, if any.
std::optional<RuleTag> redex_at_root(const Term& t);

/// All sites in leftmost-outermost (pre-order) order.
std::vector<RedexSite> find_redexes(const Term& t);

Term step_at(const Term& t, const RedexSite& site);

/// True when the path does not descend into the body of a lambda or mu.
bool is_weak_position(const Term& t, const Path& p);

struct Strategy {
  enum class Kind { Leftmost, Random } kind = Kind::Leftmost;
  std::uint64_t seed = 0;

  static Strategy leftmost() { return {}; }
  static Strategy random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

/// Leftmost: the leftmost-outermost redex in weak position, otherwise the
/// leftmost-outermost redex anywhere.
std::optional<RedexSite> leftmost_site(const Term& t);

struct TraceStep {
  RedexSite site;
  Term result;
};

struct NormalizeResult {
  Term term;
  std::size_t steps = 0;
  bool exhausted = false;
  std::vector<TraceStep> trace;  // filled when requested
};

NormalizeResult normalize(const Term& t, Strategy strategy, std::size_t fuel,
                          bool record_trace = false);

/// `path  rule-tag  term`, one line per step.
std::string format_trace(const std::vector<TraceStep>& trace);

struct JoinReport {
  bool joined = false;
  bool exhausted = false;
  std::optional<Term> witness;
  RedexSite left_site, right_site;
  Term left = Term::zero();
  Term right = Term::zero();
  std::size_t explored = 0;
};

/// Requires at least two redexes; throws std::invalid_argument otherwise.
JoinReport join_probe(const Term& t, std::size_t fuel, std::uint64_t seed);

}  // namespace sllam
