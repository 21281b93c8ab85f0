#pragma once

// Entry points for the linear-logic extension: promote!, discard, copy and
// derelict at ground type. The machinery lives in typecheck, reduce and
// interpret behind the extension mode; these wrappers fix the mode.

#include <vector>

#include "sllam/interpret.hpp"
#include "sllam/reduce.hpp"
#include "sllam/typecheck.hpp"

namespace sllam {

/// The extension's rewrites are the RuleTag values from DiscardSucc on.
using ExtRuleTag = RuleTag;

const std::vector<ExtRuleTag>& ext_rule_tags();

Typing infer_ext(const Basis& basis, const Term& t);

/// Fires an extension rewrite; throws InvalidSite for core tags or a mismatch.
Term step_ext(const Term& t, const RedexSite& site);

template <class E>
Morphism<E> denote_ext(const Derivation& d, const Backend<E>& b) {
  return interpret(d, b);
}

}  // namespace sllam
