#pragma once

// Deliberately broken backends. Each one violates at least one law of the
// suite; the law checker must catch it with a concrete witness.

#include "sllam/coh.hpp"
#include "sllam/strict.hpp"

namespace sllam::mutants {

/// c_N(n) = (n, 0): not commutative.
class StrictCopy : public StrictBackend {
 public:
  std::string name() const override { return "strict-copy-mutant"; }
  M cN() const override {
    SemObject n = SemObject::nat();
    return strict(n, SemObject::tensor(n, n), "cN*",
                  [](const StrictElem& x) { return StrictElem::pair(x, StrictElem::nat(0)); });
  }
};

/// p(n) = up(n + 1): dereliction no longer undoes promotion.
class StrictPromote : public StrictBackend {
 public:
  std::string name() const override { return "strict-promote-mutant"; }
  M p() const override {
    return strict(SemObject::nat(), SemObject::bang(SemObject::nat()), "p*", [](const StrictElem& x) {
      return StrictElem::up(StrictElem::nat(x.value() + 1));
    });
  }
};

/// d(x) = x ⊗ {∅}: breaks the counit of (!A, d, e).
class CohCopy : public CohBackend {
 public:
  std::string name() const override { return "coh-copy-mutant"; }
  M d(const SemObject& a) const override {
    SemObject ba = SemObject::bang(a);
    return linear(ba, SemObject::tensor(ba, ba), "d*", [](const Clique& x) {
      return Clique::rect(x, Clique::singleton(Token::set({})));
    });
  }
};

}  // namespace sllam::mutants
