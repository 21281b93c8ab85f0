#pragma once

// Law catalogue and theorem harness: category laws per backend, the
// substitution lemma, soundness of reduction, the incompleteness witness,
// and a typed term generator.

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sllam/interpret.hpp"
#include "sllam/parser.hpp"
#include "sllam/reduce.hpp"
#include "sllam/typecheck.hpp"

namespace sllam {

class GenerationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  bool ext = false;  // emit promote!/discard/copy/derelict
};

/// Well-typed term of type `sigma` under `basis`; every Higher entry is used
/// exactly once. Retries with derived seeds, then throws GenerationFailed.
Term gen_term(const Basis& basis, const Type& sigma, std::size_t size, std::uint64_t seed,
              GenOptions opts = {});

enum class LawVerdict { Pass, Fail, Inconclusive };
const char* to_string(LawVerdict v);

struct LawReport {
  std::string law;
  std::string backend;
  std::size_t tried = 0;
  std::size_t skipped = 0;
  LawVerdict verdict = LawVerdict::Pass;
  std::string counterexample;
  std::string note;
  bool informational = false;  // never counts as a failure
};

/// True when no reduct of `a` (breadth-first, at most `fuel` terms per
/// side) is alpha-equal to a reduct of `b`. `complete` reports whether both
/// reduction graphs were exhausted within the fuel.
struct GraphSearch {
  bool joined = false;
  bool complete = false;
  std::size_t explored = 0;
};
GraphSearch common_reduct_search(const Term& a, const Term& b, std::size_t fuel);

namespace detail {

template <class E>
class LawRunner {
 public:
  using M = Morphism<E>;
  using Builder = std::function<std::pair<M, M>()>;

  LawRunner(Backend<E>& b, const ObsSpec& obs) : B(b), obs_(obs), sampler_(b, obs) {}

  void law(const std::string& name, const Builder& build) {
    LawReport& r = report(name);
    auto saved = B.fix_iterations();
    try {
      B.set_fix_iterations(obs_.k);
      auto lo = build();
      B.set_fix_iterations(2 * obs_.k);
      auto hi = build();
      B.set_fix_iterations(saved);
      Approximants<E> f{lo.first, hi.first}, g{lo.second, hi.second};
      auto eq = semantic_eq(f, g, sampler_, B.probes(lo.first.dom, obs_));
      r.tried += eq.probes;
      if (eq.skipped) {
        r.skipped += eq.skipped;
        r.note = std::to_string(r.skipped) + " probe(s) beyond the representable token cap";
      }
      if (r.verdict == LawVerdict::Fail) return;
      if (eq.verdict == Verdict::Distinct) {
        r.verdict = LawVerdict::Fail;
        r.counterexample = eq.witness + ": " + eq.left + " vs " + eq.right;
      } else if (eq.verdict == Verdict::Inconclusive && r.verdict == LawVerdict::Pass) {
        r.verdict = LawVerdict::Inconclusive;
        r.counterexample = eq.witness;
      }
    } catch (const BackendFailure& e) {
      B.set_fix_iterations(saved);
      r.verdict = LawVerdict::Fail;
      r.counterexample = std::string("backend failure: ") + e.what();
    }
  }

  std::vector<LawReport> reports() const { return reports_; }
  Sampler<E>& sampler() { return sampler_; }

 private:
  LawReport& report(const std::string& name) {
    for (auto& r : reports_)
      if (r.law == name) return r;
    reports_.push_back({name, B.name()});
    return reports_.back();
  }

  Backend<E>& B;
  ObsSpec obs_;
  Sampler<E> sampler_;
  std::vector<LawReport> reports_;
};

Term law_functional_body(std::size_t i);
std::size_t law_functional_count();

}  // namespace detail

template <class E>
std::vector<LawReport> law_suite(Backend<E>& B, const ObsSpec& obs) {
  using M = Morphism<E>;
  detail::LawRunner<E> run(B, obs);
  const SemObject N = SemObject::nat();
  const SemObject one = SemObject::unit();
  auto T = [](const SemObject& a, const SemObject& b) { return SemObject::tensor(a, b); };
  auto C = [&B](const M& g, const M& f) { return B.compose(g, f); };
  auto id = [&B](const SemObject& a) { return B.id(a); };
  const std::vector<SemObject> objects = {N, SemObject::arrow(N, N)};

  // (a) commutative comonoids (N, c_N, w_N) and (!A, d, e)
  auto comonoid = [&](const std::string& tag, const SemObject& X, std::function<M()> c,
                      std::function<M()> w) {
    run.law("comonoid-coassoc" + tag, [=, &B] {
      return std::pair{B.compose(B.assoc(X, X, X), B.compose(B.tensor(B.id(X), c()), c())),
                       B.compose(B.tensor(c(), B.id(X)), c())};
    });
    run.law("comonoid-counit" + tag, [=, &B] {
      return std::pair{B.compose(B.lunit(X), B.compose(B.tensor(w(), B.id(X)), c())), B.id(X)};
    });
    run.law("comonoid-counit-right" + tag, [=, &B] {
      return std::pair{B.compose(B.runit(X), B.compose(B.tensor(B.id(X), w()), c())), B.id(X)};
    });
    run.law("comonoid-commutative" + tag,
            [=, &B] { return std::pair{B.compose(B.sym(X, X), c()), c()}; });
  };
  comonoid("[N]", N, [&B] { return B.cN(); }, [&B] { return B.wN(); });
  for (const auto& A : objects)
    comonoid("[!" + A.str() + "]", SemObject::bang(A), [&B, A] { return B.d(A); },
             [&B, A] { return B.e(A); });

  // (b) zero and succ are comonoid morphisms
  run.law("zero-comonoid", [&] {
    return std::pair{C(B.cN(), B.zero()), C(B.tensor(B.zero(), B.zero()), B.lunit_inv(one))};
  });
  run.law("zero-discard", [&] { return std::pair{C(B.wN(), B.zero()), id(one)}; });
  run.law("succ-comonoid", [&] {
    return std::pair{C(B.cN(), B.succ()), C(B.tensor(B.succ(), B.succ()), B.cN())};
  });
  run.law("succ-discard", [&] { return std::pair{C(B.wN(), B.succ()), B.wN()}; });

  // (c) coalgebra structure and coalgebra morphisms
  run.law("p-coalgebra", [&] { return std::pair{C(B.bang(B.p()), B.p()), C(B.delta(N), B.p())}; });
  run.law("p-counit", [&] { return std::pair{C(B.epsilon(N), B.p()), id(N)}; });
  run.law("zero-coalgebra", [&] { return std::pair{C(B.p(), B.zero()), C(B.bang(B.zero()), B.q1())}; });
  run.law("succ-coalgebra", [&] { return std::pair{C(B.p(), B.succ()), C(B.bang(B.succ()), B.p())}; });

  // (d) p is a comonoid morphism
  run.law("p-comonoid", [&] {
    return std::pair{C(B.d(N), B.p()), C(B.tensor(B.p(), B.p()), B.cN())};
  });
  run.law("p-discard", [&] { return std::pair{C(B.e(N), B.p()), B.wN()}; });

  // (e) pred diagram
  for (std::uint64_t k = 0; k <= obs.s; ++k)
    run.law("pred-diagram", [&, k] { return std::pair{C(B.pred(), B.num(k + 1)), B.num(k)}; });

  // (f) lif diagram at sampled f, g : 1 → N
  auto omega = [&B] {
    return interpret(*infer({}, Term::mu("w", Type::ground(), Term::var("w", VarKind::Stable))).derivation,
                     B);
  };
  std::vector<std::function<M()>> points;
  for (std::uint64_t i = 0; i < 4; ++i) points.push_back([&B, i] { return B.num(i); });
  points.push_back(omega);
  for (const auto& f : points)
    for (const auto& g : points)
      for (std::uint64_t c : {std::uint64_t{0}, std::uint64_t{2}}) {
        run.law("lif-diagram", [&, f, g, c] {
          M chosen = c == 0 ? f() : g();
          M lhs = C(B.lif(), C(B.tensor(B.num(c), B.pair(f(), g())), B.lunit_inv(one)));
          return std::pair{lhs, chosen};
        });
      }

  // (g) fix diagram: fix = eval∘(ε ⊗ (!fix∘δ))∘d
  SemObject bn = SemObject::bang(N);
  SemObject X = SemObject::arrow(bn, N);
  SemObject bx = SemObject::bang(X);
  auto fix_rhs = [&B, N, X, bn, bx] {
    return B.compose(B.eval(bn, N),
                     B.compose(B.tensor(B.epsilon(X), B.compose(B.bang(B.fix(N)), B.delta(X))), B.d(X)));
  };
  run.law("fix-diagram", [&] { return std::pair{B.fix(N), fix_rhs()}; });
  for (std::size_t i = 0; i < detail::law_functional_count(); ++i) {
    run.law("fix-diagram", [&, i] {
      Basis fb{{"F", VarKind::Stable, Type::ground()}};
      M body = interpret(*check(fb, detail::law_functional_body(i), Type::ground()), B);
      M cur = B.curry(C(body, C(B.runit_inv(bn), B.lunit(bn))), one, bn);
      M phi = C(B.bang(cur), B.q1());
      return std::pair{C(B.fix(N), phi), C(fix_rhs(), phi)};
    });
  }

  // (h) comonad and monoidality
  for (const auto& A : objects) {
    SemObject ba = SemObject::bang(A);
    std::string tag = "[" + A.str() + "]";
    run.law("comonad-counit-left" + tag,
            [&, A, ba] { return std::pair{C(B.epsilon(ba), B.delta(A)), id(ba)}; });
    run.law("comonad-counit-right" + tag,
            [&, A, ba] { return std::pair{C(B.bang(B.epsilon(A)), B.delta(A)), id(ba)}; });
    run.law("comonad-coassoc" + tag, [&, A, ba] {
      return std::pair{C(B.delta(ba), B.delta(A)), C(B.bang(B.delta(A)), B.delta(A))};
    });
    run.law("q-counit" + tag, [&, A] {
      return std::pair{C(B.epsilon(T(N, A)), B.q(N, A)), B.tensor(B.epsilon(N), B.epsilon(A))};
    });
    run.law("q-delta" + tag, [&, A] {
      SemObject na = T(N, A);
      return std::pair{C(B.delta(na), B.q(N, A)),
                       C(B.bang(B.q(N, A)),
                         C(B.q(SemObject::bang(N), SemObject::bang(A)), B.tensor(B.delta(N), B.delta(A))))};
    });
    run.law("q-unit" + tag, [&, A, ba] {
      return std::pair{C(B.bang(B.lunit(A)), C(B.q(one, A), B.tensor(B.q1(), id(ba)))), B.lunit(ba)};
    });
    run.law("comonoid-coalgebra" + tag, [&, A, ba] {
      // d is a coalgebra morphism: (δ⊗δ) then q equals δ then !d
      return std::pair{C(B.q(ba, ba), C(B.tensor(B.delta(A), B.delta(A)), B.d(A))),
                       C(B.bang(B.d(A)), B.delta(A))};
    });
  }
  return run.reports();
}

enum class SubstCase { Ground, Higher, Stable };
const char* to_string(SubstCase c);

/// One instance of the semantic substitution lemma. `gamma` is the basis of
/// `m` and ends with the substituted variable; `n` is typed under `delta`
/// (for Ground, `n` is a numeral and `delta` is empty).
template <class E>
EqResult substitution_instance(SubstCase c, const Basis& gamma, const Term& m, const Type& tau,
                               const Basis& delta, const Term& n, Backend<E>& B,
                               Sampler<E>& sampler, std::uint64_t k) {
  using M = Morphism<E>;
  const auto& v = gamma[gamma.size() - 1];
  std::vector<BasisEntry> rest(gamma.begin(), gamma.end() - 1);
  Basis gp(rest);
  Term lhs_term = c == SubstCase::Ground    ? subst_ground(m, *numeral_of(n), v.name)
                  : c == SubstCase::Higher ? subst_higher(m, n, v.name)
                                           : subst_stable(m, n, v.name);
  TypingOptions opts;
  opts.mode = TypingMode::Extended;
  auto lhs_d = check(gp.concat(delta), lhs_term, tau, opts);
  auto m_d = check(gamma, m, tau, opts);
  DerivationPtr n_d;
  if (c != SubstCase::Ground) n_d = check(delta, n, v.type, opts);

  auto build = [&]() -> std::pair<M, M> {
    Interpreter<E> I(B);
    M kmor = c == SubstCase::Ground ? B.num(*numeral_of(n)) : I.run(*n_d);
    if (c == SubstCase::Stable)
      kmor = B.compose(B.bang(kmor), B.compose(I.q_star(delta), I.promote_basis(delta)));
    SemObject ev = entry_object(v);
    M rhs = B.compose(I.join(gp, Basis({v})),
                      B.compose(B.tensor(B.id(interpret_basis(gp)), B.compose(B.runit_inv(ev), kmor)),
                                I.split(gp, delta)));
    return {I.run(*lhs_d), B.compose(I.run(*m_d), rhs)};
  };
  auto saved = B.fix_iterations();
  B.set_fix_iterations(k);
  auto lo = build();
  B.set_fix_iterations(2 * k);
  auto hi = build();
  B.set_fix_iterations(saved);
  return semantic_eq(Approximants<E>{lo.first, hi.first}, Approximants<E>{lo.second, hi.second},
                     sampler);
}

/// A generated substitution instance: gamma ends with the substituted variable.
struct SubstInstance {
  Basis gamma;
  Term m;
  Type tau;
  Basis delta;
  Term n;
};
SubstInstance gen_subst_instance(SubstCase c, std::uint64_t seed);

template <class E>
LawReport substitution_check(SubstCase c, std::size_t count, Backend<E>& B, const ObsSpec& obs) {
  LawReport r{std::string("substitution-") + to_string(c), B.name()};
  Sampler<E> sampler(B, obs);
  for (std::size_t i = 0; i < count; ++i) {
    auto inst = gen_subst_instance(c, obs.seed * 1000003 + i);
    auto eq = substitution_instance(c, inst.gamma, inst.m, inst.tau, inst.delta, inst.n, B, sampler, obs.k);
    ++r.tried;
    if (eq.verdict == Verdict::Distinct) {
      r.verdict = LawVerdict::Fail;
      r.counterexample = "M = " + pretty(inst.m) + ", N = " + pretty(inst.n) + " at " + eq.witness +
                         ": " + eq.left + " vs " + eq.right;
      return r;
    }
    if (eq.verdict == Verdict::Inconclusive && r.verdict == LawVerdict::Pass) {
      r.verdict = LawVerdict::Inconclusive;
      r.counterexample = "M = " + pretty(inst.m) + ", N = " + pretty(inst.n);
    }
  }
  return r;
}

struct SoundnessReport {
  LawReport report;
  std::size_t steps = 0;
  std::size_t inconclusive = 0;  // steps with an unstabilized fix
  std::vector<std::string> step_lines;
};

/// Every step of the leftmost reduction of closed `t` preserves denotation.
template <class E>
SoundnessReport soundness_check(const Term& t, std::size_t fuel, Backend<E>& B, const ObsSpec& obs,
                                bool record = false) {
  SoundnessReport out;
  out.report = {"soundness", B.name()};
  TypingOptions opts;
  if (obs.ext) opts.mode = TypingMode::Extended;
  Sampler<E> sampler(B, obs);
  auto res = normalize(t, Strategy::leftmost(), fuel, true);
  Term prev = t;
  auto see = [&](const Term& u) {
    return observe_all(approximants(*infer({}, u, opts).derivation, B, obs.k), sampler);
  };
  auto prev_seen = see(prev);
  for (const auto& step : res.trace) {
    auto seen = see(step.result);
    auto eq = compare(prev_seen, seen, sampler);
    ++out.steps;
    ++out.report.tried;
    if (record)
      out.step_lines.push_back(path_string(step.site.path) + "  " + to_string(step.site.tag) + "  " +
                               to_string(eq.verdict));
    if (eq.verdict == Verdict::Distinct) {
      out.report.verdict = LawVerdict::Fail;
      out.report.counterexample = pretty(prev) + " -> " + pretty(step.result) + " at " + eq.witness +
                                  ": " + eq.left + " vs " + eq.right;
      return out;
    }
    if (eq.verdict == Verdict::Inconclusive) {
      ++out.inconclusive;
      if (out.report.verdict == LawVerdict::Pass) {
        out.report.verdict = LawVerdict::Inconclusive;
        out.report.counterexample = pretty(prev) + " -> " + pretty(step.result);
      }
    }
    prev = step.result;
    prev_seen = std::move(seen);
  }
  return out;
}

/// `(\x:iota.x) Ω` against `Ω`: equal denotations, no common reduct. The
/// second report is the informational weakened-x case `(\x:iota.0) Ω` vs `0`.
template <class E>
std::vector<LawReport> incompleteness_witness(Backend<E>& B, const ObsSpec& obs, std::size_t fuel = 1000) {
  Term omega = Term::mu("w", Type::ground(), Term::var("w", VarKind::Stable));
  Term w1 = Term::app(Term::lam("x", Type::ground(), Term::var("x", VarKind::Ground)), omega);
  Term w0 = Term::app(Term::lam("x", Type::ground(), Term::zero()), omega);
  Sampler<E> sampler(B, obs);
  auto den = [&](const Term& t) { return approximants(*infer({}, t).derivation, B, obs.k); };

  LawReport main{"incompleteness-witness", B.name()};
  auto eq = semantic_eq(den(w1), den(omega), sampler);
  auto graph = common_reduct_search(w1, omega, fuel);
  main.tried = eq.probes + graph.explored;
  if (eq.verdict != Verdict::Equal) {
    main.verdict = eq.verdict == Verdict::Distinct ? LawVerdict::Fail : LawVerdict::Inconclusive;
    main.counterexample = eq.witness + ": " + eq.left + " vs " + eq.right;
  } else if (graph.joined) {
    main.verdict = LawVerdict::Fail;
    main.counterexample = "common reduct found";
  }
  main.note = std::string("denotationally equal, not provably =Sl within fuel ") + std::to_string(fuel) +
              (graph.complete ? " (reduction graphs exhausted)" : "");

  LawReport weak{"weakened-beta", B.name()};
  weak.informational = true;
  auto eq0 = semantic_eq(den(w0), den(Term::zero()), sampler);
  weak.tried = eq0.probes;
  weak.verdict = eq0.verdict == Verdict::Equal ? LawVerdict::Pass
                 : eq0.verdict == Verdict::Distinct ? LawVerdict::Fail
                                                    : LawVerdict::Inconclusive;
  weak.counterexample = eq0.verdict == Verdict::Equal ? "" : eq0.left + " vs " + eq0.right;
  weak.note = "weakening is strict: the divergent argument is still observed";
  return {main, weak};
}

}  // namespace sllam
