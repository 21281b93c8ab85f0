#pragma once

// Interpretation of typing derivations in any backend, plus observational
// equality of morphisms.

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sllam/model.hpp"
#include "sllam/typecheck.hpp"

namespace sllam {

template <class E>
class Interpreter {
 public:
  using M = Morphism<E>;

  explicit Interpreter(const Backend<E>& b) : B(b) {}

  /// Sub-derivations with the same rule, judgment and premises share one
  /// morphism; clause() reads nothing else.
  M run(const Derivation& d) const {
    std::size_t id = intern(d);
    auto it = memo_.find(id);
    if (it != memo_.end()) return it->second;
    M m = clause(d);
    memo_.emplace(id, m);
    return m;
  }

  /// ⟦Γ,Δ⟧ → ⟦Γ⟧⊗⟦Δ⟧
  M split(const Basis& g, const Basis& delta) const {
    if (g.empty()) return B.lunit_inv(interpret_basis(delta));
    auto [head, rest] = uncons(g);
    SemObject ex = entry_object(head);
    return B.compose(B.assoc(ex, interpret_basis(rest), interpret_basis(delta)),
                     B.tensor(B.id(ex), split(rest, delta)));
  }

  /// ⟦Γ⟧⊗⟦Δ⟧ → ⟦Γ,Δ⟧
  M join(const Basis& g, const Basis& delta) const {
    if (g.empty()) return B.lunit(interpret_basis(delta));
    auto [head, rest] = uncons(g);
    SemObject ex = entry_object(head);
    return B.compose(B.tensor(B.id(ex), join(rest, delta)),
                     B.assoc_inv(ex, interpret_basis(rest), interpret_basis(delta)));
  }

  /// id_{E1}⊗(id_{E2}⊗(...⊗m)) over the first n entries of `b`.
  M lift(const Basis& b, std::size_t n, const M& m) const {
    M out = m;
    for (std::size_t i = n; i-- > 0;) out = B.tensor(B.id(entry_object(b[i])), out);
    return out;
  }

  /// !X1⊗(...⊗(!Xn⊗1)) → !(X1⊗(...⊗(Xn⊗1)))
  M q_star(const Basis& b) const {
    if (b.empty()) return B.q1();
    auto [head, rest] = uncons(b);
    SemObject x = entry_object(head);
    return B.compose(B.q(x, interpret_basis(rest)),
                     B.tensor(B.id(SemObject::bang(x)), q_star(rest)));
  }

  /// Per-entry p (ground) or δ (stable).
  M promote_basis(const Basis& b) const {
    M out = B.id(SemObject::unit());
    for (std::size_t i = b.size(); i-- > 0;) {
      const auto& e = b[i];
      M m = e.kind == VarKind::Ground ? B.p() : B.delta(interpret_type(e.type));
      out = B.tensor(m, out);
    }
    return out;
  }

 private:
  static std::pair<BasisEntry, Basis> uncons(const Basis& b) {
    std::vector<BasisEntry> rest(b.begin() + 1, b.end());
    return {b[0], Basis(rest)};
  }

  static Basis prefix(const Basis& b, std::size_t n) {
    return Basis(std::vector<BasisEntry>(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  M clause(const Derivation& d) const {
    const Basis& b = d.basis();
    const SemObject N = SemObject::nat();
    const SemObject one = SemObject::unit();
    switch (d.rule()) {
      case Rule::Zero:
        return B.zero();
      case Rule::Succ:
        return B.curry(B.compose(B.succ(), B.lunit(N)), one, N);
      case Rule::Pred:
        return B.curry(B.compose(B.pred(), B.lunit(N)), one, N);
      case Rule::GroundVar:
      case Rule::HigherVar:
        return B.runit(entry_object(b[0]));
      case Rule::StableVar:
        return B.compose(B.epsilon(interpret_type(b[0].type)), B.runit(entry_object(b[0])));
      case Rule::Lam: {
        const auto& prem = d.premise(0);
        const Basis& pb = prem.basis();
        const auto& x = pb[pb.size() - 1];
        SemObject sx = interpret_type(x.type);
        M body = run(prem);
        M pre = B.compose(join(b, Basis({x})),
                          B.tensor(B.id(interpret_basis(b)), B.runit_inv(sx)));
        return B.curry(B.compose(body, pre), interpret_basis(b), sx);
      }
      case Rule::App: {
        const auto& m = d.premise(0);
        const auto& n = d.premise(1);
        return B.compose(B.eval(interpret_type(n.type()), interpret_type(d.type())),
                         B.compose(B.tensor(run(m), run(n)), split(m.basis(), n.basis())));
      }
      case Rule::LIf: {
        const auto& c = d.premise(0);
        const auto& l = d.premise(1);
        const auto& r = d.premise(2);
        return B.compose(B.lif(), B.compose(B.tensor(run(c), B.pair(run(l), run(r))),
                                            split(c.basis(), l.basis())));
      }
      case Rule::Exchange: {
        std::size_t i = d.swap_index();
        SemObject a = entry_object(b[i]);
        SemObject c = entry_object(b[i + 1]);
        std::vector<BasisEntry> tail(b.begin() + static_cast<std::ptrdiff_t>(i) + 2, b.end());
        SemObject r = interpret_basis(Basis(tail));
        M swap = B.compose(B.assoc_inv(c, a, r),
                           B.compose(B.tensor(B.sym(a, c), B.id(r)), B.assoc(a, c, r)));
        return B.compose(run(d.premise(0)), lift(b, i, swap));
      }
      case Rule::GroundWeaken:
      case Rule::StableWeaken: {
        std::size_t n = b.size() - 1;
        SemObject ex = entry_object(b[n]);
        M drop = d.rule() == Rule::GroundWeaken ? B.wN() : B.e(interpret_type(b[n].type));
        M tail = B.compose(B.lunit(one), B.tensor(drop, B.id(one)));
        (void)ex;
        return B.compose(run(d.premise(0)), lift(b, n, tail));
      }
      case Rule::GroundContract:
      case Rule::StableContract: {
        std::size_t n = b.size() - 1;
        SemObject ex = entry_object(b[n]);
        M dup = d.rule() == Rule::GroundContract ? B.cN() : B.d(interpret_type(b[n].type));
        M tail = B.compose(B.assoc_inv(ex, ex, one), B.tensor(dup, B.id(one)));
        return B.compose(run(d.premise(0)), lift(b, n, tail));
      }
      case Rule::Mu: {
        const auto& prem = d.premise(0);
        const Basis& pb = prem.basis();
        const auto& f = pb[pb.size() - 1];
        SemObject sigma = interpret_type(f.type);
        SemObject bs = SemObject::bang(sigma);
        SemObject ctx = interpret_basis(b);
        M body = B.compose(run(prem), B.compose(join(b, Basis({f})),
                                                B.tensor(B.id(ctx), B.runit_inv(bs))));
        M fun = B.bang(B.curry(body, ctx, bs));
        return B.compose(B.fix(sigma), B.compose(fun, B.compose(q_star(b), promote_basis(b))));
      }
      case Rule::Promote:
        return B.compose(B.p(), run(d.premise(0)));
      case Rule::Derelict:
        return B.compose(B.epsilon(N), run(d.premise(0)));
      case Rule::Discard: {
        const auto& m = d.premise(0);
        const auto& n = d.premise(1);
        SemObject s = interpret_type(n.type());
        M drop = m.type().is_bang() ? B.e(N) : B.wN();
        return B.compose(B.lunit(s), B.compose(B.tensor(drop, B.id(s)),
                                               B.compose(B.tensor(run(m), run(n)),
                                                         split(m.basis(), n.basis()))));
      }
      case Rule::Copy: {
        const auto& m = d.premise(0);
        const auto& n = d.premise(1);
        const Basis& nb = n.basis();
        Basis delta = prefix(nb, nb.size() - 2);
        Basis xs({nb[nb.size() - 2], nb[nb.size() - 1]});
        bool bang = m.type().is_bang();
        SemObject x = bang ? SemObject::bang(N) : N;
        SemObject dl = interpret_basis(delta);
        M dup = bang ? B.d(N) : B.cN();
        M chain = B.compose(B.tensor(dup, B.id(dl)),
                            B.compose(B.tensor(run(m), B.id(dl)), split(m.basis(), delta)));
        chain = B.compose(B.sym(SemObject::tensor(x, x), dl), chain);
        chain = B.compose(B.tensor(B.id(dl), B.tensor(B.id(x), B.runit_inv(x))), chain);
        chain = B.compose(join(delta, xs), chain);
        return B.compose(run(n), chain);
      }
    }
    throw std::logic_error("unhandled rule in interpretation");
  }

  std::size_t intern(const Derivation& d) const {
    auto known = ids_.find(&d);
    if (known != ids_.end()) return known->second;
    std::string key = std::to_string(static_cast<int>(d.rule())) + "|" + d.basis().str() + "|" +
                      d.type().str() + "|" + std::to_string(d.swap_index());
    for (const auto& p : d.premises()) key += "|" + std::to_string(intern(*p));
    std::size_t id = keys_.emplace(std::move(key), keys_.size()).first->second;
    ids_.emplace(&d, id);
    return id;
  }

  const Backend<E>& B;
  mutable std::unordered_map<const Derivation*, std::size_t> ids_;
  mutable std::unordered_map<std::string, std::size_t> keys_;
  mutable std::unordered_map<std::size_t, M> memo_;
};

template <class E>
Morphism<E> interpret(const Derivation& d, const Backend<E>& b) {
  return Interpreter<E>(b).run(d);
}

/// Interprets a derivation with fix unrolled k and 2k times.
template <class E>
struct Approximants {
  Morphism<E> at_k;
  Morphism<E> at_2k;
  bool fix_free = false;  // no mu: both approximants coincide
};

bool uses_fix(const Derivation& d);

template <class E>
Approximants<E> approximants(const Derivation& d, Backend<E>& b, std::uint64_t k) {
  auto saved = b.fix_iterations();
  b.set_fix_iterations(k);
  Morphism<E> lo = interpret(d, b);
  if (!uses_fix(d)) {
    b.set_fix_iterations(saved);
    return {lo, lo, true};
  }
  b.set_fix_iterations(2 * k);
  Morphism<E> hi = interpret(d, b);
  b.set_fix_iterations(saved);
  return {lo, hi};
}

/// Sample elements per object: backend samples plus denotations of the
/// configured closed sample terms. Results are cached per object.
template <class E>
class Sampler {
 public:
  Sampler(const Backend<E>& b, const ObsSpec& obs) : B(b), obs_(obs) {}

  const std::vector<E>& of(const SemObject& a) {
    std::string key = a.str();
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<E> out;
    if (a.kind() == SemObject::Kind::Arrow) {
      if (auto ty = object_type(a)) {
        auto terms = obs_.sample_terms.find(*ty);
        if (terms != obs_.sample_terms.end()) {
          TypingOptions opts;
          if (obs_.ext) opts.mode = TypingMode::Extended;
          for (const auto& t : terms->second) {
            try {
              auto typing = infer({}, t, opts);
              out.push_back(interpret(*typing.derivation, B)(B.unit_point()));
            } catch (const TypeError&) {
            }
          }
        }
      }
    }
    auto base = B.samples(a, obs_, *this);
    out.insert(out.end(), base.begin(), base.end());
    if (out.size() > obs_.samples) out.resize(obs_.samples);
    return cache_.emplace(key, std::move(out)).first->second;
  }

  const ObsSpec& obs() const { return obs_; }
  const Backend<E>& backend() const { return B; }

 private:
  const Backend<E>& B;
  ObsSpec obs_;
  std::unordered_map<std::string, std::vector<E>> cache_;
};

enum class Verdict { Equal, Distinct, Inconclusive };
const char* to_string(Verdict v);

struct EqResult {
  Verdict verdict = Verdict::Equal;
  std::string witness;  // observed input that separates the sides
  std::string left, right;
  bool unstable = false;  // some observation changed between k and 2k
  std::size_t probes = 0;
  /// Extra inputs dropped because the backend could not represent an image.
  std::size_t skipped = 0;
};

/// Observations of both approximants on every sampled and extra input.
template <class E>
struct Observations {
  SemObject dom = SemObject::unit();
  SemObject cod = SemObject::unit();
  std::vector<E> inputs;
  /// (at k, at 2k); nullopt when an extra input was unrepresentable.
  std::vector<std::optional<std::pair<std::string, std::string>>> outs;
};

/// Extra inputs already unrepresentable in `known` are not evaluated again.
template <class E>
Observations<E> observe_all(const Approximants<E>& f, Sampler<E>& sampler, const std::vector<E>& extra = {},
                            const Observations<E>* known = nullptr) {
  const auto& B = sampler.backend();
  const auto& obs = sampler.obs();
  Observations<E> o{f.at_k.dom, f.at_k.cod, sampler.of(f.at_k.dom), {}};
  const std::size_t sampled = o.inputs.size();
  o.inputs.insert(o.inputs.end(), extra.begin(), extra.end());
  for (std::size_t i = 0; i < o.inputs.size(); ++i) {
    const E& x = o.inputs[i];
    if (known && i >= sampled && i < known->outs.size() && !known->outs[i]) {
      o.outs.emplace_back(std::nullopt);
      continue;
    }
    try {
      std::string lo = B.observe(f.at_k(x), o.cod, obs, sampler);
      std::string hi = f.fix_free ? lo : B.observe(f.at_2k(x), o.cod, obs, sampler);
      o.outs.emplace_back(std::pair{std::move(lo), std::move(hi)});
    } catch (const Unrepresentable&) {
      if (i < sampled) throw;
      o.outs.emplace_back(std::nullopt);
    }
  }
  return o;
}

/// Both observation sets must come from the same sampler and extra inputs.
template <class E>
EqResult compare(const Observations<E>& f, const Observations<E>& g, Sampler<E>& sampler) {
  if (f.dom != g.dom || f.cod != g.cod)
    throw ObjectMismatch("semantic_eq: " + f.dom.str() + " -> " + f.cod.str() + " vs " + g.dom.str() +
                         " -> " + g.cod.str());
  EqResult r;
  bool inconclusive = false;
  for (std::size_t i = 0; i < f.outs.size() && i < g.outs.size(); ++i) {
    if (!f.outs[i] || !g.outs[i]) {
      ++r.skipped;
      continue;
    }
    ++r.probes;
    const auto& [f1, f2] = *f.outs[i];
    const auto& [g1, g2] = *g.outs[i];
    bool stable = f1 == f2 && g1 == g2;
    if (!stable) r.unstable = true;
    if (f2 == g2) continue;
    std::string wx = sampler.backend().observe(f.inputs[i], f.dom, sampler.obs(), sampler);
    if (stable) {
      r.verdict = Verdict::Distinct;
      r.witness = wx;
      r.left = f2;
      r.right = g2;
      return r;
    }
    if (!inconclusive) {
      inconclusive = true;
      r.witness = wx;
      r.left = f2;
      r.right = g2;
    }
  }
  if (inconclusive) r.verdict = Verdict::Inconclusive;
  return r;
}

template <class E>
EqResult semantic_eq(const Approximants<E>& f, const Approximants<E>& g, Sampler<E>& sampler,
                     const std::vector<E>& extra = {}) {
  if (f.at_k.dom != g.at_k.dom || f.at_k.cod != g.at_k.cod)
    throw ObjectMismatch("semantic_eq: " + f.at_k.dom.str() + " -> " + f.at_k.cod.str() + " vs " +
                         g.at_k.dom.str() + " -> " + g.at_k.cod.str());
  auto fo = observe_all(f, sampler, extra);
  return compare(fo, observe_all(g, sampler, extra, &fo), sampler);
}

template <class E>
EqResult semantic_eq(const Morphism<E>& f, const Morphism<E>& g, Sampler<E>& sampler,
                     const std::vector<E>& extra = {}) {
  return semantic_eq(Approximants<E>{f, f}, Approximants<E>{g, g}, sampler, extra);
}

struct GroundResult {
  enum class Kind { Bottom, Num, Unstable } kind = Kind::Bottom;
  std::uint64_t value = 0;
  std::string str() const;
  bool operator==(const GroundResult& o) const {
    return kind == o.kind && (kind != Kind::Num || value == o.value);
  }
};

/// Observes a closed ground term; fix unrolled obs.k and 2·obs.k times.
template <class E>
GroundResult denote_ground(const Term& t, Backend<E>& b, const ObsSpec& obs) {
  TypingOptions opts;
  if (obs.ext) opts.mode = TypingMode::Extended;
  auto typing = check({}, t, Type::ground(), opts);
  auto ap = approximants(*typing, b, obs.k);
  auto lo = b.ground_value(ap.at_k(b.unit_point()));
  auto hi = b.ground_value(ap.at_2k(b.unit_point()));
  GroundResult r;
  if (lo != hi) {
    r.kind = GroundResult::Kind::Unstable;
  } else if (lo) {
    r.kind = GroundResult::Kind::Num;
    r.value = *lo;
  }
  return r;
}

}  // namespace sllam
