#include "sllam/strict.hpp"

#include <map>

#include "sllam/interpret.hpp"

namespace sllam {

using M = Morphism<StrictElem>;
using K = StrictElem::Kind;

StrictElem StrictElem::bottom() {
  static const StrictElem b(std::make_shared<const Node>(Node{K::Bottom, 0, {}, {}}));
  return b;
}

StrictElem StrictElem::top() {
  static const StrictElem t(std::make_shared<const Node>(Node{K::Top, 0, {}, {}}));
  return t;
}

StrictElem StrictElem::nat(std::uint64_t n) {
  return StrictElem(std::make_shared<const Node>(Node{K::Nat, n, {}, {}}));
}

StrictElem StrictElem::pair(StrictElem a, StrictElem b) {
  if (a.is_bottom() || b.is_bottom()) return bottom();
  return StrictElem(std::make_shared<const Node>(Node{K::Pair, 0, {std::move(a), std::move(b)}, {}}));
}

StrictElem StrictElem::up(StrictElem a) {
  return StrictElem(std::make_shared<const Node>(Node{K::Up, 0, {std::move(a)}, {}}));
}

StrictElem StrictElem::prod(StrictElem a, StrictElem b) {
  if (a.is_bottom() && b.is_bottom()) return bottom();
  return StrictElem(
      std::make_shared<const Node>(Node{K::ProdPair, 0, {std::move(a), std::move(b)}, {}}));
}

StrictElem StrictElem::fun(Fn f) {
  return StrictElem(std::make_shared<const Node>(Node{K::Fun, 0, {}, std::move(f)}));
}

std::uint64_t StrictElem::value() const {
  if (kind() != K::Nat) throw IllShapedElement("expected a numeral, got " + str());
  return node_->n;
}

const StrictElem& StrictElem::first() const {
  if (kind() != K::Pair && kind() != K::ProdPair) throw IllShapedElement("expected a pair, got " + str());
  return node_->kids[0];
}

const StrictElem& StrictElem::second() const {
  if (kind() != K::Pair && kind() != K::ProdPair) throw IllShapedElement("expected a pair, got " + str());
  return node_->kids[1];
}

const StrictElem& StrictElem::lowered() const {
  if (kind() != K::Up) throw IllShapedElement("expected a lifted element, got " + str());
  return node_->kids[0];
}

StrictElem StrictElem::apply(const StrictElem& x) const {
  if (is_bottom() || x.is_bottom()) return bottom();
  if (kind() != K::Fun) throw IllShapedElement("expected a function, got " + str());
  return node_->fn(x);
}

std::string StrictElem::str() const {
  switch (kind()) {
    case K::Bottom: return "_|_";
    case K::Top: return "T";
    case K::Nat: return std::to_string(node_->n);
    case K::Pair: return "<" + first().str() + ", " + second().str() + ">";
    case K::Up: return "up(" + lowered().str() + ")";
    case K::ProdPair: return "(" + first().str() + " & " + second().str() + ")";
    case K::Fun: return "<fun>";
  }
  return "?";
}

namespace {

/// Key for memoizing on first-order arguments.
std::optional<std::string> memo_key(const StrictElem& x) {
  switch (x.kind()) {
    case K::Fun: return std::nullopt;
    case K::Bottom:
    case K::Top:
    case K::Nat: return x.str();
    default: {
      if (x.kind() == K::Up) {
        auto k = memo_key(x.lowered());
        if (!k) return std::nullopt;
        return "up(" + *k + ")";
      }
      auto a = memo_key(x.first());
      auto b = memo_key(x.second());
      if (!a || !b) return std::nullopt;
      return "<" + *a + "," + *b + ">";
    }
  }
}

StrictElem memoized(const StrictElem& f) {
  if (f.kind() != K::Fun) return f;
  auto cache = std::make_shared<std::map<std::string, StrictElem>>();
  return StrictElem::fun([f, cache](const StrictElem& x) {
    auto key = memo_key(x);
    if (!key) return f.apply(x);
    auto it = cache->find(*key);
    if (it != cache->end()) return it->second;
    StrictElem y = f.apply(x);
    cache->emplace(*key, y);
    return y;
  });
}

SemObject T(const SemObject& a, const SemObject& b) { return SemObject::tensor(a, b); }

}  // namespace

StrictElem kleene_fix(const std::function<StrictElem(const StrictElem&)>& f, std::uint64_t k) {
  StrictElem x = StrictElem::bottom();
  for (std::uint64_t i = 0; i < k; ++i) {
    StrictElem next = memoized(f(x));
    auto a = memo_key(x), b = memo_key(next);
    if (a && b && *a == *b) break;
    x = next;
  }
  return x;
}

M StrictBackend::strict(const SemObject& dom, const SemObject& cod, std::string op,
                        std::function<StrictElem(const StrictElem&)> f) {
  return {dom, cod,
          [f = std::move(f)](const StrictElem& x) {
            if (x.is_bottom()) return StrictElem::bottom();
            return f(x);
          },
          mor_tree(std::move(op))};
}

M StrictBackend::tensor(const M& f, const M& g) const {
  auto ff = f.fn;
  auto gf = g.fn;
  M m = strict(T(f.dom, g.dom), T(f.cod, g.cod), "tensor", [ff, gf](const StrictElem& x) {
    return StrictElem::pair(ff(x.first()), gf(x.second()));
  });
  m.tree = mor_tree("tensor", {f.tree, g.tree});
  return m;
}

M StrictBackend::sym(const SemObject& a, const SemObject& b) const {
  return strict(T(a, b), T(b, a), "sym",
                [](const StrictElem& x) { return StrictElem::pair(x.second(), x.first()); });
}

M StrictBackend::assoc(const SemObject& a, const SemObject& b, const SemObject& c) const {
  return strict(T(a, T(b, c)), T(T(a, b), c), "assoc", [](const StrictElem& x) {
    const auto& bc = x.second();
    return StrictElem::pair(StrictElem::pair(x.first(), bc.first()), bc.second());
  });
}

M StrictBackend::assoc_inv(const SemObject& a, const SemObject& b, const SemObject& c) const {
  return strict(T(T(a, b), c), T(a, T(b, c)), "assoc_inv", [](const StrictElem& x) {
    const auto& ab = x.first();
    return StrictElem::pair(ab.first(), StrictElem::pair(ab.second(), x.second()));
  });
}

M StrictBackend::lunit(const SemObject& a) const {
  return strict(T(SemObject::unit(), a), a, "lunit", [](const StrictElem& x) { return x.second(); });
}

M StrictBackend::lunit_inv(const SemObject& a) const {
  return strict(a, T(SemObject::unit(), a), "lunit_inv",
                [](const StrictElem& x) { return StrictElem::pair(StrictElem::top(), x); });
}

M StrictBackend::runit(const SemObject& a) const {
  return strict(T(a, SemObject::unit()), a, "runit", [](const StrictElem& x) { return x.first(); });
}

M StrictBackend::runit_inv(const SemObject& a) const {
  return strict(a, T(a, SemObject::unit()), "runit_inv",
                [](const StrictElem& x) { return StrictElem::pair(x, StrictElem::top()); });
}

M StrictBackend::curry(const M& f, const SemObject& c, const SemObject& a) const {
  if (f.dom != T(c, a)) throw ObjectMismatch("curry: " + f.dom.str() + " is not " + T(c, a).str());
  auto ff = f.fn;
  M m = strict(c, SemObject::arrow(a, f.cod), "curry", [ff](const StrictElem& x) {
    return StrictElem::fun([ff, x](const StrictElem& y) { return ff(StrictElem::pair(x, y)); });
  });
  m.tree = mor_tree("curry", {f.tree});
  return m;
}

M StrictBackend::eval(const SemObject& a, const SemObject& b) const {
  return strict(T(SemObject::arrow(a, b), a), b, "eval",
                [](const StrictElem& x) { return x.first().apply(x.second()); });
}

M StrictBackend::pair(const M& f, const M& g) const {
  if (f.dom != g.dom) throw ObjectMismatch("pair: " + f.dom.str() + " vs " + g.dom.str());
  auto ff = f.fn;
  auto gf = g.fn;
  M m = strict(f.dom, SemObject::prod(f.cod, g.cod), "pair",
               [ff, gf](const StrictElem& x) { return StrictElem::prod(ff(x), gf(x)); });
  m.tree = mor_tree("pair", {f.tree, g.tree});
  return m;
}

M StrictBackend::proj1(const SemObject& a, const SemObject& b) const {
  return strict(SemObject::prod(a, b), a, "proj1", [](const StrictElem& x) { return x.first(); });
}

M StrictBackend::proj2(const SemObject& a, const SemObject& b) const {
  return strict(SemObject::prod(a, b), b, "proj2", [](const StrictElem& x) { return x.second(); });
}

M StrictBackend::bang(const M& f) const {
  auto ff = f.fn;
  M m = strict(SemObject::bang(f.dom), SemObject::bang(f.cod), "bang",
               [ff](const StrictElem& x) { return StrictElem::up(ff(x.lowered())); });
  m.tree = mor_tree("bang", {f.tree});
  return m;
}

M StrictBackend::delta(const SemObject& a) const {
  SemObject ba = SemObject::bang(a);
  return strict(ba, SemObject::bang(ba), "delta", [](const StrictElem& x) {
    x.lowered();
    return StrictElem::up(x);
  });
}

M StrictBackend::epsilon(const SemObject& a) const {
  return strict(SemObject::bang(a), a, "epsilon", [](const StrictElem& x) { return x.lowered(); });
}

M StrictBackend::q(const SemObject& a, const SemObject& b) const {
  return strict(T(SemObject::bang(a), SemObject::bang(b)), SemObject::bang(T(a, b)), "q",
                [](const StrictElem& x) {
                  return StrictElem::up(
                      StrictElem::pair(x.first().lowered(), x.second().lowered()));
                });
}

M StrictBackend::q1() const {
  return strict(SemObject::unit(), SemObject::bang(SemObject::unit()), "q1",
                [](const StrictElem& x) { return StrictElem::up(x); });
}

M StrictBackend::d(const SemObject& a) const {
  SemObject ba = SemObject::bang(a);
  return strict(ba, T(ba, ba), "d", [](const StrictElem& x) {
    x.lowered();
    return StrictElem::pair(x, x);
  });
}

M StrictBackend::e(const SemObject& a) const {
  return strict(SemObject::bang(a), SemObject::unit(), "e", [](const StrictElem& x) {
    x.lowered();
    return StrictElem::top();
  });
}

M StrictBackend::zero() const { return num(0); }

M StrictBackend::succ() const {
  return strict(SemObject::nat(), SemObject::nat(), "succ",
                [](const StrictElem& x) { return StrictElem::nat(x.value() + 1); });
}

M StrictBackend::pred() const {
  return strict(SemObject::nat(), SemObject::nat(), "pred", [](const StrictElem& x) {
    auto n = x.value();
    return StrictElem::nat(n == 0 ? 0 : n - 1);
  });
}

M StrictBackend::num(std::uint64_t k) const {
  return strict(SemObject::unit(), SemObject::nat(), k == 0 ? "zero" : "num" + std::to_string(k),
                [k](const StrictElem&) { return StrictElem::nat(k); });
}

M StrictBackend::p() const {
  return strict(SemObject::nat(), SemObject::bang(SemObject::nat()), "p", [](const StrictElem& x) {
    x.value();
    return StrictElem::up(x);
  });
}

M StrictBackend::cN() const {
  SemObject n = SemObject::nat();
  return strict(n, T(n, n), "cN", [](const StrictElem& x) {
    x.value();
    return StrictElem::pair(x, x);
  });
}

M StrictBackend::wN() const {
  return strict(SemObject::nat(), SemObject::unit(), "wN", [](const StrictElem& x) {
    x.value();
    return StrictElem::top();
  });
}

M StrictBackend::lif() const {
  SemObject n = SemObject::nat();
  return strict(T(n, SemObject::prod(n, n)), n, "lif", [](const StrictElem& x) {
    const auto& branches = x.second();
    return x.first().value() == 0 ? branches.first() : branches.second();
  });
}

M StrictBackend::fix(const SemObject& b) const {
  SemObject dom = SemObject::bang(SemObject::arrow(SemObject::bang(b), b));
  std::uint64_t k = fix_iterations();
  return strict(dom, b, "fix", [k](const StrictElem& x) {
    StrictElem f = x.lowered();
    return kleene_fix([f](const StrictElem& y) { return f.apply(StrictElem::up(y)); }, k);
  });
}

std::optional<std::uint64_t> StrictBackend::ground_value(const StrictElem& x) const {
  if (x.kind() == K::Nat) return x.value();
  return std::nullopt;
}

std::vector<StrictElem> StrictBackend::samples(const SemObject& a, const ObsSpec& obs,
                                               Sampler<StrictElem>& sub) const {
  std::vector<StrictElem> out{StrictElem::bottom()};
  switch (a.kind()) {
    case SemObject::Kind::Unit:
      out.push_back(StrictElem::top());
      break;
    case SemObject::Kind::Nat:
      for (std::uint64_t i = 0; i <= obs.s; ++i) out.push_back(StrictElem::nat(i));
      break;
    case SemObject::Kind::Tensor:
    case SemObject::Kind::Prod: {
      bool smash = a.kind() == SemObject::Kind::Tensor;
      auto ls = sub.of(a.left());
      auto rs = sub.of(a.right());
      for (const auto& l : ls)
        for (const auto& r : rs) {
          if (smash && (l.is_bottom() || r.is_bottom())) continue;
          if (!smash && l.is_bottom() && r.is_bottom()) continue;
          out.push_back(smash ? StrictElem::pair(l, r) : StrictElem::prod(l, r));
        }
      break;
    }
    case SemObject::Kind::Bang:
      for (const auto& x : sub.of(a.inner())) out.push_back(StrictElem::up(x));
      break;
    case SemObject::Kind::Arrow:
      for (const auto& c : sub.of(a.right())) {
        if (c.is_bottom()) continue;
        out.push_back(StrictElem::fun([c](const StrictElem&) { return c; }));
      }
      break;
  }
  return out;
}

std::string StrictBackend::observe(const StrictElem& x, const SemObject& a, const ObsSpec& obs,
                                   Sampler<StrictElem>& sub) const {
  switch (a.kind()) {
    case SemObject::Kind::Arrow: {
      if (x.is_bottom()) return "_|_";
      std::string s = "{";
      bool first = true;
      for (const auto& y : sub.of(a.left())) {
        if (y.is_bottom()) continue;
        if (!first) s += ", ";
        first = false;
        s += observe(y, a.left(), obs, sub) + " -> " + observe(x.apply(y), a.right(), obs, sub);
      }
      return s + "}";
    }
    case SemObject::Kind::Tensor:
    case SemObject::Kind::Prod:
      if (x.is_bottom()) return "_|_";
      if (a.kind() == SemObject::Kind::Tensor)
        return "<" + observe(x.first(), a.left(), obs, sub) + ", " +
               observe(x.second(), a.right(), obs, sub) + ">";
      return "(" + observe(x.first(), a.left(), obs, sub) + " & " +
             observe(x.second(), a.right(), obs, sub) + ")";
    case SemObject::Kind::Bang:
      if (x.is_bottom()) return "_|_";
      return "up(" + observe(x.lowered(), a.inner(), obs, sub) + ")";
    default:
      if (x.kind() == K::Fun || x.kind() == K::Pair || x.kind() == K::Up || x.kind() == K::ProdPair)
        throw IllShapedElement(x.str() + " does not inhabit " + a.str());
      return x.str();
  }
}

std::vector<StrictElem> sample_elems(const SemObject& a, const ObsSpec& obs) {
  StrictBackend b;
  Sampler<StrictElem> s(b, obs);
  return s.of(a);
}

}  // namespace sllam
