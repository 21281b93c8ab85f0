#include "sllam/coh.hpp"

#include <algorithm>
#include <map>

#include "sllam/interpret.hpp"

namespace sllam {

using M = Morphism<Clique>;
using F = Clique::Form;
using TK = Token::Kind;

// ---- tokens

Token Token::star() { return Token(); }

Token Token::nat(std::uint64_t n) {
  Token t;
  t.kind_ = TK::Nat;
  t.n_ = n;
  return t;
}

Token Token::pair(Token a, Token b) {
  Token t;
  t.kind_ = TK::Pair;
  t.kids_ = {std::move(a), std::move(b)};
  return t;
}

Token Token::set(std::vector<Token> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Token t;
  t.kind_ = TK::Set;
  t.kids_ = std::move(elems);
  return t;
}

Token Token::tag(int side, Token a) {
  Token t;
  t.kind_ = TK::Tag;
  t.n_ = static_cast<std::uint64_t>(side);
  t.kids_ = {std::move(a)};
  return t;
}

std::string Token::str() const {
  switch (kind_) {
    case TK::Star: return "*";
    case TK::Nat: return std::to_string(n_);
    case TK::Pair: return "(" + first().str() + ", " + second().str() + ")";
    case TK::Set: {
      std::string s = "{";
      for (std::size_t i = 0; i < kids_.size(); ++i) s += (i ? ", " : "") + kids_[i].str();
      return s + "}";
    }
    case TK::Tag: return (n_ == 1 ? "inl " : "inr ") + inner().str();
  }
  return "?";
}

bool operator==(const Token& a, const Token& b) {
  return a.kind_ == b.kind_ && a.n_ == b.n_ && a.kids_ == b.kids_;
}

bool operator<(const Token& a, const Token& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.kind_ == TK::Set && a.kids_.size() != b.kids_.size()) return a.kids_.size() < b.kids_.size();
  if (a.n_ != b.n_) return a.n_ < b.n_;
  return a.kids_ < b.kids_;
}

bool coherent(const Token& x, const Token& y, const SemObject& a) {
  switch (a.kind()) {
    case SemObject::Kind::Unit: return true;
    case SemObject::Kind::Nat: return x == y;
    case SemObject::Kind::Tensor:
      return coherent(x.first(), y.first(), a.left()) && coherent(x.second(), y.second(), a.right());
    case SemObject::Kind::Arrow: {
      if (!coherent(x.first(), y.first(), a.left())) return true;
      if (!coherent(x.second(), y.second(), a.right())) return false;
      return x.second() != y.second() || x.first() == y.first();
    }
    case SemObject::Kind::Bang:
      for (const auto& u : x.elems())
        for (const auto& v : y.elems())
          if (!coherent(u, v, a.inner())) return false;
      return true;
    case SemObject::Kind::Prod:
      if (x.side() != y.side()) return true;
      return coherent(x.inner(), y.inner(), x.side() == 1 ? a.left() : a.right());
  }
  return false;
}

bool is_clique(const TokenSet& s, const SemObject& a) {
  for (auto i = s.begin(); i != s.end(); ++i)
    for (auto j = std::next(i); j != s.end(); ++j)
      if (!coherent(*i, *j, a)) return false;
  return true;
}

std::string to_string(const TokenSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : s) {
    if (!first) out += ", ";
    first = false;
    out += t.str();
  }
  return out + "}";
}

// ---- cliques

Clique Clique::empty() {
  static const Clique e(std::make_shared<const Node>(Node{F::Tokens, {}, {}, {}}));
  return e;
}

Clique Clique::tokens(TokenSet s) {
  if (s.empty()) return empty();
  return Clique(std::make_shared<const Node>(Node{F::Tokens, std::move(s), {}, {}}));
}

Clique Clique::singleton(Token t) { return tokens(TokenSet{std::move(t)}); }

Clique Clique::fn(Fn f) { return Clique(std::make_shared<const Node>(Node{F::Fn, {}, {}, std::move(f)})); }

Clique Clique::rect(Clique x, Clique y) {
  if (x.is_empty() || y.is_empty()) return empty();
  return Clique(std::make_shared<const Node>(Node{F::Rect, {}, {std::move(x), std::move(y)}, {}}));
}

Clique Clique::prom(Clique x) {
  return Clique(std::make_shared<const Node>(Node{F::Prom, {}, {std::move(x)}, {}}));
}

Clique Clique::prod(Clique x, Clique y) {
  if (x.is_empty() && y.is_empty()) return empty();
  return Clique(std::make_shared<const Node>(Node{F::Prod, {}, {std::move(x), std::move(y)}, {}}));
}

Clique Clique::unite(Clique x, Clique y) {
  if (x.is_empty()) return y;
  if (y.is_empty()) return x;
  if (x.form() == F::Tokens && y.form() == F::Tokens) {
    TokenSet s = x.token_set();
    s.insert(y.token_set().begin(), y.token_set().end());
    return tokens(std::move(s));
  }
  std::vector<Clique> parts;
  for (const auto* c : {&x, &y}) {
    if (c->form() == F::Union)
      parts.insert(parts.end(), c->parts().begin(), c->parts().end());
    else
      parts.push_back(*c);
  }
  return Clique(std::make_shared<const Node>(Node{F::Union, {}, std::move(parts), {}}));
}

bool Clique::is_empty() const {
  switch (form()) {
    case F::Tokens: return token_set().empty();
    case F::Rect: return left().is_empty() || right().is_empty();
    case F::Prod: return left().is_empty() && right().is_empty();
    case F::Union:
      return std::all_of(parts().begin(), parts().end(), [](const Clique& c) { return c.is_empty(); });
    default: return false;
  }
}

bool Clique::contains(const Token& t) const {
  switch (form()) {
    case F::Tokens: return token_set().count(t) > 0;
    case F::Fn:
      if (t.kind() != TK::Pair) return false;
      return function()(singleton(t.first())).contains(t.second());
    case F::Rect:
      return t.kind() == TK::Pair && left().contains(t.first()) && right().contains(t.second());
    case F::Prom:
      if (t.kind() != TK::Set) return false;
      return std::all_of(t.elems().begin(), t.elems().end(),
                         [this](const Token& a) { return inner().contains(a); });
    case F::Prod:
      if (t.kind() != TK::Tag) return false;
      return (t.side() == 1 ? left() : right()).contains(t.inner());
    case F::Union:
      return std::any_of(parts().begin(), parts().end(), [&t](const Clique& c) { return c.contains(t); });
  }
  return false;
}

std::optional<TokenSet> Clique::materialize(std::size_t cap) const {
  switch (form()) {
    case F::Tokens:
      if (token_set().size() > cap) return std::nullopt;
      return token_set();
    case F::Fn:
      return std::nullopt;
    case F::Rect: {
      auto a = left().materialize(cap);
      if (!a) return std::nullopt;
      auto b = right().materialize(cap);
      if (!b || a->size() * b->size() > cap) return std::nullopt;
      TokenSet out;
      for (const auto& x : *a)
        for (const auto& y : *b) out.insert(Token::pair(x, y));
      return out;
    }
    case F::Prom: {
      auto a = inner().materialize(cap);
      if (!a || a->size() >= 63 || (std::size_t{1} << a->size()) > cap) return std::nullopt;
      std::vector<Token> xs(a->begin(), a->end());
      TokenSet out;
      for (std::size_t mask = 0; mask < (std::size_t{1} << xs.size()); ++mask) {
        std::vector<Token> u;
        for (std::size_t i = 0; i < xs.size(); ++i)
          if (mask >> i & 1) u.push_back(xs[i]);
        out.insert(Token::set(std::move(u)));
      }
      return out;
    }
    case F::Prod: {
      auto a = left().materialize(cap);
      auto b = right().materialize(cap);
      if (!a || !b || a->size() + b->size() > cap) return std::nullopt;
      TokenSet out;
      for (const auto& x : *a) out.insert(Token::tag(1, x));
      for (const auto& y : *b) out.insert(Token::tag(2, y));
      return out;
    }
    case F::Union: {
      TokenSet out;
      for (const auto& p : parts()) {
        auto s = p.materialize(cap);
        if (!s) return std::nullopt;
        out.insert(s->begin(), s->end());
        if (out.size() > cap) return std::nullopt;
      }
      return out;
    }
  }
  return std::nullopt;
}

Clique Clique::apply(const Clique& x) const {
  if (x.is_empty()) return empty();
  switch (form()) {
    case F::Fn: return function()(x);
    case F::Tokens: {
      TokenSet out;
      for (const auto& t : token_set()) {
        if (t.kind() != TK::Pair) throw IllShapedElement("trace token " + t.str() + " is not a pair");
        if (x.contains(t.first())) out.insert(t.second());
      }
      return tokens(std::move(out));
    }
    case F::Union: {
      Clique out = empty();
      for (const auto& p : parts()) out = unite(out, p.apply(x));
      return out;
    }
    default:
      throw IllShapedElement("clique is not a function");
  }
}

std::vector<Token> probe_tokens(const SemObject& a, std::uint64_t budget, std::size_t cap) {
  std::vector<Token> out;
  switch (a.kind()) {
    case SemObject::Kind::Unit:
      out.push_back(Token::star());
      break;
    case SemObject::Kind::Nat:
      for (std::uint64_t i = 0; i <= budget && out.size() < cap; ++i) out.push_back(Token::nat(i));
      break;
    case SemObject::Kind::Tensor:
    case SemObject::Kind::Arrow: {
      auto ls = probe_tokens(a.left(), budget, cap);
      auto rs = probe_tokens(a.right(), budget, cap);
      for (const auto& l : ls)
        for (const auto& r : rs) {
          if (out.size() >= cap) return out;
          out.push_back(Token::pair(l, r));
        }
      break;
    }
    case SemObject::Kind::Prod: {
      for (const auto& l : probe_tokens(a.left(), budget, cap)) out.push_back(Token::tag(1, l));
      for (const auto& r : probe_tokens(a.right(), budget, cap)) out.push_back(Token::tag(2, r));
      if (out.size() > cap) out.resize(cap);
      break;
    }
    case SemObject::Kind::Bang: {
      auto base = probe_tokens(a.inner(), budget, cap);
      // Size-then-lexicographic enumeration of coherent subsets.
      std::vector<std::vector<std::size_t>> layer{{}};
      out.push_back(Token::set({}));
      for (std::uint64_t size = 1; size <= budget && out.size() < cap; ++size) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& u : layer) {
          if (out.size() + next.size() >= cap) break;
          std::size_t from = u.empty() ? 0 : u.back() + 1;
          for (std::size_t i = from; i < base.size(); ++i) {
            bool ok = std::all_of(u.begin(), u.end(), [&](std::size_t j) {
              return coherent(base[i], base[j], a.inner());
            });
            if (!ok) continue;
            auto v = u;
            v.push_back(i);
            next.push_back(v);
            if (out.size() + next.size() >= cap) break;
          }
        }
        for (const auto& v : next) {
          if (out.size() >= cap) break;
          std::vector<Token> elems;
          for (auto i : v) elems.push_back(base[i]);
          out.push_back(Token::set(std::move(elems)));
        }
        layer = std::move(next);
      }
      break;
    }
  }
  return out;
}

Clique iter_fix(const std::function<Clique(const Clique&)>& step, std::uint64_t k) {
  Clique x = Clique::empty();
  for (std::uint64_t i = 0; i < k; ++i) {
    Clique next = step(x);
    // The chain is increasing, so the union only matters for explicit sets.
    if (x.form() == F::Tokens && next.form() == F::Tokens) {
      next = Clique::unite(x, next);
      if (next.form() == F::Tokens && next.token_set() == x.token_set()) break;
    }
    x = next;
  }
  return x;
}

namespace {

SemObject T(const SemObject& a, const SemObject& b) { return SemObject::tensor(a, b); }

std::vector<std::pair<Clique, Clique>> rects(const Clique& x) {
  std::vector<std::pair<Clique, Clique>> out;
  switch (x.form()) {
    case F::Rect:
      if (!x.is_empty()) out.emplace_back(x.left(), x.right());
      break;
    case F::Tokens:
      for (const auto& t : x.token_set()) {
        if (t.kind() != TK::Pair) throw IllShapedElement("tensor token expected, got " + t.str());
        out.emplace_back(Clique::singleton(t.first()), Clique::singleton(t.second()));
      }
      break;
    case F::Union:
      for (const auto& p : x.parts()) {
        auto r = rects(p);
        out.insert(out.end(), r.begin(), r.end());
      }
      break;
    default:
      throw IllShapedElement("clique is not in a tensor web");
  }
  return out;
}

TokenSet finite(const Clique& x, const char* what) {
  auto s = x.materialize();
  if (!s) throw Unrepresentable(std::string(what) + ": clique has no finite token set");
  return *s;
}

std::vector<std::uint64_t> nats(const Clique& x) {
  std::vector<std::uint64_t> out;
  for (const auto& t : finite(x, "numeral")) {
    if (t.kind() != TK::Nat) throw IllShapedElement("numeral token expected, got " + t.str());
    out.push_back(t.value());
  }
  if (out.size() > 1) throw IncoherentClique("two numerals in one clique of N");
  return out;
}

/// Explicit !-tokens of a clique of !A.
TokenSet bang_tokens(const Clique& x) {
  TokenSet s = finite(x, "exponential");
  for (const auto& t : s)
    if (t.kind() != TK::Set) throw IllShapedElement("!-token expected, got " + t.str());
  return s;
}

constexpr std::size_t kSubsetLimit = 12;

std::vector<std::vector<Token>> subsets(const std::vector<Token>& xs, std::size_t limit = kSubsetLimit) {
  if (xs.size() > limit) throw Unrepresentable("token set too large to enumerate subsets");
  std::vector<std::vector<Token>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << xs.size()); ++mask) {
    std::vector<Token> u;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (mask >> i & 1) u.push_back(xs[i]);
    out.push_back(std::move(u));
  }
  return out;
}

Clique project(const Clique& w, int side) {
  switch (w.form()) {
    case F::Prod: return side == 1 ? w.left() : w.right();
    case F::Tokens: {
      TokenSet out;
      for (const auto& t : w.token_set()) {
        if (t.kind() != TK::Tag) throw IllShapedElement("product token expected, got " + t.str());
        if (t.side() == side) out.insert(t.inner());
      }
      return Clique::tokens(std::move(out));
    }
    case F::Union: {
      Clique out = Clique::empty();
      for (const auto& p : w.parts()) out = Clique::unite(out, project(p, side));
      return out;
    }
    default:
      throw IllShapedElement("clique is not in a product web");
  }
}

/// Key for memoizing function cliques on small explicit arguments.
std::optional<std::string> memo_key(const Clique& x) {
  if (x.form() == F::Fn) return std::nullopt;
  auto s = x.materialize(64);
  if (!s) return std::nullopt;
  return to_string(*s);
}

Clique memoized(const Clique& f) {
  if (f.form() != F::Fn) return f;
  auto cache = std::make_shared<std::map<std::string, Clique>>();
  auto fn = f.function();
  return Clique::fn([fn, cache](const Clique& x) {
    auto key = memo_key(x);
    if (!key) return fn(x);
    auto it = cache->find(*key);
    if (it != cache->end()) return it->second;
    Clique y = fn(x);
    cache->emplace(*key, y);
    return y;
  });
}

}  // namespace

// ---- capabilities

namespace {

Clique distribute(const std::function<Clique(const Clique&)>& f, const Clique& x) {
  if (x.is_empty()) return Clique::empty();
  if (x.form() == F::Union) {
    Clique out = Clique::empty();
    for (const auto& p : x.parts()) out = Clique::unite(out, distribute(f, p));
    return out;
  }
  return f(x);
}

}  // namespace

M CohBackend::linear(const SemObject& dom, const SemObject& cod, std::string op,
                     std::function<Clique(const Clique&)> f) {
  return {dom, cod, [f = std::move(f)](const Clique& x) { return distribute(f, x); },
          mor_tree(std::move(op))};
}

M CohBackend::tensor(const M& f, const M& g) const {
  auto ff = f.fn;
  auto gf = g.fn;
  M m = linear(T(f.dom, g.dom), T(f.cod, g.cod), "tensor", [ff, gf](const Clique& x) {
    Clique out = Clique::empty();
    for (const auto& [a, b] : rects(x)) out = Clique::unite(out, Clique::rect(ff(a), gf(b)));
    return out;
  });
  m.tree = mor_tree("tensor", {f.tree, g.tree});
  return m;
}

M CohBackend::sym(const SemObject& a, const SemObject& b) const {
  return linear(T(a, b), T(b, a), "sym", [](const Clique& x) {
    Clique out = Clique::empty();
    for (const auto& [l, r] : rects(x)) out = Clique::unite(out, Clique::rect(r, l));
    return out;
  });
}

M CohBackend::assoc(const SemObject& a, const SemObject& b, const SemObject& c) const {
  return linear(T(a, T(b, c)), T(T(a, b), c), "assoc", [](const Clique& x) {
    Clique out = Clique::empty();
    for (const auto& [l, r] : rects(x))
      for (const auto& [m, n] : rects(r)) out = Clique::unite(out, Clique::rect(Clique::rect(l, m), n));
    return out;
  });
}

M CohBackend::assoc_inv(const SemObject& a, const SemObject& b, const SemObject& c) const {
  return linear(T(T(a, b), c), T(a, T(b, c)), "assoc_inv", [](const Clique& x) {
    Clique out = Clique::empty();
    for (const auto& [l, r] : rects(x))
      for (const auto& [k, m] : rects(l)) out = Clique::unite(out, Clique::rect(k, Clique::rect(m, r)));
    return out;
  });
}

M CohBackend::lunit(const SemObject& a) const {
  return linear(T(SemObject::unit(), a), a, "lunit", [](const Clique& x) {
    Clique out = Clique::empty();
    for (const auto& [u, y] : rects(x))
      if (u.contains(Token::star())) out = Clique::unite(out, y);
    return out;
  });
}

M CohBackend::lunit_inv(const SemObject& a) const {
  return linear(a, T(SemObject::unit(), a), "lunit_inv",
                [](const Clique& x) { return Clique::rect(Clique::singleton(Token::star()), x); });
}

M CohBackend::runit(const SemObject& a) const {
  return linear(T(a, SemObject::unit()), a, "runit", [](const Clique& x) {
    Clique out = Clique::empty();
    for (const auto& [y, u] : rects(x))
      if (u.contains(Token::star())) out = Clique::unite(out, y);
    return out;
  });
}

M CohBackend::runit_inv(const SemObject& a) const {
  return linear(a, T(a, SemObject::unit()), "runit_inv",
                [](const Clique& x) { return Clique::rect(x, Clique::singleton(Token::star())); });
}

M CohBackend::curry(const M& f, const SemObject& c, const SemObject& a) const {
  if (f.dom != T(c, a)) throw ObjectMismatch("curry: " + f.dom.str() + " is not " + T(c, a).str());
  auto ff = f.fn;
  M m = linear(c, SemObject::arrow(a, f.cod), "curry", [ff](const Clique& x) {
    return Clique::fn([ff, x](const Clique& y) { return ff(Clique::rect(x, y)); });
  });
  m.tree = mor_tree("curry", {f.tree});
  return m;
}

M CohBackend::eval(const SemObject& a, const SemObject& b) const {
  return linear(T(SemObject::arrow(a, b), a), b, "eval", [](const Clique& x) {
    Clique out = Clique::empty();
    for (const auto& [f, y] : rects(x)) out = Clique::unite(out, f.apply(y));
    return out;
  });
}

M CohBackend::pair(const M& f, const M& g) const {
  if (f.dom != g.dom) throw ObjectMismatch("pair: " + f.dom.str() + " vs " + g.dom.str());
  auto ff = f.fn;
  auto gf = g.fn;
  M m = linear(f.dom, SemObject::prod(f.cod, g.cod), "pair",
               [ff, gf](const Clique& x) { return Clique::prod(ff(x), gf(x)); });
  m.tree = mor_tree("pair", {f.tree, g.tree});
  return m;
}

M CohBackend::proj1(const SemObject& a, const SemObject& b) const {
  return linear(SemObject::prod(a, b), a, "proj1", [](const Clique& x) { return project(x, 1); });
}

M CohBackend::proj2(const SemObject& a, const SemObject& b) const {
  return linear(SemObject::prod(a, b), b, "proj2", [](const Clique& x) { return project(x, 2); });
}

M CohBackend::bang(const M& f) const {
  auto ff = f.fn;
  M m = linear(SemObject::bang(f.dom), SemObject::bang(f.cod), "bang", [ff](const Clique& x) {
    if (x.form() == F::Prom) return Clique::prom(ff(x.inner()));
    // (u, v) is in the trace when v collects, for each a ∈ u, a non-empty part of f({a}).
    TokenSet out;
    for (const auto& u : bang_tokens(x)) {
      std::vector<TokenSet> partial{TokenSet{}};
      for (const auto& a : u.elems()) {
        auto img = finite(ff(Clique::singleton(a)), "!f");
        std::vector<TokenSet> next;
        for (const auto& part : subsets(std::vector<Token>(img.begin(), img.end()))) {
          if (part.empty()) continue;
          for (const auto& acc : partial) {
            TokenSet v = acc;
            v.insert(part.begin(), part.end());
            next.push_back(std::move(v));
          }
        }
        partial = std::move(next);
      }
      for (const auto& v : partial) out.insert(Token::set(std::vector<Token>(v.begin(), v.end())));
    }
    return Clique::tokens(std::move(out));
  });
  m.tree = mor_tree("bang", {f.tree});
  return m;
}

M CohBackend::delta(const SemObject& a) const {
  SemObject ba = SemObject::bang(a);
  return linear(ba, SemObject::bang(ba), "delta", [](const Clique& x) {
    if (x.form() == F::Prom) return Clique::prom(x);
    TokenSet us = bang_tokens(x);
    for (const auto& u : us)
      if (std::size_t{1} << std::min<std::size_t>(u.elems().size(), 8) > kSubsetLimit)
        throw Unrepresentable("delta: token too large to enumerate covers");
    TokenSet out;
    for (const auto& u : us) {
      std::vector<Token> parts;
      for (auto& s : subsets(u.elems())) parts.push_back(Token::set(std::move(s)));
      for (const auto& cover : subsets(parts)) {
        TokenSet un;
        for (const auto& v : cover) un.insert(v.elems().begin(), v.elems().end());
        if (un.size() == u.elems().size()) out.insert(Token::set(cover));
      }
    }
    return Clique::tokens(std::move(out));
  });
}

M CohBackend::epsilon(const SemObject& a) const {
  return linear(SemObject::bang(a), a, "epsilon", [](const Clique& x) {
    if (x.form() == F::Prom) return x.inner();
    TokenSet out;
    for (const auto& u : bang_tokens(x))
      if (u.elems().size() == 1) out.insert(u.elems()[0]);
    return Clique::tokens(std::move(out));
  });
}

M CohBackend::q(const SemObject& a, const SemObject& b) const {
  return linear(T(SemObject::bang(a), SemObject::bang(b)), SemObject::bang(T(a, b)), "q",
                [](const Clique& x) {
                  Clique out = Clique::empty();
                  for (const auto& [l, r] : rects(x)) {
                    if (l.form() == F::Prom && r.form() == F::Prom) {
                      out = Clique::unite(out, Clique::prom(Clique::rect(l.inner(), r.inner())));
                      continue;
                    }
                    TokenSet ls = bang_tokens(l), rs = bang_tokens(r);
                    std::size_t wl = 0, wr = 0;
                    for (const auto& u : ls) wl = std::max(wl, u.elems().size());
                    for (const auto& v : rs) wr = std::max(wr, v.elems().size());
                    if (wl * wr > kSubsetLimit) throw Unrepresentable("q: token grid too large");
                    TokenSet ts;
                    for (const auto& u : ls)
                      for (const auto& v : rs) {
                        std::vector<Token> grid;
                        for (const auto& s : u.elems())
                          for (const auto& t : v.elems()) grid.push_back(Token::pair(s, t));
                        for (const auto& w : subsets(grid)) {
                          TokenSet p1, p2;
                          for (const auto& t : w) {
                            p1.insert(t.first());
                            p2.insert(t.second());
                          }
                          if (p1.size() == u.elems().size() && p2.size() == v.elems().size())
                            ts.insert(Token::set(w));
                        }
                      }
                    out = Clique::unite(out, Clique::tokens(std::move(ts)));
                  }
                  return out;
                });
}

M CohBackend::q1() const {
  return linear(SemObject::unit(), SemObject::bang(SemObject::unit()), "q1",
                [](const Clique&) { return Clique::prom(Clique::singleton(Token::star())); });
}

M CohBackend::d(const SemObject& a) const {
  SemObject ba = SemObject::bang(a);
  return linear(ba, T(ba, ba), "d", [](const Clique& x) {
    if (x.form() == F::Prom) return Clique::rect(x, x);
    TokenSet out;
    for (const auto& u : bang_tokens(x)) {
      auto subs = subsets(u.elems());
      for (const auto& v : subs)
        for (const auto& w : subs) {
          TokenSet un(v.begin(), v.end());
          un.insert(w.begin(), w.end());
          if (un.size() == u.elems().size()) out.insert(Token::pair(Token::set(v), Token::set(w)));
        }
    }
    return Clique::tokens(std::move(out));
  });
}

M CohBackend::e(const SemObject& a) const {
  return linear(SemObject::bang(a), SemObject::unit(), "e", [](const Clique& x) {
    if (x.form() == F::Prom || x.contains(Token::set({}))) return Clique::singleton(Token::star());
    bang_tokens(x);
    return Clique::empty();
  });
}

M CohBackend::zero() const { return num(0); }

M CohBackend::num(std::uint64_t k) const {
  return linear(SemObject::unit(), SemObject::nat(), k == 0 ? "zero" : "num" + std::to_string(k),
                [k](const Clique& x) {
                  if (!x.contains(Token::star())) throw IllShapedElement("unit clique expected");
                  return Clique::singleton(Token::nat(k));
                });
}

M CohBackend::succ() const {
  return linear(SemObject::nat(), SemObject::nat(), "succ", [](const Clique& x) {
    TokenSet out;
    for (auto n : nats(x)) out.insert(Token::nat(n + 1));
    return Clique::tokens(std::move(out));
  });
}

M CohBackend::pred() const {
  return linear(SemObject::nat(), SemObject::nat(), "pred", [](const Clique& x) {
    TokenSet out;
    for (auto n : nats(x)) out.insert(Token::nat(n == 0 ? 0 : n - 1));
    return Clique::tokens(std::move(out));
  });
}

M CohBackend::p() const {
  return linear(SemObject::nat(), SemObject::bang(SemObject::nat()), "p", [](const Clique& x) {
    nats(x);
    return Clique::prom(x);
  });
}

M CohBackend::cN() const {
  SemObject n = SemObject::nat();
  return linear(n, T(n, n), "cN", [](const Clique& x) {
    TokenSet out;
    for (auto v : nats(x)) out.insert(Token::pair(Token::nat(v), Token::nat(v)));
    return Clique::tokens(std::move(out));
  });
}

M CohBackend::wN() const {
  return linear(SemObject::nat(), SemObject::unit(), "wN", [](const Clique& x) {
    nats(x);
    return Clique::singleton(Token::star());
  });
}

M CohBackend::lif() const {
  SemObject n = SemObject::nat();
  return linear(T(n, SemObject::prod(n, n)), n, "lif", [](const Clique& x) {
    Clique out = Clique::empty();
    for (const auto& [c, w] : rects(x))
      for (auto v : nats(c)) out = Clique::unite(out, project(w, v == 0 ? 1 : 2));
    return out;
  });
}

M CohBackend::fix(const SemObject& b) const {
  SemObject dom = SemObject::bang(SemObject::arrow(SemObject::bang(b), b));
  std::uint64_t k = fix_iterations();
  return linear(dom, b, "fix", [k](const Clique& x) {
    if (x.form() == F::Prom) {
      Clique f = x.inner();
      return iter_fix([f](const Clique& y) { return memoized(f.apply(Clique::prom(y))); }, k);
    }
    // Token u contributes what its least fixpoint has and no smaller u' has.
    auto lfp = [k](const std::vector<Token>& u) {
      Clique f = Clique::tokens(TokenSet(u.begin(), u.end()));
      return finite(iter_fix([f](const Clique& y) { return f.apply(Clique::prom(y)); }, k), "fix");
    };
    TokenSet out;
    for (const auto& u : bang_tokens(x)) {
      TokenSet here = lfp(u.elems());
      for (std::size_t i = 0; i < u.elems().size(); ++i) {
        auto smaller = u.elems();
        smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
        for (const auto& t : lfp(smaller)) here.erase(t);
      }
      out.insert(here.begin(), here.end());
    }
    return Clique::tokens(std::move(out));
  });
}

std::optional<std::uint64_t> CohBackend::ground_value(const Clique& x) const {
  auto v = nats(x);
  if (v.empty()) return std::nullopt;
  return v[0];
}

std::vector<Clique> CohBackend::samples(const SemObject& a, const ObsSpec& obs,
                                        Sampler<Clique>& sub) const {
  std::vector<Clique> out{Clique::empty()};
  switch (a.kind()) {
    case SemObject::Kind::Unit:
      out.push_back(Clique::singleton(Token::star()));
      break;
    case SemObject::Kind::Nat:
      for (std::uint64_t i = 0; i <= obs.s; ++i) out.push_back(Clique::singleton(Token::nat(i)));
      break;
    case SemObject::Kind::Tensor:
    case SemObject::Kind::Prod: {
      bool tensor = a.kind() == SemObject::Kind::Tensor;
      auto ls = sub.of(a.left());
      auto rs = sub.of(a.right());
      for (const auto& l : ls)
        for (const auto& r : rs) {
          if (tensor && (l.is_empty() || r.is_empty())) continue;
          if (!tensor && l.is_empty() && r.is_empty()) continue;
          out.push_back(tensor ? Clique::rect(l, r) : Clique::prod(l, r));
        }
      break;
    }
    case SemObject::Kind::Bang:
      for (const auto& x : sub.of(a.inner())) out.push_back(Clique::prom(x));
      break;
    case SemObject::Kind::Arrow:
      for (const auto& t : probe_tokens(a, obs.budget, token_cap)) out.push_back(Clique::singleton(t));
      break;
  }
  return out;
}

namespace {

bool has_arrow(const SemObject& a) {
  switch (a.kind()) {
    case SemObject::Kind::Arrow: return true;
    case SemObject::Kind::Unit:
    case SemObject::Kind::Nat: return false;
    case SemObject::Kind::Bang: return has_arrow(a.inner());
    default: return has_arrow(a.left()) || has_arrow(a.right());
  }
}

}  // namespace

std::string CohBackend::observe(const Clique& x, const SemObject& a, const ObsSpec& obs,
                                Sampler<Clique>& sub) const {
  // Observations depend only on the web, never on the clique representation.
  if (!has_arrow(a)) {
    if (auto s = x.materialize()) {
      if (!is_clique(*s, a)) throw IncoherentClique(to_string(*s) + " is not a clique of " + a.str());
      return to_string(*s);
    }
  }
  if (a.kind() == SemObject::Kind::Arrow) {
    std::string out = "{";
    bool first = true;
    for (const auto& t : probe_tokens(a.left(), obs.budget, token_cap)) {
      std::string r = observe(x.apply(Clique::singleton(t)), a.right(), obs, sub);
      if (r == "{}") continue;
      if (!first) out += ", ";
      first = false;
      out += t.str() + " |-> " + r;
    }
    return out + "}";
  }
  TokenSet seen;
  for (const auto& t : probe_tokens(a, obs.budget, token_cap))
    if (x.contains(t)) seen.insert(t);
  return "~" + to_string(seen);
}

std::vector<Clique> CohBackend::probes(const SemObject& a, const ObsSpec& obs) const {
  std::vector<Clique> out;
  for (const auto& t : probe_tokens(a, obs.budget, token_cap)) out.push_back(Clique::singleton(t));
  return out;
}

TracePairs trace_probe(const Morphism<Clique>& f, std::uint64_t budget, std::size_t cap) {
  TracePairs out;
  for (const auto& a : probe_tokens(f.dom, budget, cap)) {
    Clique y = f(Clique::singleton(a));
    if (auto s = y.materialize()) {
      for (const auto& b : *s) out.emplace_back(a, b);
      continue;
    }
    for (const auto& b : probe_tokens(f.cod, budget, cap))
      if (y.contains(b)) out.emplace_back(a, b);
  }
  return out;
}

std::string to_string(const TracePairs& t) {
  std::string s = "{";
  for (std::size_t i = 0; i < t.size(); ++i)
    s += (i ? ", " : "") + std::string("(") + t[i].first.str() + ", " + t[i].second.str() + ")";
  return s + "}";
}

}  // namespace sllam
