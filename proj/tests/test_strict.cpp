#include <gtest/gtest.h>

#include <map>
#include <optional>

#include "sllam/interpret.hpp"
#include "sllam/strict.hpp"
#include "support.hpp"

using namespace sllam;
using sllam::testing::P;

namespace {

using SE = StrictElem;

const std::string kAdd =
    "(mu $a:iota -o iota -o iota.\\x:iota.\\y:iota. lif x then y else succ ($a (pred x) y))";

const SemObject N = SemObject::nat();
const SemObject One = SemObject::unit();

Morphism<SE> den(const StrictBackend& b, const std::string& src) {
  return interpret(*infer({}, P(src)).derivation, b);
}

std::optional<std::uint64_t> val(const SE& x) {
  if (x.kind() == SE::Kind::Nat) return x.value();
  return std::nullopt;
}

// Hand Kleene table of the ADD functional: t0 = ⊥, t(i+1)(a,b) = a==0 ? b : t(i)(a-1,b)+1.
std::optional<std::uint64_t> add_table(std::uint64_t k, std::uint64_t a, std::uint64_t b) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> t;
  for (std::uint64_t i = 0; i < k; ++i) {
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> next;
    for (std::uint64_t x = 0; x <= 8; ++x)
      for (std::uint64_t y = 0; y <= 8; ++y) {
        if (x == 0) next[{x, y}] = y;
        else if (t.count({x - 1, y})) next[{x, y}] = t[{x - 1, y}] + 1;
      }
    t = next;
  }
  auto it = t.find({a, b});
  if (it == t.end()) return std::nullopt;
  return it->second;
}

}  // namespace

TEST(StrictElem, SmashAndProduct) {
  EXPECT_TRUE(SE::pair(SE::bottom(), SE::nat(1)).is_bottom());
  EXPECT_TRUE(SE::pair(SE::nat(1), SE::bottom()).is_bottom());
  EXPECT_TRUE(SE::prod(SE::bottom(), SE::bottom()).is_bottom());
  EXPECT_FALSE(SE::prod(SE::bottom(), SE::nat(1)).is_bottom());
  EXPECT_FALSE(SE::up(SE::bottom()).is_bottom());
}

TEST(StrictBackend, CapabilityExamples) {
  StrictBackend b;
  EXPECT_EQ(b.pred()(SE::nat(4)).value(), 3u);
  EXPECT_EQ(b.pred()(SE::nat(0)).value(), 0u);
  EXPECT_EQ(b.lif()(SE::pair(SE::nat(0), SE::prod(SE::nat(7), SE::nat(9)))).value(), 7u);
  EXPECT_EQ(b.lif()(SE::pair(SE::nat(2), SE::prod(SE::nat(7), SE::nat(9)))).value(), 9u);
  EXPECT_TRUE(b.lif()(SE::pair(SE::nat(2), SE::prod(SE::nat(7), SE::bottom()))).is_bottom());
  EXPECT_EQ(b.e(N)(SE::up(SE::nat(5))).kind(), SE::Kind::Top);
  EXPECT_TRUE(b.e(N)(SE::bottom()).is_bottom());
  EXPECT_EQ(b.cN()(SE::nat(3)).first().value(), 3u);
  EXPECT_EQ(b.p()(SE::nat(3)).lowered().value(), 3u);
  EXPECT_TRUE(b.num(4)(SE::bottom()).is_bottom());
  EXPECT_EQ(b.num(4)(SE::top()).value(), 4u);
  EXPECT_THROW(b.succ()(SE::top()), IllShapedElement);
}

TEST(StrictBackend, EveryCapabilityIsStrict) {
  StrictBackend b;
  SemObject A = SemObject::arrow(N, N);
  std::vector<Morphism<SE>> ms = {
      b.sym(N, N),      b.assoc(N, N, N), b.assoc_inv(N, N, N), b.lunit(N), b.lunit_inv(N),
      b.runit(N),       b.runit_inv(N),   b.eval(N, N),         b.proj1(N, N), b.proj2(N, N),
      b.delta(N),       b.epsilon(N),     b.q(N, N),            b.q1(),      b.d(A),
      b.e(A),           b.zero(),         b.succ(),             b.pred(),    b.num(3),
      b.p(),            b.cN(),           b.wN(),               b.lif(),     b.fix(N),
      b.bang(b.succ()), b.curry(b.lunit(N), One, N), b.pair(b.succ(), b.pred()),
      b.tensor(b.succ(), b.pred())};
  for (const auto& m : ms) EXPECT_TRUE(m(SE::bottom()).is_bottom()) << m.dump();
}

TEST(StrictBackend, NumeralDiagramAndCounit) {
  StrictBackend b;
  for (std::uint64_t k = 0; k <= 8; ++k) {
    EXPECT_EQ(b.compose(b.pred(), b.num(k + 1))(SE::top()).value(), k);
    auto r = b.compose(b.epsilon(N), b.p())(SE::nat(k));
    EXPECT_EQ(r.value(), k);
  }
}

TEST(KleeneFix, Examples) {
  auto c = kleene_fix([](const SE&) { return SE::nat(3); }, 1);
  EXPECT_EQ(c.value(), 3u);
  for (std::uint64_t k = 0; k < 6; ++k)
    EXPECT_TRUE(kleene_fix([](const SE& x) { return x; }, k).is_bottom());
}

TEST(KleeneFix, AddMatchesHandTable) {
  StrictBackend b;
  auto d = infer({}, P(kAdd)).derivation;
  for (std::uint64_t k = 0; k <= 6; ++k) {
    b.set_fix_iterations(k);
    SE add = interpret(*d, b)(SE::top());
    for (std::uint64_t x = 0; x <= 5; ++x)
      for (std::uint64_t y = 0; y <= 5; ++y)
        EXPECT_EQ(val(add.apply(SE::nat(x)).apply(SE::nat(y))), add_table(k, x, y))
            << "k=" << k << " " << x << "+" << y;
  }
}

TEST(Samples, Examples) {
  ObsSpec obs;
  obs.s = 2;
  auto ns = sample_elems(N, obs);
  ASSERT_EQ(ns.size(), 4u);
  EXPECT_TRUE(ns[0].is_bottom());
  for (std::uint64_t i = 0; i < 3; ++i) EXPECT_EQ(ns[i + 1].value(), i);
  auto us = sample_elems(One, obs);
  ASSERT_EQ(us.size(), 2u);
  EXPECT_TRUE(us[0].is_bottom());
  EXPECT_EQ(us[1].kind(), SE::Kind::Top);

  obs.sample_terms[nat_to_nat()] = {P("succ")};
  auto fs = sample_elems(SemObject::arrow(N, N), obs);
  bool found = false;
  for (const auto& f : fs)
    if (val(f.apply(SE::nat(1))) == 2u) found = true;
  EXPECT_TRUE(found);
}

TEST(Interpret, Examples) {
  StrictBackend b;
  ObsSpec obs;
  Sampler<SE> s(b, obs);
  EXPECT_EQ(semantic_eq(den(b, "0"), b.zero(), s).verdict, Verdict::Equal);
  EXPECT_EQ(semantic_eq(den(b, "pred (succ 0)"), b.zero(), s).verdict, Verdict::Equal);
  auto z1 = semantic_eq(b.zero(), b.num(1), s);
  EXPECT_EQ(z1.verdict, Verdict::Distinct);
  EXPECT_EQ(z1.witness, "T");

  auto id = interpret(*infer(Basis{{"x", VarKind::Ground, Type::ground()}}, P("x")).derivation, b);
  EXPECT_EQ(id.dom, SemObject::tensor(N, One));
  EXPECT_EQ(semantic_eq(id, b.runit(N), s).verdict, Verdict::Equal);
}

TEST(Interpret, ObjectsOfBasis) {
  EXPECT_EQ(interpret_basis(Basis{}), One);
  EXPECT_EQ(interpret_basis(Basis{{"x", VarKind::Ground, Type::ground()}}),
            SemObject::tensor(N, One));
  EXPECT_EQ(interpret_basis(Basis{{"$f", VarKind::Stable, nat_to_nat()}}),
            SemObject::tensor(SemObject::bang(SemObject::arrow(N, N)), One));
  EXPECT_EQ(interpret_type(Type::bang(Type::ground())), SemObject::bang(N));
}

TEST(DenoteGround, Examples) {
  StrictBackend b;
  ObsSpec obs;
  EXPECT_EQ(denote_ground(P("pred (succ 0)"), b, obs).str(), "Num(0)");
  EXPECT_EQ(denote_ground(P("mu $f:iota.$f"), b, obs).str(), "Bottom");
  obs.k = 4;
  EXPECT_EQ(denote_ground(P(kAdd + " 2 3"), b, obs).str(), "Num(5)");
  obs.k = 2;
  EXPECT_EQ(denote_ground(P(kAdd + " 2 3"), b, obs).str(), "Unstable");
  for (std::uint64_t k = 0; k <= obs.s; ++k)
    EXPECT_EQ(denote_ground(numeral(k), b, obs).str(), "Num(" + std::to_string(k) + ")");
}

TEST(SemanticEq, IdentityOnOmega) {
  StrictBackend b;
  ObsSpec obs;
  Sampler<SE> s(b, obs);
  auto d1 = infer({}, P("(\\x:iota.x) (mu $f:iota.$f)")).derivation;
  auto d2 = infer({}, P("mu $f:iota.$f")).derivation;
  auto r = semantic_eq(approximants(*d1, b, 16), approximants(*d2, b, 16), s);
  EXPECT_EQ(r.verdict, Verdict::Equal);
}

TEST(SemanticEq, ObjectMismatch) {
  StrictBackend b;
  ObsSpec obs;
  Sampler<SE> s(b, obs);
  EXPECT_THROW(semantic_eq(b.zero(), b.succ(), s), ObjectMismatch);
}
