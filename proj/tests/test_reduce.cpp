#include <gtest/gtest.h>

#include "sllam/reduce.hpp"
#include "sllam/typecheck.hpp"
#include "support.hpp"

using namespace sllam;
using sllam::testing::P;
using sllam::testing::PX;

namespace {

const std::string kAdd =
    "(mu $a:iota -o iota -o iota.\\x:iota.\\y:iota. lif x then y else succ ($a (pred x) y))";

std::vector<RuleTag> tags(const Term& t) {
  std::vector<RuleTag> out;
  for (const auto& s : find_redexes(t)) out.push_back(s.tag);
  return out;
}

}  // namespace

TEST(Redexes, Examples) {
  auto a = find_redexes(P("pred (succ 0)"));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].tag, RuleTag::DeltaPredSucc);
  EXPECT_TRUE(a[0].path.empty());

  auto b = find_redexes(P("(\\x:iota.x) (pred 1)"));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].tag, RuleTag::DeltaPredSucc);
  EXPECT_EQ(b[0].path, (Path{1}));

  auto c = find_redexes(P("mu $f:iota.$f"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].tag, RuleTag::Y);
}

TEST(Redexes, NoRuleForPredZero) {
  EXPECT_TRUE(find_redexes(P("pred 0")).empty());
  EXPECT_TRUE(find_redexes(P("lif x then 1 else 2")).empty());
  EXPECT_TRUE(find_redexes(P("succ (pred 0)")).empty());
}

TEST(Redexes, OrderIsPreorder) {
  Term t = P("(\\f:iota -o iota. f (pred 1)) (\\y:iota. lif 0 then y else y)");
  auto s = find_redexes(t);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].tag, RuleTag::BetaHigher);
  EXPECT_EQ(s[1].path, (Path{0, 0, 1}));
  EXPECT_EQ(s[2].tag, RuleTag::DeltaIfZero);
}

TEST(Step, DeltaAndBeta) {
  EXPECT_TRUE(alpha_eq(step_at(P("lif 0 then 1 else 2"), {{}, RuleTag::DeltaIfZero}), P("1")));
  EXPECT_TRUE(alpha_eq(step_at(P("lif 3 then 1 else 2"), {{}, RuleTag::DeltaIfSucc}), P("2")));
  EXPECT_TRUE(alpha_eq(step_at(P("(\\f:iota-o iota. f 0) succ"), {{}, RuleTag::BetaHigher}),
                       P("succ 0")));
  EXPECT_TRUE(alpha_eq(step_at(P("(\\x:iota. succ x) 2"), {{}, RuleTag::BetaIota}), P("3")));
  Term omega = P("mu $f:iota.$f");
  EXPECT_TRUE(alpha_eq(step_at(omega, {{}, RuleTag::Y}), omega));
}

TEST(Step, InvalidSite) {
  EXPECT_THROW(step_at(P("(\\x:iota.x) (pred 1)"), {{}, RuleTag::BetaIota}), InvalidSite);
  EXPECT_THROW(step_at(P("0"), {{0}, RuleTag::Y}), InvalidSite);
  EXPECT_THROW(step_at(P("pred 0"), {{}, RuleTag::DeltaPredSucc}), InvalidSite);
}

TEST(Normalize, Examples) {
  auto r = normalize(P("(\\x:iota.x) (pred 1)"), Strategy::leftmost(), 10);
  EXPECT_TRUE(alpha_eq(r.term, P("0")));
  EXPECT_EQ(r.steps, 2u);
  EXPECT_FALSE(r.exhausted);

  Term omega = P("mu $f:iota.$f");
  auto o = normalize(omega, Strategy::leftmost(), 50);
  EXPECT_TRUE(o.exhausted);
  EXPECT_EQ(o.steps, 50u);
  EXPECT_TRUE(alpha_eq(o.term, omega));
}

TEST(Normalize, AddMatchesArithmetic) {
  for (unsigned a = 0; a <= 4; ++a) {
    for (unsigned b = 0; b <= 4; ++b) {
      Term t = P(kAdd + " " + std::to_string(a) + " " + std::to_string(b));
      auto r = normalize(t, Strategy::leftmost(), 1000);
      ASSERT_FALSE(r.exhausted) << a << "+" << b;
      EXPECT_EQ(numeral_of(r.term), a + b);
    }
  }
  // Non-numeral arguments must not push the strategy under the binder.
  auto r = normalize(P(kAdd + " (pred 3) (succ 2)"), Strategy::leftmost(), 1000);
  EXPECT_EQ(numeral_of(r.term), 5u);
}

TEST(Normalize, LeftmostIsDeterministic) {
  Term t = P(kAdd + " (pred 3) 2");
  auto a = normalize(t, Strategy::leftmost(), 37, true);
  auto b = normalize(t, Strategy::leftmost(), 37, true);
  EXPECT_EQ(format_trace(a.trace), format_trace(b.trace));
  EXPECT_TRUE(alpha_eq(a.term, b.term));
}

TEST(Normalize, RandomReachesSameNumeral) {
  Term t = P(kAdd + " 2 (pred 2)");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto r = normalize(t, Strategy::random(seed), 5000);
    if (r.exhausted) continue;
    EXPECT_EQ(numeral_of(r.term), 3u) << seed;
  }
}

TEST(Normalize, SubjectReductionAndIotaGuard) {
  std::vector<std::string> corpus = {
      kAdd + " 2 (pred 3)",
      "(\\f:iota -o iota. f (pred 1)) (\\y:iota. lif y then y else pred y)",
      "lif (pred 1) then (\\x:iota. x) 3 else 0",
      "(mu $g:iota -o iota.\\n:iota. lif n then 0 else $g (pred n)) 4",
  };
  for (const auto& src : corpus) {
    Term t = P(src);
    Type ty = infer({}, t).type;
    Term cur = t;
    for (int i = 0; i < 200; ++i) {
      auto sites = find_redexes(cur);
      if (sites.empty()) break;
      for (const auto& s : sites)
        if (s.tag == RuleTag::BetaIota)
          EXPECT_TRUE(numeral_of(subterm_at(cur, s.path).child(1)).has_value());
      auto next = step_at(cur, sites[static_cast<std::size_t>(i) % sites.size()]);
      EXPECT_EQ(infer({}, next).type, ty) << pretty(cur) << " -> " << pretty(next);
      cur = next;
    }
  }
}

TEST(Trace, Format) {
  auto r = normalize(P("(\\x:iota.x) (pred 1)"), Strategy::leftmost(), 10, true);
  EXPECT_EQ(format_trace(r.trace), "1  delta-pred  (\\x:iota. x) 0\n.  beta-iota  0\n");
}

TEST(Join, PredSuccBeta) {
  // delta-pred needs a numeral under succ, so only the inner beta fires here.
  EXPECT_EQ(find_redexes(P("pred (succ ((\\x:iota.x) 0))")).size(), 1u);
  auto r = join_probe(P("lif ((\\x:iota.x) 0) then pred 1 else 2"), 100, 0);
  EXPECT_TRUE(r.joined);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(alpha_eq(*r.witness, P("0")));
}

TEST(Join, SingleRedexRejected) {
  EXPECT_THROW(join_probe(P("pred 1"), 100, 0), std::invalid_argument);
}

TEST(Join, OmegaSpine) {
  // Ω under an argument position never disappears: the probe cannot join the
  // Y-unfolding with the other branch and reports exhaustion, not failure.
  auto r = join_probe(P("(\\x:iota. x) (lif 0 then mu $f:iota.$f else 1)"), 60, 1);
  EXPECT_TRUE(r.joined || r.exhausted);
}

TEST(Join, ManySeeds) {
  Term t = P(kAdd + " (pred 2) ((\\y:iota. succ y) 1)");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = join_probe(t, 2000, seed);
    EXPECT_TRUE(r.joined || r.exhausted);
    EXPECT_FALSE(!r.joined && !r.exhausted) << seed;
  }
}

TEST(Ext, Rewrites) {
  auto one = [](const std::string& s) {
    Term t = PX(s);
    auto sites = find_redexes(t);
    EXPECT_FALSE(sites.empty()) << s;
    return step_at(t, sites.front());
  };
  EXPECT_TRUE(alpha_eq(one("discard (succ 2) in 7"), PX("discard 2 in 7")));
  EXPECT_TRUE(alpha_eq(one("discard 0 in 7"), PX("7")));
  EXPECT_TRUE(alpha_eq(one("copy 0 as x, y in lif x then y else 1"), PX("lif 0 then 0 else 1")));
  EXPECT_TRUE(alpha_eq(one("copy succ 1 as x, y in lif x then y else 1"),
                       PX("copy 1 as x, y in lif succ x then succ y else 1")));
  EXPECT_TRUE(alpha_eq(one("derelict (promote!(3))"), PX("3")));
  EXPECT_TRUE(alpha_eq(one("discard promote!(2) in 1"), PX("discard 2 in 1")));
  EXPECT_TRUE(alpha_eq(one("copy (promote!(2)) as u, v : !iota in discard u in derelict v"),
                       PX("copy 2 as u, v in discard promote!(u) in derelict promote!(v)")));
  EXPECT_TRUE(alpha_eq(one("promote!(promote!(1)) as z in derelict (promote!(derelict z))"),
                       PX("promote!(promote!(1)) as z in derelict z")));
  EXPECT_TRUE(tags(PX("promote!(promote!(1)) as z in derelict z")).empty());
}
