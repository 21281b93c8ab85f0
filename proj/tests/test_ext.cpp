#include <gtest/gtest.h>

#include "sllam/coh.hpp"
#include "sllam/ext.hpp"
#include "sllam/strict.hpp"
#include "support.hpp"

using namespace sllam;
using sllam::testing::P;
using sllam::testing::PX;

namespace {

template <class E>
Verdict same(Backend<E>& b, const Term& l, const Term& r) {
  ObsSpec obs;
  obs.ext = true;
  Sampler<E> s(b, obs);
  auto dl = infer_ext({}, l).derivation;
  auto dr = infer_ext({}, r).derivation;
  return semantic_eq(approximants(*dl, b, obs.k), approximants(*dr, b, obs.k), s).verdict;
}

void both_equal(const Term& l, const Term& r) {
  StrictBackend sb;
  CohBackend cb;
  EXPECT_EQ(same(sb, l, r), Verdict::Equal) << pretty(l) << " vs " << pretty(r) << " (strict)";
  EXPECT_EQ(same(cb, l, r), Verdict::Equal) << pretty(l) << " vs " << pretty(r) << " (coh)";
}

}  // namespace

TEST(InferExt, Examples) {
  EXPECT_EQ(infer_ext({}, PX("discard 0 in 1")).type, Type::ground());
  EXPECT_EQ(infer_ext({}, PX("copy 2 as x, y in lif x then y else 0")).type, Type::ground());
  EXPECT_EQ(infer_ext({}, PX("promote!(succ 0)")).type, Type::bang(Type::ground()));
  try {
    infer({}, PX("discard 0 in 1"));
    FAIL() << "core mode accepted an extension term";
  } catch (const TypeError& e) {
    EXPECT_EQ(e.code(), TypeError::Code::ExtensionDisabled);
  }
}

TEST(StepExt, PaperExamples) {
  auto fire = [](const std::string& s, RuleTag tag) {
    Term t = PX(s);
    auto sites = find_redexes(t);
    for (const auto& site : sites)
      if (site.tag == tag) return step_ext(t, site);
    ADD_FAILURE() << "no " << to_string(tag) << " in " << s;
    return t;
  };
  EXPECT_TRUE(alpha_eq(fire("discard (succ 2) in 7", RuleTag::DiscardSucc), PX("discard 2 in 7")));
  EXPECT_TRUE(alpha_eq(fire("copy 0 as x, y in lif x then y else 1", RuleTag::CopyZero),
                       PX("lif 0 then 0 else 1")));
  EXPECT_TRUE(alpha_eq(fire("derelict (promote!(3))", RuleTag::DerelictPromote), PX("3")));
  EXPECT_THROW(step_ext(P("pred 1"), {{}, RuleTag::DeltaPredSucc}), InvalidSite);
  EXPECT_EQ(ext_rule_tags().size(), 8u);
}

TEST(DenoteExt, Examples) {
  both_equal(PX("discard 0 in 1"), PX("1"));
  both_equal(PX("copy 2 as x, y in x"), PX("2"));
  both_equal(PX("copy 2 as x, y in y"), PX("2"));
  both_equal(PX("derelict (promote!(3))"), PX("3"));
  both_equal(PX("copy 3 as x, y in lif pred x then y else succ y"), PX("4"));
}

TEST(DenoteExt, RewritesPreserveDenotation) {
  std::vector<std::string> corpus = {
      "discard (succ 2) in 7",
      "discard 0 in 7",
      "copy 0 as x, y in lif x then y else 1",
      "copy succ 1 as x, y in lif x then y else 1",
      "derelict (promote!(3))",
      "discard promote!(2) in 1",
      "copy (promote!(2)) as u, v : !iota in discard u in derelict v",
      "(\\z:iota. copy z as x, y in lif x then succ y else 0) 2",
  };
  for (const auto& src : corpus) {
    Term t = PX(src);
    for (const auto& site : find_redexes(t)) both_equal(t, step_at(t, site));
  }
}
