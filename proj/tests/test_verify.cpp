#include <gtest/gtest.h>

#include "sllam/coh.hpp"
#include "sllam/mutants.hpp"
#include "sllam/strict.hpp"
#include "sllam/verify.hpp"
#include "support.hpp"

using namespace sllam;
using sllam::testing::P;

namespace {

const std::string kAdd =
    "(mu $a:iota -o iota -o iota.\\x:iota.\\y:iota. lif x then y else succ ($a (pred x) y))";

std::map<std::string, LawReport> by_name(const std::vector<LawReport>& rs) {
  std::map<std::string, LawReport> out;
  for (const auto& r : rs) out[r.law] = r;
  return out;
}

}  // namespace

TEST(GenTerm, EmitsTheListedShapes) {
  bool pred_succ = false, lam_lif = false;
  for (std::uint64_t seed = 0; seed < 3000 && !(pred_succ && lam_lif); ++seed) {
    Term a = gen_term({}, Type::ground(), 5, seed);
    if (alpha_eq(a, P("pred (succ 0)"))) pred_succ = true;
    Term b = gen_term({}, nat_to_nat(), 7, seed);
    if (alpha_eq(b, P("\\x:iota. lif x then 0 else 1"))) lam_lif = true;
  }
  EXPECT_TRUE(pred_succ);
  EXPECT_TRUE(lam_lif);
}

TEST(GenTerm, CorpusAlwaysTypechecks) {
  std::map<RuleTag, int> seen;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Type ty = seed % 4 == 0 ? nat_to_nat() : Type::ground();
    Term t = gen_term({}, ty, 25, seed);
    EXPECT_LE(t.size(), 25u);
    EXPECT_EQ(infer({}, t).type, ty) << pretty(t);
    for (const auto& s : find_redexes(t)) ++seen[s.tag];
  }
  for (auto tag : {RuleTag::BetaHigher, RuleTag::BetaIota, RuleTag::Y, RuleTag::DeltaPredSucc,
                   RuleTag::DeltaIfZero, RuleTag::DeltaIfSucc})
    EXPECT_GT(seen[tag], 0) << to_string(tag);
}

TEST(GenTerm, HonorsLinearBasis) {
  Basis b{{"y", VarKind::Ground, Type::ground()}, {"f", VarKind::Higher, nat_to_nat()}};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Term t = gen_term(b, Type::ground(), 12, seed);
    // lif branches share their basis, so f may occur once per branch.
    EXPECT_GE(count_free(t, "f"), 1u) << pretty(t);
    EXPECT_NO_THROW(check(b, t, Type::ground())) << pretty(t);
  }
  EXPECT_THROW(gen_term({}, Type::ground(), 0, 1), GenerationFailed);
}

TEST(GenTerm, ExtensionCorpusTypechecks) {
  GenOptions o;
  o.ext = true;
  int ext_nodes = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Term t = gen_term({}, Type::ground(), 20, seed, o);
    TypingOptions topts;
    topts.mode = TypingMode::Extended;
    EXPECT_NO_THROW(check({}, t, Type::ground(), topts)) << pretty(t);
    for (const auto& s : find_redexes(t)) ext_nodes += is_extension_rule(s.tag);
  }
  EXPECT_GT(ext_nodes, 0);
}

TEST(LawSuite, StrictPasses) {
  StrictBackend b;
  ObsSpec obs;
  for (const auto& r : law_suite(b, obs))
    EXPECT_EQ(r.verdict, LawVerdict::Pass) << r.law << ": " << r.counterexample;
}

TEST(LawSuite, CohPasses) {
  CohBackend b;
  ObsSpec obs;
  for (const auto& r : law_suite(b, obs))
    EXPECT_EQ(r.verdict, LawVerdict::Pass) << r.law << ": " << r.counterexample;
}

TEST(LawSuite, CoversEnoughInstances) {
  StrictBackend b;
  ObsSpec obs;
  auto rs = by_name(law_suite(b, obs));
  EXPECT_GE(rs["lif-diagram"].tried, 10u);
  EXPECT_GE(rs["fix-diagram"].tried, 10u);
}

TEST(LawSuite, MutantsFailWithWitness) {
  ObsSpec obs;
  {
    mutants::StrictCopy m;
    auto rs = by_name(law_suite(m, obs));
    EXPECT_EQ(rs["comonoid-commutative[N]"].verdict, LawVerdict::Fail);
    EXPECT_EQ(rs["comonoid-commutative[N]"].counterexample.substr(0, 2), "1:");
  }
  {
    mutants::StrictPromote m;
    auto rs = by_name(law_suite(m, obs));
    EXPECT_EQ(rs["p-counit"].verdict, LawVerdict::Fail);
    EXPECT_FALSE(rs["p-counit"].counterexample.empty());
  }
  {
    mutants::CohCopy m;
    auto rs = by_name(law_suite(m, obs));
    EXPECT_EQ(rs["comonoid-counit[!N]"].verdict, LawVerdict::Fail);
    EXPECT_FALSE(rs["comonoid-counit[!N]"].counterexample.empty());
  }
}

template <class E>
void substitution_examples(Backend<E>& b) {
  ObsSpec obs;
  Sampler<E> s(b, obs);
  Type iota = Type::ground();
  auto r1 = substitution_instance(SubstCase::Ground, Basis{{"x", VarKind::Ground, iota}}, P("succ x"), iota,
                                  Basis{}, numeral(2), b, s, obs.k);
  EXPECT_EQ(r1.verdict, Verdict::Equal);
  Basis fb{{"f", VarKind::Higher, nat_to_nat()}};
  ParseOptions po;
  po.free = &fb;
  auto r2 = substitution_instance(SubstCase::Higher, fb, parse_term("f 0", po), iota, Basis{}, P("succ"), b, s,
                                  obs.k);
  EXPECT_EQ(r2.verdict, Verdict::Equal);
  auto r3 = substitution_instance(SubstCase::Stable, Basis{{"F", VarKind::Stable, iota}},
                                  P("lif $F then $F else 1"), iota, Basis{}, P("0"), b, s, obs.k);
  EXPECT_EQ(r3.verdict, Verdict::Equal);
}

TEST(Substitution, ExamplesStrict) {
  StrictBackend b;
  substitution_examples(b);
}

TEST(Substitution, ExamplesCoh) {
  CohBackend b;
  substitution_examples(b);
}

TEST(Substitution, GeneratedInstances) {
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  for (auto c : {SubstCase::Ground, SubstCase::Higher, SubstCase::Stable}) {
    auto rs = substitution_check(c, 12, sb, obs);
    EXPECT_EQ(rs.verdict, LawVerdict::Pass) << rs.law << ": " << rs.counterexample;
    auto rc = substitution_check(c, 12, cb, obs);
    EXPECT_EQ(rc.verdict, LawVerdict::Pass) << rc.law << ": " << rc.counterexample;
  }
}

TEST(Soundness, Examples) {
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  for (const auto& src : {std::string("pred (succ 0)"), kAdd + " 2 3"}) {
    auto a = soundness_check(P(src), 200, sb, obs);
    EXPECT_EQ(a.report.verdict, LawVerdict::Pass) << src << ": " << a.report.counterexample;
    EXPECT_GT(a.steps, 0u);
    auto c = soundness_check(P(src), 200, cb, obs);
    EXPECT_EQ(c.report.verdict, LawVerdict::Pass) << src << ": " << c.report.counterexample;
  }
  auto o = soundness_check(P("mu $f:iota.$f"), 1, sb, obs);
  EXPECT_EQ(o.steps, 1u);
  EXPECT_EQ(o.report.verdict, LawVerdict::Pass);
}

TEST(Incompleteness, BothBackends) {
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  for (const auto& rs : {incompleteness_witness(sb, obs), incompleteness_witness(cb, obs)}) {
    ASSERT_EQ(rs.size(), 2u);
    EXPECT_EQ(rs[0].verdict, LawVerdict::Pass) << rs[0].counterexample;
    EXPECT_FALSE(rs[1].informational == false);
    // Strict weakening observes the divergent argument.
    EXPECT_EQ(rs[1].verdict, LawVerdict::Fail);
  }
  auto g = common_reduct_search(P("(\\x:iota.x) (mu $f:iota.$f)"), P("mu $f:iota.$f"), 1000);
  EXPECT_FALSE(g.joined);
  EXPECT_TRUE(g.complete);
}
