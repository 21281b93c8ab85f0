#include <gtest/gtest.h>

#include "sllam/typecheck.hpp"
#include "support.hpp"

using namespace sllam;
using sllam::testing::P;
using sllam::testing::RawGen;

namespace {

TypeError::Code error_of(const Basis& b, const std::string& src) {
  ParseOptions o;
  o.free = &b;
  try {
    infer(b, parse_term(src, o));
  } catch (const TypeError& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << src;
  return TypeError::Code::NoTypingRule;
}

Typing judge(const std::string& text, TypingOptions opts = {}) {
  auto j = parse_judgment(text, opts.mode == TypingMode::Extended);
  auto t = infer(j.basis, j.term, opts);
  EXPECT_EQ(t.type, j.type) << text;
  return t;
}

const std::vector<std::string> kCorpus = {
    " |- 0 : iota",
    " |- succ : iota -o iota",
    " |- pred (succ 0) : iota",
    "x:iota |- x : iota",
    "$f:iota |- $f : iota",
    "x:iota, y:iota |- y : iota",
    "x:iota |- lif x then x else succ x : iota",
    "$f:iota |- lif $f then $f else $f : iota",
    " |- \\x:iota. lif x then x else succ x : iota -o iota",
    " |- \\f:iota -o iota.\\x:iota. f x : (iota -o iota) -o iota -o iota",
    " |- \\f:iota -o iota.\\x:iota. lif x then f 0 else f x : (iota -o iota) -o iota -o iota",
    " |- mu $f:iota.$f : iota",
    " |- mu $a:iota -o iota -o iota.\\x:iota.\\y:iota. lif x then y else succ ($a (pred x) y)"
    " : iota -o iota -o iota",
    "y:iota |- mu $g:iota. lif y then 0 else $g : iota",
    "x:iota, $h:iota -o iota |- $h ($h x) : iota",
    "f:iota -o iota, x:iota |- f (succ x) : iota",
    "x:iota, f:iota -o iota |- f (lif x then x else x) : iota",
    " |- \\x:iota.\\y:iota. x : iota -o iota -o iota",
    " |- (\\x:iota.x) (mu $f:iota.$f) : iota",
    "x:iota |- (\\x:iota. succ x) x : iota",
    "$f:iota, x:iota |- lif x then $f else lif $f then x else 0 : iota",
};

}  // namespace

TEST(Infer, SpecExamples) {
  EXPECT_EQ(infer({}, P("succ")).type, nat_to_nat());
  EXPECT_EQ(error_of({}, "\\f:iota-o iota.\\x:iota. f (f x)"),
            TypeError::Code::LinearVariableReused);
  Basis h({{"h", VarKind::Higher, nat_to_nat()}});
  EXPECT_EQ(error_of(h, "mu $g:iota. h 0"), TypeError::Code::MuBodyHasLinearFreeVars);
  EXPECT_EQ(infer({}, P("\\x:iota. lif x then x else succ x")).type, nat_to_nat());
}

TEST(Check, Examples) {
  EXPECT_NO_THROW(check({}, P("0"), Type::ground()));
  try {
    check({}, P("0"), nat_to_nat());
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.code(), TypeError::Code::TypeMismatch);
  }
  Basis f({{"f", VarKind::Stable, Type::ground()}});
  auto d = check(f, P("lif $f then $f else $f"), Type::ground());
  EXPECT_TRUE(validate_derivation(*d));
  EXPECT_NE(serialize(*d).find("sc"), std::string::npos);
}

TEST(Infer, ErrorVariants) {
  Basis none;
  EXPECT_EQ(error_of(none, "x"), TypeError::Code::UnboundVariable);
  EXPECT_EQ(error_of(none, "0 0"), TypeError::Code::NotAFunction);
  EXPECT_EQ(error_of(none, "succ succ"), TypeError::Code::ArgTypeMismatch);
  EXPECT_EQ(error_of(none, "\\f:iota -o iota. 0"), TypeError::Code::LinearVariableUnused);
  Basis fg({{"f", VarKind::Higher, nat_to_nat()}, {"g", VarKind::Higher, nat_to_nat()}});
  EXPECT_EQ(error_of(fg, "lif 0 then f 0 else g 0"), TypeError::Code::BranchLinearityMismatch);
  EXPECT_EQ(error_of(none, "lif succ then 0 else 0"), TypeError::Code::ConditionNotGround);
  EXPECT_EQ(error_of(none, "lif 0 then succ else pred"), TypeError::Code::BranchNotGround);
  Basis f({{"f", VarKind::Higher, nat_to_nat()}});
  // Condition and branch share a linear variable.
  EXPECT_EQ(error_of(f, "lif f 0 then f 1 else f 2"), TypeError::Code::LinearVariableReused);
  // Basis entry never used.
  EXPECT_EQ(error_of(f, "0"), TypeError::Code::LinearVariableUnused);
}

TEST(Infer, KindMismatch) {
  Basis b({{"x", VarKind::Ground, Type::ground()}});
  try {
    infer(b, Term::var("x", VarKind::Stable));
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.code(), TypeError::Code::KindMismatch);
  }
}

TEST(Infer, ConclusionBasisIsRequestedBasis) {
  for (const auto& s : kCorpus) {
    auto j = parse_judgment(s);
    auto t = judge(s);
    EXPECT_EQ(t.derivation->basis(), j.basis) << s;
    EXPECT_TRUE(alpha_eq(t.derivation->term(), j.term)) << s;
  }
}

TEST(Validate, CorpusBothCanons) {
  for (const auto& s : kCorpus) {
    for (auto canon : {ElabCanon::Canonical, ElabCanon::Alternative}) {
      TypingOptions o;
      o.canon = canon;
      auto t = judge(s, o);
      auto r = validate_derivation(*t.derivation);
      EXPECT_TRUE(r.ok) << s << ": " << r.failure << "\n" << serialize(*t.derivation);
    }
  }
}

TEST(Validate, RandomAcceptedTerms) {
  RawGen g(5);
  Basis b({{"x", VarKind::Ground, Type::ground()},
           {"y", VarKind::Ground, Type::ground()},
           {"z", VarKind::Ground, Type::ground()},
           {"F", VarKind::Stable, Type::ground()},
           {"G", VarKind::Stable, Type::ground()}});
  int accepted = 0;
  for (int i = 0; i < 20000 && accepted < 300; ++i) {
    Term t = g.term(4);
    if (!free_vars(t).higher.empty()) continue;
    try {
      auto ty = infer(b, t);
      ++accepted;
      auto r = validate_derivation(*ty.derivation);
      EXPECT_TRUE(r.ok) << pretty(t) << ": " << r.failure;
    } catch (const TypeError&) {
    }
  }
  EXPECT_GT(accepted, 50);
}

TEST(Validate, CorruptedApOverlap) {
  auto d = judge("x:iota |- (\\y:iota. y) x : iota").derivation;
  // Find the ap node; build a copy whose premises both claim x.
  auto arg = infer(Basis({{"x", VarKind::Ground, Type::ground()}}), P("x")).derivation;
  auto fun = infer(Basis({{"x", VarKind::Ground, Type::ground()}}),
                   P("\\y:iota. y")).derivation;
  Basis both({{"x", VarKind::Ground, Type::ground()}, {"x", VarKind::Ground, Type::ground()}});
  auto bad = std::make_shared<const Derivation>(Rule::App, both, P("(\\y:iota. y) x"),
                                                Type::ground(),
                                                std::vector<DerivationPtr>{fun, arg});
  auto r = validate_derivation(*bad);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.failure.empty());
  EXPECT_TRUE(validate_derivation(*d).ok);
}

TEST(Validate, CorruptedMuLinearContext) {
  Basis hb({{"h", VarKind::Higher, nat_to_nat()}});
  ParseOptions o;
  o.free = &hb;
  Term body = parse_term("h 0", o);
  Basis prem({{"h", VarKind::Higher, nat_to_nat()}, {"g", VarKind::Stable, Type::ground()}});
  auto inner = infer(hb, body).derivation;
  auto weakened = std::make_shared<const Derivation>(
      Rule::StableWeaken, prem, body, Type::ground(), std::vector<DerivationPtr>{inner});
  auto bad = std::make_shared<const Derivation>(Rule::Mu, hb, Term::mu("g", Type::ground(), body),
                                                Type::ground(),
                                                std::vector<DerivationPtr>{weakened});
  EXPECT_TRUE(validate_derivation(*weakened).ok);
  EXPECT_FALSE(validate_derivation(*bad).ok);
}

TEST(Validate, CorruptedExchangeIndex) {
  auto d = judge("x:iota, y:iota |- y : iota").derivation;
  auto bad = std::make_shared<const Derivation>(Rule::Exchange, d->basis(), d->term(), d->type(),
                                                std::vector<DerivationPtr>{d}, 0);
  EXPECT_FALSE(validate_derivation(*bad).ok);
}

TEST(Infer, Deterministic) {
  for (const auto& s : kCorpus) {
    auto a = judge(s).derivation;
    auto b = judge(s).derivation;
    EXPECT_EQ(serialize(*a), serialize(*b));
  }
}

TEST(Infer, ExtensionRules) {
  TypingOptions ext{TypingMode::Extended, ElabCanon::Canonical};
  for (std::string s : {" |- promote!(0) : !iota", " |- derelict (promote!(3)) : iota",
                        "x:iota |- discard x in 0 : iota",
                        "x:iota |- copy x as a, b in lif a then b else 0 : iota",
                        "u:!iota |- copy u as a, b : !iota in discard a in derelict b : iota",
                        "u:!iota |- derelict u : iota"}) {
    auto t = judge(s, ext);
    EXPECT_TRUE(validate_derivation(*t.derivation, TypingMode::Extended).ok)
        << s << "\n" << serialize(*t.derivation);
  }
  ParseOptions o;
  o.extensions = true;
  try {
    infer({}, parse_term("discard 0 in 0", o));
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.code(), TypeError::Code::ExtensionDisabled);
  }
  try {
    infer({}, parse_term("promote!(0) as z in derelict z", o), ext);
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.code(), TypeError::Code::NoTypingRule);
  }
}

TEST(Serialize, NestedRecords) {
  auto d = judge("x:iota |- lif x then x else succ x : iota").derivation;
  std::string s = serialize(*d);
  EXPECT_EQ(s.rfind("gc", 0), 0u) << s;
  EXPECT_NE(s.find("\n  lif"), std::string::npos) << s;
}
