// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "sllam/coh.hpp"
#include "sllam/ext.hpp"
#include "sllam/mutants.hpp"
#include "sllam/parser.hpp"
#include "sllam/reduce.hpp"
#include "sllam/strict.hpp"
#include "sllam/typecheck.hpp"
#include "sllam/verify.hpp"

using namespace sllam;

namespace {

const std::string kAdd =
    "(mu $a:iota -o iota -o iota.\\x:iota.\\y:iota. lif x then y else succ ($a (pred x) y))";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail << why;
    }
  }
};

TokenSet mat(const Clique& c) {
  auto s = c.materialize();
  if (!s) throw Unrepresentable("clique too large to list");
  return *s;
}

Term PX(const std::string& s) {
  ParseOptions o;
  o.extensions = true;
  return parse_term(s, o);
}

/// Closed ground and ι⊸ι terms from the generator; shared by 2 and 5.
std::vector<Term> soundness_corpus() {
  std::vector<Term> out;
  for (std::uint64_t i = 0; i < 500; ++i)
    out.push_back(gen_term({}, i % 4 == 3 ? nat_to_nat() : Type::ground(), 25, 7000 + i));
  return out;
}

Outcome numerals() {
  Outcome o;
  auto t0 = Clock::now();
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  for (std::uint64_t k = 0; k <= 64; ++k) {
    Term t = Term::app(Term::pred(), Term::app(Term::succ(), numeral(k)));
    auto sites = find_redexes(t);
    o.require(sites.size() == 1 && sites[0].tag == RuleTag::DeltaPredSucc && sites[0].path.empty(),
              "pred (succ " + std::to_string(k) + ") has no single root delta redex");
    if (!o.pass) break;
    auto r = normalize(t, Strategy::leftmost(), 10);
    o.require(r.steps == 1 && numeral_of(r.term) == k, "pred (succ k) did not reduce to k in one step");
    for (GroundResult g : {denote_ground(t, sb, obs), denote_ground(t, cb, obs)})
      o.require(g.kind == GroundResult::Kind::Num && g.value == k,
                "denotation of pred (succ " + std::to_string(k) + ") is " + g.str());
  }
  double secs = seconds_since(t0);
  o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail << "k = 0..64, " << secs << " s";
  return o;
}

Outcome soundness(const std::vector<Term>& corpus) {
  Outcome o;
  auto t0 = Clock::now();
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  std::size_t steps = 0, inconclusive = 0;
  for (const auto& t : corpus) {
    for (auto r : {soundness_check(t, 200, sb, obs), soundness_check(t, 200, cb, obs)}) {
      steps += r.steps;
      inconclusive += r.inconclusive;
      o.require(r.report.verdict != LawVerdict::Fail,
                r.report.backend + ": " + pretty(t) + ": " + r.report.counterexample);
    }
  }
  double rate = steps ? static_cast<double>(inconclusive) / static_cast<double>(steps) : 0.0;
  o.require(rate < 0.05, "inconclusive rate " + std::to_string(rate));
  if (o.pass)
    o.detail << corpus.size() << " terms, " << steps << " steps over both backends, " << inconclusive
             << " inconclusive, " << seconds_since(t0) << " s";
  return o;
}

Outcome substitution() {
  Outcome o;
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  std::size_t total = 0;
  for (auto c : {SubstCase::Ground, SubstCase::Higher, SubstCase::Stable}) {
    for (auto r : {substitution_check(c, 100, sb, obs), substitution_check(c, 100, cb, obs)}) {
      total += r.tried;
      o.require(r.verdict == LawVerdict::Pass && r.tried >= 100,
                r.law + " on " + r.backend + ": " + to_string(r.verdict) + " " + r.counterexample);
    }
  }
  if (o.pass) o.detail << total << " instances";
  return o;
}

template <class E>
void all_laws_pass(Outcome& o, Backend<E>& b, std::size_t& checked) {
  ObsSpec obs;
  for (const auto& r : law_suite(b, obs)) {
    if (r.informational) continue;
    ++checked;
    o.require(r.verdict == LawVerdict::Pass, r.law + " on " + b.name() + ": " + r.counterexample);
    if (r.law == "lif-diagram" || r.law == "fix-diagram")
      o.require(r.tried >= 10, r.law + " tried only " + std::to_string(r.tried));
  }
}

template <class E>
void mutant_caught(Outcome& o, Backend<E>& m, std::string& caught) {
  ObsSpec obs;
  for (const auto& r : law_suite(m, obs)) {
    if (r.verdict == LawVerdict::Fail && !r.counterexample.empty()) {
      caught += " " + m.name() + ":" + r.law;
      return;
    }
  }
  o.require(false, m.name() + " passed every law");
}

Outcome laws() {
  Outcome o;
  StrictBackend sb;
  CohBackend cb;
  std::size_t checked = 0;
  all_laws_pass(o, sb, checked);
  all_laws_pass(o, cb, checked);
  mutants::StrictCopy m1;
  mutants::StrictPromote m2;
  mutants::CohCopy m3;
  std::string caught;
  mutant_caught(o, m1, caught);
  mutant_caught(o, m2, caught);
  mutant_caught(o, m3, caught);
  if (o.pass) o.detail << checked << " laws; mutants caught by" << caught;
  return o;
}

Outcome subject_reduction_and_confluence(const std::vector<Term>& corpus) {
  Outcome o;
  std::size_t steps = 0;
  for (const auto& t : corpus) {
    Type ty = infer({}, t).type;
    auto r = normalize(t, Strategy::leftmost(), 200, true);
    for (const auto& s : r.trace) {
      ++steps;
      try {
        o.require(infer({}, s.result).type == ty, "type changed: " + pretty(s.result));
      } catch (const TypeError& e) {
        o.require(false, "untypable reduct " + pretty(s.result) + ": " + e.what());
      }
    }
  }
  std::size_t probed = 0, joined = 0, disproved = 0;
  for (std::uint64_t seed = 0; probed < 200 && seed < 100000; ++seed) {
    Term t = gen_term({}, Type::ground(), 25, 90000 + seed);
    if (find_redexes(t).size() < 2) continue;
    ++probed;
    auto j = join_probe(t, 200, seed);
    if (j.joined) ++joined;
    else if (!j.exhausted) ++disproved;
  }
  o.require(probed == 200, "only " + std::to_string(probed) + " multi-redex terms generated");
  o.require(disproved == 0, std::to_string(disproved) + " probes failed without exhaustion");
  o.require(joined * 100 >= probed * 95, "joined " + std::to_string(joined) + "/" + std::to_string(probed));
  if (o.pass)
    o.detail << steps << " reducts typed; joined " << joined << "/" << probed << ", "
             << probed - joined << " inconclusive";
  return o;
}

Outcome incompleteness() {
  Outcome o;
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  for (const auto& rs : {incompleteness_witness(sb, obs, 1000), incompleteness_witness(cb, obs, 1000)}) {
    const LawReport& main = rs.at(0);
    o.require(main.verdict == LawVerdict::Pass, main.backend + ": " + main.counterexample);
    if (o.pass && o.detail.str().empty()) o.detail << main.note;
  }
  return o;
}

Outcome coh_spot_checks() {
  Outcome o;
  CohBackend cb;
  // tr(p) restricted to n ≤ 5, built independently of the backend.
  std::set<std::pair<Token, Token>> expected;
  for (std::uint64_t n = 0; n <= 5; ++n) {
    expected.insert({Token::nat(n), Token::set({Token::nat(n)})});
    expected.insert({Token::nat(n), Token::set({})});
  }
  auto tr = trace_probe(cb.p(), 5);
  std::set<std::pair<Token, Token>> got(tr.begin(), tr.end());
  o.require(got == expected && tr.size() == expected.size(), "tr(p) probed at 5 is " + to_string(tr));

  Clique z = cb.zero()(Clique::singleton(Token::star()));
  o.require(mat(z) == TokenSet{Token::nat(0)}, "zero({*}) = " + to_string(mat(z)));

  // Flatness: every output at N over probed inputs has at most one token.
  SemObject N = SemObject::nat();
  std::size_t seen = 0;
  auto flat = [&](const Morphism<Clique>& f, const std::vector<Token>& inputs) {
    for (const auto& t : inputs) {
      auto out = mat(f(Clique::singleton(t)));
      ++seen;
      o.require(out.size() <= 1, f.dump() + " on " + t.str() + " gives " + to_string(out));
    }
  };
  auto nats = probe_tokens(N, 8);
  for (const auto& t : nats) o.require(t.kind() == Token::Kind::Nat, "non-numeral token in |N|");
  flat(cb.succ(), nats);
  flat(cb.pred(), nats);
  flat(cb.epsilon(N), probe_tokens(SemObject::bang(N), 3));
  flat(cb.lif(), probe_tokens(SemObject::tensor(N, SemObject::prod(N, N)), 3));
  auto add = infer({}, parse_term(kAdd)).derivation;
  auto m = interpret(*add, cb);
  Clique f = m(Clique::singleton(Token::star()));
  for (std::uint64_t a = 0; a <= 4; ++a)
    for (std::uint64_t b = 0; b <= 4; ++b) {
      auto out = mat(f.apply(Clique::singleton(Token::nat(a))).apply(Clique::singleton(Token::nat(b))));
      ++seen;
      o.require(out.size() <= 1, "ADD output not flat");
    }
  if (o.pass) o.detail << "tr(p) = " << to_string(tr).size() << " chars, " << seen << " flat outputs";
  return o;
}

Outcome fixpoints() {
  Outcome o;
  auto t0 = Clock::now();
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  obs.k = 16;
  for (std::uint64_t m = 0; m <= 5; ++m)
    for (std::uint64_t n = 0; n <= 5; ++n) {
      Term t = parse_term(kAdd + " " + std::to_string(m) + " " + std::to_string(n));
      auto r = normalize(t, Strategy::leftmost(), 5000);
      o.require(!r.exhausted && numeral_of(r.term) == m + n, "normalize ADD " + std::to_string(m) + " " +
                                                                std::to_string(n) + " = " + pretty(r.term));
      for (GroundResult g : {denote_ground(t, sb, obs), denote_ground(t, cb, obs)})
        o.require(g.kind == GroundResult::Kind::Num && g.value == m + n,
                  "denote ADD " + std::to_string(m) + " " + std::to_string(n) + " = " + g.str());
    }
  double secs = seconds_since(t0);
  o.require(secs < 10.0, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail << "m, n <= 5, " << secs << " s";
  return o;
}

Outcome extension() {
  Outcome o;
  // The three listed examples, then one instance per extension rewrite.
  std::vector<std::tuple<std::string, RuleTag, std::string>> cases = {
      {"discard (succ 2) in 7", RuleTag::DiscardSucc, "discard 2 in 7"},
      {"copy 0 as x, y in lif x then y else 1", RuleTag::CopyZero, "lif 0 then 0 else 1"},
      {"derelict (promote!(3))", RuleTag::DerelictPromote, "3"},
      {"discard 0 in 7", RuleTag::DiscardZero, "7"},
      {"copy succ 1 as x, y in lif x then y else 1", RuleTag::CopySucc,
       "copy 1 as x, y in lif succ x then succ y else 1"},
      {"discard promote!(2) in 1", RuleTag::PromoteComonoidDiscard, "discard 2 in 1"},
      {"copy (promote!(2)) as u, v : !iota in discard u in derelict v", RuleTag::PromoteComonoidCopy,
       "copy 2 as u, v in discard promote!(u) in derelict promote!(v)"},
      {"promote!(promote!(1)) as z in derelict (promote!(derelict z))", RuleTag::PromotePromote,
       "promote!(promote!(1)) as z in derelict z"},
  };
  std::set<RuleTag> fired;
  StrictBackend sb;
  CohBackend cb;
  ObsSpec obs;
  obs.ext = true;
  for (const auto& [src, tag, want] : cases) {
    Term t = PX(src);
    bool hit = false;
    for (const auto& site : find_redexes(t)) {
      if (site.tag != tag) continue;
      hit = alpha_eq(step_ext(t, site), PX(want));
      break;
    }
    o.require(hit, std::string(to_string(tag)) + " did not rewrite " + src + " to " + want);
    if (hit) fired.insert(tag);
  }
  GenOptions g;
  g.ext = true;
  std::size_t steps = 0, ext_steps = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Term t = gen_term({}, Type::ground(), 20, 50000 + i, g);
    for (auto r : {soundness_check(t, 200, sb, obs, true), soundness_check(t, 200, cb, obs, true)}) {
      steps += r.steps;
      for (const auto& line : r.step_lines)
        for (auto tag : ext_rule_tags())
          if (line.find(std::string("  ") + to_string(tag) + "  ") != std::string::npos) ++ext_steps;
      o.require(r.report.verdict != LawVerdict::Fail, r.report.backend + ": " + r.report.counterexample);
    }
  }
  if (o.pass)
    o.detail << fired.size() << " rewrites checked; 100 extended terms, " << steps << " steps ("
             << ext_steps << " extension steps), no Distinct";
  return o;
}

}  // namespace

int main() {
  std::vector<Term> corpus = soundness_corpus();
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"numerals", numerals},
      {"soundness", [&] { return soundness(corpus); }},
      {"substitution", substitution},
      {"laws", laws},
      {"subject-reduction+confluence", [&] { return subject_reduction_and_confluence(corpus); }},
      {"incompleteness-witness", incompleteness},
      {"coh-spot-checks", coh_spot_checks},
      {"fixpoints", fixpoints},
      {"extension", extension},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    all &= o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << "  " << criteria[i].first << "  "
              << o.detail.str() << std::endl;
  }
  return all ? 0 : 1;
}
