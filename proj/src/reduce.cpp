#include "sllam/reduce.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sllam/parser.hpp"

namespace sllam {

const char* to_string(RuleTag t) {
  switch (t) {
    case RuleTag::BetaHigher: return "beta";
    case RuleTag::BetaIota: return "beta-iota";
    case RuleTag::Y: return "Y";
    case RuleTag::DeltaPredSucc: return "delta-pred";
    case RuleTag::DeltaIfZero: return "delta-if0";
    case RuleTag::DeltaIfSucc: return "delta-if+";
    case RuleTag::DiscardSucc: return "discard-succ";
    case RuleTag::DiscardZero: return "discard-zero";
    case RuleTag::CopySucc: return "copy-succ";
    case RuleTag::CopyZero: return "copy-zero";
    case RuleTag::PromoteComonoidDiscard: return "discard-promote";
    case RuleTag::PromoteComonoidCopy: return "copy-promote";
    case RuleTag::DerelictPromote: return "derelict-promote";
    case RuleTag::PromotePromote: return "promote-promote";
  }
  return "?";
}

bool is_extension_rule(RuleTag t) { return static_cast<int>(t) >= static_cast<int>(RuleTag::DiscardSucc); }

std::string path_string(const Path& p) {
  if (p.empty()) return ".";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

namespace {

bool is_succ_of(const Term& t) { return t.kind() == TermKind::App && t.child(0).kind() == TermKind::Succ; }

bool is_promote_derelict_of(const Term& t, const std::string& z) {
  return t.kind() == TermKind::Promote && t.child(0).kind() == TermKind::Derelict &&
         t.child(0).child(0).kind() == TermKind::Var && t.child(0).child(0).name() == z;
}

/// Replaces free occurrences of `promote!(derelict z)` by z.
Term strip_promote_derelict(const Term& t, const std::string& z, bool& changed) {
  if (is_promote_derelict_of(t, z)) {
    changed = true;
    return t.child(0).child(0);
  }
  if (t.arity() == 0) return t;
  std::vector<Term> kids;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    auto bound = t.bound_in_child(i);
    if (std::find(bound.begin(), bound.end(), z) != bound.end())
      kids.push_back(t.child(i));
    else
      kids.push_back(strip_promote_derelict(t.child(i), z, changed));
  }
  return changed ? t.with_children(std::move(kids)) : t;
}

Term fire(const Term& t, RuleTag tag) {
  switch (tag) {
    case RuleTag::BetaHigher: {
      const Term& lam = t.child(0);
      return subst_higher(lam.child(0), t.child(1), lam.name());
    }
    case RuleTag::BetaIota: {
      const Term& lam = t.child(0);
      return subst_ground(lam.child(0), *numeral_of(t.child(1)), lam.name());
    }
    case RuleTag::Y:
      return subst_stable(t.child(0), t, t.name());
    case RuleTag::DeltaPredSucc:
      return t.child(1).child(1);
    case RuleTag::DeltaIfZero:
      return t.child(1);
    case RuleTag::DeltaIfSucc:
      return t.child(2);
    case RuleTag::DiscardSucc:
      return Term::discard(t.child(0).child(1), t.child(1));
    case RuleTag::DiscardZero:
      return t.child(1);
    case RuleTag::CopySucc: {
      const std::string& x = t.name();
      const std::string& y = t.second_name();
      Term n = substitute(t.child(1), x, Term::app(Term::succ(), Term::var(x, VarKind::Ground)));
      n = substitute(n, y, Term::app(Term::succ(), Term::var(y, VarKind::Ground)));
      return Term::copy(t.child(0).child(1), x, y, n, false);
    }
    case RuleTag::CopyZero: {
      Term n = substitute(t.child(1), t.name(), Term::zero());
      return substitute(n, t.second_name(), Term::zero());
    }
    case RuleTag::PromoteComonoidDiscard:
      return Term::discard(t.child(0).child(0), t.child(1));
    case RuleTag::PromoteComonoidCopy: {
      const std::string& x = t.name();
      const std::string& y = t.second_name();
      Term n = substitute(t.child(1), x, Term::promote(Term::var(x, VarKind::Ground)));
      n = substitute(n, y, Term::promote(Term::var(y, VarKind::Ground)));
      return Term::copy(t.child(0).child(0), x, y, n, false);
    }
    case RuleTag::DerelictPromote:
      return t.child(0).child(0);
    case RuleTag::PromotePromote: {
      bool changed = false;
      Term body = strip_promote_derelict(t.child(1), t.name(), changed);
      return Term::promote_as(t.child(0), t.name(), body);
    }
  }
  throw std::logic_error("unhandled rule tag");
}

void collect(const Term& t, Path& path, std::vector<RedexSite>& out) {
  if (auto tag = redex_at_root(t)) out.push_back({path, *tag});
  for (std::size_t i = 0; i < t.arity(); ++i) {
    path.push_back(i);
    collect(t.child(i), path, out);
    path.pop_back();
  }
}

}  // namespace

std::optional<RuleTag> redex_at_root(const Term& t) {
  switch (t.kind()) {
    case TermKind::App: {
      const Term& f = t.child(0);
      const Term& a = t.child(1);
      if (f.kind() == TermKind::Lam) {
        if (!f.annotation().is_ground()) return RuleTag::BetaHigher;
        if (numeral_of(a)) return RuleTag::BetaIota;
        return std::nullopt;
      }
      if (f.kind() == TermKind::Pred && is_succ_of(a) && numeral_of(a.child(1)))
        return RuleTag::DeltaPredSucc;
      return std::nullopt;
    }
    case TermKind::LIf: {
      auto n = numeral_of(t.child(0));
      if (!n) return std::nullopt;
      return *n == 0 ? RuleTag::DeltaIfZero : RuleTag::DeltaIfSucc;
    }
    case TermKind::Mu:
      return RuleTag::Y;
    case TermKind::Discard: {
      const Term& m = t.child(0);
      if (m.kind() == TermKind::Zero) return RuleTag::DiscardZero;
      if (is_succ_of(m)) return RuleTag::DiscardSucc;
      if (m.kind() == TermKind::Promote) return RuleTag::PromoteComonoidDiscard;
      return std::nullopt;
    }
    case TermKind::Copy: {
      const Term& m = t.child(0);
      if (t.bang_copy()) {
        if (m.kind() == TermKind::Promote) return RuleTag::PromoteComonoidCopy;
        return std::nullopt;
      }
      if (m.kind() == TermKind::Zero) return RuleTag::CopyZero;
      if (is_succ_of(m)) return RuleTag::CopySucc;
      return std::nullopt;
    }
    case TermKind::Derelict:
      if (t.child(0).kind() == TermKind::Promote) return RuleTag::DerelictPromote;
      return std::nullopt;
    case TermKind::PromoteAs: {
      if (t.child(0).kind() != TermKind::Promote) return std::nullopt;
      bool changed = false;
      strip_promote_derelict(t.child(1), t.name(), changed);
      if (changed) return RuleTag::PromotePromote;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::vector<RedexSite> find_redexes(const Term& t) {
  std::vector<RedexSite> out;
  Path path;
  collect(t, path, out);
  return out;
}

Term step_at(const Term& t, const RedexSite& site) {
  const Term* sub;
  try {
    sub = &subterm_at(t, site.path);
  } catch (const std::out_of_range&) {
    throw InvalidSite("no subterm at path " + path_string(site.path));
  }
  auto tag = redex_at_root(*sub);
  if (!tag || *tag != site.tag)
    throw InvalidSite(std::string("no ") + to_string(site.tag) + " redex at " +
                      path_string(site.path));
  return replace_at(t, site.path, fire(*sub, site.tag));
}

bool is_weak_position(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (auto i : p) {
    if (cur->kind() == TermKind::Lam || cur->kind() == TermKind::Mu) return false;
    cur = &cur->child(i);
  }
  return true;
}

std::optional<RedexSite> leftmost_site(const Term& t) {
  auto sites = find_redexes(t);
  if (sites.empty()) return std::nullopt;
  for (const auto& s : sites)
    if (is_weak_position(t, s.path)) return s;
  return sites.front();
}

NormalizeResult normalize(const Term& t, Strategy strategy, std::size_t fuel, bool record_trace) {
  NormalizeResult r{t, 0, false, {}};
  std::mt19937_64 rng(strategy.seed);
  while (true) {
    std::optional<RedexSite> site;
    if (strategy.kind == Strategy::Kind::Leftmost) {
      site = leftmost_site(r.term);
    } else {
      auto sites = find_redexes(r.term);
      if (!sites.empty())
        site = sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng)];
    }
    if (!site) return r;
    if (r.steps >= fuel) {
      r.exhausted = true;
      return r;
    }
    r.term = step_at(r.term, *site);
    ++r.steps;
    if (record_trace) r.trace.push_back({*site, r.term});
  }
}

std::string format_trace(const std::vector<TraceStep>& trace) {
  std::string out;
  for (const auto& s : trace)
    out += path_string(s.site.path) + "  " + to_string(s.site.tag) + "  " + pretty(s.result) + "\n";
  return out;
}

namespace {

/// Breadth-first reduct sets grown in lockstep from two roots.
struct Frontier {
  std::deque<Term> queue;
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, Term> by_key;

  explicit Frontier(const Term& root) { add(root); }

  std::string add(const Term& t) {
    auto key = canonical_key(t);
    if (seen.insert(key).second) {
      queue.push_back(t);
      by_key.emplace(key, t);
    }
    return key;
  }
};

}  // namespace

JoinReport join_probe(const Term& t, std::size_t fuel, std::uint64_t seed) {
  auto sites = find_redexes(t);
  if (sites.size() < 2) throw std::invalid_argument("join_probe needs at least two redexes");

  std::mt19937_64 rng(seed);
  std::size_t i = std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng);
  std::size_t j = std::uniform_int_distribution<std::size_t>(0, sites.size() - 2)(rng);
  if (j >= i) ++j;

  JoinReport r;
  r.left_site = sites[i];
  r.right_site = sites[j];
  r.left = step_at(t, sites[i]);
  r.right = step_at(t, sites[j]);

  if (alpha_eq(r.left, r.right)) {
    r.joined = true;
    r.witness = r.left;
    return r;
  }

  // Cheap first attempt: leftmost traces of both sides in lockstep, joined
  // as soon as either reaches a term the other has visited.
  std::size_t half = fuel / 2;
  Term cur[2] = {r.left, r.right};
  std::unordered_set<std::string> visited[2] = {{canonical_key(r.left)}, {canonical_key(r.right)}};
  bool done[2] = {false, false};
  while (r.explored < half && !(done[0] && done[1])) {
    for (int s = 0; s < 2; ++s) {
      if (done[s] || r.explored >= half) continue;
      auto site = leftmost_site(cur[s]);
      if (!site) {
        done[s] = true;
        continue;
      }
      cur[s] = step_at(cur[s], *site);
      ++r.explored;
      auto key = canonical_key(cur[s]);
      if (visited[1 - s].count(key)) {
        r.joined = true;
        r.witness = cur[s];
        return r;
      }
      // A leftmost trace that revisits a term cycles from there on.
      if (!visited[s].insert(std::move(key)).second) done[s] = true;
    }
  }
  if (done[0] && done[1] && !leftmost_site(cur[0]) && !leftmost_site(cur[1])) return r;

  Frontier a(r.left), b(r.right);
  std::size_t budget = fuel - std::min(fuel, r.explored);
  bool turn = false;
  while (budget > 0 && (!a.queue.empty() || !b.queue.empty())) {
    Frontier& f = turn ? b : a;
    Frontier& other = turn ? a : b;
    turn = !turn;
    if (f.queue.empty()) continue;
    Term cur = f.queue.front();
    f.queue.pop_front();
    for (const auto& s : find_redexes(cur)) {
      Term next = step_at(cur, s);
      auto key = f.add(next);
      --budget;
      ++r.explored;
      if (other.seen.count(key)) {
        r.joined = true;
        r.witness = next;
        return r;
      }
      if (budget == 0) break;
    }
  }
  // Budget left over means both reduct graphs are finite and disjoint.
  r.exhausted = budget == 0;
  return r;
}

}  // namespace sllam
