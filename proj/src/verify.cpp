#include "sllam/verify.hpp"

#include <deque>
#include <random>
#include <unordered_set>

#include "sllam/parser.hpp"

namespace sllam {

const char* to_string(LawVerdict v) {
  switch (v) {
    case LawVerdict::Pass: return "pass";
    case LawVerdict::Fail: return "fail";
    case LawVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(SubstCase c) {
  switch (c) {
    case SubstCase::Ground: return "ground";
    case SubstCase::Higher: return "higher";
    case SubstCase::Stable: return "stable";
  }
  return "?";
}

namespace {

struct Lin {
  std::string name;
  Type type;
};

struct Ctx {
  std::vector<std::string> ground;
  std::vector<std::pair<std::string, Type>> stable;
};

/// Goal-directed generator: every linear variable handed to `term` is
/// consumed exactly once in the result.
class Gen {
 public:
  Gen(std::uint64_t seed, GenOptions opts, std::set<std::string> avoid)
      : rng_(seed), opts_(opts), avoid_(std::move(avoid)) {}

  Term term(const Ctx& ctx, const std::vector<Lin>& lin, const Type& t, int size) {
    if (t.is_arrow()) return arrow(ctx, lin, t, size);
    if (!lin.empty()) return consume(ctx, lin, size);
    return ground(ctx, size);
  }

 private:
  int roll(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string fresh(const std::string& base) {
    std::string n;
    do n = base + std::to_string(counter_++);
    while (avoid_.count(n));
    return n;
  }

  Type small_arrow() {
    switch (roll(4)) {
      case 0: return Type::arrow(nat_to_nat(), Type::ground());
      case 1: return Type::arrow(Type::ground(), nat_to_nat());
      default: return nat_to_nat();
    }
  }

  std::pair<std::vector<Lin>, std::vector<Lin>> partition(const std::vector<Lin>& lin) {
    std::vector<Lin> a, b;
    for (const auto& l : lin) (roll(2) ? a : b).push_back(l);
    return {a, b};
  }

  Term leaf(const Ctx& ctx) {
    std::vector<Term> opts{numeral(static_cast<std::uint64_t>(roll(3)))};
    for (const auto& g : ctx.ground) opts.push_back(Term::var(g, VarKind::Ground));
    for (const auto& [s, ty] : ctx.stable)
      if (ty.is_ground()) opts.push_back(Term::var(s, VarKind::Stable));
    return opts[static_cast<std::size_t>(roll(static_cast<int>(opts.size())))];
  }

  Term arrow(const Ctx& ctx, const std::vector<Lin>& lin, const Type& t, int size) {
    if (lin.size() == 1 && lin[0].type == t && (size <= 2 || roll(3) == 0))
      return Term::var(lin[0].name, VarKind::Higher);
    if (lin.empty() && size > 1) {
      int r = roll(10);
      if (r == 0 && t == nat_to_nat()) return roll(2) ? Term::succ() : Term::pred();
      if (r <= 2) {
        std::vector<std::string> fits;
        for (const auto& [s, ty] : ctx.stable)
          if (ty == t) fits.push_back(s);
        if (!fits.empty())
          return Term::var(fits[static_cast<std::size_t>(roll(static_cast<int>(fits.size())))],
                           VarKind::Stable);
      }
      if (r == 3 && size > 4) {
        Ctx inner = ctx;
        std::string f = fresh("F");
        inner.stable.emplace_back(f, t);
        return Term::mu(f, t, term(inner, {}, t, size - 1));
      }
      if (r == 4 && size > 4) return app(ctx, lin, t, size);
    }
    Ctx inner = ctx;
    std::vector<Lin> l2 = lin;
    const Type& a = t.argument();
    std::string x = fresh(a.is_ground() ? "x" : "f");
    if (a.is_ground())
      inner.ground.push_back(x);
    else
      l2.push_back({x, a});
    return Term::lam(x, a, term(inner, l2, t.result(), size - 1));
  }

  Term app(const Ctx& ctx, const std::vector<Lin>& lin, const Type& result, int size) {
    Type a = roll(3) == 0 ? nat_to_nat() : Type::ground();
    auto [l1, l2] = partition(lin);
    Term f = term(ctx, l1, Type::arrow(a, result), size / 2);
    Term x = term(ctx, l2, a, size / 2);
    return Term::app(f, x);
  }

  /// Ground term consuming every variable of `lin`.
  Term consume(const Ctx& ctx, const std::vector<Lin>& lin, int size) {
    for (std::size_t i = 0; i < lin.size(); ++i) {
      if (!lin[i].type.is_bang()) continue;
      Term u = Term::var(lin[i].name, VarKind::Higher);
      std::vector<Lin> rest = lin;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (rest.empty() && roll(2)) return Term::derelict(u);
      return Term::discard(u, term(ctx, rest, Type::ground(), size - 1));
    }
    int r = size > 3 ? roll(6) : 5;
    switch (r) {
      case 0:
        return Term::app(roll(2) ? Term::succ() : Term::pred(), consume(ctx, lin, size - 1));
      case 1: {
        auto [l1, l2] = partition(lin);
        Term c = term(ctx, l1, Type::ground(), size / 3);
        return Term::lif(c, term(ctx, l2, Type::ground(), size / 3), term(ctx, l2, Type::ground(), size / 3));
      }
      case 2: {
        auto [l1, l2] = partition(lin);
        Ctx inner = ctx;
        std::string x = fresh("x");
        inner.ground.push_back(x);
        Term body = term(inner, l1, Type::ground(), size / 2);
        return Term::app(Term::lam(x, Type::ground(), body), term(ctx, l2, Type::ground(), size / 2));
      }
      case 3:
        return app(ctx, lin, Type::ground(), size);
      default: {
        std::size_t pick = static_cast<std::size_t>(roll(static_cast<int>(lin.size())));
        std::vector<Lin> rest = lin;
        Lin f = rest[pick];
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
        // Spread the remaining linear variables over the arguments.
        std::vector<Type> args;
        Type cur = f.type;
        while (cur.is_arrow()) {
          args.push_back(cur.argument());
          cur = cur.result();
        }
        std::vector<std::vector<Lin>> shares(args.size());
        for (const auto& l : rest) shares[static_cast<std::size_t>(roll(static_cast<int>(args.size())))].push_back(l);
        Term out = Term::var(f.name, VarKind::Higher);
        int each = std::max(1, (size - 1) / static_cast<int>(args.size()));
        for (std::size_t i = 0; i < args.size(); ++i) out = Term::app(out, term(ctx, shares[i], args[i], each));
        return out;
      }
    }
  }

  Term ground(const Ctx& ctx, int size) {
    if (size <= 1) return leaf(ctx);
    int r = roll(opts_.ext ? 16 : 12);
    switch (r) {
      case 0:
      case 1:
        return Term::app(r == 0 ? Term::succ() : Term::pred(), ground(ctx, size - 1));
      case 2:
        return Term::app(Term::pred(), Term::app(Term::succ(), numeral(static_cast<std::uint64_t>(roll(3)))));
      case 3:
      case 4:
        return Term::lif(ground(ctx, size / 3), ground(ctx, size / 3), ground(ctx, size / 3));
      case 5: {
        Ctx inner = ctx;
        std::string x = fresh("x");
        inner.ground.push_back(x);
        Term arg = roll(2) ? numeral(static_cast<std::uint64_t>(roll(3))) : ground(ctx, size / 2);
        return Term::app(Term::lam(x, Type::ground(), ground(inner, size / 2)), arg);
      }
      case 6: {
        Type ft = roll(3) ? nat_to_nat() : small_arrow();
        std::string f = fresh("f");
        Term body = consume(ctx, {{f, ft}}, size / 2);
        return Term::app(Term::lam(f, ft, body), term(ctx, {}, ft, size / 2));
      }
      case 7: {
        if (size < 4) return leaf(ctx);
        Ctx inner = ctx;
        std::string f = fresh("F");
        inner.stable.emplace_back(f, Type::ground());
        return Term::mu(f, Type::ground(), ground(inner, size - 1));
      }
      case 8:
      case 9:
        return app(ctx, {}, Type::ground(), size);
      case 10:
      case 11:
        return leaf(ctx);
      case 12: {
        Term m = roll(2) ? ground(ctx, size / 2) : Term::promote(ground(ctx, size / 2));
        return Term::discard(m, ground(ctx, size / 2));
      }
      case 13: {
        Ctx inner = ctx;
        std::string x = fresh("x"), y = fresh("x");
        inner.ground.push_back(x);
        inner.ground.push_back(y);
        return Term::copy(ground(ctx, size / 2), x, y, ground(inner, size / 2));
      }
      case 14: {
        std::string u = fresh("u"), v = fresh("u");
        Term body = consume(ctx, {{u, Type::bang(Type::ground())}, {v, Type::bang(Type::ground())}}, size / 2);
        return Term::copy(Term::promote(ground(ctx, size / 2)), u, v, body, true);
      }
      default:
        return Term::derelict(Term::promote(ground(ctx, size - 1)));
    }
  }

  std::mt19937_64 rng_;
  GenOptions opts_;
  std::set<std::string> avoid_;
  int counter_ = 0;
};

}  // namespace

Term gen_term(const Basis& basis, const Type& sigma, std::size_t size, std::uint64_t seed, GenOptions opts) {
  if (size == 0) throw GenerationFailed("size must be at least 1");
  Ctx ctx;
  std::vector<Lin> lin;
  std::set<std::string> avoid;
  for (const auto& e : basis) {
    avoid.insert(e.name);
    if (e.kind == VarKind::Ground) ctx.ground.push_back(e.name);
    else if (e.kind == VarKind::Stable) ctx.stable.emplace_back(e.name, e.type);
    else lin.push_back({e.name, e.type});
  }
  TypingOptions topts;
  if (opts.ext) topts.mode = TypingMode::Extended;
  std::mt19937_64 seeds(seed);
  std::string last;
  for (int attempt = 0; attempt < 200; ++attempt) {
    Gen g(seeds(), opts, avoid);
    int budget = static_cast<int>(size) - attempt % 4;
    Term t = g.term(ctx, lin, sigma, std::max(1, budget));
    if (t.size() > size) continue;
    try {
      check(basis, t, sigma, topts);
      return t;
    } catch (const TypeError& e) {
      last = e.what();
    }
  }
  throw GenerationFailed("no term of type " + sigma.str() + " under " + basis.str() + " within size " +
                         std::to_string(size) + (last.empty() ? "" : " (" + last + ")"));
}

GraphSearch common_reduct_search(const Term& a, const Term& b, std::size_t fuel) {
  struct Side {
    std::deque<Term> queue;
    std::unordered_set<std::string> seen;
  };
  Side sa, sb;
  sa.queue.push_back(a);
  sa.seen.insert(canonical_key(a));
  sb.queue.push_back(b);
  sb.seen.insert(canonical_key(b));
  GraphSearch r;
  for (const auto& k : sa.seen)
    if (sb.seen.count(k)) r.joined = true;
  bool turn = false;
  while (!r.joined && r.explored < fuel && (!sa.queue.empty() || !sb.queue.empty())) {
    Side& s = turn ? sb : sa;
    Side& other = turn ? sa : sb;
    turn = !turn;
    if (s.queue.empty()) continue;
    Term cur = s.queue.front();
    s.queue.pop_front();
    for (const auto& site : find_redexes(cur)) {
      Term next = step_at(cur, site);
      ++r.explored;
      auto key = canonical_key(next);
      if (other.seen.count(key)) {
        r.joined = true;
        break;
      }
      if (s.seen.insert(key).second) s.queue.push_back(next);
    }
  }
  r.complete = sa.queue.empty() && sb.queue.empty();
  return r;
}

namespace detail {

namespace {
const std::vector<std::string>& functional_sources() {
  static const std::vector<std::string> src = {
      "0",
      "$F",
      "succ $F",
      "pred $F",
      "lif 0 then 1 else $F",
      "lif 1 then $F else 4",
      "lif $F then 2 else 3",
      "lif $F then $F else 0",
      "lif $F then 0 else succ $F",
      "(\\x:iota. succ x) $F",
      "succ (succ 0)",
      "lif $F then 1 else pred $F",
  };
  return src;
}
}  // namespace

Term law_functional_body(std::size_t i) { return parse_term(functional_sources().at(i)); }
std::size_t law_functional_count() { return functional_sources().size(); }

}  // namespace detail

SubstInstance gen_subst_instance(SubstCase c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  Type iota = Type::ground();
  SubstInstance inst{Basis{}, Term::zero(), iota, Basis{}, Term::zero()};
  std::vector<BasisEntry> g;
  if (pick(2)) g.push_back({"y", VarKind::Ground, iota});
  if (pick(3) == 0) g.push_back({"G", VarKind::Stable, iota});
  inst.tau = pick(4) == 0 ? nat_to_nat() : iota;
  switch (c) {
    case SubstCase::Ground:
      g.push_back({"x", VarKind::Ground, iota});
      inst.n = numeral(static_cast<std::uint64_t>(pick(5)));
      break;
    case SubstCase::Higher: {
      Type ft = pick(3) ? nat_to_nat() : Type::arrow(nat_to_nat(), iota);
      g.push_back({"f", VarKind::Higher, ft});
      std::vector<BasisEntry> d;
      if (pick(2)) d.push_back({"z", VarKind::Ground, iota});
      inst.delta = Basis(d);
      inst.n = gen_term(inst.delta, ft, 8, seed * 31 + 7);
      break;
    }
    case SubstCase::Stable: {
      Type st = pick(3) ? iota : nat_to_nat();
      g.push_back({"F", VarKind::Stable, st});
      std::vector<BasisEntry> d;
      if (pick(2)) d.push_back({"z", VarKind::Ground, iota});
      if (pick(2)) d.push_back({"H", VarKind::Stable, iota});
      inst.delta = Basis(d);
      inst.n = gen_term(inst.delta, st, 8, seed * 31 + 7);
      break;
    }
  }
  inst.gamma = Basis(g);
  inst.m = gen_term(inst.gamma, inst.tau, 14, seed * 17 + 3);
  return inst;
}

}  // namespace sllam
