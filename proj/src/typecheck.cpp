#include "sllam/typecheck.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "sllam/parser.hpp"

namespace sllam {

const char* rule_tag(Rule r) {
  switch (r) {
    case Rule::Zero: return "z";
    case Rule::Succ: return "s";
    case Rule::Pred: return "p";
    case Rule::LIf: return "lif";
    case Rule::Exchange: return "ex";
    case Rule::GroundVar: return "gv";
    case Rule::GroundWeaken: return "gw";
    case Rule::GroundContract: return "gc";
    case Rule::HigherVar: return "hv";
    case Rule::App: return "ap";
    case Rule::Lam: return "lam";
    case Rule::StableVar: return "sv";
    case Rule::StableContract: return "sc";
    case Rule::StableWeaken: return "sw";
    case Rule::Mu: return "mu";
    case Rule::Promote: return "pr";
    case Rule::Discard: return "ds";
    case Rule::Copy: return "cp";
    case Rule::Derelict: return "der";
  }
  return "?";
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto& p : premises_) n += p->node_count();
  return n;
}

const char* to_string(TypeError::Code c) {
  switch (c) {
    case TypeError::Code::UnboundVariable: return "UnboundVariable";
    case TypeError::Code::KindMismatch: return "KindMismatch";
    case TypeError::Code::NotAFunction: return "NotAFunction";
    case TypeError::Code::ArgTypeMismatch: return "ArgTypeMismatch";
    case TypeError::Code::LinearVariableUnused: return "LinearVariableUnused";
    case TypeError::Code::LinearVariableReused: return "LinearVariableReused";
    case TypeError::Code::BranchLinearityMismatch: return "BranchLinearityMismatch";
    case TypeError::Code::MuBodyHasLinearFreeVars: return "MuBodyHasLinearFreeVars";
    case TypeError::Code::ConditionNotGround: return "ConditionNotGround";
    case TypeError::Code::BranchNotGround: return "BranchNotGround";
    case TypeError::Code::TypeMismatch: return "TypeMismatch";
    case TypeError::Code::IllFormedBasis: return "IllFormedBasis";
    case TypeError::Code::ExtensionDisabled: return "ExtensionDisabled";
    case TypeError::Code::NoTypingRule: return "NoTypingRule";
  }
  return "?";
}

TypeError::TypeError(Code code, std::string explanation, std::optional<Term> at)
    : std::runtime_error(std::string(sllam::to_string(code)) + ": " + explanation),
      code_(code),
      explanation_(std::move(explanation)),
      at_(std::move(at)) {}

namespace {

const Type kIota = Type::ground();
const Type kBangIota = Type::bang(Type::ground());

DerivationPtr node(Rule rule, Basis basis, Term term, Type type,
                   std::vector<DerivationPtr> premises = {}, std::size_t swap = 0) {
  return std::make_shared<const Derivation>(rule, std::move(basis), std::move(term),
                                            std::move(type), std::move(premises), swap);
}

DerivationPtr swap_at(const DerivationPtr& d, std::size_t i) {
  return node(Rule::Exchange, d->basis().swapped(i), d->term(), d->type(), {d}, i);
}

/// Adjacent swaps until the basis lists names in `order`.
DerivationPtr arrange(DerivationPtr d, const std::vector<std::string>& order) {
  auto rank = [&](const std::string& n) {
    auto it = std::find(order.begin(), order.end(), n);
    return static_cast<std::size_t>(it - order.begin());
  };
  bool swapped = true;
  while (swapped) {
    swapped = false;
    const auto& b = d->basis();
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      if (rank(b[i].name) > rank(b[i + 1].name)) {
        d = swap_at(d, i);
        swapped = true;
        break;
      }
    }
  }
  return d;
}

DerivationPtr move_to_end(DerivationPtr d, const std::string& name) {
  auto idx = d->basis().index_of(name);
  if (!idx) throw std::logic_error("move_to_end: missing " + name);
  for (std::size_t i = *idx; i + 1 < d->basis().size(); ++i) d = swap_at(d, i);
  return d;
}

DerivationPtr weaken(const DerivationPtr& d, const BasisEntry& e) {
  Rule r;
  switch (e.kind) {
    case VarKind::Ground: r = Rule::GroundWeaken; break;
    case VarKind::Stable: r = Rule::StableWeaken; break;
    default:
      throw TypeError(TypeError::Code::LinearVariableUnused,
                      "linear variable '" + e.name + "' is never used", d->term());
  }
  return node(r, d->basis().append(e), d->term(), d->type(), {d});
}

/// Contracts `a` and `b` (both in the basis) into `target`.
DerivationPtr contract(DerivationPtr d, const std::string& a, const std::string& b,
                       const std::string& target) {
  const auto& cur = d->basis();
  std::size_t n = cur.size();
  bool at_end = n >= 2 && ((cur[n - 2].name == a && cur[n - 1].name == b) ||
                           (cur[n - 2].name == b && cur[n - 1].name == a));
  if (!at_end) {
    d = move_to_end(d, a);
    d = move_to_end(d, b);
  }
  const BasisEntry entry = *d->basis().find(a);
  Rule r = entry.kind == VarKind::Ground ? Rule::GroundContract : Rule::StableContract;
  Basis basis = d->basis().without(a).without(b).append({target, entry.kind, entry.type});
  Term term = rename_free(rename_free(d->term(), a, target), b, target);
  return node(r, std::move(basis), std::move(term), d->type(), {d});
}

/// Renames the free variable `from` throughout a derivation. `to` must be
/// fresh for the whole derivation.
DerivationPtr rename_derivation(const DerivationPtr& d, const std::string& from,
                                const std::string& to) {
  if (!d->basis().contains(from)) return d;
  std::vector<BasisEntry> entries;
  for (auto e : d->basis()) {
    if (e.name == from) e.name = to;
    entries.push_back(e);
  }
  std::vector<DerivationPtr> premises;
  for (const auto& p : d->premises()) premises.push_back(rename_derivation(p, from, to));
  return node(d->rule(), Basis(entries), rename_free(d->term(), from, to), d->type(),
              std::move(premises), d->swap_index());
}

struct Scoped {
  std::string name;
  VarKind kind;
  Type type;
};

class Elaborator {
 public:
  Elaborator(const Basis& basis, const Term& root, TypingOptions opts) : opts_(opts) {
    for (const auto& e : basis) env_.push_back({e.name, e.kind, e.type});
    avoid_ = all_names(root);
    for (const auto& e : basis) avoid_.insert(e.name);
  }

  DerivationPtr run(const Term& t) { return elab(t); }

  /// Free-variable order used to normalize bases after combining premises.
  std::vector<std::string> order_for(const Term& t) const {
    std::vector<std::string> out = free_order(t);
    if (opts_.canon == ElabCanon::Alternative) std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  /// Free variable names in first-occurrence order, memoized per node.
  const std::vector<std::string>& free_order(const Term& t) const {
    auto it = free_cache_.find(t.id());
    if (it != free_cache_.end()) return it->second;
    std::vector<std::string> out;
    if (t.kind() == TermKind::Var) {
      out.push_back(t.name());
    } else {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < t.arity(); ++i) {
        auto bound = t.bound_in_child(i);
        for (const auto& n : free_order(t.child(i)))
          if (std::find(bound.begin(), bound.end(), n) == bound.end() && seen.insert(n).second)
            out.push_back(n);
      }
    }
    keep_.push_back(t);
    return free_cache_.emplace(t.id(), std::move(out)).first->second;
  }

  std::string fresh(const std::string& base) {
    std::string n = fresh_name(base, avoid_);
    avoid_.insert(n);
    return n;
  }

  const Scoped* lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  void require_ext(const Term& t) const {
    if (opts_.mode != TypingMode::Extended)
      throw TypeError(TypeError::Code::ExtensionDisabled,
                      "extension construct outside extension mode", t);
  }

  template <class F>
  DerivationPtr scoped(std::vector<Scoped> bound, F&& f) {
    for (auto& b : bound) env_.push_back(b);
    DerivationPtr d = f();
    for (std::size_t i = 0; i < bound.size(); ++i) env_.pop_back();
    return d;
  }

  // Renames variables shared between `left` and `right` apart in one of
  // them; returns the renamed derivations and the (original, copy) pairs.
  struct Split {
    DerivationPtr left, right;
    std::vector<std::pair<std::string, std::string>> shared;
    bool renamed_left = false;
  };

  Split separate(DerivationPtr left, std::vector<DerivationPtr*> rights, const Term& at) {
    Split s;
    bool rename_left = opts_.canon == ElabCanon::Alternative;
    for (const auto& e : left->basis()) {
      bool in_right = false;
      for (auto* r : rights) in_right = in_right || (*r)->basis().contains(e.name);
      if (!in_right) continue;
      if (e.kind == VarKind::Higher)
        throw TypeError(TypeError::Code::LinearVariableReused,
                        "linear variable '" + e.name + "' used more than once", at);
      s.shared.push_back({e.name, fresh(e.name)});
    }
    for (const auto& [orig, copy] : s.shared) {
      if (rename_left) {
        left = rename_derivation(left, orig, copy);
      } else {
        for (auto* r : rights) *r = rename_derivation(*r, orig, copy);
      }
    }
    s.left = left;
    s.renamed_left = rename_left;
    return s;
  }

  DerivationPtr merge_shared(DerivationPtr d, const Split& s) {
    for (const auto& [orig, copy] : s.shared) {
      if (s.renamed_left)
        d = contract(d, copy, orig, orig);
      else
        d = contract(d, orig, copy, orig);
    }
    return d;
  }

  DerivationPtr elab(const Term& t) {
    switch (t.kind()) {
      case TermKind::Zero:
        return node(Rule::Zero, {}, t, kIota);
      case TermKind::Succ:
        return node(Rule::Succ, {}, t, nat_to_nat());
      case TermKind::Pred:
        return node(Rule::Pred, {}, t, nat_to_nat());
      case TermKind::Var:
        return elab_var(t);
      case TermKind::App:
        return elab_app(t);
      case TermKind::LIf:
        return elab_lif(t);
      case TermKind::Lam:
        return elab_lam(t);
      case TermKind::Mu:
        return elab_mu(t);
      case TermKind::Promote: {
        require_ext(t);
        auto d = elab(t.child(0));
        if (d->type() != kIota)
          throw TypeError(TypeError::Code::TypeMismatch, "promote! expects iota", t);
        return node(Rule::Promote, d->basis(), t, kBangIota, {d});
      }
      case TermKind::Derelict: {
        require_ext(t);
        auto d = elab(t.child(0));
        if (d->type() != kBangIota)
          throw TypeError(TypeError::Code::TypeMismatch, "derelict expects !iota", t);
        return node(Rule::Derelict, d->basis(), t, kIota, {d});
      }
      case TermKind::Discard:
        require_ext(t);
        return elab_discard(t);
      case TermKind::Copy:
        require_ext(t);
        return elab_copy(t);
      case TermKind::PromoteAs:
        require_ext(t);
        throw TypeError(TypeError::Code::NoTypingRule,
                        "general promotion has no typing rule; it is reduce-only", t);
    }
    throw std::logic_error("unhandled term kind");
  }

  DerivationPtr elab_var(const Term& t) {
    const Scoped* s = lookup(t.name());
    if (!s)
      throw TypeError(TypeError::Code::UnboundVariable, "unbound variable '" + t.name() + "'", t);
    if (s->kind != t.var_kind())
      throw TypeError(TypeError::Code::KindMismatch,
                      "'" + t.name() + "' is " + to_string(s->kind) + " but used as " +
                          to_string(t.var_kind()),
                      t);
    Rule r = s->kind == VarKind::Ground   ? Rule::GroundVar
             : s->kind == VarKind::Higher ? Rule::HigherVar
                                          : Rule::StableVar;
    return node(r, Basis{{s->name, s->kind, s->type}}, t, s->type);
  }

  DerivationPtr elab_app(const Term& t) {
    auto dm = elab(t.child(0));
    if (!dm->type().is_arrow())
      throw TypeError(TypeError::Code::NotAFunction,
                      "'" + pretty(t.child(0)) + "' has type " + dm->type().str(), t);
    auto dn = elab(t.child(1));
    if (dn->type() != dm->type().argument())
      throw TypeError(TypeError::Code::ArgTypeMismatch,
                      "expected " + dm->type().argument().str() + ", found " + dn->type().str(), t);
    auto s = separate(dm, {&dn}, t);
    auto d = node(Rule::App, s.left->basis().concat(dn->basis()),
                  Term::app(s.left->term(), dn->term()), dm->type().result(), {s.left, dn});
    d = merge_shared(d, s);
    return arrange(d, order_for(t));
  }

  DerivationPtr elab_lif(const Term& t) {
    auto dc = elab(t.child(0));
    if (dc->type() != kIota)
      throw TypeError(TypeError::Code::ConditionNotGround, "condition has type " + dc->type().str(), t);
    auto dl = elab(t.child(1));
    auto dr = elab(t.child(2));
    if (dl->type() != kIota || dr->type() != kIota)
      throw TypeError(TypeError::Code::BranchNotGround, "branches must have type iota", t);

    std::set<std::string> hl, hr;
    for (const auto& e : dl->basis())
      if (e.kind == VarKind::Higher) hl.insert(e.name);
    for (const auto& e : dr->basis())
      if (e.kind == VarKind::Higher) hr.insert(e.name);
    if (hl != hr)
      throw TypeError(TypeError::Code::BranchLinearityMismatch,
                      "branches consume different linear variables", t);

    // Common branch basis: union, ordered like the branches' free variables.
    Term branches = Term::app(t.child(1), t.child(2));
    auto order = order_for(branches);
    for (auto* d : {&dl, &dr}) {
      const auto& other = (d == &dl) ? dr : dl;
      for (const auto& e : other->basis())
        if (!(*d)->basis().contains(e.name)) *d = weaken(*d, e);
      *d = arrange(*d, order);
    }

    auto s = separate(dc, {&dl, &dr}, t);
    auto d = node(Rule::LIf, s.left->basis().concat(dl->basis()),
                  Term::lif(s.left->term(), dl->term(), dr->term()), kIota, {s.left, dl, dr});
    d = merge_shared(d, s);
    return arrange(d, order_for(t));
  }

  DerivationPtr elab_lam(const Term& t) {
    const std::string& x = t.name();
    VarKind kind = t.var_kind();
    auto body = scoped({{x, kind, t.annotation()}}, [&] { return elab(t.child(0)); });
    if (!body->basis().contains(x)) body = weaken(body, {x, kind, t.annotation()});
    body = move_to_end(body, x);
    return node(Rule::Lam, body->basis().without(x), t, Type::arrow(t.annotation(), body->type()),
                {body});
  }

  DerivationPtr elab_mu(const Term& t) {
    const std::string& f = t.name();
    auto body = scoped({{f, VarKind::Stable, t.annotation()}}, [&] { return elab(t.child(0)); });
    if (body->type() != t.annotation())
      throw TypeError(TypeError::Code::TypeMismatch,
                      "mu body has type " + body->type().str() + ", annotation " +
                          t.annotation().str(),
                      t);
    for (const auto& e : body->basis())
      if (e.kind == VarKind::Higher)
        throw TypeError(TypeError::Code::MuBodyHasLinearFreeVars,
                        "mu body uses linear variable '" + e.name + "'", t);
    if (!body->basis().contains(f)) body = weaken(body, {f, VarKind::Stable, t.annotation()});

    std::vector<std::string> order;
    auto fv = order_for(t);
    for (const auto& n : fv)
      if (body->basis().find(n)->kind == VarKind::Ground) order.push_back(n);
    for (const auto& n : fv)
      if (body->basis().find(n)->kind == VarKind::Stable) order.push_back(n);
    order.push_back(f);
    body = arrange(body, order);
    return node(Rule::Mu, body->basis().without(f), t, t.annotation(), {body});
  }

  DerivationPtr elab_discard(const Term& t) {
    auto dm = elab(t.child(0));
    if (dm->type() != kIota && dm->type() != kBangIota)
      throw TypeError(TypeError::Code::TypeMismatch, "discard expects iota or !iota", t);
    auto dn = elab(t.child(1));
    auto s = separate(dm, {&dn}, t);
    auto d = node(Rule::Discard, s.left->basis().concat(dn->basis()),
                  Term::discard(s.left->term(), dn->term()), dn->type(), {s.left, dn});
    d = merge_shared(d, s);
    return arrange(d, order_for(t));
  }

  DerivationPtr elab_copy(const Term& t) {
    const Type& expected = t.bang_copy() ? kBangIota : kIota;
    auto dm = elab(t.child(0));
    if (dm->type() != expected)
      throw TypeError(TypeError::Code::TypeMismatch,
                      "copy scrutinee has type " + dm->type().str() + ", expected " +
                          expected.str(),
                      t);
    VarKind k = t.bang_copy() ? VarKind::Higher : VarKind::Ground;
    const std::string& x1 = t.name();
    const std::string& x2 = t.second_name();
    if (x1 == x2)
      throw TypeError(TypeError::Code::IllFormedBasis, "copy binders must be distinct", t);
    auto dn = scoped({{x1, k, expected}, {x2, k, expected}}, [&] { return elab(t.child(1)); });
    for (const auto& x : {x1, x2})
      if (!dn->basis().contains(x)) dn = weaken(dn, {x, k, expected});
    dn = move_to_end(dn, x1);
    dn = move_to_end(dn, x2);

    Basis delta = dn->basis().without(x1).without(x2);
    // Variables shared between scrutinee and continuation (excluding binders).
    auto s = separate(dm, {&dn}, t);
    delta = dn->basis().without(x1).without(x2);
    auto d = node(Rule::Copy, s.left->basis().concat(delta),
                  Term::copy(s.left->term(), x1, x2, dn->term(), t.bang_copy()), dn->type(),
                  {s.left, dn});
    d = merge_shared(d, s);
    return arrange(d, order_for(t));
  }

  TypingOptions opts_;
  std::vector<Scoped> env_;
  std::set<std::string> avoid_;
  mutable std::unordered_map<const void*, std::vector<std::string>> free_cache_;
  mutable std::vector<Term> keep_;  // pins cached nodes so ids stay unique
};

}  // namespace

Typing infer(const Basis& basis, const Term& t, const TypingOptions& opts) {
  if (!basis.well_formed(opts.mode == TypingMode::Extended))
    throw TypeError(TypeError::Code::IllFormedBasis, "ill-formed basis: " + basis.str());
  Elaborator el(basis, t, opts);
  DerivationPtr d = el.run(t);
  for (const auto& e : basis)
    if (!d->basis().contains(e.name)) d = weaken(d, e);
  std::vector<std::string> order;
  for (const auto& e : basis) order.push_back(e.name);
  d = arrange(d, order);
  return {d->type(), d};
}

DerivationPtr check(const Basis& basis, const Term& t, const Type& claimed,
                    const TypingOptions& opts) {
  auto typing = infer(basis, t, opts);
  if (typing.type != claimed)
    throw TypeError(TypeError::Code::TypeMismatch,
                    "found " + typing.type.str() + ", claimed " + claimed.str(), t);
  return typing.derivation;
}

// ---------------------------------------------------------------------------
// Validation kernel
// ---------------------------------------------------------------------------

namespace {

class Validator {
 public:
  explicit Validator(TypingMode mode) : mode_(mode) {}

  ValidationReport run(const Derivation& d) {
    ValidationReport r;
    try {
      visit(d);
    } catch (const Failure& f) {
      r.ok = false;
      r.failure = f.what;
    }
    return r;
  }

 private:
  struct Failure {
    std::string what;
  };

  [[noreturn]] void fail(const Derivation& d, const std::string& why) const {
    throw Failure{std::string(rule_tag(d.rule())) + " node `" + d.basis().str() + " |- " +
                  pretty(d.term()) + " : " + d.type().str() + "`: " + why};
  }

  void require(bool cond, const Derivation& d, const std::string& why) const {
    if (!cond) fail(d, why);
  }

  static bool disjoint(const Basis& a, const Basis& b) {
    for (const auto& e : a)
      if (b.contains(e.name)) return false;
    return true;
  }

  void premises(const Derivation& d, std::size_t n) const {
    require(d.premises().size() == n, d, "wrong number of premises");
  }

  void visit(const Derivation& d) {
    bool ext = mode_ == TypingMode::Extended;
    require(d.basis().well_formed(ext), d, "ill-formed basis");
    for (const auto& p : d.premises()) visit(*p);

    const Basis& b = d.basis();
    const Term& t = d.term();
    const Type& ty = d.type();
    switch (d.rule()) {
      case Rule::Zero:
        premises(d, 0);
        require(b.empty() && t.kind() == TermKind::Zero && ty == kIota, d, "schema (z)");
        return;
      case Rule::Succ:
      case Rule::Pred:
        premises(d, 0);
        require(b.empty() && ty == nat_to_nat() &&
                    t.kind() == (d.rule() == Rule::Succ ? TermKind::Succ : TermKind::Pred),
                d, "schema (s)/(p)");
        return;
      case Rule::GroundVar:
      case Rule::HigherVar:
      case Rule::StableVar: {
        premises(d, 0);
        VarKind k = d.rule() == Rule::GroundVar   ? VarKind::Ground
                    : d.rule() == Rule::HigherVar ? VarKind::Higher
                                                  : VarKind::Stable;
        require(b.size() == 1 && b[0].kind == k && t.kind() == TermKind::Var &&
                    t.name() == b[0].name && t.var_kind() == k && ty == b[0].type,
                d, "variable axiom");
        return;
      }
      case Rule::Exchange: {
        premises(d, 1);
        const auto& p = d.premise(0);
        require(d.swap_index() + 1 < p.basis().size(), d, "swap index out of range");
        require(b == p.basis().swapped(d.swap_index()), d, "basis is not an adjacent swap");
        require(alpha_eq(t, p.term()) && ty == p.type(), d, "exchange changed the judgment");
        return;
      }
      case Rule::GroundWeaken:
      case Rule::StableWeaken: {
        premises(d, 1);
        const auto& p = d.premise(0);
        require(!b.empty(), d, "empty basis");
        const auto& last = b[b.size() - 1];
        VarKind k = d.rule() == Rule::GroundWeaken ? VarKind::Ground : VarKind::Stable;
        require(last.kind == k, d, "weakened variable has wrong kind");
        require(p.basis().append(last) == b, d, "basis is not premise plus one entry");
        require(alpha_eq(t, p.term()) && ty == p.type(), d, "weakening changed the judgment");
        return;
      }
      case Rule::GroundContract:
      case Rule::StableContract: {
        premises(d, 1);
        const auto& p = d.premise(0);
        const Basis& pb = p.basis();
        require(pb.size() >= 2 && !b.empty(), d, "basis too short");
        VarKind k = d.rule() == Rule::GroundContract ? VarKind::Ground : VarKind::Stable;
        const auto& x1 = pb[pb.size() - 2];
        const auto& x2 = pb[pb.size() - 1];
        const auto& x = b[b.size() - 1];
        require(x1.kind == k && x2.kind == k && x.kind == k, d, "contracted variables kind");
        require(x1.type == x.type && x2.type == x.type, d, "contracted variables type");
        std::vector<BasisEntry> gamma(pb.begin(), pb.end() - 2);
        require(Basis(gamma).append(x) == b, d, "conclusion basis is not Gamma, x");
        Term expect = rename_free(rename_free(p.term(), x1.name, x.name), x2.name, x.name);
        require(alpha_eq(expect, t) && ty == p.type(), d, "term is not M[x/x1,x2]");
        return;
      }
      case Rule::App: {
        premises(d, 2);
        const auto& m = d.premise(0);
        const auto& n = d.premise(1);
        require(disjoint(m.basis(), n.basis()), d, "premise bases overlap");
        require(b == m.basis().concat(n.basis()), d, "basis is not Gamma, Delta");
        require(m.type().is_arrow() && m.type().argument() == n.type() &&
                    m.type().result() == ty,
                d, "application types");
        require(t.kind() == TermKind::App && alpha_eq(t.child(0), m.term()) &&
                    alpha_eq(t.child(1), n.term()),
                d, "term is not M N");
        return;
      }
      case Rule::Lam: {
        premises(d, 1);
        const auto& p = d.premise(0);
        require(t.kind() == TermKind::Lam, d, "term is not an abstraction");
        BasisEntry x{t.name(), kind_for_binder(t.annotation()), t.annotation()};
        require(b.append(x) == p.basis(), d, "premise basis is not Gamma, x");
        require(ty == Type::arrow(t.annotation(), p.type()), d, "abstraction type");
        require(alpha_eq(t.child(0), p.term()), d, "body mismatch");
        return;
      }
      case Rule::LIf: {
        premises(d, 3);
        const auto& c = d.premise(0);
        const auto& l = d.premise(1);
        const auto& r = d.premise(2);
        require(l.basis() == r.basis(), d, "branches typed under different bases");
        require(disjoint(c.basis(), l.basis()), d, "condition and branch bases overlap");
        require(b == c.basis().concat(l.basis()), d, "basis is not Gamma, Delta");
        require(c.type() == kIota && l.type() == kIota && r.type() == kIota && ty == kIota, d,
                "lif types");
        require(t.kind() == TermKind::LIf && alpha_eq(t.child(0), c.term()) &&
                    alpha_eq(t.child(1), l.term()) && alpha_eq(t.child(2), r.term()),
                d, "term is not lif M L R");
        return;
      }
      case Rule::Mu: {
        premises(d, 1);
        const auto& p = d.premise(0);
        require(t.kind() == TermKind::Mu, d, "term is not mu");
        require(b.append({t.name(), VarKind::Stable, t.annotation()}) == p.basis(), d,
                "premise basis is not Gamma, Delta, F");
        bool seen_stable = false;
        for (const auto& e : b) {
          require(e.kind != VarKind::Higher, d, "mu context contains a linear variable");
          if (e.kind == VarKind::Stable) seen_stable = true;
          require(!(seen_stable && e.kind == VarKind::Ground), d,
                  "mu context is not ground-then-stable");
        }
        require(ty == t.annotation() && p.type() == ty, d, "mu types");
        require(alpha_eq(t.child(0), p.term()), d, "body mismatch");
        return;
      }
      case Rule::Promote:
      case Rule::Derelict: {
        require(mode_ == TypingMode::Extended, d, "extension rule in core mode");
        premises(d, 1);
        const auto& p = d.premise(0);
        bool promote = d.rule() == Rule::Promote;
        require(b == p.basis(), d, "basis changed");
        require(t.kind() == (promote ? TermKind::Promote : TermKind::Derelict) &&
                    alpha_eq(t.child(0), p.term()),
                d, "term shape");
        require(promote ? (p.type() == kIota && ty == kBangIota)
                        : (p.type() == kBangIota && ty == kIota),
                d, "types");
        return;
      }
      case Rule::Discard: {
        require(mode_ == TypingMode::Extended, d, "extension rule in core mode");
        premises(d, 2);
        const auto& m = d.premise(0);
        const auto& n = d.premise(1);
        require(disjoint(m.basis(), n.basis()), d, "premise bases overlap");
        require(b == m.basis().concat(n.basis()), d, "basis is not Gamma, Delta");
        require(m.type() == kIota || m.type() == kBangIota, d, "scrutinee type");
        require(ty == n.type(), d, "result type");
        require(t.kind() == TermKind::Discard && alpha_eq(t.child(0), m.term()) &&
                    alpha_eq(t.child(1), n.term()),
                d, "term shape");
        return;
      }
      case Rule::Copy: {
        require(mode_ == TypingMode::Extended, d, "extension rule in core mode");
        premises(d, 2);
        const auto& m = d.premise(0);
        const auto& n = d.premise(1);
        require(t.kind() == TermKind::Copy, d, "term shape");
        const Type& st = t.bang_copy() ? kBangIota : kIota;
        VarKind k = t.bang_copy() ? VarKind::Higher : VarKind::Ground;
        const Basis& nb = n.basis();
        require(nb.size() >= 2, d, "continuation basis too short");
        require(nb[nb.size() - 2] == BasisEntry{t.name(), k, st} &&
                    nb[nb.size() - 1] == BasisEntry{t.second_name(), k, st},
                d, "continuation basis is not Delta, x1, x2");
        Basis delta(std::vector<BasisEntry>(nb.begin(), nb.end() - 2));
        require(disjoint(m.basis(), delta), d, "premise bases overlap");
        require(b == m.basis().concat(delta), d, "basis is not Gamma, Delta");
        require(m.type() == st && ty == n.type(), d, "types");
        require(alpha_eq(t.child(0), m.term()) && alpha_eq(t.child(1), n.term()), d,
                "term shape");
        return;
      }
    }
  }

  TypingMode mode_;
};

void serialize_rec(const Derivation& d, int depth, std::string& out) {
  out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
  out += rule_tag(d.rule());
  if (d.rule() == Rule::Exchange) out += "[" + std::to_string(d.swap_index()) + "]";
  out += "  " + d.basis().str() + " |- " + pretty(d.term()) + " : " + d.type().str() + "\n";
  for (const auto& p : d.premises()) serialize_rec(*p, depth + 1, out);
}

}  // namespace

ValidationReport validate_derivation(const Derivation& d, TypingMode mode) {
  return Validator(mode).run(d);
}

std::string serialize(const Derivation& d) {
  std::string out;
  serialize_rec(d, 0, out);
  return out;
}

}  // namespace sllam
