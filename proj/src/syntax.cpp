#include "sllam/syntax.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace sllam {

// ---------------------------------------------------------------------------
// Type
// ---------------------------------------------------------------------------

Type Type::ground() {
  static const Type g(std::make_shared<const Node>(Node{Kind::Ground, {}}));
  return g;
}

Type Type::arrow(Type argument, Type result) {
  return Type(std::make_shared<const Node>(
      Node{Kind::Arrow, {std::move(argument), std::move(result)}}));
}

Type Type::bang(Type inner) {
  return Type(std::make_shared<const Node>(Node{Kind::Bang, {std::move(inner)}}));
}

const Type& Type::argument() const {
  if (!is_arrow()) throw std::logic_error("argument() of non-arrow type");
  return node_->children[0];
}

const Type& Type::result() const {
  if (!is_arrow()) throw std::logic_error("result() of non-arrow type");
  return node_->children[1];
}

const Type& Type::inner() const {
  if (!is_bang()) throw std::logic_error("inner() of non-bang type");
  return node_->children[0];
}

std::string Type::str() const {
  switch (kind()) {
    case Kind::Ground:
      return "iota";
    case Kind::Bang: {
      const Type& in = inner();
      return in.is_arrow() ? "!(" + in.str() + ")" : "!" + in.str();
    }
    case Kind::Arrow: {
      const Type& a = argument();
      std::string left = a.is_arrow() ? "(" + a.str() + ")" : a.str();
      return left + " -o " + result().str();
    }
  }
  return "?";
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

Type nat_to_nat() { return Type::arrow(Type::ground(), Type::ground()); }

// ---------------------------------------------------------------------------
// Basis
// ---------------------------------------------------------------------------

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::Ground: return "ground";
    case VarKind::Higher: return "higher";
    case VarKind::Stable: return "stable";
  }
  return "?";
}

VarKind kind_for_binder(const Type& annotation) {
  return annotation.is_ground() ? VarKind::Ground : VarKind::Higher;
}

Basis::Basis(std::initializer_list<BasisEntry> entries) : entries_(entries) {}
Basis::Basis(std::vector<BasisEntry> entries) : entries_(std::move(entries)) {}

const BasisEntry* Basis::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

std::optional<std::size_t> Basis::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].name == name) return i;
  return std::nullopt;
}

Basis Basis::append(BasisEntry e) const {
  auto copy = entries_;
  copy.push_back(std::move(e));
  return Basis(std::move(copy));
}

Basis Basis::concat(const Basis& other) const {
  auto copy = entries_;
  copy.insert(copy.end(), other.entries_.begin(), other.entries_.end());
  return Basis(std::move(copy));
}

Basis Basis::without(const std::string& name) const {
  std::vector<BasisEntry> out;
  for (const auto& e : entries_)
    if (e.name != name) out.push_back(e);
  return Basis(std::move(out));
}

Basis Basis::swapped(std::size_t i) const {
  auto copy = entries_;
  std::swap(copy.at(i), copy.at(i + 1));
  return Basis(std::move(copy));
}

bool Basis::well_formed(bool allow_bang_linear) const {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.name).second) return false;
    if (e.kind == VarKind::Ground && !e.type.is_ground()) return false;
    if (e.kind == VarKind::Higher) {
      bool ok = e.type.is_arrow() ||
                (allow_bang_linear && e.type.is_bang() && e.type.inner().is_ground());
      if (!ok) return false;
    }
    if (e.kind == VarKind::Stable && e.type.is_bang()) return false;
  }
  return true;
}

std::string Basis::str() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    const auto& e = entries_[i];
    out += (e.kind == VarKind::Stable ? "$" : "") + e.name + ":" + e.type.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Term
// ---------------------------------------------------------------------------

Term Term::make(Node node) { return Term(std::make_shared<const Node>(std::move(node))); }

Term Term::zero() {
  static const Term z = make(Node{TermKind::Zero});
  return z;
}
Term Term::succ() {
  static const Term s = make(Node{TermKind::Succ});
  return s;
}
Term Term::pred() {
  static const Term p = make(Node{TermKind::Pred});
  return p;
}

Term Term::var(std::string name, VarKind kind) {
  Node n{TermKind::Var, std::move(name)};
  n.var_kind = kind;
  return make(std::move(n));
}

Term Term::lam(std::string name, Type annotation, Term body) {
  Node n{TermKind::Lam, std::move(name)};
  n.var_kind = kind_for_binder(annotation);
  n.annotation = std::move(annotation);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  Node n{TermKind::App};
  n.children = {std::move(fun), std::move(arg)};
  return make(std::move(n));
}

Term Term::lif(Term cond, Term then_branch, Term else_branch) {
  Node n{TermKind::LIf};
  n.children = {std::move(cond), std::move(then_branch), std::move(else_branch)};
  return make(std::move(n));
}

Term Term::mu(std::string name, Type annotation, Term body) {
  Node n{TermKind::Mu, std::move(name)};
  n.var_kind = VarKind::Stable;
  n.annotation = std::move(annotation);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Term Term::promote(Term body) {
  Node n{TermKind::Promote};
  n.children = {std::move(body)};
  return make(std::move(n));
}

Term Term::discard(Term scrutinee, Term cont) {
  Node n{TermKind::Discard};
  n.children = {std::move(scrutinee), std::move(cont)};
  return make(std::move(n));
}

Term Term::copy(Term scrutinee, std::string first, std::string second, Term cont, bool bang) {
  Node n{TermKind::Copy, std::move(first), std::move(second)};
  n.bang = bang;
  n.var_kind = bang ? VarKind::Higher : VarKind::Ground;
  n.children = {std::move(scrutinee), std::move(cont)};
  return make(std::move(n));
}

Term Term::derelict(Term body) {
  Node n{TermKind::Derelict};
  n.children = {std::move(body)};
  return make(std::move(n));
}

Term Term::promote_as(Term arg, std::string name, Term body) {
  Node n{TermKind::PromoteAs, std::move(name)};
  n.var_kind = VarKind::Higher;
  n.children = {std::move(arg), std::move(body)};
  return make(std::move(n));
}

Term Term::with_children(std::vector<Term> children) const {
  Node n = *node_;
  n.children = std::move(children);
  return make(std::move(n));
}

bool Term::is_binder() const {
  switch (kind()) {
    case TermKind::Lam:
    case TermKind::Mu:
    case TermKind::Copy:
    case TermKind::PromoteAs:
      return true;
    default:
      return false;
  }
}

bool Term::is_extension() const {
  switch (kind()) {
    case TermKind::Promote:
    case TermKind::Discard:
    case TermKind::Copy:
    case TermKind::Derelict:
    case TermKind::PromoteAs:
      return true;
    default:
      return false;
  }
}

std::vector<std::string> Term::bound_in_child(std::size_t i) const {
  switch (kind()) {
    case TermKind::Lam:
    case TermKind::Mu:
      return {name()};
    case TermKind::Copy:
      if (i == 1) return {name(), second_name()};
      return {};
    case TermKind::PromoteAs:
      if (i == 1) return {name()};
      return {};
    default:
      return {};
  }
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.size();
  return n;
}

// ---------------------------------------------------------------------------
// alpha-equivalence
// ---------------------------------------------------------------------------

namespace {

using Env = std::vector<std::string>;

std::optional<std::size_t> lookup(const Env& env, const std::string& name) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == name) return env.size() - 1 - i;
  return std::nullopt;
}

bool alpha_rec(const Term& a, const Term& b, Env& ea, Env& eb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var: {
      if (a.var_kind() != b.var_kind()) return false;
      auto ia = lookup(ea, a.name());
      auto ib = lookup(eb, b.name());
      if (ia.has_value() != ib.has_value()) return false;
      return ia ? *ia == *ib : a.name() == b.name();
    }
    case TermKind::Lam:
    case TermKind::Mu:
      if (!(a.annotation() == b.annotation())) return false;
      break;
    case TermKind::Copy:
      if (a.bang_copy() != b.bang_copy()) return false;
      break;
    default:
      break;
  }
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    auto ba = a.bound_in_child(i);
    auto bb = b.bound_in_child(i);
    ea.insert(ea.end(), ba.begin(), ba.end());
    eb.insert(eb.end(), bb.begin(), bb.end());
    bool ok = alpha_rec(a.child(i), b.child(i), ea, eb);
    ea.resize(ea.size() - ba.size());
    eb.resize(eb.size() - bb.size());
    if (!ok) return false;
  }
  return true;
}

void key_rec(const Term& t, Env& env, std::string& out) {
  switch (t.kind()) {
    case TermKind::Zero: out += '0'; return;
    case TermKind::Succ: out += 'S'; return;
    case TermKind::Pred: out += 'P'; return;
    case TermKind::Var: {
      out += (t.var_kind() == VarKind::Stable ? '$' : t.var_kind() == VarKind::Higher ? 'h' : 'g');
      if (auto i = lookup(env, t.name()))
        out += '#' + std::to_string(*i);
      else
        out += '"' + t.name() + '"';
      return;
    }
    case TermKind::Lam: out += "(L" + t.annotation().str() + ' '; break;
    case TermKind::Mu: out += "(M" + t.annotation().str() + ' '; break;
    case TermKind::App: out += "(A "; break;
    case TermKind::LIf: out += "(I "; break;
    case TermKind::Promote: out += "(Pr "; break;
    case TermKind::Discard: out += "(Di "; break;
    case TermKind::Copy: out += t.bang_copy() ? "(Cb " : "(Cg "; break;
    case TermKind::Derelict: out += "(De "; break;
    case TermKind::PromoteAs: out += "(Pa "; break;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    auto bound = t.bound_in_child(i);
    env.insert(env.end(), bound.begin(), bound.end());
    key_rec(t.child(i), env, out);
    env.resize(env.size() - bound.size());
    out += ' ';
  }
  out += ')';
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  Env ea, eb;
  return alpha_rec(a, b, ea, eb);
}

std::string canonical_key(const Term& t) {
  std::string out;
  Env env;
  key_rec(t, env, out);
  return out;
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

bool FreeVars::contains(const std::string& name) const {
  return ground.count(name) || higher.count(name) || stable.count(name);
}

namespace {

void free_rec(const Term& t, Env& env, std::vector<FreeVar>& out) {
  if (t.kind() == TermKind::Var) {
    if (!lookup(env, t.name())) out.push_back({t.name(), t.var_kind()});
    return;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    auto bound = t.bound_in_child(i);
    env.insert(env.end(), bound.begin(), bound.end());
    free_rec(t.child(i), env, out);
    env.resize(env.size() - bound.size());
  }
}

}  // namespace

std::vector<FreeVar> free_vars_ordered(const Term& t) {
  std::vector<FreeVar> all;
  Env env;
  free_rec(t, env, all);
  std::vector<FreeVar> out;
  std::set<std::string> seen;
  for (auto& v : all)
    if (seen.insert(v.name).second) out.push_back(v);
  return out;
}

FreeVars free_vars(const Term& t) {
  std::vector<FreeVar> all;
  Env env;
  free_rec(t, env, all);
  FreeVars fv;
  for (const auto& v : all) {
    switch (v.kind) {
      case VarKind::Ground: fv.ground.insert(v.name); break;
      case VarKind::Higher: fv.higher.insert(v.name); break;
      case VarKind::Stable: fv.stable.insert(v.name); break;
    }
  }
  return fv;
}

std::size_t count_free(const Term& t, const std::string& name) {
  std::vector<FreeVar> all;
  Env env;
  free_rec(t, env, all);
  return static_cast<std::size_t>(
      std::count_if(all.begin(), all.end(), [&](const FreeVar& v) { return v.name == name; }));
}

std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  std::function<void(const Term&)> rec = [&](const Term& u) {
    if (u.kind() == TermKind::Var || u.kind() == TermKind::Lam || u.kind() == TermKind::Mu ||
        u.kind() == TermKind::PromoteAs)
      out.insert(u.name());
    if (u.kind() == TermKind::Copy) {
      out.insert(u.name());
      out.insert(u.second_name());
    }
    for (const auto& c : u.children()) rec(c);
  };
  rec(t);
  return out;
}

// ---------------------------------------------------------------------------
// Numerals
// ---------------------------------------------------------------------------

Term numeral(std::uint64_t k) {
  Term t = Term::zero();
  for (std::uint64_t i = 0; i < k; ++i) t = Term::app(Term::succ(), t);
  return t;
}

std::optional<std::uint64_t> numeral_of(const Term& t) {
  std::uint64_t k = 0;
  const Term* cur = &t;
  while (cur->kind() == TermKind::App) {
    if (cur->child(0).kind() != TermKind::Succ) return std::nullopt;
    ++k;
    cur = &cur->child(1);
  }
  if (cur->kind() != TermKind::Zero) return std::nullopt;
  return k;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base;
  while (avoid.count(candidate)) candidate += '\'';
  return candidate;
}

namespace {

using VarReplacer = std::function<Term(const Term& var)>;

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  for (const auto& v : free_vars_ordered(t)) out.insert(v.name);
  return out;
}

// Renames the binder `old_name` of node `t` (bound in child i) to `new_name`.
Term rename_binder(const Term& t, const std::string& old_name, const std::string& new_name);

Term subst_impl(const Term& m, const std::string& x, const VarReplacer& make,
                const std::set<std::string>& repl_free) {
  if (m.kind() == TermKind::Var) return m.name() == x ? make(m) : m;
  if (m.arity() == 0) return m;

  Term node = m;
  // Avoid capture: rename binders that would capture a free name of the replacement.
  for (std::size_t i = 0; i < node.arity(); ++i) {
    auto bound = node.bound_in_child(i);
    if (std::find(bound.begin(), bound.end(), x) != bound.end()) continue;
    for (const auto& b : bound) {
      if (!repl_free.count(b)) continue;
      if (count_free(node.child(i), x) == 0) continue;
      auto avoid = all_names(node);
      avoid.insert(repl_free.begin(), repl_free.end());
      avoid.insert(x);
      node = rename_binder(node, b, fresh_name(b, avoid));
    }
  }

  std::vector<Term> kids;
  kids.reserve(node.arity());
  bool changed = !node.same_node(m);
  for (std::size_t i = 0; i < node.arity(); ++i) {
    auto bound = node.bound_in_child(i);
    if (std::find(bound.begin(), bound.end(), x) != bound.end()) {
      kids.push_back(node.child(i));
      continue;
    }
    Term c = subst_impl(node.child(i), x, make, repl_free);
    changed = changed || !c.same_node(node.child(i));
    kids.push_back(std::move(c));
  }
  return changed ? node.with_children(std::move(kids)) : m;
}

Term rebuild_binder(const Term& t, const std::string& old_name, const std::string& new_name,
                    std::vector<Term> kids) {
  switch (t.kind()) {
    case TermKind::Lam:
      return Term::lam(new_name, t.annotation(), kids[0]);
    case TermKind::Mu:
      return Term::mu(new_name, t.annotation(), kids[0]);
    case TermKind::Copy:
      return Term::copy(kids[0], t.name() == old_name ? new_name : t.name(),
                        t.second_name() == old_name ? new_name : t.second_name(), kids[1],
                        t.bang_copy());
    case TermKind::PromoteAs:
      return Term::promote_as(kids[0], new_name, kids[1]);
    default:
      throw std::logic_error("rebuild_binder on non-binder");
  }
}

Term rename_binder(const Term& t, const std::string& old_name, const std::string& new_name) {
  std::vector<Term> kids;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    auto bound = t.bound_in_child(i);
    if (std::find(bound.begin(), bound.end(), old_name) != bound.end())
      kids.push_back(rename_free(t.child(i), old_name, new_name));
    else
      kids.push_back(t.child(i));
  }
  return rebuild_binder(t, old_name, new_name, std::move(kids));
}

}  // namespace

Term substitute(const Term& m, const std::string& name, const Term& replacement) {
  auto fv = free_names(replacement);
  return subst_impl(m, name, [&](const Term&) { return replacement; }, fv);
}

Term rename_free(const Term& m, const std::string& from, const std::string& to,
                 std::optional<VarKind> new_kind) {
  if (from == to && !new_kind) return m;
  return subst_impl(
      m, from,
      [&](const Term& v) { return Term::var(to, new_kind.value_or(v.var_kind())); }, {to});
}

Term subst_ground(const Term& m, std::uint64_t k, const std::string& x) {
  return substitute(m, x, numeral(k));
}

Term subst_higher(const Term& m, const Term& n, const std::string& f) {
  return substitute(m, f, n);
}

Term subst_stable(const Term& m, const Term& n, const std::string& stable) {
  return substitute(m, stable, n);
}

const Term& subterm_at(const Term& t, const std::vector<std::size_t>& path) {
  const Term* cur = &t;
  for (auto i : path) {
    if (i >= cur->arity()) throw std::out_of_range("invalid term path");
    cur = &cur->child(i);
  }
  return *cur;
}

namespace {
Term replace_rec(const Term& t, const std::vector<std::size_t>& path, std::size_t depth,
                 const Term& replacement) {
  if (depth == path.size()) return replacement;
  auto i = path[depth];
  if (i >= t.arity()) throw std::out_of_range("invalid term path");
  auto kids = t.children();
  kids[i] = replace_rec(t.child(i), path, depth + 1, replacement);
  return t.with_children(std::move(kids));
}
}  // namespace

Term replace_at(const Term& t, const std::vector<std::size_t>& path, const Term& replacement) {
  return replace_rec(t, path, 0, replacement);
}

}  // namespace sllam
