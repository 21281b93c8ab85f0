#pragma once

// Abstract syntax of the semantically linear lambda calculus: types, terms,
// bases, alpha-equivalence and the three capture-free substitutions.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sllam {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

class Type {
 public:
  enum class Kind { Ground, Arrow, Bang };

  static Type ground();
  static Type arrow(Type argument, Type result);
  /// Interpreter bookkeeping and the ILL extension (`!iota`) only.
  static Type bang(Type inner);

  Kind kind() const { return node_->kind; }
  bool is_ground() const { return kind() == Kind::Ground; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_bang() const { return kind() == Kind::Bang; }

  const Type& argument() const;
  const Type& result() const;
  const Type& inner() const;

  std::string str() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
  friend bool operator<(const Type& a, const Type& b) { return a.str() < b.str(); }

 private:
  struct Node {
    Kind kind;
    std::vector<Type> children;
  };
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// iota -o iota
Type nat_to_nat();

// ---------------------------------------------------------------------------
// Variables and bases
// ---------------------------------------------------------------------------

enum class VarKind { Ground, Higher, Stable };

const char* to_string(VarKind k);

/// The kind a lambda- or copy-bound variable gets from its annotation.
VarKind kind_for_binder(const Type& annotation);

struct BasisEntry {
  std::string name;
  VarKind kind;
  Type type;

  friend bool operator==(const BasisEntry&, const BasisEntry&) = default;
};

class Basis {
 public:
  Basis() = default;
  Basis(std::initializer_list<BasisEntry> entries);
  explicit Basis(std::vector<BasisEntry> entries);

  const std::vector<BasisEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const BasisEntry& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  const BasisEntry* find(const std::string& name) const;
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }

  Basis append(BasisEntry e) const;
  Basis concat(const Basis& other) const;
  Basis without(const std::string& name) const;
  Basis swapped(std::size_t i) const;  // swaps positions i and i+1

  /// Distinct names; ground entries typed iota; higher entries arrow-typed
  /// (or `!iota` when `allow_bang_linear`).
  bool well_formed(bool allow_bang_linear = false) const;

  std::string str() const;

  friend bool operator==(const Basis&, const Basis&) = default;

 private:
  std::vector<BasisEntry> entries_;
};

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class TermKind {
  Zero,
  Succ,
  Pred,
  Var,
  Lam,
  App,
  LIf,
  Mu,
  // ILL extension
  Promote,    // promote!(M)
  Discard,    // discard M in N
  Copy,       // copy M as x,y in N   (bang copy when annotated `: !iota`)
  Derelict,   // derelict M
  PromoteAs,  // promote! M as z in N (reduce-only)
};

class Term {
 public:
  static Term zero();
  static Term succ();
  static Term pred();
  static Term var(std::string name, VarKind kind);
  static Term lam(std::string name, Type annotation, Term body);
  static Term app(Term fun, Term arg);
  static Term lif(Term cond, Term then_branch, Term else_branch);
  static Term mu(std::string name, Type annotation, Term body);

  static Term promote(Term body);
  static Term discard(Term scrutinee, Term cont);
  static Term copy(Term scrutinee, std::string first, std::string second, Term cont,
                   bool bang = false);
  static Term derelict(Term body);
  static Term promote_as(Term arg, std::string name, Term body);

  TermKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const std::string& second_name() const { return node_->name2; }
  VarKind var_kind() const { return node_->var_kind; }
  const Type& annotation() const { return *node_->annotation; }
  bool bang_copy() const { return node_->bang; }
  std::size_t arity() const { return node_->children.size(); }
  const Term& child(std::size_t i) const { return node_->children.at(i); }
  const std::vector<Term>& children() const { return node_->children; }

  /// Same constructor with new children (names and annotations kept).
  Term with_children(std::vector<Term> children) const;

  bool is_binder() const;
  bool is_extension() const;
  /// Names bound by this node in child `i` (empty if none).
  std::vector<std::string> bound_in_child(std::size_t i) const;

  std::size_t size() const;
  bool same_node(const Term& other) const { return node_ == other.node_; }
  /// Identity of the shared node, stable while any copy of the term lives.
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    TermKind kind;
    std::string name;
    std::string name2;
    VarKind var_kind = VarKind::Ground;
    std::optional<Type> annotation;
    bool bang = false;
    std::vector<Term> children;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(Node node);

  std::shared_ptr<const Node> node_;
};

/// Structural equality up to renaming of bound variables.
bool alpha_eq(const Term& a, const Term& b);

/// A string that is identical for alpha-equal terms (de Bruijn style).
std::string canonical_key(const Term& t);

struct FreeVar {
  std::string name;
  VarKind kind;
  friend auto operator<=>(const FreeVar&, const FreeVar&) = default;
};

struct FreeVars {
  std::set<std::string> ground;
  std::set<std::string> higher;
  std::set<std::string> stable;

  bool empty() const { return ground.empty() && higher.empty() && stable.empty(); }
  bool contains(const std::string& name) const;
  friend bool operator==(const FreeVars&, const FreeVars&) = default;
};

FreeVars free_vars(const Term& t);
/// Free variable names in left-to-right order of first occurrence.
std::vector<FreeVar> free_vars_ordered(const Term& t);
/// Every variable name occurring in `t`, bound or free.
std::set<std::string> all_names(const Term& t);

std::size_t count_free(const Term& t, const std::string& name);

Term numeral(std::uint64_t k);
std::optional<std::uint64_t> numeral_of(const Term& t);

/// A name not in `avoid`, derived from `base` by appending primes.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

/// Capture-free replacement of the free variable `name` by `replacement`.
Term substitute(const Term& m, const std::string& name, const Term& replacement);
/// Renames free `from` to `to` keeping the occurrence's kind unless given.
Term rename_free(const Term& m, const std::string& from, const std::string& to,
                 std::optional<VarKind> new_kind = std::nullopt);

Term subst_ground(const Term& m, std::uint64_t k, const std::string& x);
Term subst_higher(const Term& m, const Term& n, const std::string& f);
Term subst_stable(const Term& m, const Term& n, const std::string& stable);

/// Subterm addressed by a path of child indices.
const Term& subterm_at(const Term& t, const std::vector<std::size_t>& path);
Term replace_at(const Term& t, const std::vector<std::size_t>& path, const Term& replacement);

}  // namespace sllam
