#pragma once

// Coherence spaces with linear maps. Cliques are kept lazy: function cliques
// are application procedures, tensor cliques are unions of rectangles and
// promoted cliques x! are stored as x. Observation goes through finite
// materialization when possible and otherwise through token probes.

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sllam/model.hpp"

namespace sllam {

class Token {
 public:
  enum class Kind { Star, Nat, Pair, Set, Tag };

  static Token star();
  static Token nat(std::uint64_t n);
  static Token pair(Token a, Token b);
  /// A finite clique used as a token of !A; `elems` is sorted and deduplicated.
  static Token set(std::vector<Token> elems);
  static Token tag(int side, Token a);  // side 1 or 2, product web

  Kind kind() const { return kind_; }
  std::uint64_t value() const { return n_; }
  int side() const { return static_cast<int>(n_); }
  const Token& first() const { return kids_.at(0); }
  const Token& second() const { return kids_.at(1); }
  const Token& inner() const { return kids_.at(0); }
  const std::vector<Token>& elems() const { return kids_; }

  std::string str() const;
  friend bool operator==(const Token& a, const Token& b);
  friend bool operator<(const Token& a, const Token& b);

 private:
  Kind kind_ = Kind::Star;
  std::uint64_t n_ = 0;
  std::vector<Token> kids_;
};

using TokenSet = std::set<Token>;

/// Coherence relation of the web of `a`.
bool coherent(const Token& x, const Token& y, const SemObject& a);
bool is_clique(const TokenSet& s, const SemObject& a);

class Clique {
 public:
  enum class Form { Tokens, Fn, Rect, Prom, Prod, Union };
  using Fn = std::function<Clique(const Clique&)>;

  Clique() : Clique(empty()) {}

  static Clique empty();
  static Clique tokens(TokenSet s);
  static Clique singleton(Token t);
  static Clique fn(Fn f);
  static Clique rect(Clique x, Clique y);
  /// x! : all finite subcliques of x.
  static Clique prom(Clique x);
  static Clique prod(Clique x, Clique y);
  static Clique unite(Clique x, Clique y);

  Form form() const { return node_->form; }
  const TokenSet& token_set() const { return node_->toks; }
  const Clique& left() const { return node_->kids.at(0); }
  const Clique& right() const { return node_->kids.at(1); }
  const Clique& inner() const { return node_->kids.at(0); }
  const std::vector<Clique>& parts() const { return node_->kids; }
  const Fn& function() const { return node_->fn; }

  /// True only when the clique is known to be empty.
  bool is_empty() const;
  bool contains(const Token& t) const;
  /// Finite token set, or nullopt if infinite or larger than `cap`.
  std::optional<TokenSet> materialize(std::size_t cap = 4096) const;
  /// Linear application of a clique of A⊸B.
  Clique apply(const Clique& x) const;

 private:
  struct Node {
    Form form;
    TokenSet toks;
    std::vector<Clique> kids;
    Fn fn;
  };
  explicit Clique(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const TokenSet& s);

/// Deterministic probe tokens of the web of `a`: numerals ≤ budget, pairs of
/// probe tokens, cliques of size ≤ budget; at most `cap` tokens.
std::vector<Token> probe_tokens(const SemObject& a, std::uint64_t budget, std::size_t cap = 64);

/// x₀ = ∅, xᵢ₊₁ = xᵢ ∪ step(xᵢ); returns x_k.
Clique iter_fix(const std::function<Clique(const Clique&)>& step, std::uint64_t k);

using TracePairs = std::vector<std::pair<Token, Token>>;

class CohBackend : public Backend<Clique> {
 public:
  std::string name() const override { return "coh"; }

  M tensor(const M& f, const M& g) const override;
  M sym(const SemObject& a, const SemObject& b) const override;
  M assoc(const SemObject& a, const SemObject& b, const SemObject& c) const override;
  M assoc_inv(const SemObject& a, const SemObject& b, const SemObject& c) const override;
  M lunit(const SemObject& a) const override;
  M lunit_inv(const SemObject& a) const override;
  M runit(const SemObject& a) const override;
  M runit_inv(const SemObject& a) const override;
  M curry(const M& f, const SemObject& c, const SemObject& a) const override;
  M eval(const SemObject& a, const SemObject& b) const override;
  M pair(const M& f, const M& g) const override;
  M proj1(const SemObject& a, const SemObject& b) const override;
  M proj2(const SemObject& a, const SemObject& b) const override;

  M bang(const M& f) const override;
  M delta(const SemObject& a) const override;
  M epsilon(const SemObject& a) const override;
  M q(const SemObject& a, const SemObject& b) const override;
  M q1() const override;
  M d(const SemObject& a) const override;
  M e(const SemObject& a) const override;

  M zero() const override;
  M succ() const override;
  M pred() const override;
  M num(std::uint64_t k) const override;
  M p() const override;
  M cN() const override;
  M wN() const override;
  M lif() const override;
  M fix(const SemObject& b) const override;

  Clique unit_point() const override { return Clique::singleton(Token::star()); }
  Clique bottom(const SemObject&) const override { return Clique::empty(); }
  std::optional<std::uint64_t> ground_value(const Clique& x) const override;
  std::vector<Clique> samples(const SemObject& a, const ObsSpec& obs,
                              Sampler<Clique>& sub) const override;
  std::vector<Clique> probes(const SemObject& a, const ObsSpec& obs) const override;
  std::string observe(const Clique& x, const SemObject& a, const ObsSpec& obs,
                      Sampler<Clique>& sub) const override;

  std::size_t token_cap = 64;

 protected:
  /// Linear map from its action on non-empty, non-union cliques.
  static M linear(const SemObject& dom, const SemObject& cod, std::string op,
                  std::function<Clique(const Clique&)> f);
};

/// (a, b) for every probe token a of dom and b ∈ f({a}).
TracePairs trace_probe(const Morphism<Clique>& f, std::uint64_t budget, std::size_t cap = 64);
std::string to_string(const TracePairs& t);

}  // namespace sllam
