#pragma once

// Semantic objects, morphisms and the capability interface every backend
// implements. Interpretation of derivations lives in interpret.hpp.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "sllam/syntax.hpp"

namespace sllam {

class SemObject {
 public:
  enum class Kind { Unit, Nat, Tensor, Arrow, Bang, Prod };

  static SemObject unit();
  static SemObject nat();
  static SemObject tensor(SemObject a, SemObject b);
  static SemObject arrow(SemObject a, SemObject b);
  static SemObject bang(SemObject a);
  static SemObject prod(SemObject a, SemObject b);

  Kind kind() const { return node_->kind; }
  const SemObject& left() const { return node_->kids.at(0); }
  const SemObject& right() const { return node_->kids.at(1); }
  const SemObject& inner() const { return node_->kids.at(0); }

  std::string str() const;
  bool operator==(const SemObject& o) const;
  bool operator!=(const SemObject& o) const { return !(*this == o); }
  bool operator<(const SemObject& o) const { return str() < o.str(); }

 private:
  struct Node {
    Kind kind;
    std::vector<SemObject> kids;
  };
  explicit SemObject(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

SemObject interpret_type(const Type& t);
/// Right-nested: [x1..xn] -> E1 ⊗ (E2 ⊗ ... (En ⊗ 1)); stable entries give !σ.
SemObject interpret_basis(const Basis& b);
SemObject entry_object(const BasisEntry& e);
/// Inverse of interpret_type on N, arrows and !N.
std::optional<Type> object_type(const SemObject& o);

class BackendFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ObjectMismatch : public BackendFailure {
 public:
  using BackendFailure::BackendFailure;
};
class IllShapedElement : public BackendFailure {
 public:
  using BackendFailure::BackendFailure;
};
class IncoherentClique : public BackendFailure {
 public:
  using BackendFailure::BackendFailure;
};
/// A coherence-space operation needs an explicit token set that the lazy
/// clique representation cannot produce.
class Unrepresentable : public BackendFailure {
 public:
  using BackendFailure::BackendFailure;
};

/// Combinator tree of a morphism, for dumps.
struct MorTree {
  std::string op;
  std::vector<std::shared_ptr<const MorTree>> args;
  std::string str() const;
};
using MorTreePtr = std::shared_ptr<const MorTree>;
MorTreePtr mor_tree(std::string op, std::vector<MorTreePtr> args = {});

/// Shared callable: copies share one closure instead of cloning nested ones.
template <class E>
class SharedFn {
 public:
  SharedFn() = default;
  template <class F, class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, SharedFn>>>
  SharedFn(F f) : p_(std::make_shared<const std::function<E(const E&)>>(std::move(f))) {}

  E operator()(const E& x) const { return (*p_)(x); }
  explicit operator bool() const { return p_ != nullptr; }

 private:
  std::shared_ptr<const std::function<E(const E&)>> p_;
};

template <class E>
struct Morphism {
  SemObject dom;
  SemObject cod;
  SharedFn<E> fn;
  MorTreePtr tree;

  E operator()(const E& x) const { return fn(x); }
  std::string dump() const { return tree ? tree->str() : "?"; }
};

struct ObsSpec {
  std::uint64_t s = 8;        // numeral bound for samples
  std::uint64_t budget = 3;   // coherence-space probe budget
  std::uint64_t k = 16;       // fix iterations
  std::size_t samples = 100;  // cap on sampled arguments per object
  std::uint64_t seed = 0;
  /// Closed sample terms per argument type, used to build function samples.
  std::map<Type, std::vector<Term>> sample_terms;
  bool ext = false;
};

template <class E>
class Sampler;

/// The capability set of a categorical model. Backends subclass this;
/// test mutants override individual capabilities.
template <class E>
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;

  using M = Morphism<E>;

  // structure
  M id(const SemObject& a) const {
    return {a, a, [](const E& x) { return x; }, mor_tree("id")};
  }
  M compose(const M& g, const M& f) const {  // g ∘ f
    if (f.cod != g.dom)
      throw ObjectMismatch("compose: " + f.cod.str() + " vs " + g.dom.str() + " in " +
                           g.dump() + " . " + f.dump());
    auto gf = g.fn;
    auto ff = f.fn;
    return {f.dom, g.cod, [gf, ff](const E& x) { return gf(ff(x)); },
            mor_tree("comp", {g.tree, f.tree})};
  }
  virtual M tensor(const M& f, const M& g) const = 0;
  virtual M sym(const SemObject& a, const SemObject& b) const = 0;  // A⊗B → B⊗A
  virtual M assoc(const SemObject& a, const SemObject& b,
                  const SemObject& c) const = 0;  // A⊗(B⊗C) → (A⊗B)⊗C
  virtual M assoc_inv(const SemObject& a, const SemObject& b, const SemObject& c) const = 0;
  virtual M lunit(const SemObject& a) const = 0;      // 1⊗A → A
  virtual M lunit_inv(const SemObject& a) const = 0;  // A → 1⊗A
  virtual M runit(const SemObject& a) const = 0;      // A⊗1 → A
  virtual M runit_inv(const SemObject& a) const = 0;  // A → A⊗1
  virtual M curry(const M& f, const SemObject& c, const SemObject& a) const = 0;
  virtual M eval(const SemObject& a, const SemObject& b) const = 0;
  virtual M pair(const M& f, const M& g) const = 0;
  virtual M proj1(const SemObject& a, const SemObject& b) const = 0;
  virtual M proj2(const SemObject& a, const SemObject& b) const = 0;

  // comonad and comonoid
  virtual M bang(const M& f) const = 0;
  virtual M delta(const SemObject& a) const = 0;
  virtual M epsilon(const SemObject& a) const = 0;
  virtual M q(const SemObject& a, const SemObject& b) const = 0;
  virtual M q1() const = 0;
  virtual M d(const SemObject& a) const = 0;
  virtual M e(const SemObject& a) const = 0;

  // numerals and control
  virtual M zero() const = 0;
  virtual M succ() const = 0;
  virtual M pred() const = 0;
  virtual M num(std::uint64_t k) const = 0;
  virtual M p() const = 0;
  virtual M cN() const = 0;
  virtual M wN() const = 0;
  virtual M lif() const = 0;
  virtual M fix(const SemObject& b) const = 0;

  // points and observation
  virtual E unit_point() const = 0;
  virtual E bottom(const SemObject& a) const = 0;
  /// Value of an element of N: nullopt for the bottom element.
  virtual std::optional<std::uint64_t> ground_value(const E& x) const = 0;
  virtual std::vector<E> samples(const SemObject& a, const ObsSpec& obs, Sampler<E>& sub) const = 0;
  /// Extra inputs for law checks beyond samples (token probes for traces).
  virtual std::vector<E> probes(const SemObject&, const ObsSpec&) const { return {}; }
  virtual std::string observe(const E& x, const SemObject& a, const ObsSpec& obs,
                              Sampler<E>& sub) const = 0;

  std::uint64_t fix_iterations() const { return k_; }
  void set_fix_iterations(std::uint64_t k) { k_ = k; }

 private:
  std::uint64_t k_ = 16;
};

}  // namespace sllam
