#pragma once

// Scott domains with strict continuous maps: smash-product tensor, lifting
// comonad, flat naturals and Kleene fixpoints.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sllam/model.hpp"

namespace sllam {

class StrictElem {
 public:
  enum class Kind { Bottom, Top, Nat, Pair, Up, ProdPair, Fun };
  using Fn = std::function<StrictElem(const StrictElem&)>;

  StrictElem() : StrictElem(bottom()) {}

  static StrictElem bottom();
  static StrictElem top();
  static StrictElem nat(std::uint64_t n);
  /// Smash pair: collapses to Bottom when either side is Bottom.
  static StrictElem pair(StrictElem a, StrictElem b);
  static StrictElem up(StrictElem a);
  /// Product pair: ⟨⊥,⊥⟩ is the bottom of the product.
  static StrictElem prod(StrictElem a, StrictElem b);
  static StrictElem fun(Fn f);

  Kind kind() const { return node_->kind; }
  bool is_bottom() const { return kind() == Kind::Bottom; }
  std::uint64_t value() const;
  const StrictElem& first() const;
  const StrictElem& second() const;
  const StrictElem& lowered() const;  // a, for Up(a)
  /// Strict application; Bottom as a function is the everywhere-⊥ map.
  StrictElem apply(const StrictElem& x) const;

  /// Printable form; functions print as "<fun>".
  std::string str() const;

 private:
  struct Node {
    Kind kind;
    std::uint64_t n = 0;
    std::vector<StrictElem> kids;
    Fn fn;
  };
  explicit StrictElem(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// x₀ = ⊥, xᵢ₊₁ = f(xᵢ); returns x_k.
StrictElem kleene_fix(const std::function<StrictElem(const StrictElem&)>& f, std::uint64_t k);

class StrictBackend : public Backend<StrictElem> {
 public:
  std::string name() const override { return "strict"; }

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

  StrictElem unit_point() const override { return StrictElem::top(); }
  StrictElem bottom(const SemObject&) const override { return StrictElem::bottom(); }
  std::optional<std::uint64_t> ground_value(const StrictElem& x) const override;
  std::vector<StrictElem> samples(const SemObject& a, const ObsSpec& obs,
                                  Sampler<StrictElem>& sub) const override;
  std::string observe(const StrictElem& x, const SemObject& a, const ObsSpec& obs,
                      Sampler<StrictElem>& sub) const override;

 protected:
  /// Builds a morphism from a map on non-bottom inputs; ⊥ goes to ⊥.
  static M strict(const SemObject& dom, const SemObject& cod, std::string op,
                  std::function<StrictElem(const StrictElem&)> f);
};

/// Ground, unit, numeral and lifted/smashed combinations of those.
std::vector<StrictElem> sample_elems(const SemObject& a, const ObsSpec& obs);

}  // namespace sllam
