#include "sllam/model.hpp"

namespace sllam {

SemObject SemObject::unit() {
  static const SemObject u(std::make_shared<const Node>(Node{Kind::Unit, {}}));
  return u;
}

SemObject SemObject::nat() {
  static const SemObject n(std::make_shared<const Node>(Node{Kind::Nat, {}}));
  return n;
}

SemObject SemObject::tensor(SemObject a, SemObject b) {
  return SemObject(std::make_shared<const Node>(Node{Kind::Tensor, {std::move(a), std::move(b)}}));
}

SemObject SemObject::arrow(SemObject a, SemObject b) {
  return SemObject(std::make_shared<const Node>(Node{Kind::Arrow, {std::move(a), std::move(b)}}));
}

SemObject SemObject::bang(SemObject a) {
  return SemObject(std::make_shared<const Node>(Node{Kind::Bang, {std::move(a)}}));
}

SemObject SemObject::prod(SemObject a, SemObject b) {
  return SemObject(std::make_shared<const Node>(Node{Kind::Prod, {std::move(a), std::move(b)}}));
}

std::string SemObject::str() const {
  switch (kind()) {
    case Kind::Unit: return "1";
    case Kind::Nat: return "N";
    case Kind::Tensor: return "(" + left().str() + " * " + right().str() + ")";
    case Kind::Arrow: return "(" + left().str() + " -o " + right().str() + ")";
    case Kind::Bang: return "!" + inner().str();
    case Kind::Prod: return "(" + left().str() + " & " + right().str() + ")";
  }
  return "?";
}

bool SemObject::operator==(const SemObject& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind() || node_->kids.size() != o.node_->kids.size()) return false;
  for (std::size_t i = 0; i < node_->kids.size(); ++i)
    if (!(node_->kids[i] == o.node_->kids[i])) return false;
  return true;
}

SemObject interpret_type(const Type& t) {
  if (t.is_ground()) return SemObject::nat();
  if (t.is_arrow()) return SemObject::arrow(interpret_type(t.argument()), interpret_type(t.result()));
  return SemObject::bang(interpret_type(t.inner()));
}

SemObject entry_object(const BasisEntry& e) {
  SemObject o = interpret_type(e.type);
  return e.kind == VarKind::Stable ? SemObject::bang(o) : o;
}

SemObject interpret_basis(const Basis& b) {
  SemObject out = SemObject::unit();
  for (std::size_t i = b.size(); i-- > 0;) out = SemObject::tensor(entry_object(b[i]), out);
  return out;
}

std::optional<Type> object_type(const SemObject& o) {
  switch (o.kind()) {
    case SemObject::Kind::Nat:
      return Type::ground();
    case SemObject::Kind::Arrow: {
      auto a = object_type(o.left());
      auto b = object_type(o.right());
      if (!a || !b) return std::nullopt;
      return Type::arrow(*a, *b);
    }
    case SemObject::Kind::Bang:
      if (o.inner().kind() == SemObject::Kind::Nat) return Type::bang(Type::ground());
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::string MorTree::str() const {
  if (args.empty()) return op;
  std::string s = op + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += args[i] ? args[i]->str() : "?";
  }
  return s + ")";
}

MorTreePtr mor_tree(std::string op, std::vector<MorTreePtr> args) {
  return std::make_shared<const MorTree>(MorTree{std::move(op), std::move(args)});
}

}  // namespace sllam
