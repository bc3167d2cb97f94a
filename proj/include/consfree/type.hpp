#pragma once

#include <memory>
#include <string>
#include <vector>

namespace consfree {

class Type;
using TypePtr = std::shared_ptr<const Type>;

/// Simple types: a declared sort or an arrow between two types.
/// Instances are interned, so structural equality is pointer equality.
class Type {
 public:
  static TypePtr base(const std::string& sort);
  static TypePtr arrow(const TypePtr& domain, const TypePtr& codomain);
  /// a1 => a2 => ... => result, right-associated.
  static TypePtr curried(const std::vector<TypePtr>& args, const TypePtr& result);

  bool is_base() const { return domain_ == nullptr; }
  bool is_arrow() const { return domain_ != nullptr; }
  const std::string& sort() const { return sort_; }
  const TypePtr& domain() const { return domain_; }
  const TypePtr& codomain() const { return codomain_; }

 private:
  Type(std::string sort) : sort_(std::move(sort)) {}
  Type(TypePtr dom, TypePtr cod) : domain_(std::move(dom)), codomain_(std::move(cod)) {}

  std::string sort_;
  TypePtr domain_;
  TypePtr codomain_;
};

/// 0 for sorts, max(order(dom) + 1, order(cod)) for arrows.
int type_order(const TypePtr& ty);

/// Type of a function symbol: argument types plus a result type.
/// The result may itself be an arrow.
struct TypeDecl {
  std::vector<TypePtr> arg_types;
  TypePtr result_type;

  size_t arity() const { return arg_types.size(); }
  TypePtr curried() const { return Type::curried(arg_types, result_type); }
  bool operator==(const TypeDecl& other) const {
    return arg_types == other.arg_types && result_type == other.result_type;
  }
};

/// Order of the curried declaration type.
int type_order(const TypeDecl& decl);

}  // namespace consfree
