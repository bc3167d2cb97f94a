#include "consfree/type.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

namespace consfree {

namespace {
std::mutex g_intern_mutex;
std::unordered_map<std::string, TypePtr>& base_table() {
  static std::unordered_map<std::string, TypePtr> table;
  return table;
}
std::map<std::pair<const Type*, const Type*>, TypePtr>& arrow_table() {
  static std::map<std::pair<const Type*, const Type*>, TypePtr> table;
  return table;
}
}  // namespace

TypePtr Type::base(const std::string& sort) {
  std::lock_guard<std::mutex> lock(g_intern_mutex);
  auto& table = base_table();
  auto it = table.find(sort);
  if (it != table.end()) return it->second;
  TypePtr ty(new Type(sort));
  table.emplace(sort, ty);
  return ty;
}

TypePtr Type::arrow(const TypePtr& domain, const TypePtr& codomain) {
  std::lock_guard<std::mutex> lock(g_intern_mutex);
  auto& table = arrow_table();
  auto key = std::make_pair(domain.get(), codomain.get());
  auto it = table.find(key);
  if (it != table.end()) return it->second;
  TypePtr ty(new Type(domain, codomain));
  table.emplace(key, ty);
  return ty;
}

TypePtr Type::curried(const std::vector<TypePtr>& args, const TypePtr& result) {
  TypePtr ty = result;
  for (auto it = args.rbegin(); it != args.rend(); ++it) ty = arrow(*it, ty);
  return ty;
}

int type_order(const TypePtr& ty) {
  if (ty->is_base()) return 0;
  return std::max(type_order(ty->domain()) + 1, type_order(ty->codomain()));
}

int type_order(const TypeDecl& decl) { return type_order(decl.curried()); }

}  // namespace consfree
