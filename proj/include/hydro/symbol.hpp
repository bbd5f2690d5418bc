#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hydro::sym {

enum class SymbolKind { Variable, Constant, Function };

struct SymbolData {
  std::uint32_t id;
  std::string name;
  SymbolKind kind;
};

/// Handle to an interned symbol. Identity is the (name, kind) pair; ids grow
/// in registration order and define the variable order used by normal forms.
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name, SymbolKind kind);
  static Symbol variable(std::string_view name) { return intern(name, SymbolKind::Variable); }
  static Symbol constant(std::string_view name) { return intern(name, SymbolKind::Constant); }
  static Symbol by_id(std::uint32_t id);

  bool valid() const { return data_ != nullptr; }
  std::uint32_t id() const { return data_->id; }
  const std::string& name() const { return data_->name; }
  SymbolKind kind() const { return data_->kind; }
  bool is_variable() const { return data_->kind == SymbolKind::Variable; }

  friend bool operator==(Symbol a, Symbol b) { return a.data_ == b.data_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) {
    if (a.data_ == b.data_) return std::strong_ordering::equal;
    if (!a.data_) return std::strong_ordering::less;
    if (!b.data_) return std::strong_ordering::greater;
    return a.data_->id <=> b.data_->id;
  }

 private:
  explicit Symbol(const SymbolData* d) : data_(d) {}
  const SymbolData* data_ = nullptr;
};

/// Declared abstract function, e.g. f(u2,u3). Parameters are the variables the
/// function depends on; labels are the single characters used when printing
/// derivative atoms (f_2, f_23).
struct FunctionDef {
  std::uint32_t id;
  std::string name;
  std::vector<Symbol> params;
  std::string labels;

  std::size_t arity() const { return params.size(); }
  /// Interns a definition; the same name and parameter list yield the same object.
  static const FunctionDef* intern(std::string_view name, const std::vector<Symbol>& params);
};

}  // namespace hydro::sym

template <>
struct std::hash<hydro::sym::Symbol> {
  std::size_t operator()(hydro::sym::Symbol s) const noexcept {
    return s.valid() ? std::hash<std::uint32_t>{}(s.id()) : 0;
  }
};
