#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hydro/expr.hpp"

namespace hydro::sym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset, const std::string& known)
      : ParseError("unknown identifier '" + name + "' (registered: " + known + ")", offset), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Named variables, constants and abstract functions visible to the parser.
/// Names are unique within a workspace; variable order is registration order.
class Workspace {
 public:
  Symbol add_variable(const std::string& name);
  Symbol add_constant(const std::string& name);
  /// Arguments must already be registered variables.
  const FunctionDef* add_function(const std::string& name, const std::vector<std::string>& args);
  /// Shares an existing definition (e.g. from another workspace).
  const FunctionDef* add_function(const FunctionDef* f);

  const std::vector<Symbol>& variables() const { return variables_; }
  const std::vector<Symbol>& constants() const { return constants_; }
  const std::vector<const FunctionDef*>& functions() const { return functions_; }

  std::optional<Symbol> find_symbol(std::string_view name) const;
  const FunctionDef* find_function(std::string_view name) const;
  bool has_name(std::string_view name) const;

  /// Rejects further registrations.
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  /// Parses text in the expression grammar against this workspace.
  Expr parse(std::string_view text) const;

  /// Comma-separated registered names, for error messages.
  std::string registered_names() const;

 private:
  void claim(const std::string& name);
  std::vector<Symbol> variables_;
  std::vector<Symbol> constants_;
  std::vector<const FunctionDef*> functions_;
  std::map<std::string, Symbol, std::less<>> symbols_;
  std::map<std::string, const FunctionDef*, std::less<>> function_names_;
  bool frozen_ = false;
};

}  // namespace hydro::sym
