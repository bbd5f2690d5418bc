#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hydro/opcore.hpp"

namespace hydro {

/// Malformed operator or change files.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Names an operator is written over.
struct OperatorSignature {
  int d = 1;
  std::vector<std::string> vars;
  std::vector<std::string> constants;
  /// name -> argument variable names
  std::vector<std::pair<std::string, std::vector<std::string>>> functions;
};

/// Builds an operator from its matrix of differential expressions.
/// Entries are linear in the markers Dx, Dy (axis derivatives) and u_x, u_y
/// for each variable u, e.g. "Dx + u2*Dy + u2_y/2".
HydroOperator operator_from_matrix(const OperatorSignature& sig,
                                   const std::vector<std::vector<std::string>>& entries);

/// The matrix of differential expressions, inverse of operator_from_matrix.
std::vector<std::vector<std::string>> operator_to_matrix(const HydroOperator& op);

HydroOperator operator_from_json(const nlohmann::json& j);
nlohmann::json operator_to_json(const HydroOperator& op);

HydroOperator load_operator(const std::filesystem::path& path);
void save_operator(const HydroOperator& op, const std::filesystem::path& path);

}  // namespace hydro
