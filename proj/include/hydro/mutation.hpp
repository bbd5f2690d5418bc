#pragma once

#include <string>
#include <vector>

#include "hydro/opcore.hpp"

namespace hydro {

enum class MutationKind { SignFlip, Scale2, IndexSwap };

std::string to_string(MutationKind k);

struct Mutation {
  MutationKind kind;
  /// 0-based position (a, i, j, k) of the mutated b coefficient.
  int a, i, j, k;

  std::string describe() const;
};

/// The fixed mutation set: every nonzero b^{ija}_k is sign flipped, doubled,
/// or exchanged with b^{jia}_k. Mutations that leave the operator unchanged
/// are dropped.
std::vector<Mutation> mutation_set(const HydroOperator& op);

HydroOperator apply_mutation(const HydroOperator& op, const Mutation& m);

}  // namespace hydro
