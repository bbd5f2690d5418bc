#include "hydro/mutation.hpp"

namespace hydro {

std::string to_string(MutationKind k) {
  switch (k) {
    case MutationKind::SignFlip: return "sign-flip";
    case MutationKind::Scale2: return "scale-2";
    case MutationKind::IndexSwap: return "index-swap";
  }
  return "?";
}

std::string Mutation::describe() const {
  return to_string(kind) + " b[" + axis_name(a, 2) + "](" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
         ";" + std::to_string(k + 1) + ")";
}

HydroOperator apply_mutation(const HydroOperator& op, const Mutation& m) {
  HydroOperator out = op;
  Expr& x = out.b[m.a][m.i][m.j][m.k];
  switch (m.kind) {
    case MutationKind::SignFlip: x = sym::negate(x); break;
    case MutationKind::Scale2: x = sym::times(Expr(2L), x); break;
    case MutationKind::IndexSwap: std::swap(x, out.b[m.a][m.j][m.i][m.k]); break;
  }
  return out;
}

std::vector<Mutation> mutation_set(const HydroOperator& op) {
  std::vector<Mutation> out;
  auto same = [](const Expr& p, const Expr& q) { return sym::normalize(sym::minus(p, q)).is_zero(); };
  for (int a = 0; a < op.d; ++a)
    for (int i = 0; i < op.n; ++i)
      for (int j = 0; j < op.n; ++j)
        for (int k = 0; k < op.n; ++k) {
          const Expr& x = op.b[a][i][j][k];
          if (sym::normalize(x).is_zero()) continue;
          out.push_back({MutationKind::SignFlip, a, i, j, k});
          out.push_back({MutationKind::Scale2, a, i, j, k});
          // Swapping (i, j) with (j, i) is listed once per pair.
          const Expr& y = op.b[a][j][i][k];
          bool y_zero = sym::normalize(y).is_zero();
          if (i != j && (i < j || y_zero) && !same(x, y)) out.push_back({MutationKind::IndexSwap, a, i, j, k});
        }
  return out;
}

}  // namespace hydro
