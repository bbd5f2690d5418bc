#pragma once

#include <random>
#include <vector>

#include "hydro/symexpr.hpp"

namespace hydro::testing {

/// Random expressions over a fixed set of variables, rational constants and
/// (optionally) abstract-function atoms. Depth bounds keep normal forms small.
class ExprGen {
 public:
  ExprGen(std::uint64_t seed, std::vector<sym::Symbol> vars, std::vector<const sym::FunctionDef*> fns = {},
          bool transcendental = false)
      : rng_(seed), vars_(std::move(vars)), fns_(std::move(fns)), transcendental_(transcendental) {}

  sym::Expr operator()(int depth = 3) { return gen(depth); }

  sym::Expr leaf() {
    int pick = uniform(0, 9);
    if (pick < 3) return sym::Expr(mpq_class(uniform(-5, 5), uniform(1, 4)));
    if (pick < 8 || fns_.empty()) return sym::Expr(vars_[uniform(0, static_cast<int>(vars_.size()) - 1)]);
    const sym::FunctionDef* f = fns_[uniform(0, static_cast<int>(fns_.size()) - 1)];
    std::vector<unsigned> multi(f->arity(), 0);
    multi[uniform(0, static_cast<int>(f->arity()) - 1)] = static_cast<unsigned>(uniform(0, 1));
    std::vector<sym::Expr> args;
    for (const auto& p : f->params) args.emplace_back(p);
    return sym::apply(f, std::move(args), std::move(multi));
  }

  sym::Expr gen(int depth) {
    if (depth <= 0) return leaf();
    int op = uniform(0, transcendental_ ? 8 : 6);
    switch (op) {
      case 0: return sym::add(gen(depth - 1), gen(depth - 1));
      case 1: return sym::sub(gen(depth - 1), gen(depth - 1));
      case 2:
      case 3: return sym::mul(gen(depth - 1), gen(depth - 1));
      case 4: return sym::div(gen(depth - 1), gen(depth - 2));
      case 5: return sym::pow(gen(depth - 1), uniform(0, 1) ? 2 : -1);
      case 6: return sym::neg(gen(depth - 1));
      case 7: return sym::exp(gen(depth - 2));
      default: return sym::sqrt(sym::add(gen(depth - 2), sym::Expr(7L)));
    }
  }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::vector<sym::Symbol> vars_;
  std::vector<const sym::FunctionDef*> fns_;
  bool transcendental_;
};

}  // namespace hydro::testing
