#include "hydro/expr.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hydro::sym {
namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t hash_mpq(const mpq_class& q) {
  return mix(std::hash<std::string>{}(q.get_num().get_str(16)), std::hash<std::string>{}(q.get_den().get_str(16)));
}

std::size_t compute_hash(const Node& n) {
  std::size_t h = static_cast<std::size_t>(n.op) * 1315423911u;
  switch (n.op) {
    case Op::Num: h = mix(h, hash_mpq(n.num)); break;
    case Op::Sym: h = mix(h, n.sym.id()); break;
    case Op::Pow: h = mix(h, static_cast<std::size_t>(n.exponent)); break;
    case Op::Apply:
      h = mix(h, n.fn->id);
      for (auto m : n.multi) h = mix(h, m);
      break;
    default: break;
  }
  for (const auto& k : n.kids) h = mix(h, k.hash());
  return h;
}


}  // namespace

Expr make_node(Node n) {
  n.hash = compute_hash(n);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

namespace {
Expr make_num(const mpq_class& v) {
  Node n;
  n.op = Op::Num;
  n.num = v;
  n.num.canonicalize();
  return make_node(std::move(n));
}
Expr make_op(Op op, std::vector<Expr> kids) {
  Node n;
  n.op = op;
  n.kids = std::move(kids);
  return make_node(std::move(n));
}
}  // namespace

Expr::Expr() : Expr(0L) {}
Expr::Expr(long v) : node_(make_num(mpq_class(v)).node_) {}
Expr::Expr(const mpq_class& v) : node_(make_num(v).node_) {}
Expr::Expr(Symbol s) {
  if (!s.valid()) throw std::invalid_argument("invalid symbol");
  if (s.kind() == SymbolKind::Function) throw std::invalid_argument("function symbol used as a value: " + s.name());
  Node n;
  n.op = Op::Sym;
  n.sym = s;
  node_ = make_node(std::move(n)).node_;
}

Op Expr::op() const { return node_->op; }
bool Expr::is_zero() const { return node_->op == Op::Num && sgn(node_->num) == 0; }
bool Expr::is_one() const { return node_->op == Op::Num && node_->num == 1; }
const mpq_class& Expr::num() const { return node_->num; }
Symbol Expr::symbol() const { return node_->sym; }
const std::vector<Expr>& Expr::kids() const { return node_->kids; }
long Expr::exponent() const { return node_->exponent; }
const FunctionDef* Expr::function() const { return node_->fn; }
const std::vector<unsigned>& Expr::multi_index() const { return node_->multi; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.hash != y.hash || x.op != y.op || x.kids.size() != y.kids.size()) return false;
  switch (x.op) {
    case Op::Num:
      if (x.num != y.num) return false;
      break;
    case Op::Sym:
      if (x.sym != y.sym) return false;
      break;
    case Op::Pow:
      if (x.exponent != y.exponent) return false;
      break;
    case Op::Apply:
      if (x.fn != y.fn || x.multi != y.multi) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (x.kids[i] != y.kids[i]) return false;
  return true;
}

Expr neg(const Expr& a) {
  if (a.is_num()) return Expr(mpq_class(-a.num()));
  return make_op(Op::Neg, {a});
}

Expr add(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num()) return Expr(mpq_class(a.num() + b.num()));
  return make_op(Op::Add, {a, b});
}

Expr sub(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num()) return Expr(mpq_class(a.num() - b.num()));
  return make_op(Op::Sub, {a, b});
}

Expr mul(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num()) return Expr(mpq_class(a.num() * b.num()));
  return make_op(Op::Mul, {a, b});
}

Expr div(const Expr& a, const Expr& b) {
  if (a.is_num() && b.is_num() && sgn(b.num()) != 0) return Expr(mpq_class(a.num() / b.num()));
  return make_op(Op::Div, {a, b});
}

Expr pow(const Expr& base, long exponent) {
  if (exponent == 0) return Expr(1L);
  if (base.is_num() && (exponent > 0 || sgn(base.num()) != 0)) {
    mpq_class r(1);
    mpq_class b = exponent > 0 ? base.num() : mpq_class(1 / base.num());
    for (long i = 0; i < (exponent > 0 ? exponent : -exponent); ++i) r *= b;
    return Expr(r);
  }
  if (base.op() == Op::Pow) return pow(base.kids()[0], base.exponent() * exponent);
  Node n;
  n.op = Op::Pow;
  n.kids = {base};
  n.exponent = exponent;
  return make_node(std::move(n));
}

Expr exp(const Expr& a) { return make_op(Op::Exp, {a}); }
Expr ln(const Expr& a) { return make_op(Op::Ln, {a}); }
Expr sqrt(const Expr& a) { return make_op(Op::Sqrt, {a}); }

Expr apply(const FunctionDef* f, std::vector<Expr> args, std::vector<unsigned> multi) {
  if (args.size() != f->arity())
    throw std::invalid_argument("function " + f->name + " expects " + std::to_string(f->arity()) + " arguments");
  if (multi.empty()) multi.assign(args.size(), 0);
  if (multi.size() != args.size()) throw std::invalid_argument("multi-index length must equal argument count");
  Node n;
  n.op = Op::Apply;
  n.fn = f;
  n.kids = std::move(args);
  n.multi = std::move(multi);
  return make_node(std::move(n));
}

Expr apply(const FunctionDef* f) {
  std::vector<Expr> args;
  for (const auto& p : f->params) args.emplace_back(p);
  return apply(f, std::move(args));
}

Expr negate(const Expr& a) {
  if (a.is_num()) return Expr(mpq_class(-a.num()));
  if (a.op() == Op::Neg) return a.kids()[0];
  return make_op(Op::Neg, {a});
}

Expr plus(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (b.op() == Op::Neg) return minus(a, b.kids()[0]);
  if (b.is_num() && sgn(b.num()) < 0 && !a.is_num()) return sub(a, Expr(mpq_class(-b.num())));
  return add(a, b);
}

Expr minus(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return negate(b);
  return sub(a, b);
}

Expr times(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0L);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_num() && a.num() == -1) return negate(b);
  if (b.is_num() && b.num() == -1) return negate(a);
  return mul(a, b);
}

Expr over(const Expr& a, const Expr& b) {
  if (a.is_zero() && !b.is_zero()) return Expr(0L);
  if (b.is_one()) return a;
  return div(a, b);
}

Expr sum(const std::vector<Expr>& terms) {
  Expr acc(0L);
  for (const auto& t : terms) acc = plus(acc, t);
  return acc;
}

Expr product(const std::vector<Expr>& factors) {
  Expr acc(1L);
  for (const auto& f : factors) acc = times(acc, f);
  return acc;
}

Expr differentiate(const Expr& e, Symbol v) {
  switch (e.op()) {
    case Op::Num: return Expr(0L);
    case Op::Sym: return Expr(e.symbol() == v ? 1L : 0L);
    case Op::Neg: return negate(differentiate(e.kids()[0], v));
    case Op::Add: return plus(differentiate(e.kids()[0], v), differentiate(e.kids()[1], v));
    case Op::Sub: return minus(differentiate(e.kids()[0], v), differentiate(e.kids()[1], v));
    case Op::Mul: {
      const auto& a = e.kids()[0];
      const auto& b = e.kids()[1];
      return plus(times(differentiate(a, v), b), times(a, differentiate(b, v)));
    }
    case Op::Div: {
      const auto& a = e.kids()[0];
      const auto& b = e.kids()[1];
      Expr da = differentiate(a, v);
      Expr db = differentiate(b, v);
      if (db.is_zero()) return over(da, b);
      return over(minus(times(da, b), times(a, db)), pow(b, 2));
    }
    case Op::Pow: {
      const auto& b = e.kids()[0];
      long k = e.exponent();
      Expr db = differentiate(b, v);
      if (db.is_zero()) return Expr(0L);
      Expr lead = k == 1 ? Expr(1L) : (k - 1 == 0 ? Expr(1L) : pow(b, k - 1));
      return times(times(Expr(k), lead), db);
    }
    case Op::Exp: return times(e, differentiate(e.kids()[0], v));
    case Op::Ln: return over(differentiate(e.kids()[0], v), e.kids()[0]);
    case Op::Sqrt: return over(differentiate(e.kids()[0], v), times(Expr(2L), e));
    case Op::Apply: {
      std::vector<Expr> terms;
      for (std::size_t s = 0; s < e.kids().size(); ++s) {
        Expr da = differentiate(e.kids()[s], v);
        if (da.is_zero()) continue;
        auto multi = e.multi_index();
        ++multi[s];
        terms.push_back(times(apply(e.function(), e.kids(), multi), da));
      }
      return sum(terms);
    }
  }
  throw std::logic_error("unreachable");
}

Expr substitute(const Expr& e, const std::map<Symbol, Expr>& bindings) {
  if (bindings.empty()) return e;
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    if (auto it = memo.find(x.raw()); it != memo.end()) return it->second;
    Expr r;
    switch (x.op()) {
      case Op::Num: r = x; break;
      case Op::Sym: {
        auto it = bindings.find(x.symbol());
        r = it == bindings.end() ? x : it->second;
        break;
      }
      case Op::Neg: r = neg(self(self, x.kids()[0])); break;
      case Op::Add: r = add(self(self, x.kids()[0]), self(self, x.kids()[1])); break;
      case Op::Sub: r = sub(self(self, x.kids()[0]), self(self, x.kids()[1])); break;
      case Op::Mul: r = mul(self(self, x.kids()[0]), self(self, x.kids()[1])); break;
      case Op::Div: r = div(self(self, x.kids()[0]), self(self, x.kids()[1])); break;
      case Op::Pow: r = pow(self(self, x.kids()[0]), x.exponent()); break;
      case Op::Exp: r = exp(self(self, x.kids()[0])); break;
      case Op::Ln: r = ln(self(self, x.kids()[0])); break;
      case Op::Sqrt: r = sqrt(self(self, x.kids()[0])); break;
      case Op::Apply: {
        std::vector<Expr> args;
        for (const auto& k : x.kids()) args.push_back(self(self, k));
        r = apply(x.function(), std::move(args), x.multi_index());
        break;
      }
    }
    memo.emplace(x.raw(), r);
    return r;
  };
  return rec(rec, e);
}

Expr substitute_functions(const Expr& e, const std::map<const FunctionDef*, Expr>& bodies) {
  if (bodies.empty()) return e;
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    if (auto it = memo.find(x.raw()); it != memo.end()) return it->second;
    Expr r;
    switch (x.op()) {
      case Op::Num:
      case Op::Sym: r = x; break;
      case Op::Neg: r = negate(self(self, x.kids()[0])); break;
      case Op::Add: r = plus(self(self, x.kids()[0]), self(self, x.kids()[1])); break;
      case Op::Sub: r = minus(self(self, x.kids()[0]), self(self, x.kids()[1])); break;
      case Op::Mul: r = times(self(self, x.kids()[0]), self(self, x.kids()[1])); break;
      case Op::Div: r = over(self(self, x.kids()[0]), self(self, x.kids()[1])); break;
      case Op::Pow: r = pow(self(self, x.kids()[0]), x.exponent()); break;
      case Op::Exp: r = exp(self(self, x.kids()[0])); break;
      case Op::Ln: r = ln(self(self, x.kids()[0])); break;
      case Op::Sqrt: r = sqrt(self(self, x.kids()[0])); break;
      case Op::Apply: {
        std::vector<Expr> args;
        for (const auto& k : x.kids()) args.push_back(self(self, k));
        const FunctionDef* f = x.function();
        auto it = bodies.find(f);
        if (it == bodies.end()) {
          r = apply(f, std::move(args), x.multi_index());
          break;
        }
        Expr body = it->second;
        for (std::size_t i = 0; i < f->arity(); ++i)
          for (unsigned c = 0; c < x.multi_index()[i]; ++c) body = differentiate(body, f->params[i]);
        std::map<Symbol, Expr> at;
        for (std::size_t i = 0; i < f->arity(); ++i) at.emplace(f->params[i], args[i]);
        r = substitute(body, at);
        break;
      }
    }
    memo.emplace(x.raw(), r);
    return r;
  };
  return rec(rec, e);
}

std::set<Symbol> free_symbols(const Expr& e) {
  std::set<Symbol> out;
  auto rec = [&](auto&& self, const Expr& x) -> void {
    if (x.op() == Op::Sym) out.insert(x.symbol());
    for (const auto& k : x.kids()) self(self, k);
  };
  rec(rec, e);
  return out;
}

std::set<const FunctionDef*> functions_used(const Expr& e) {
  std::set<const FunctionDef*> out;
  auto rec = [&](auto&& self, const Expr& x) -> void {
    if (x.op() == Op::Apply) out.insert(x.function());
    for (const auto& k : x.kids()) self(self, k);
  };
  rec(rec, e);
  return out;
}

bool has_transcendental(const Expr& e) {
  if (e.op() == Op::Exp || e.op() == Op::Ln || e.op() == Op::Sqrt) return true;
  for (const auto& k : e.kids())
    if (has_transcendental(k)) return true;
  return false;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& k : e.kids()) n += node_count(k);
  return n;
}

std::string derivative_name(const FunctionDef* f, const std::vector<unsigned>& multi) {
  std::string out = f->name;
  if (f->arity() == 1) {
    out.append(multi.empty() ? 0 : multi[0], '\'');
    return out;
  }
  std::string suffix;
  for (std::size_t s = 0; s < multi.size(); ++s) suffix.append(multi[s], f->labels[s]);
  if (!suffix.empty()) out += "_" + suffix;
  return out;
}

namespace {

enum class Ctx { Top, AddLeft, AddRight, MulLeft, MulRight, NegArg, PowBase };

// 1: sums, 2: products and non-integer rationals, 3: negations, 4: powers, 5: atoms
int level(const Expr& e) {
  switch (e.op()) {
    case Op::Num:
      if (sgn(e.num()) < 0) return 3;
      return e.num().get_den() == 1 ? 5 : 2;
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

bool needs_paren(const Expr& e, Ctx ctx) {
  int l = level(e);
  bool negative = l == 3 || (e.is_num() && sgn(e.num()) < 0);
  switch (ctx) {
    case Ctx::Top:
    case Ctx::AddLeft: return false;
    case Ctx::AddRight: return l == 1 || negative;
    case Ctx::MulLeft: return l == 1;
    case Ctx::MulRight:
    case Ctx::NegArg: return l <= 2 || negative;
    case Ctx::PowBase: return l < 5;
  }
  return true;
}

void print_into(std::ostream& os, const Expr& e, Ctx ctx) {
  bool paren = needs_paren(e, ctx);
  if (paren) os << '(';
  switch (e.op()) {
    case Op::Num: os << e.num().get_str(); break;
    case Op::Sym: os << e.symbol().name(); break;
    case Op::Neg:
      os << '-';
      print_into(os, e.kids()[0], Ctx::NegArg);
      break;
    case Op::Add:
    case Op::Sub:
      print_into(os, e.kids()[0], Ctx::AddLeft);
      os << (e.op() == Op::Add ? " + " : " - ");
      print_into(os, e.kids()[1], Ctx::AddRight);
      break;
    case Op::Mul:
    case Op::Div:
      print_into(os, e.kids()[0], Ctx::MulLeft);
      os << (e.op() == Op::Mul ? '*' : '/');
      print_into(os, e.kids()[1], Ctx::MulRight);
      break;
    case Op::Pow:
      print_into(os, e.kids()[0], Ctx::PowBase);
      if (e.exponent() > 0)
        os << '^' << e.exponent();
      else
        os << "^(" << e.exponent() << ')';
      break;
    case Op::Exp:
    case Op::Ln:
    case Op::Sqrt:
      os << (e.op() == Op::Exp ? "exp(" : e.op() == Op::Ln ? "ln(" : "sqrt(");
      print_into(os, e.kids()[0], Ctx::Top);
      os << ')';
      break;
    case Op::Apply: {
      os << derivative_name(e.function(), e.multi_index()) << '(';
      for (std::size_t i = 0; i < e.kids().size(); ++i) {
        if (i) os << ',';
        print_into(os, e.kids()[i], Ctx::Top);
      }
      os << ')';
      break;
    }
  }
  if (paren) os << ')';
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  print_into(os, e, Ctx::Top);
  return os.str();
}

}  // namespace hydro::sym
