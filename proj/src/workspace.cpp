#include "hydro/workspace.hpp"

#include <cctype>

namespace hydro::sym {
namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

bool reserved(std::string_view s) {
  return s == "exp" || s == "ln" || s == "sqrt" || s == "dx" || s == "dy" || s == "d_x" || s == "d_y";
}

}  // namespace

void Workspace::claim(const std::string& name) {
  if (frozen_) throw std::logic_error("workspace is frozen");
  if (!valid_identifier(name)) throw std::invalid_argument("invalid identifier '" + name + "'");
  if (reserved(name)) throw std::invalid_argument("reserved name '" + name + "'");
  if (has_name(name)) throw std::invalid_argument("name '" + name + "' is already registered");
}

Symbol Workspace::add_variable(const std::string& name) {
  claim(name);
  Symbol s = Symbol::variable(name);
  variables_.push_back(s);
  symbols_.emplace(name, s);
  return s;
}

Symbol Workspace::add_constant(const std::string& name) {
  claim(name);
  Symbol s = Symbol::constant(name);
  constants_.push_back(s);
  symbols_.emplace(name, s);
  return s;
}

const FunctionDef* Workspace::add_function(const std::string& name, const std::vector<std::string>& args) {
  std::vector<Symbol> params;
  for (const auto& a : args) {
    auto s = find_symbol(a);
    if (!s || !s->is_variable())
      throw std::invalid_argument("argument '" + a + "' of function '" + name + "' is not a registered variable");
    params.push_back(*s);
  }
  claim(name);
  const FunctionDef* f = FunctionDef::intern(name, params);
  functions_.push_back(f);
  function_names_.emplace(name, f);
  return f;
}

const FunctionDef* Workspace::add_function(const FunctionDef* f) {
  if (auto it = function_names_.find(f->name); it != function_names_.end() && it->second == f) return f;
  claim(f->name);
  functions_.push_back(f);
  function_names_.emplace(f->name, f);
  return f;
}

std::optional<Symbol> Workspace::find_symbol(std::string_view name) const {
  auto it = symbols_.find(name);
  if (it == symbols_.end()) return std::nullopt;
  return it->second;
}

const FunctionDef* Workspace::find_function(std::string_view name) const {
  auto it = function_names_.find(name);
  return it == function_names_.end() ? nullptr : it->second;
}

bool Workspace::has_name(std::string_view name) const {
  return symbols_.count(name) > 0 || function_names_.count(name) > 0;
}

std::string Workspace::registered_names() const {
  std::string out;
  auto add = [&](const std::string& s) {
    if (!out.empty()) out += ", ";
    out += s;
  };
  for (const auto& s : variables_) add(s.name());
  for (const auto& s : constants_) add(s.name());
  for (const auto* f : functions_) add(f->name);
  return out.empty() ? "none" : out;
}

namespace {

class Parser {
 public:
  Parser(const Workspace& ws, std::string_view text) : ws_(ws), s_(text) {}

  Expr run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "' but found '" + s_[pos_] + "'", pos_);
    }
  }

  Expr expr() {
    Expr e = term();
    while (true) {
      if (accept('+'))
        e = add(e, term());
      else if (accept('-'))
        e = sub(e, term());
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    while (true) {
      if (accept('*'))
        e = mul(e, unary());
      else if (accept('/'))
        e = div(e, unary());
      else
        return e;
    }
  }

  Expr unary() {
    if (accept('-')) return neg(unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    std::size_t at = pos_;
    bool paren = accept('(');
    bool negative = accept('-');
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("exponent must be an integer literal", pos_);
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    if (digits.size() > 9) throw ParseError("exponent too large", start);
    long k = std::stol(digits);
    if (paren) expect(')');
    if (k == 0) throw ParseError("zero exponent", at);
    if (peek('^')) throw ParseError("chained '^' is ambiguous; parenthesize the base", pos_);
    return pow(base, negative ? -k : k);
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(s_[pos_]))))
        throw ParseError("malformed number", start);
      return Expr(mpq_class(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    unsigned primes = 0;
    while (pos_ < s_.size() && s_[pos_] == '\'') {
      ++pos_;
      ++primes;
    }
    if (name == "dx" || name == "dy" || name == "d_x" || name == "d_y")
      throw ParseError("'" + name + "' is a structural derivation symbol, not an expression", start);
    if (name == "exp" || name == "ln" || name == "sqrt") {
      if (primes) throw ParseError("primes on a built-in function", start);
      expect('(');
      Expr a = expr();
      expect(')');
      return name == "exp" ? exp(a) : name == "ln" ? ln(a) : sqrt(a);
    }
    if (auto s = ws_.find_symbol(name)) {
      if (primes) throw ParseError("primes are only allowed on abstract functions", start);
      return Expr(*s);
    }
    const FunctionDef* f = ws_.find_function(name);
    std::vector<unsigned> multi;
    if (f) {
      multi.assign(f->arity(), 0);
    } else if (auto us = name.rfind('_'); us != std::string::npos && us > 0) {
      f = ws_.find_function(std::string_view(name).substr(0, us));
      if (f) {
        multi.assign(f->arity(), 0);
        std::string labels = name.substr(us + 1);
        if (labels.empty()) throw ParseError("empty derivative suffix on '" + f->name + "'", start);
        for (char l : labels) {
          auto slot = f->labels.find(l);
          if (slot == std::string::npos)
            throw ParseError("'" + std::string(1, l) + "' is not a derivative label of '" + f->name + "'", start);
          ++multi[slot];
        }
      }
    }
    if (!f) throw UnknownIdentifierError(name, start, ws_.registered_names());
    if (primes) {
      if (f->arity() != 1) throw ParseError("prime notation needs a single-argument function", start);
      multi[0] += primes;
    }
    std::vector<Expr> args;
    if (accept('(')) {
      if (!peek(')')) {
        args.push_back(expr());
        while (accept(',')) args.push_back(expr());
      }
      std::size_t close = pos_;
      expect(')');
      if (args.size() != f->arity())
        throw ParseError("function '" + f->name + "' takes " + std::to_string(f->arity()) + " arguments", close);
    } else {
      for (const auto& p : f->params) args.emplace_back(p);
    }
    return apply(f, std::move(args), std::move(multi));
  }

  const Workspace& ws_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Workspace::parse(std::string_view text) const { return Parser(*this, text).run(); }

}  // namespace hydro::sym
