#include "hydro/symbol.hpp"

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <cctype>

namespace hydro::sym {
namespace {

struct Registry {
  std::mutex mu;
  std::deque<SymbolData> symbols;
  std::map<std::pair<std::string, SymbolKind>, const SymbolData*> by_key;
  std::deque<FunctionDef> functions;
  std::map<std::pair<std::string, std::vector<std::uint32_t>>, const FunctionDef*> fn_by_key;
};

Registry& registry() {
  static Registry r;
  return r;
}

std::string derive_labels(const std::vector<Symbol>& params) {
  // Prefer the trailing digit of each parameter name (u2 -> '2') when that
  // gives distinct single digits; otherwise fall back to slot positions.
  std::string labels;
  for (const auto& p : params) {
    const auto& n = p.name();
    if (n.empty() || !std::isdigit(static_cast<unsigned char>(n.back()))) break;
    if (n.size() >= 2 && std::isdigit(static_cast<unsigned char>(n[n.size() - 2]))) break;
    if (labels.find(n.back()) != std::string::npos) break;
    labels.push_back(n.back());
  }
  if (labels.size() == params.size()) return labels;
  labels.clear();
  for (std::size_t i = 0; i < params.size(); ++i) labels.push_back(static_cast<char>('1' + i));
  return labels;
}

}  // namespace

Symbol Symbol::intern(std::string_view name, SymbolKind kind) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto key = std::make_pair(std::string(name), kind);
  if (auto it = r.by_key.find(key); it != r.by_key.end()) return Symbol(it->second);
  r.symbols.push_back(SymbolData{static_cast<std::uint32_t>(r.symbols.size()), std::string(name), kind});
  const SymbolData* d = &r.symbols.back();
  r.by_key.emplace(std::move(key), d);
  return Symbol(d);
}

Symbol Symbol::by_id(std::uint32_t id) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  if (id >= r.symbols.size()) throw std::out_of_range("unknown symbol id");
  return Symbol(&r.symbols[id]);
}

const FunctionDef* FunctionDef::intern(std::string_view name, const std::vector<Symbol>& params) {
  if (params.size() > 9) throw std::invalid_argument("abstract functions support at most 9 arguments");
  std::vector<std::uint32_t> ids;
  for (const auto& p : params) ids.push_back(p.id());
  Symbol::intern(name, SymbolKind::Function);
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto key = std::make_pair(std::string(name), ids);
  if (auto it = r.fn_by_key.find(key); it != r.fn_by_key.end()) return it->second;
  r.functions.push_back(FunctionDef{static_cast<std::uint32_t>(r.functions.size()), std::string(name), params,
                                    derive_labels(params)});
  const FunctionDef* f = &r.functions.back();
  r.fn_by_key.emplace(std::move(key), f);
  return f;
}

}  // namespace hydro::sym
