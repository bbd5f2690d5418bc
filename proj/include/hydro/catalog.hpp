#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydro/opcore.hpp"
#include "hydro/operator_io.hpp"

namespace hydro::catalog {

enum class SlotKind {
  Sign,      // epsilon in {0, 1}
  Constant,  // rational constant
  Function,  // abstract function of declared arguments
};

struct Slot {
  std::string name;
  SlotKind kind = SlotKind::Constant;
  std::vector<std::string> args;
};

struct CatalogEntry {
  std::string id;
  /// Label of the displayed equation the entry comes from.
  std::string source;
  int d = 1;
  int n = 2;
  int rank_label = 0;
  std::vector<Slot> slots;
  /// Differential-matrix entries in the notation of operator_from_matrix.
  std::vector<std::vector<std::string>> matrix;

  const Slot* slot(const std::string& name) const;
};

/// Values for an entry's slots. Sign and constant slots must be bound;
/// function slots stay abstract unless a body is given.
struct Params {
  std::map<std::string, mpq_class> constants;
  /// Function name -> body over its declared arguments, e.g. "u2 + u3".
  std::map<std::string, std::string> functions;
};

/// epsilon = 1, kappa = 2, all functions abstract.
Params default_params(const CatalogEntry& e);

/// Random rational specialization: epsilon in {0, 1}, kappa a small rational,
/// each function a polynomial of degree <= 2 in its arguments with nonzero
/// constant term.
Params random_params(const CatalogEntry& e, std::mt19937_64& rng);

const std::vector<CatalogEntry>& list_entries();
/// Entries kept for tests only (not part of the listed catalog).
const std::vector<CatalogEntry>& extra_fixtures();
/// Looks up listed entries and extra fixtures. Throws InputError if unknown.
const CatalogEntry& find_entry(const std::string& id);

/// Throws InputError on missing, extra or out-of-range parameters.
HydroOperator instantiate(const CatalogEntry& e, const Params& params);
HydroOperator instantiate(const std::string& id, const Params& params);
HydroOperator instantiate(const std::string& id);

struct EntryReport {
  std::string id;
  ConditionReport hamiltonian;
  DegeneracyResult degeneracy;
  RankResult rank;
  int rank_label = 0;
  std::optional<TrivialityResult> triviality;

  bool passed() const;
  /// Reasons the entry did not pass, empty when it did.
  std::vector<std::string> problems() const;
};

EntryReport verify_entry(const CatalogEntry& e, const Params& params, const CheckOptions& opt = {});
EntryReport verify_entry(const std::string& id, const Params& params, const CheckOptions& opt = {});

struct Summary {
  std::vector<EntryReport> entries;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

Summary verify_all(const CheckOptions& opt = {});

nlohmann::json export_entry(const std::string& id, const Params& params);

std::string to_string(SlotKind k);

}  // namespace hydro::catalog
