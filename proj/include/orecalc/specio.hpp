#pragma once

// JSON spec files: algebras by structure constants, derivations, towers and
// scenarios, plus certificate serialization. Formats are documented in the
// README; loaders validate and report the first failing triple or pair.

#include <string>

#include "json.hpp"
#include "orecalc/algebra.hpp"
#include "orecalc/commcalc.hpp"
#include "orecalc/ore.hpp"
#include "orecalc/radical.hpp"

namespace orecalc::specio {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct LoadedFile {
  json data;
  std::string content_hash;  // fnv1a64 of the raw bytes
};

LoadedFile load_json_file(const std::string& path);

AlgebraPtr algebra_from_json(const json& j);
ordered_json algebra_to_json(const FiniteAlgebra& a);

// Validates Leibniz; the error message names the first failing basis pair.
Derivation derivation_from_json(const json& j, AlgebraPtr algebra);

// Raw scenario data for auditing; "base"/"representation.algebra" accept
// either an inline algebra object or {"file": "relative/path.json"}.
RawScenario scenario_from_json(const json& j, const std::string& base_dir);

// Validated tower (throws on any violated invariant).
TowerPtr tower_from_json(const json& j, const std::string& base_dir);

ordered_json certificate_to_json(const ExpansionCertificate& cert);

}  // namespace orecalc::specio
