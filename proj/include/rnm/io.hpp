#pragma once

// JSON and CSV serialization of spaces, module specs, elements and reports.
//
//   space    {"atoms":[{"id":str,"weight":num}, ...]}
//   spec     {"atoms":[{"id":str,"weight":num,"dim":int,
//                       "norm":{"kind":"euclid"} | {"kind":"pnorm","p":num}}, ...]}
//   L0Real   {"values":{atom_id:num, ...}}
//   element  {"values":{atom_id:[num, ...], ...}}
//
// Weights must sum to one within 1e-9. Every reader throws SchemaError.

#include <string>
#include <vector>

#include <json.hpp>

#include "rnm/convexity.hpp"
#include "rnm/dual.hpp"
#include "rnm/measure.hpp"
#include "rnm/module.hpp"

namespace rnm::io {

using Json = nlohmann::ordered_json;

inline constexpr double kWeightSumTolerance = 1e-9;

/// Reads and parses a JSON file; SchemaError on IO or syntax failure.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);

SpacePtr space_from_json(const Json& j);
SpecPtr spec_from_json(const Json& j);
/// Every atom of the space must be present exactly once.
L0Real l0real_from_json(const Json& j, const SpacePtr& space);
ModuleElement element_from_json(const Json& j, const SpecPtr& spec);
RandomFunctional functional_from_json(const Json& j, const SpecPtr& spec);

Json to_json(const FiniteProbSpace& space);
Json to_json(const RnModuleSpec& spec);
Json to_json(const L0Real& x);
Json to_json(const ModuleElement& x);
Json to_json(const EventSet& e);

/// Serializes with every floating-point number printed to 17 significant
/// digits; object keys keep insertion order. Non-finite numbers become null.
std::string dump(const Json& j, int indent = 2);

/// Shortest text for a double that still carries 17 significant digits.
std::string format_double(double v);

struct ModulusCsvRow {
    std::string atom_id;
    double eps = 0.0;
    ModulusVariant variant = ModulusVariant::GeqSphere;
    double estimate = 0.0;
};

/// Header atom_id,eps,variant,estimate followed by one line per row.
std::string modulus_csv(const std::vector<ModulusCsvRow>& rows);

}  // namespace rnm::io
