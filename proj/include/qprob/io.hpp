#pragma once

// JSON and CSV interchange for words, sets, matrices, families, measures and
// experiment reports.
//
// Matrix:  {"rows": r, "cols": c, "data": [[re, im], ...]}  (row-major)
// State:   {"dim": d, "amplitudes": [[re, im], ...]}
// Family:  {"format": "qprob.family/1", "kind": ..., "dim": d,
//           "members": [Matrix, ...], "state": State}
// Set:     {"depth": d, "words": ["010", ...]}
// Measure: {"depth": d, "weights": {"010": w, ...}}

#include <string>

#include "json.hpp"
#include "qprob/families.hpp"
#include "qprob/linalg_core.hpp"
#include "qprob/pvm.hpp"
#include "qprob/randomness.hpp"
#include "qprob/sequence_space.hpp"
#include "qprob/state_measures.hpp"

namespace qprob::io {

using Json = nlohmann::json;

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const StateVector& psi);
StateVector state_from_json(const Json& j);

Json to_json(const CylinderUnion& x);
CylinderUnion cylinder_union_from_json(const Json& j);

Json to_json(const MeasureTable& mu);
MeasureTable measure_from_json(const Json& j);
/// "word,weight" rows in word order, weights with 17 significant digits.
std::string measure_to_csv(const MeasureTable& mu);

Json family_to_json(const FamilyWithState& f, const std::string& kind);
FamilyWithState family_from_json(const Json& j);

/// {"depth": d, "atoms": {"01": Matrix, ...}}
Json atoms_to_json(const ProjectionValuedMap& map);

ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& config);
Json to_json(const ExperimentReport& report);
/// One row per registered test plus the grand test.
std::string report_to_csv(const ExperimentReport& report);

/// %.17g rendering used by every CSV writer.
std::string format_double(double x);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qprob::io
