#pragma once

#include "graev/boolean_group.hpp"
#include "graev/completeness_lab.hpp"
#include "graev/graev_metric.hpp"
#include "graev/ground_space.hpp"
#include "graev/neighborhood.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string_view>

// JSON forms of the library types. Parsing failures throw StructuralError.
namespace graev::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& value);

/// {"kind": "matrix"|"euclidean", "labels": [...], "dist"|"coords": [[...]]}.
/// When labels are given, labels[0] must be "e".
GroundSpace space_from_json(const Json& j);
Json space_to_json(const GroundSpace& space);
GroundSpace load_space(const std::filesystem::path& path);

/// {"metrics": [{"dist": [[...]]} | {"ground_scale": c}, ...],
///  "tail": "repeat-last" | "zero" | {"rule": "scale", "ratio": r}}.
/// ground_scale entries are c times the ground distances.
PseudometricSequence sequence_from_json(const Json& j, const GroundSpace& ground);
Json sequence_to_json(const PseudometricSequence& seq);
PseudometricSequence load_sequence(const std::filesystem::path& path, const GroundSpace& ground);

/// Comma-separated point indices, e.g. "1,2,3". Empty text is the zero
/// element; repeated indices cancel and 0 contributes nothing.
GroupElement parse_element(std::string_view text, const GroundSpace& space);
GroupElement element_from_json(const Json& j);
Json element_to_json(const GroupElement& g);

Json to_json(const ValidationReport& report);
Json to_json(const NormResult& norm);
Json to_json(const WdWitness& witness);
Json to_json(const WdMembership& membership);
Json to_json(const BallWitness& ball);
Json to_json(const lab::CauchyReport& report);

} // namespace graev::io
