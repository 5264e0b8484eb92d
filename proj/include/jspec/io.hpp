#pragma once

// File formats: matrix-set JSON input, support-body JSON, CSV number
// formatting and atomic file replacement.
//
// Matrix set:   {"d": 2, "matrices": [[[1,1],[0,1]], ...], "weights": [...]?, "labels": [...]?}
// Support body: {"d": .., "m": .., "seed": .., "h": [...], "witnesses": [[...], ...]}

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "jspec/spectrum.hpp"

namespace jspec {

/// Throws ParseError (with line or field), DimMismatch, or SingularInput
/// (with the matrix index).
MatrixSet parse_matrix_set(std::string_view text);
MatrixSet load_matrix_set(const std::filesystem::path& path);
nlohmann::json to_json(const MatrixSet& set);

nlohmann::json to_json(const SupportBody& body);
/// Rebuilds the direction set from (d, m, seed).
SupportBody body_from_json(const nlohmann::json& j);

/// Shortest round-trip decimal; infinities as "inf" / "-inf".  NaN is a bug
/// upstream and throws NumericalFailure.
std::string format_number(double v);
/// Numbers as JSON numbers, infinities as the strings "inf" / "-inf".
nlohmann::json json_number(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace jspec
