#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "macrocoh/state.hpp"

namespace macrocoh {

// Matrix files: {"dim": d, "re": [[...], ...], "im": [[...], ...]}, rows in
// order. A d x 1 matrix (or flat "re"/"im" lists) is a state vector. "im" may
// be omitted for real matrices.

/// Throws ValidationError with the parser's diagnostic on malformed input.
Matrix parse_matrix_json(std::string_view text);
std::string matrix_to_json(const Matrix& m);

Matrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const Matrix& m);

/// A state vector becomes its projector; a square matrix is validated.
DensityMatrix load_state(const std::filesystem::path& path);
Observable load_observable(const std::filesystem::path& path);

}  // namespace macrocoh
