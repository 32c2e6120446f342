#pragma once

#include <filesystem>
#include <istream>

#include "fnorm/csr_matrix.hpp"

namespace fnorm {

/// Reads "%%MatrixMarket matrix <coordinate|array> <real|complex|integer> general".
/// Indices are converted to 0-based. Duplicate coordinate entries, pattern
/// fields and non-general symmetries are rejected with ParseError.
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::filesystem::path& path);

}  // namespace fnorm
