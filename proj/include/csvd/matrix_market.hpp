#pragma once

#include <string>

#include "csvd/types.hpp"

namespace csvd {

/// Reads a Matrix Market array file ("real", "integer", or "complex" field,
/// "general" symmetry). Real and integer files load with zero imaginary
/// parts. Parse failures report the 1-based line number.
ComplexDense read_matrix(const std::string& path);

/// Writes a "matrix array complex general" file, column-major, 17 significant
/// digits per component; read_matrix round-trips it bit-exactly.
void write_matrix(const std::string& path, const ComplexDense& a);

}  // namespace csvd
