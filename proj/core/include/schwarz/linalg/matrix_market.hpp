#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "schwarz/linalg/sparse.hpp"

namespace schwarz {

/// Writes `%%MatrixMarket matrix coordinate real general`, 1-based indices,
/// values printed with 17 significant digits.
void write_matrix_market(std::ostream& os, const SparseMatrix& a);
void write_matrix_market(const std::string& path, const SparseMatrix& a);

/// Reads coordinate real general/symmetric files. Symmetric files are
/// expanded to both triangles.
SparseMatrix read_matrix_market(std::istream& is);
SparseMatrix read_matrix_market(const std::string& path);

/// Dense column vector in `array real general` format.
void write_matrix_market_vector(const std::string& path, std::span<const double> v);

}  // namespace schwarz
