#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypervar/linalg.hpp"

namespace hypervar::io {

/// Splits one CSV line on commas and trims surrounding whitespace from each field.
std::vector<std::string> splitCsvLine(const std::string& line);

/// Parses a decimal; throws ParseError naming `file` and `line` on failure.
double parseNumber(const std::string& field, const std::string& file, std::size_t line);

/// n rows of n comma-separated decimals, no header.
Matrix readSquareCsv(std::istream& in, const std::string& name = "<stream>");
Matrix readSquareCsv(const std::string& path);

/// Loads a matrix and requires symmetry within 1e-12 relative, unless `symmetrize`
/// is set, in which case the triangles are averaged unconditionally.
SymmetricMatrix readSymmetricCsv(const std::string& path, bool symmetrize = false);

/// A vector written either as one row or one value per line.
std::vector<double> readVectorCsv(std::istream& in, const std::string& name = "<stream>");
std::vector<double> readVectorCsv(const std::string& path);

/// Round-trip precision (17 significant digits).
void writeMatrixCsv(std::ostream& out, const Matrix& m);
void writeMatrixCsv(const std::string& path, const Matrix& m);

}  // namespace hypervar::io
