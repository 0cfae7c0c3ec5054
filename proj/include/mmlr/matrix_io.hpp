#pragma once

#include <string>

#include "mmlr/matrix.hpp"

namespace mmlr {

// Reads a dense matrix from `path`. The format is detected from the file
// content: a first line starting with "%%MatrixMarket" selects Matrix
// Market (dense "array" or sparse "coordinate", real general); anything
// else is parsed as headerless CSV (comma-separated fields, newline rows).
//
// Matrix Market conventions honored here:
//   - '%' lines after the banner are comments,
//   - array data is listed in column-major order,
//   - coordinate entries are 1-indexed; duplicate (i, j) entries add.
//
// Throws IoError if the file cannot be opened, ParseError (message names
// the line, and column where meaningful) on malformed input, and
// InvalidValue if an entry is not finite.
DenseMatrix read_matrix(const std::string& path);

// Writes `m` to `path`. Paths ending in ".csv" are written as headerless
// CSV; every other path is written in Matrix Market array format. Values
// are printed with 17 significant digits, so read_matrix(write_matrix(m))
// reproduces every entry bitwise. Throws IoError on failure to write.
void write_matrix(const std::string& path, const DenseMatrix& m);

// Parsers/serializers over in-memory text, used by the file functions
// and directly unit-testable. `name` labels the source in error messages.
DenseMatrix parse_matrix_market(const std::string& text, const std::string& name);
DenseMatrix parse_csv(const std::string& text, const std::string& name);
std::string format_matrix_market(const DenseMatrix& m);
std::string format_csv(const DenseMatrix& m);

}  // namespace mmlr
