#ifndef DEBIAS_TABLE_IO_HPP_
#define DEBIAS_TABLE_IO_HPP_

#include "debias/types.hpp"

#include <iosfwd>
#include <string>

namespace debias {

/// Reads a comma-delimited table whose header names a Y column, an R column,
/// and at least one covariate column (remaining columns, in order). An empty
/// Y cell is allowed only on rows with R = 0 and is stored as 0; every other
/// cell must be a finite number. Errors cite 1-based line numbers.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv_file(const std::string& path);

/// Decimal rendering with 17 significant digits; parses back to the same
/// IEEE double.
std::string format_double(double v);

/// Comma-separated numbers, e.g. "1,0.5,0.25".
Vector parse_vector(const std::string& text);

/// Numbers separated by commas, whitespace or newlines.
Vector read_vector_file(const std::string& path);

}  // namespace debias

#endif  // DEBIAS_TABLE_IO_HPP_
