#pragma once

#include "dsvar/common.hpp"

#include <string>
#include <vector>

namespace dsvar {

/// Read a header-plus-numbers CSV file.
///
/// The header row gives the column names. A leading column whose header is
/// date/time/period (any case) or whose first data cell is not a number is
/// kept as `dates` and never parsed. Empty, NA, NaN and "." cells are missing
/// values. Missing values, non-numeric cells and ragged rows raise ParseError
/// with the 1-based line and column.
TimeSeriesMatrix ingest_csv(const std::string& path);

/// Same parser over in-memory text; `source` only labels error messages.
TimeSeriesMatrix parse_csv(const std::string& text, const std::string& source = "<memory>");

/// Shortest of 15-17 significant digits that parses back to the same double,
/// with a . decimal separator.
std::string format_number(double value);

using CsvRow = std::vector<std::string>;

/// Write header and rows; cells containing ',' or '"' are quoted.
void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows);

/// One column per name, with a leading "date" column when dates are present.
void write_matrix_csv(const std::string& path, const TimeSeriesMatrix& data);

}  // namespace dsvar
