#ifndef KSIL_CSV_HPP
#define KSIL_CSV_HPP

#include <optional>
#include <ostream>
#include <string>

#include "ksil/core.hpp"

namespace ksil {

/**
 * Reads a comma-separated numeric table. `label_column` is a header name (with `has_header`) or a zero-based
 * column index; that column becomes the labels. Integer labels are kept as is, any other label text is
 * mapped to 0, 1, ... in order of first appearance.
 * Errors name the one-based line and column: `ParseError`, `MixedArity`, `IoError`, plus the dataset checks.
 */
Dataset load_csv(const std::string& path, bool has_header, const std::optional<std::string>& label_column = std::nullopt);

/// Parses CSV text held in memory; `source` only appears in error messages.
Dataset parse_csv(const std::string& text, bool has_header, const std::optional<std::string>& label_column = std::nullopt,
                  const std::string& source = "<memory>");

/// Writes `x0,...,x{d-1}[,label]` with a header row and 17 significant digits.
void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::string& path, const Dataset& data);

/// Shortest text that reads back to the same double.
std::string format_double(double value);

} // namespace ksil

#endif
