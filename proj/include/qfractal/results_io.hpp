#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qfractal/config.hpp"
#include "qfractal/pipeline.hpp"

namespace qfractal {

/// CSV: '#'-prefixed metadata lines, then a header of result_columns() and one
/// line per row. D and D_err carry 3 decimals; other floats full precision.
std::string format_table_csv(const ResultTable& table);
/// JSON: {"schema", "metadata", "columns", "rows"} with full precision; NaN -> null.
std::string format_table_json(const ResultTable& table);

/// Wide table: N, then one D column per "<probe>:<family>".
std::string format_convergence_csv(const std::vector<ConvergenceSeries>& series);

/// Matrix with the time axis as the first row and the space axis as the
/// first column. Metadata goes to the JSON variant / a sidecar file.
std::string format_carpet_csv(const CarpetExport& carpet);
std::string format_carpet_json(const CarpetExport& carpet);
std::string format_carpet_metadata_json(const CarpetExport& carpet);

/// Writes <dir>/<scenario>.<csv|json>; returns the path written.
std::filesystem::path write_table(const ResultTable& table, const std::filesystem::path& dir, OutputFormat format);
std::filesystem::path write_convergence(const ResultTable& table, const std::filesystem::path& dir);
/// Writes <dir>/carpet.csv (+ carpet.meta.json) or <dir>/carpet.json.
std::filesystem::path write_carpet(const CarpetExport& carpet, const std::filesystem::path& dir, OutputFormat format);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qfractal
