#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "bayesdl/data/table.hpp"

namespace bayesdl::data {

/// Forces column types by name; other columns are inferred.
using CsvSchema = std::map<std::string, ColumnType>;

// RFC-4180 with a header row. An empty unquoted field or an unquoted NA is
// missing. A column is numeric when every non-missing cell is an unquoted
// real number; otherwise it is categorical. Quoted fields are always text,
// so "" is the empty string and "NA" the two-letter string.
Table read_csv(std::istream& in, const CsvSchema& schema = {});
Table read_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Numbers in shortest round-trip form; missing cells as NA. Text is quoted
/// when it contains a comma, quote, CR or LF, or would otherwise read back
/// as a number or as missing.
void write_csv(std::ostream& out, const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);

/// Quotes a single field per RFC-4180 when it contains a comma, quote, CR or LF.
std::string quote_field(const std::string& field);

}  // namespace bayesdl::data
