#pragma once

#include <map>
#include <string>
#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl::data {

enum class ColumnType { numeric, categorical };

std::string to_string(ColumnType type);

/// One named column. Numeric columns use `numbers`, categorical columns use
/// `strings`; the other vector stays empty. Missing cells hold 0 / "".
struct Column {
  std::string name;
  ColumnType type = ColumnType::numeric;
  std::vector<double> numbers;
  std::vector<std::string> strings;
  std::vector<bool> missing;

  static Column numeric(std::string name, std::vector<double> values, std::vector<bool> missing = {});
  static Column categorical(std::string name, std::vector<std::string> values, std::vector<bool> missing = {});

  Index size() const { return static_cast<Index>(missing.size()); }
  bool is_missing(Index row) const { return missing[static_cast<std::size_t>(row)]; }
  double number(Index row) const { return numbers[static_cast<std::size_t>(row)]; }
  const std::string& string(Index row) const { return strings[static_cast<std::size_t>(row)]; }
  double missing_fraction() const;
  /// Observed levels of a categorical column in lexicographic order.
  std::vector<std::string> levels() const;
};

class Table {
 public:
  Table() = default;

  Index rows() const { return rows_; }
  Index cols() const { return static_cast<Index>(columns_.size()); }
  const std::vector<Column>& columns() const { return columns_; }

  /// Throws SchemaError on a duplicate name or a length mismatch.
  void add_column(Column column);
  /// Replaces the column at `index` by `replacement` (possibly several columns).
  void replace_column(Index index, std::vector<Column> replacement);
  bool has_column(const std::string& name) const;
  Index index_of(const std::string& name) const;
  const Column& column(const std::string& name) const;
  const Column& column(Index index) const { return columns_.at(static_cast<std::size_t>(index)); }

  /// New table with the given rows, in the given order.
  Table select_rows(const std::vector<Index>& rows) const;

  bool operator==(const Table& other) const;

 private:
  std::vector<Column> columns_;
  Index rows_ = 0;
};

}  // namespace bayesdl::data
