#include "bayesdl/data/table.hpp"

#include <algorithm>
#include <set>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::data {

std::string to_string(ColumnType type) {
  return type == ColumnType::numeric ? "numeric" : "categorical";
}

Column Column::numeric(std::string name, std::vector<double> values, std::vector<bool> missing) {
  if (missing.empty()) missing.assign(values.size(), false);
  if (missing.size() != values.size()) throw SchemaError("column '" + name + "': missing flags length mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (missing[i]) values[i] = 0;
  Column c;
  c.name = std::move(name);
  c.type = ColumnType::numeric;
  c.numbers = std::move(values);
  c.missing = std::move(missing);
  return c;
}

Column Column::categorical(std::string name, std::vector<std::string> values, std::vector<bool> missing) {
  if (missing.empty()) missing.assign(values.size(), false);
  if (missing.size() != values.size()) throw SchemaError("column '" + name + "': missing flags length mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (missing[i]) values[i].clear();
  Column c;
  c.name = std::move(name);
  c.type = ColumnType::categorical;
  c.strings = std::move(values);
  c.missing = std::move(missing);
  return c;
}

double Column::missing_fraction() const {
  if (missing.empty()) return 0;
  return static_cast<double>(std::count(missing.begin(), missing.end(), true)) /
         static_cast<double>(missing.size());
}

std::vector<std::string> Column::levels() const {
  if (type != ColumnType::categorical) throw ColumnTypeError("column '" + name + "' is not categorical");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < strings.size(); ++i)
    if (!missing[i]) seen.insert(strings[i]);
  return {seen.begin(), seen.end()};
}

void Table::add_column(Column column) {
  if (has_column(column.name)) throw SchemaError("duplicate column name '" + column.name + "'");
  const std::size_t expect = column.type == ColumnType::numeric ? column.numbers.size() : column.strings.size();
  if (expect != column.missing.size()) throw SchemaError("column '" + column.name + "' is inconsistent");
  if (!columns_.empty() && column.size() != rows_)
    throw SchemaError("column '" + column.name + "' has " + std::to_string(column.size()) + " rows, expected " +
                      std::to_string(rows_));
  rows_ = column.size();
  columns_.push_back(std::move(column));
}

void Table::replace_column(Index index, std::vector<Column> replacement) {
  if (index < 0 || index >= cols()) throw SchemaError("column index out of range");
  std::vector<Column> old = std::move(columns_);
  const Index old_rows = rows_;
  columns_.clear();
  rows_ = 0;
  for (Index i = 0; i < static_cast<Index>(old.size()); ++i) {
    if (i == index) {
      for (Column& c : replacement) add_column(std::move(c));
    } else {
      add_column(std::move(old[static_cast<std::size_t>(i)]));
    }
  }
  if (columns_.empty()) rows_ = 0;
  else if (rows_ != old_rows) throw SchemaError("replacement columns change the row count");
}

bool Table::has_column(const std::string& name) const {
  return std::any_of(columns_.begin(), columns_.end(), [&](const Column& c) { return c.name == name; });
}

Index Table::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return static_cast<Index>(i);
  throw SchemaError("no column named '" + name + "'");
}

const Column& Table::column(const std::string& name) const {
  return columns_[static_cast<std::size_t>(index_of(name))];
}

Table Table::select_rows(const std::vector<Index>& rows) const {
  Table out;
  for (const Column& c : columns_) {
    Column s;
    s.name = c.name;
    s.type = c.type;
    s.missing.reserve(rows.size());
    for (Index r : rows) {
      if (r < 0 || r >= rows_) throw SchemaError("row index out of range");
      const auto i = static_cast<std::size_t>(r);
      s.missing.push_back(c.missing[i]);
      if (c.type == ColumnType::numeric) s.numbers.push_back(c.numbers[i]);
      else s.strings.push_back(c.strings[i]);
    }
    out.add_column(std::move(s));
  }
  if (columns_.empty()) out.rows_ = 0;
  return out;
}

bool Table::operator==(const Table& other) const {
  if (rows_ != other.rows_ || columns_.size() != other.columns_.size()) return false;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const Column& a = columns_[j];
    const Column& b = other.columns_[j];
    if (a.name != b.name || a.type != b.type || a.missing != b.missing) return false;
    if (a.numbers != b.numbers || a.strings != b.strings) return false;
  }
  return true;
}

}  // namespace bayesdl::data
