#include "bayesdl/data/csv.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/format.hpp"

namespace bayesdl::data {

namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

class RecordReader {
 public:
  explicit RecordReader(std::string text) : s_(std::move(text)) {
    if (s_.size() >= 3 && s_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
  }

  bool done() const { return pos_ >= s_.size(); }
  std::size_t line() const { return line_; }

  // Reads one record; returns the line number it started on.
  std::size_t next(std::vector<Field>& out) {
    out.clear();
    const std::size_t start = line_;
    Field f;
    while (true) {
      if (pos_ >= s_.size()) {
        out.push_back(std::move(f));
        return start;
      }
      char c = s_[pos_];
      if (c == '"' && f.text.empty() && !f.quoted) {
        f.quoted = true;
        ++pos_;
        while (true) {
          if (pos_ >= s_.size()) throw ParseError("unterminated quoted field", start);
          c = s_[pos_++];
          if (c == '"') {
            if (pos_ < s_.size() && s_[pos_] == '"') {
              f.text.push_back('"');
              ++pos_;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line_;
            f.text.push_back(c);
          }
        }
        if (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '\n' && s_[pos_] != '\r')
          throw ParseError("unexpected character after closing quote", line_);
        continue;
      }
      if (c == ',') {
        out.push_back(std::move(f));
        f = Field{};
        ++pos_;
        continue;
      }
      if (c == '\r' || c == '\n') {
        if (c == '\r' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '\n') ++pos_;
        ++pos_;
        ++line_;
        out.push_back(std::move(f));
        return start;
      }
      if (c == '"') throw ParseError("quote inside an unquoted field", line_);
      f.text.push_back(c);
      ++pos_;
    }
  }

 private:
  std::string s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

bool is_missing(const Field& f) { return !f.quoted && (f.text.empty() || f.text == "NA"); }

bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

}  // namespace

std::string quote_field(const std::string& field) {
  if (!needs_quotes(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Table read_csv(std::istream& in, const CsvSchema& schema) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  RecordReader reader(std::move(text));
  if (reader.done()) throw ParseError("empty input; a header row is required", 1);

  std::vector<Field> record;
  reader.next(record);
  std::vector<std::string> names;
  for (Field& f : record) names.push_back(std::move(f.text));
  for (const auto& [name, type] : schema) {
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw SchemaError("schema names column '" + name + "', which is not in the header");
  }

  const std::size_t ncol = names.size();
  std::vector<std::vector<Field>> cells(ncol);
  while (!reader.done()) {
    const std::size_t line = reader.next(record);
    if (record.size() == 1 && record[0].text.empty() && !record[0].quoted && reader.done()) break;
    if (record.size() != ncol)
      throw ParseError("expected " + std::to_string(ncol) + " fields, found " + std::to_string(record.size()), line);
    for (std::size_t j = 0; j < ncol; ++j) cells[j].push_back(std::move(record[j]));
  }

  Table table;
  for (std::size_t j = 0; j < ncol; ++j) {
    const auto& col = cells[j];
    std::vector<bool> missing(col.size());
    std::vector<double> numbers(col.size(), 0.0);
    bool numeric = true, any_present = false;
    for (std::size_t i = 0; i < col.size(); ++i) {
      missing[i] = is_missing(col[i]);
      if (missing[i]) continue;
      any_present = true;
      if (numeric && (col[i].quoted || !parse_real(col[i].text, numbers[i]))) numeric = false;
    }
    ColumnType type = numeric && any_present ? ColumnType::numeric : ColumnType::categorical;
    if (auto it = schema.find(names[j]); it != schema.end()) {
      if (it->second == ColumnType::numeric && !(numeric)) {
        for (std::size_t i = 0; i < col.size(); ++i) {
          if (!missing[i] && (col[i].quoted || !parse_real(col[i].text, numbers[i])))
            throw ColumnTypeError("column '" + names[j] + "' row " + std::to_string(i + 1) +
                                  ": '" + col[i].text + "' is not a number");
        }
      }
      type = it->second;
    }
    if (type == ColumnType::numeric) {
      table.add_column(Column::numeric(names[j], std::move(numbers), std::move(missing)));
    } else {
      std::vector<std::string> strings(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) strings[i] = col[i].text;
      table.add_column(Column::categorical(names[j], std::move(strings), std::move(missing)));
    }
  }
  return table;
}

Table read_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_csv(in, schema);
}

void write_csv(std::ostream& out, const Table& table) {
  for (Index j = 0; j < table.cols(); ++j) {
    if (j) out << ',';
    out << quote_field(table.column(j).name);
  }
  out << '\n';
  std::string buf;
  for (Index i = 0; i < table.rows(); ++i) {
    for (Index j = 0; j < table.cols(); ++j) {
      if (j) out << ',';
      const Column& c = table.column(j);
      if (c.is_missing(i)) {
        out << "NA";
      } else if (c.type == ColumnType::numeric) {
        out << format_real(c.number(i));
      } else {
        const std::string& s = c.string(i);
        double dummy;
        if (needs_quotes(s)) {
          out << quote_field(s);
        } else if (s.empty() || s == "NA" || parse_real(s, dummy)) {
          out << '"' << s << '"';
        } else {
          out << s;
        }
      }
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing CSV output");
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(out, table);
}

}  // namespace bayesdl::data
