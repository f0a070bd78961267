#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "blx/errors.hpp"
#include "blx/io.hpp"

namespace blx {

std::string describe(const ColumnRef& ref) {
  if (const auto* name = std::get_if<std::string>(&ref)) return *name;
  return std::to_string(std::get<std::size_t>(ref));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// RFC 4180 style: double quotes wrap fields, "" escapes a quote.
std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::size_t resolve(const ColumnRef& ref, const std::vector<std::string>* header,
                    std::size_t field_count) {
  if (const auto* name = std::get_if<std::string>(&ref)) {
    if (header != nullptr) {
      for (std::size_t i = 0; i < header->size(); ++i) {
        if (trim((*header)[i]) == *name) return i;
      }
    }
    throw MissingColumn(*name);
  }
  const std::size_t idx = std::get<std::size_t>(ref);
  if (idx >= field_count) throw MissingColumn(std::to_string(idx));
  return idx;
}

}  // namespace

Series parse_series_csv(const std::string& text, const ColumnSpec& spec,
                        std::vector<std::string>* dates) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_fields(line));
  }
  if (rows.empty()) throw SeriesTooShort("csv contains no rows");

  std::optional<std::vector<std::string>> header;
  std::size_t first = 0;
  if (spec.skip_header) {
    header = rows.front();
    first = 1;
  }
  const std::size_t width = rows.front().size();
  const std::size_t value_col = resolve(spec.column, header ? &*header : nullptr, width);
  std::optional<std::size_t> date_col;
  if (spec.date_column) date_col = resolve(*spec.date_column, header ? &*header : nullptr, width);
  const std::string column_label = describe(spec.column);

  std::vector<double> values;
  values.reserve(rows.size() - first);
  if (dates != nullptr) dates->clear();
  for (std::size_t r = first; r < rows.size(); ++r) {
    const std::size_t data_row = r - first + 1;
    const auto& fields = rows[r];
    const std::string cell = value_col < fields.size() ? fields[value_col] : std::string{};
    const std::string_view s = trim(cell);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
      throw NonNumericCell(data_row, column_label, cell);
    }
    values.push_back(v);
    if (dates != nullptr && date_col) {
      dates->push_back(*date_col < fields.size() ? std::string(trim(fields[*date_col])) : "");
    }
  }
  return Series(1, std::move(values));
}

Series load_series_csv(const std::filesystem::path& path, const ColumnSpec& spec,
                       std::vector<std::string>* dates) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  return parse_series_csv(text, spec, dates);
}

}  // namespace blx
