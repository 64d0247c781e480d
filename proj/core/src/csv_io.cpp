#include "dsvar/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dsvar {

namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote", line_no);
  cells.push_back(cell);
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_missing(const std::string& cell) {
  const std::string l = lower(cell);
  return l.empty() || l == "na" || l == "nan" || l == "." || l == "null";
}

bool parse_double(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::string location(const std::string& source, std::size_t line, std::size_t column, const std::string& name) {
  std::ostringstream os;
  os << source << ": line " << line << ", column " << column;
  if (!name.empty()) os << " ('" << name << "')";
  return os.str();
}

}  // namespace

TimeSeriesMatrix parse_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line, line_no);
    for (auto& c : cells) c = trim(c);
    if (header.empty()) {
      header = std::move(cells);
      if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
    } else {
      records.emplace_back(line_no, std::move(cells));
    }
  }
  if (header.empty()) throw ParseError(source + ": empty file", 1);
  if (records.empty()) throw ParseError(source + ": no data rows", line_no);

  const std::string first_name = lower(header[0]);
  double probe = 0.0;
  const bool date_column = first_name == "date" || first_name == "time" || first_name == "period" ||
                           (!records.front().second.empty() && !is_missing(records.front().second[0]) &&
                            !parse_double(records.front().second[0], probe));
  const std::size_t skip = date_column ? 1 : 0;
  if (header.size() < skip + 2)
    throw ParseError(source + ": need at least two numeric columns", records.front().first);

  TimeSeriesMatrix out;
  out.names.assign(header.begin() + static_cast<std::ptrdiff_t>(skip), header.end());
  for (std::size_t j = 0; j < out.names.size(); ++j)
    if (out.names[j].empty()) out.names[j] = "y" + std::to_string(j + 1);
  const Eigen::Index n = static_cast<Eigen::Index>(out.names.size());
  out.values.resize(static_cast<Eigen::Index>(records.size()), n);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& [ln, cells] = records[r];
    if (cells.size() != header.size())
      throw ParseError(source + ": line " + std::to_string(ln) + " has " + std::to_string(cells.size()) +
                           " fields, expected " + std::to_string(header.size()),
                       ln);
    if (date_column) out.dates.push_back(cells[0]);
    for (std::size_t j = skip; j < cells.size(); ++j) {
      const std::string& name = header[j];
      if (is_missing(cells[j]))
        throw ParseError("missing value at " + location(source, ln, j + 1, name), ln, j + 1);
      double v = 0.0;
      if (!parse_double(cells[j], v))
        throw ParseError("non-numeric value '" + cells[j] + "' at " + location(source, ln, j + 1, name), ln, j + 1);
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j - skip)) = v;
    }
  }
  return out;
}

TimeSeriesMatrix ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == value) break;
  }
  return buf;
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string q = "\"";
  for (char c : cell) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_row(std::ostream& os, const CsvRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << quote(row[i]);
  os << '\n';
}

}  // namespace

void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + path);
  write_row(os, header);
  for (const auto& r : rows) write_row(os, r);
  if (!os) throw Error("write failed for " + path);
}

void write_matrix_csv(const std::string& path, const TimeSeriesMatrix& data) {
  const bool dated = !data.dates.empty() && static_cast<Eigen::Index>(data.dates.size()) == data.length();
  CsvRow header;
  if (dated) header.push_back("date");
  const auto names = data.names.empty() ? TimeSeriesMatrix::default_names(data.dimension()) : data.names;
  header.insert(header.end(), names.begin(), names.end());
  std::vector<CsvRow> rows;
  rows.reserve(static_cast<std::size_t>(data.length()));
  for (Eigen::Index t = 0; t < data.length(); ++t) {
    CsvRow row;
    if (dated) row.push_back(data.dates[static_cast<std::size_t>(t)]);
    for (Eigen::Index j = 0; j < data.dimension(); ++j) row.push_back(format_number(data.values(t, j)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace dsvar
