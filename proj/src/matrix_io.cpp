#include "mmlr/matrix_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mmlr/errors.hpp"

namespace mmlr {

namespace {

std::string location(const std::string& name, int line) {
  return name + ":" + std::to_string(line);
}

std::string location(const std::string& name, int line, int column) {
  return name + ":" + std::to_string(line) + ":" + std::to_string(column);
}

// Splits text into lines; accepts "\n" and "\r\n" endings. A trailing
// newline does not produce an extra empty line.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) {
    if (current.back() == '\r') current.pop_back();
    lines.push_back(current);
  }
  return lines;
}

bool is_blank(const std::string& s) {
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

// Parses one double out of `field`; the whole field must be consumed.
// `column` is the 1-based column of the field start, used in messages.
double parse_double_field(const std::string& field, const std::string& name,
                          int line, int column) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end != nullptr && *end != '\0' &&
         std::isspace(static_cast<unsigned char>(*end))) {
    ++end;
  }
  if (end == begin || end == nullptr || *end != '\0') {
    throw ParseError(location(name, line, column) + ": expected a number, got \"" +
                     field + "\"");
  }
  if (!std::isfinite(value)) {
    throw InvalidValue(location(name, line, column) + ": non-finite entry \"" +
                       field + "\"");
  }
  return value;
}

// Whitespace-splits `line` into fields; records the 1-based start column
// of each field for error messages.
struct Field {
  std::string text;
  int column;
};

std::vector<Field> split_whitespace(const std::string& line) {
  std::vector<Field> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    fields.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return fields;
}

long parse_long_field(const Field& f, const std::string& name, int line) {
  const char* begin = f.text.c_str();
  char* end = nullptr;
  const long value = std::strtol(begin, &end, 10);
  if (end == begin || end == nullptr || *end != '\0') {
    throw ParseError(location(name, line, f.column) +
                     ": expected an integer, got \"" + f.text + "\"");
  }
  return value;
}

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace

DenseMatrix parse_matrix_market(const std::string& text, const std::string& name) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(name + ":1: empty file, expected a MatrixMarket banner");
  }

  // Banner: %%MatrixMarket matrix <array|coordinate> real general
  const std::vector<Field> banner = split_whitespace(lines[0]);
  if (banner.empty() || lower(banner[0].text) != "%%matrixmarket") {
    throw ParseError(location(name, 1) + ": missing %%MatrixMarket banner");
  }
  if (banner.size() != 5) {
    throw ParseError(location(name, 1) +
                     ": banner must have 5 fields "
                     "(%%MatrixMarket matrix <format> <field> <symmetry>)");
  }
  const std::string object = lower(banner[1].text);
  const std::string format = lower(banner[2].text);
  const std::string field = lower(banner[3].text);
  const std::string symmetry = lower(banner[4].text);
  if (object != "matrix") {
    throw ParseError(location(name, 1, banner[1].column) + ": unsupported object \"" +
                     banner[1].text + "\" (only \"matrix\")");
  }
  if (format != "array" && format != "coordinate") {
    throw ParseError(location(name, 1, banner[2].column) + ": unsupported format \"" +
                     banner[2].text + "\" (only \"array\" or \"coordinate\")");
  }
  if (field != "real" && field != "integer") {
    throw ParseError(location(name, 1, banner[3].column) + ": unsupported field \"" +
                     banner[3].text + "\" (only \"real\" or \"integer\")");
  }
  if (symmetry != "general") {
    throw ParseError(location(name, 1, banner[4].column) +
                     ": unsupported symmetry \"" + banner[4].text +
                     "\" (only \"general\")");
  }

  // Skip comments and blank lines up to the size line.
  std::size_t li = 1;
  while (li < lines.size() &&
         (is_blank(lines[li]) || (!lines[li].empty() && lines[li][0] == '%'))) {
    ++li;
  }
  if (li >= lines.size()) {
    throw ParseError(location(name, static_cast<int>(lines.size())) +
                     ": missing size line");
  }
  const int size_line = static_cast<int>(li) + 1;
  const std::vector<Field> sizes = split_whitespace(lines[li]);
  ++li;

  const std::size_t expected_size_fields = (format == "array") ? 2 : 3;
  if (sizes.size() != expected_size_fields) {
    throw ParseError(location(name, size_line) + ": size line needs " +
                     std::to_string(expected_size_fields) + " integers, got " +
                     std::to_string(sizes.size()));
  }
  const long rows = parse_long_field(sizes[0], name, size_line);
  const long cols = parse_long_field(sizes[1], name, size_line);
  if (rows < 0 || cols < 0) {
    throw ParseError(location(name, size_line) + ": negative dimension " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (rows > 1000000 || cols > 1000000 || rows * cols > 100000000L) {
    throw ParseError(location(name, size_line) + ": dimensions too large (" +
                     std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }

  DenseMatrix m(static_cast<int>(rows), static_cast<int>(cols));

  if (format == "array") {
    // Entries in column-major order, usually one per line; tolerate several
    // whitespace-separated values per line.
    const long total = rows * cols;
    long seen = 0;
    for (; li < lines.size(); ++li) {
      const std::string& line = lines[li];
      if (is_blank(line) || line[0] == '%') continue;
      for (const Field& f : split_whitespace(line)) {
        if (seen >= total) {
          throw ParseError(location(name, static_cast<int>(li) + 1, f.column) +
                           ": more than " + std::to_string(total) + " entries");
        }
        const double value =
            parse_double_field(f.text, name, static_cast<int>(li) + 1, f.column);
        const int col = static_cast<int>(seen / rows);
        const int row = static_cast<int>(seen % rows);
        m(row, col) = value;
        ++seen;
      }
    }
    if (seen != total) {
      throw ParseError(location(name, static_cast<int>(lines.size())) + ": expected " +
                       std::to_string(total) + " entries, got " +
                       std::to_string(seen));
    }
    return m;
  }

  // Coordinate format: 1-indexed (i, j, value) triplets; duplicates add.
  const long nnz = parse_long_field(sizes[2], name, size_line);
  if (nnz < 0) {
    throw ParseError(location(name, size_line) + ": negative entry count " +
                     std::to_string(nnz));
  }
  long seen = 0;
  for (; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (is_blank(line) || line[0] == '%') continue;
    const int line_no = static_cast<int>(li) + 1;
    const std::vector<Field> fields = split_whitespace(line);
    if (fields.size() != 3) {
      throw ParseError(location(name, line_no) +
                       ": coordinate entry needs \"row col value\", got " +
                       std::to_string(fields.size()) + " fields");
    }
    if (seen >= nnz) {
      throw ParseError(location(name, line_no) + ": more than " +
                       std::to_string(nnz) + " entries");
    }
    const long i = parse_long_field(fields[0], name, line_no);
    const long j = parse_long_field(fields[1], name, line_no);
    if (i < 1 || i > rows) {
      throw ParseError(location(name, line_no, fields[0].column) + ": row index " +
                       std::to_string(i) + " outside [1, " + std::to_string(rows) +
                       "]");
    }
    if (j < 1 || j > cols) {
      throw ParseError(location(name, line_no, fields[1].column) +
                       ": column index " + std::to_string(j) + " outside [1, " +
                       std::to_string(cols) + "]");
    }
    const double value =
        parse_double_field(fields[2].text, name, line_no, fields[2].column);
    m(static_cast<int>(i) - 1, static_cast<int>(j) - 1) += value;
    ++seen;
  }
  if (seen != nnz) {
    throw ParseError(location(name, static_cast<int>(lines.size())) + ": expected " +
                     std::to_string(nnz) + " entries, got " + std::to_string(seen));
  }
  return m;
}

DenseMatrix parse_csv(const std::string& text, const std::string& name) {
  const std::vector<std::string> lines = split_lines(text);
  std::vector<std::vector<double>> rows;
  int cols = -1;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (is_blank(line)) continue;
    const int line_no = static_cast<int>(li) + 1;

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = (comma == std::string::npos) ? line.size() : comma;
      row.push_back(parse_double_field(line.substr(start, end - start), name,
                                       line_no, static_cast<int>(start) + 1));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }

    if (cols < 0) {
      cols = static_cast<int>(row.size());
    } else if (static_cast<int>(row.size()) != cols) {
      throw ParseError(location(name, line_no) + ": expected " +
                       std::to_string(cols) + " fields, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(name + ":1: empty input, expected CSV rows");
  }

  DenseMatrix m(static_cast<int>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < cols; ++j) m(static_cast<int>(i), j) = rows[i][j];
  }
  return m;
}

std::string format_matrix_market(const DenseMatrix& m) {
  std::string out = "%%MatrixMarket matrix array real general\n";
  out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  char buf[64];
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g\n", m(i, j));
      out += buf;
    }
  }
  return out;
}

std::string format_csv(const DenseMatrix& m) {
  std::string out;
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out += buf;
      out += (j + 1 == m.cols()) ? '\n' : ',';
    }
  }
  return out;
}

DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open \"" + path + "\" for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.rfind("%%MatrixMarket", 0) == 0 || text.rfind("%%matrixmarket", 0) == 0) {
    return parse_matrix_market(text, path);
  }
  return parse_csv(text, path);
}

void write_matrix(const std::string& path, const DenseMatrix& m) {
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open \"" + path + "\" for writing");
  }
  out << (csv ? format_csv(m) : format_matrix_market(m));
  out.flush();
  if (!out) {
    throw IoError("failed to write \"" + path + "\"");
  }
}

}  // namespace mmlr
