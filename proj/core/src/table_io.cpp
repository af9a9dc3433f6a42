#include "debias/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace debias {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& cell, double* out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return false;
  *out = v;
  return true;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (line_no == 0 || trim(line).empty()) throw ValidationError("empty input table");

  const std::vector<std::string> header = split_csv(line);
  Index y_col = -1, r_col = -1;
  std::vector<Index> x_cols;
  for (size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "Y" && y_col < 0)
      y_col = static_cast<Index>(c);
    else if (header[c] == "R" && r_col < 0)
      r_col = static_cast<Index>(c);
    else
      x_cols.push_back(static_cast<Index>(c));
  }
  if (y_col < 0) throw ValidationError("header is missing the Y column");
  if (r_col < 0) throw ValidationError("header is missing the R column");
  if (x_cols.empty()) throw ValidationError("header names no covariate columns");
  const size_t width = header.size();

  std::vector<double> y_rows;
  std::vector<int> r_rows;
  std::vector<double> x_rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != width)
      throw ValidationError(where + ": expected " + std::to_string(width) + " cells, found " +
                            std::to_string(cells.size()));

    double r_val = 0.0;
    if (!parse_double(cells[static_cast<size_t>(r_col)], &r_val) ||
        (r_val != 0.0 && r_val != 1.0))
      throw ValidationError(where + ": R must be 0 or 1");
    const int r = static_cast<int>(r_val);

    double y_val = 0.0;
    const std::string& y_cell = cells[static_cast<size_t>(y_col)];
    if (y_cell.empty()) {
      if (r == 1) throw ValidationError(where + ": Y is missing but R = 1");
    } else {
      if (!parse_double(y_cell, &y_val))
        throw ValidationError(where + ": Y cell '" + y_cell + "' is not a number");
      if (!std::isfinite(y_val)) throw ValidationError(where + ": Y is not finite");
    }

    for (Index c : x_cols) {
      double v = 0.0;
      const std::string& cell = cells[static_cast<size_t>(c)];
      if (!parse_double(cell, &v))
        throw ValidationError(where + ": covariate cell '" + cell + "' is not a number");
      if (!std::isfinite(v)) throw ValidationError(where + ": covariate is not finite");
      x_rows.push_back(v);
    }
    y_rows.push_back(r == 0 && y_cell.empty() ? 0.0 : y_val);
    r_rows.push_back(r);
  }
  if (y_rows.empty()) throw ValidationError("input table has a header but no data rows");

  const Index n = static_cast<Index>(y_rows.size());
  const Index d = static_cast<Index>(x_cols.size());
  Vector y(n);
  IntVector mask(n);
  Matrix X(n, d);
  for (Index i = 0; i < n; ++i) {
    y[i] = y_rows[static_cast<size_t>(i)];
    mask[i] = r_rows[static_cast<size_t>(i)];
    for (Index j = 0; j < d; ++j) X(i, j) = x_rows[static_cast<size_t>(i * d + j)];
  }
  return Dataset(std::move(y), std::move(mask), std::move(X));
}

Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return read_dataset_csv(in);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::string cell;
  std::istringstream stream(text);
  while (std::getline(stream, cell, ',')) {
    cell = trim(cell);
    double v = 0.0;
    if (!parse_double(cell, &v))
      throw ValidationError("entry " + std::to_string(values.size() + 1) + " ('" + cell +
                            "') is not a number");
    values.push_back(v);
  }
  if (values.empty()) throw ValidationError("empty vector");
  Vector out(static_cast<Index>(values.size()));
  for (size_t k = 0; k < values.size(); ++k) out[static_cast<Index>(k)] = values[k];
  return out;
}

Vector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open vector file '" + path + "'");
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::istringstream pieces(token);
    std::string cell;
    while (std::getline(pieces, cell, ',')) {
      cell = trim(cell);
      if (cell.empty()) continue;
      double v = 0.0;
      if (!parse_double(cell, &v))
        throw ValidationError("vector file '" + path + "': entry " +
                              std::to_string(values.size() + 1) + " ('" + cell +
                              "') is not a number");
      values.push_back(v);
    }
  }
  if (values.empty()) throw ValidationError("vector file '" + path + "' holds no numbers");
  Vector out(static_cast<Index>(values.size()));
  for (size_t k = 0; k < values.size(); ++k) out[static_cast<Index>(k)] = values[k];
  return out;
}

}  // namespace debias
