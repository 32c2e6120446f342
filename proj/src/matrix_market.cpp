#include "fnorm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fnorm/errors.hpp"

namespace fnorm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

CsrMatrix read_matrix_market(std::istream& in) {
  std::string banner;
  if (!std::getline(in, banner)) throw ParseError("Matrix Market: empty input");
  std::istringstream bs(banner);
  std::string tag, object, format, field, symmetry;
  bs >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw ParseError("Matrix Market: missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError("Matrix Market: unsupported object '" + object + "'");
  if (format != "coordinate" && format != "array")
    throw ParseError("Matrix Market: unsupported format '" + format + "'");
  if (field != "real" && field != "complex" && field != "integer")
    throw ParseError("Matrix Market: unsupported field '" + field + "'");
  if (symmetry != "general")
    throw ParseError("Matrix Market: unsupported symmetry '" + symmetry + "' (only general)");
  const bool is_complex = field == "complex";

  std::string line;
  if (!next_data_line(in, line)) throw ParseError("Matrix Market: missing size line");
  std::istringstream ss(line);
  long long rows = -1, cols = -1, nnz = -1;
  ss >> rows >> cols;
  if (format == "coordinate") ss >> nnz;
  if (ss.fail() || rows <= 0 || cols <= 0 || (format == "coordinate" && nnz < 0))
    throw ParseError("Matrix Market: malformed size line '" + line + "'");

  auto read_value = [&](std::istringstream& ls) {
    double re = 0.0, im = 0.0;
    ls >> re;
    if (is_complex) ls >> im;
    if (ls.fail()) throw ParseError("Matrix Market: malformed entry '" + line + "'");
    return Complex(re, im);
  };

  std::vector<MatrixEntry> entries;
  const auto r = static_cast<std::size_t>(rows);
  const auto c = static_cast<std::size_t>(cols);
  if (format == "coordinate") {
    entries.reserve(static_cast<std::size_t>(nnz));
    for (long long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line)) throw ParseError("Matrix Market: fewer entries than declared");
      std::istringstream ls(line);
      long long i = 0, j = 0;
      ls >> i >> j;
      const Complex v = read_value(ls);
      if (i < 1 || j < 1 || i > rows || j > cols)
        throw ParseError("Matrix Market: index out of bounds in '" + line + "'");
      entries.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v});
    }
  } else {
    entries.reserve(r * c);
    for (std::size_t j = 0; j < c; ++j) {
      for (std::size_t i = 0; i < r; ++i) {
        if (!next_data_line(in, line)) throw ParseError("Matrix Market: fewer values than declared");
        std::istringstream ls(line);
        entries.push_back({i, j, read_value(ls)});
      }
    }
  }
  return CsrMatrix::from_entries(r, c, std::move(entries), true);
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("Matrix Market: cannot open '" + path.string() + "'");
  return read_matrix_market(in);
}

}  // namespace fnorm
