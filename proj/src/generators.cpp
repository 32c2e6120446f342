#include "fnorm/generators.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "fnorm/errors.hpp"
#include "fnorm/matrix_market.hpp"
#include "fnorm/random.hpp"

namespace fnorm {

MatrixSpec MatrixSpec::a1(std::size_t n, std::uint64_t seed) {
  MatrixSpec s;
  s.kind = MatrixKind::A1;
  s.n = n;
  s.seed = seed;
  return s;
}

MatrixSpec MatrixSpec::a2(std::size_t n) {
  MatrixSpec s;
  s.kind = MatrixKind::A2;
  s.n = n;
  return s;
}

MatrixSpec MatrixSpec::a3(std::size_t n) {
  MatrixSpec s;
  s.kind = MatrixKind::A3;
  s.n = n;
  return s;
}

MatrixSpec MatrixSpec::a4(std::string path, double shift) {
  MatrixSpec s;
  s.kind = MatrixKind::A4;
  s.path = std::move(path);
  s.shift = shift;
  s.n = 0;
  return s;
}

MatrixSpec MatrixSpec::a5(std::size_t n) {
  MatrixSpec s;
  s.kind = MatrixKind::A5;
  s.n = n;
  return s;
}

MatrixSpec MatrixSpec::from_file(std::string path) {
  MatrixSpec s;
  s.kind = MatrixKind::file;
  s.path = std::move(path);
  s.n = 0;
  return s;
}

MatrixSpec MatrixSpec::from_dense(DenseMatrix values) {
  MatrixSpec s;
  s.kind = MatrixKind::dense;
  s.n = values.rows();
  s.values = std::move(values);
  return s;
}

namespace {

void require_n(const MatrixSpec& spec, std::size_t min_n) {
  if (spec.n < min_n)
    throw DimensionError(matrix_label(spec) + ": n must be at least " + std::to_string(min_n));
}

LinearOperator build_a1(const MatrixSpec& spec) {
  require_n(spec, 1);
  if (!spec.seed) throw DimensionError("A1: a seed is required");
  Rng rng(*spec.seed);
  std::vector<MatrixEntry> e;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    e.push_back({i, i, Complex(1.0 + r1, r2 - 0.5)});
    if (i + 1 < spec.n) e.push_back({i, i + 1, 0.3});
  }
  return LinearOperator(CsrMatrix::from_entries(spec.n, spec.n, std::move(e)),
                        {StructureKind::tridiagonal, 1, 1});
}

LinearOperator build_a2(const MatrixSpec& spec) {
  require_n(spec, 1);
  std::vector<MatrixEntry> e;
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (i > 0) e.push_back({i, i - 1, 1.5});
    e.push_back({i, i, 2.0});
    if (i + 1 < spec.n) e.push_back({i, i + 1, -1.0});
  }
  return LinearOperator(CsrMatrix::from_entries(spec.n, spec.n, std::move(e)),
                        {StructureKind::tridiagonal, 1, 1});
}

LinearOperator build_a3(const MatrixSpec& spec) {
  require_n(spec, 1);
  struct Diag {
    long offset;
    double value;
  };
  constexpr Diag stencil[] = {{-7, 4.0}, {-2, -2.0}, {0, 10.0}, {4, 6.0}};
  const long n = static_cast<long>(spec.n);
  std::vector<MatrixEntry> e;
  for (long i = 0; i < n; ++i)
    for (const auto& d : stencil)
      if (i + d.offset >= 0 && i + d.offset < n)
        e.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i + d.offset), d.value});
  return LinearOperator(CsrMatrix::from_entries(spec.n, spec.n, std::move(e)),
                        {StructureKind::banded, std::min<std::size_t>(7, spec.n - 1),
                         std::min<std::size_t>(4, spec.n - 1)});
}

LinearOperator build_a5(const MatrixSpec& spec) {
  require_n(spec, 1);
  const auto g = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(spec.n))));
  if (g * g != spec.n)
    throw DimensionError("A5: n = " + std::to_string(spec.n) + " is not a perfect square");
  const double h = 1.0 / static_cast<double>(g + 1);
  const double c = 50.0 * h;  // h^2 * 100 / (2h)
  std::vector<MatrixEntry> e;
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t i = 0; i < g; ++i) {
      const std::size_t k = i + g * j;
      if (j > 0) e.push_back({k, k - g, -1.0 + c});
      if (i > 0) e.push_back({k, k - 1, -1.0 + c});
      e.push_back({k, k, 4.0});
      if (i + 1 < g) e.push_back({k, k + 1, -1.0 - c});
      if (j + 1 < g) e.push_back({k, k + g, -1.0 - c});
    }
  }
  const std::size_t band = std::min(g, spec.n - 1);
  return LinearOperator(CsrMatrix::from_entries(spec.n, spec.n, std::move(e)),
                        {StructureKind::banded, band, band});
}

LinearOperator build_from_file(const MatrixSpec& spec, Complex shift) {
  CsrMatrix a = read_matrix_market(std::filesystem::path(spec.path));
  if (a.rows() != a.cols())
    throw DimensionError("matrix file '" + spec.path + "' is not square");
  if (spec.n != 0 && spec.n != a.rows())
    throw DimensionError("matrix file '" + spec.path + "' has dimension " +
                         std::to_string(a.rows()) + ", expected " + std::to_string(spec.n));
  if (shift != Complex{}) a = a.shifted(shift);
  return LinearOperator(std::move(a), {StructureKind::general_sparse, 0, 0});
}

}  // namespace

LinearOperator build_operator(const MatrixSpec& spec) {
  switch (spec.kind) {
    case MatrixKind::A1: return build_a1(spec);
    case MatrixKind::A2: return build_a2(spec);
    case MatrixKind::A3: return build_a3(spec);
    case MatrixKind::A5: return build_a5(spec);
    case MatrixKind::A4: return build_from_file(spec, spec.shift);
    case MatrixKind::file: return build_from_file(spec, 0.0);
    case MatrixKind::dense:
      if (!spec.values.square() || spec.values.rows() == 0)
        throw DimensionError("dense matrix spec must be square and non-empty");
      return LinearOperator(CsrMatrix::from_dense(spec.values),
                            {StructureKind::dense, spec.values.rows() - 1, spec.values.rows() - 1});
  }
  throw DimensionError("unknown matrix kind");
}

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError("matrix spec: bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

}  // namespace

MatrixSpec parse_matrix_spec(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(':', start);
    const auto stop = pos == std::string_view::npos ? text.size() : pos;
    parts.push_back(text.substr(start, stop - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  MatrixSpec spec;
  const auto kind = parts.front();
  if (kind == "A1") spec.kind = MatrixKind::A1;
  else if (kind == "A2") spec.kind = MatrixKind::A2;
  else if (kind == "A3") spec.kind = MatrixKind::A3;
  else if (kind == "A4") spec.kind = MatrixKind::A4, spec.n = 0;
  else if (kind == "A5") spec.kind = MatrixKind::A5;
  else if (kind == "file") spec.kind = MatrixKind::file, spec.n = 0;
  else throw ParseError("matrix spec: unknown kind '" + std::string(kind) + "'");

  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto eq = parts[k].find('=');
    if (eq == std::string_view::npos)
      throw ParseError("matrix spec: expected key=value, got '" + std::string(parts[k]) + "'");
    const auto key = parts[k].substr(0, eq);
    const auto val = parts[k].substr(eq + 1);
    if (key == "n") spec.n = parse_number<std::size_t>(key, val);
    else if (key == "seed") spec.seed = parse_number<std::uint64_t>(key, val);
    else if (key == "shift") spec.shift = parse_number<double>(key, val);
    else if (key == "path") spec.path = std::string(val);
    else throw ParseError("matrix spec: unknown key '" + std::string(key) + "'");
  }
  if ((spec.kind == MatrixKind::A4 || spec.kind == MatrixKind::file) && spec.path.empty())
    throw ParseError("matrix spec: " + std::string(kind) + " requires path=");
  if (spec.kind == MatrixKind::A1 && !spec.seed)
    throw ParseError("matrix spec: A1 requires seed=");
  return spec;
}

std::string matrix_label(const MatrixSpec& spec) {
  switch (spec.kind) {
    case MatrixKind::A1: return "A1";
    case MatrixKind::A2: return "A2";
    case MatrixKind::A3: return "A3";
    case MatrixKind::A4: return "A4";
    case MatrixKind::A5: return "A5";
    case MatrixKind::file: return "file";
    case MatrixKind::dense: return "dense";
  }
  return "unknown";
}

std::string to_string(const MatrixSpec& spec) {
  std::ostringstream os;
  os << matrix_label(spec);
  switch (spec.kind) {
    case MatrixKind::A1: os << ":n=" << spec.n << ":seed=" << spec.seed.value_or(0); break;
    case MatrixKind::A2:
    case MatrixKind::A3:
    case MatrixKind::A5: os << ":n=" << spec.n; break;
    case MatrixKind::A4: os << ":path=" << spec.path << ":shift=" << spec.shift; break;
    case MatrixKind::file: os << ":path=" << spec.path; break;
    case MatrixKind::dense: os << ":n=" << spec.n; break;
  }
  return os.str();
}

}  // namespace fnorm
