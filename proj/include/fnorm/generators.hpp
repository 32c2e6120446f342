#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fnorm/dense_matrix.hpp"
#include "fnorm/linear_operator.hpp"

namespace fnorm {

enum class MatrixKind { A1, A2, A3, A4, A5, file, dense };

/// Description of a test operator.
///
///   A1  tridiag(0, lambda_i, 0.3), lambda_i = (1 + r1) + i (r2 - 0.5), r ~ U(0,1)
///   A2  tridiag(1.5, 2, -1)
///   A3  Toeplitz, row i: 4 at i-7, -2 at i-2, 10 at i, 6 at i+4
///   A4  Matrix Market file + shift * I
///   A5  -lap(u) - 100 u_x - 100 u_y, centered differences on a g x g grid of
///       the unit square, h = 1/(g+1), lexicographic order, scaled by h^2
struct MatrixSpec {
  MatrixKind kind = MatrixKind::A2;
  std::size_t n = 10000;
  std::optional<std::uint64_t> seed;  ///< required for A1
  double shift = 10.0;                ///< A4 only
  std::string path;                   ///< A4 and file
  DenseMatrix values;                 ///< dense only

  static MatrixSpec a1(std::size_t n, std::uint64_t seed);
  static MatrixSpec a2(std::size_t n);
  static MatrixSpec a3(std::size_t n);
  static MatrixSpec a4(std::string path, double shift = 10.0);
  static MatrixSpec a5(std::size_t n);
  static MatrixSpec from_file(std::string path);
  static MatrixSpec from_dense(DenseMatrix values);
};

/// Throws DimensionError / ParseError when the spec is invalid.
LinearOperator build_operator(const MatrixSpec& spec);

/// "A2:n=10000", "A1:n=500:seed=7", "A4:path=e20r1000.mtx:shift=10",
/// "A5:n=2500", "file:path=m.mtx". n defaults to 10000.
MatrixSpec parse_matrix_spec(std::string_view text);

/// Canonical text form accepted by parse_matrix_spec (not for dense specs).
std::string to_string(const MatrixSpec& spec);

/// Short label used in result tables ("A2", "A4", "file").
std::string matrix_label(const MatrixSpec& spec);

}  // namespace fnorm
