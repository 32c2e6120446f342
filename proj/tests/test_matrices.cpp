#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fnorm/errors.hpp"
#include "fnorm/generators.hpp"
#include "fnorm/lu.hpp"
#include "fnorm/matrix_market.hpp"
#include "oracle.hpp"

using namespace fnorm;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

LinearOperator build(std::string_view text) { return build_operator(parse_matrix_spec(text)); }

double adjoint_mismatch(const LinearOperator& a, unsigned seed) {
  const std::size_t n = a.dim();
  const CVector x = oracle::random_vector(n, seed);
  const CVector y = oracle::random_vector(n, seed + 1);
  const Complex lhs = dot(y, a.apply(x));
  const Complex rhs = dot(a.apply_adjoint(y), x);
  return std::abs(lhs - rhs) / (a.norm_fro() * norm2(x) * norm2(y));
}

}  // namespace

TEST(Generators, A2IsTridiagOnePointFiveTwoMinusOne) {
  const DenseMatrix d = build("A2:n=4").to_dense();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Complex want = 0.0;
      if (i == j) want = 2.0;
      if (i == j + 1) want = 1.5;
      if (j == i + 1) want = -1.0;
      EXPECT_EQ(d(i, j), want) << i << "," << j;
    }
}

TEST(Generators, A3RowStencil) {
  const LinearOperator a = build("A3:n=20");
  const CsrMatrix& m = a.matrix();
  // row 10 of the interior: 4 at -7, -2 at -2, 10 on the diagonal, 6 at +4
  for (std::size_t j = 0; j < 20; ++j) {
    const long off = static_cast<long>(j) - 10;
    Complex want = 0.0;
    if (off == -7) want = 4.0;
    if (off == -2) want = -2.0;
    if (off == 0) want = 10.0;
    if (off == 4) want = 6.0;
    EXPECT_EQ(m.at(10, j), want) << j;
  }
  EXPECT_EQ(m.lower_bandwidth(), 7u);
  EXPECT_EQ(m.upper_bandwidth(), 4u);
  EXPECT_EQ(m.at(0, 0), Complex(10.0));
  EXPECT_EQ(m.at(0, 4), Complex(6.0));
  EXPECT_EQ(m.at(19, 12), Complex(4.0));
}

TEST(Generators, A5HandAssembledThreeByThreeGrid) {
  // -u_xx - u_yy - 100 u_x - 100 u_y, centered differences, h = 1/4, times h^2
  const double h = 0.25;
  const DenseMatrix d = build("A5:n=9").to_dense();
  DenseMatrix want(9, 9);
  for (std::size_t gy = 0; gy < 3; ++gy)
    for (std::size_t gx = 0; gx < 3; ++gx) {
      const std::size_t k = gx + 3 * gy;
      want(k, k) = 4.0;
      if (gx > 0) want(k, k - 1) = -1.0 + 50.0 * h;
      if (gx < 2) want(k, k + 1) = -1.0 - 50.0 * h;
      if (gy > 0) want(k, k - 3) = -1.0 + 50.0 * h;
      if (gy < 2) want(k, k + 3) = -1.0 - 50.0 * h;
    }
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) EXPECT_NEAR(std::abs(d(i, j) - want(i, j)), 0.0, 1e-15);
  // center node
  EXPECT_DOUBLE_EQ(d(4, 4).real(), 4.0);
  EXPECT_DOUBLE_EQ(d(4, 5).real(), -13.5);
  EXPECT_DOUBLE_EQ(d(4, 3).real(), 11.5);
}

TEST(Generators, A5RejectsNonSquareSize) {
  EXPECT_THROW(build("A5:n=10"), DimensionError);
}

TEST(Generators, DenseIdentityAppliesAsIdentity) {
  const LinearOperator a = build_operator(MatrixSpec::from_dense(DenseMatrix::identity(3)));
  const CVector x{{1, 2}, {3, -1}, {0, 5}};
  EXPECT_EQ(a.apply(x), x);
  EXPECT_EQ(a.apply_adjoint(x), x);
}

TEST(Generators, A1IsSeededAndStructured) {
  const DenseMatrix a = build("A1:n=30:seed=5").to_dense();
  const DenseMatrix b = build("A1:n=30:seed=5").to_dense();
  const DenseMatrix c = build("A1:n=30:seed=6").to_dense();
  bool same = true, differs = false;
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j) {
      same = same && a(i, j) == b(i, j);
      differs = differs || a(i, j) != c(i, j);
      if (j == i + 1) EXPECT_EQ(a(i, j), Complex(0.3));
      else if (i != j) EXPECT_EQ(a(i, j), Complex(0.0));
    }
  EXPECT_TRUE(same);
  EXPECT_TRUE(differs);
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_GT(a(i, i).real(), 1.0);
    EXPECT_LT(a(i, i).real(), 2.0);
    EXPECT_GT(a(i, i).imag(), -0.5);
    EXPECT_LT(a(i, i).imag(), 0.5);
  }
  EXPECT_THROW(parse_matrix_spec("A1:n=30"), ParseError);
}

TEST(Generators, DeterministicBuildsAreBitwiseIdentical) {
  for (const char* s : {"A2:n=100", "A3:n=100", "A5:n=100"}) EXPECT_EQ(build(s).matrix(), build(s).matrix()) << s;
}

TEST(Generators, AdjointProbing) {
  for (const char* kind : {"A1", "A2", "A3", "A5"})
    for (int n : {9, 100, 1024}) {
      std::string s = std::string(kind) + ":n=" + std::to_string(n);
      if (std::string_view(kind) == "A1") s += ":seed=3";
      const LinearOperator a = build(s);
      EXPECT_LE(adjoint_mismatch(a, n), 10.0 * n * kEps) << s;
    }
}

TEST(Generators, ApplyIsDeterministic) {
  const LinearOperator a = build("A5:n=100");
  const CVector x = oracle::random_vector(100, 4);
  EXPECT_EQ(a.apply(x), a.apply(x));
}

TEST(Generators, SpecTextRoundTrip) {
  for (const char* s : {"A2:n=10000", "A1:n=500:seed=7", "A5:n=2500", "A3:n=12"})
    EXPECT_EQ(to_string(parse_matrix_spec(s)), s);
  EXPECT_EQ(parse_matrix_spec("A2").n, 10000u);
  const MatrixSpec a4 = parse_matrix_spec("A4:path=e20r1000.mtx:shift=10");
  EXPECT_EQ(a4.kind, MatrixKind::A4);
  EXPECT_EQ(a4.path, "e20r1000.mtx");
  EXPECT_EQ(a4.shift, 10.0);
  EXPECT_THROW(parse_matrix_spec("A7:n=3"), ParseError);
  EXPECT_THROW(parse_matrix_spec("A2:n=abc"), ParseError);
  EXPECT_THROW(parse_matrix_spec("A2:m=3"), ParseError);
  EXPECT_THROW(parse_matrix_spec("A4"), ParseError);
}

TEST(MatrixMarket, SingleEntryCoordinate) {
  std::istringstream in("%%MatrixMarket matrix coordinate real general\n% comment\n2 2 1\n1 1 3.5\n");
  const CsrMatrix m = read_matrix_market(in);
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_EQ(m.nnz(), 1u);
  EXPECT_EQ(m.at(0, 0), Complex(3.5));
}

TEST(MatrixMarket, ArrayIsColumnMajor) {
  std::istringstream in("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  const DenseMatrix d = read_matrix_market(in).to_dense();
  EXPECT_EQ(d(0, 0), Complex(1.0));
  EXPECT_EQ(d(1, 0), Complex(2.0));
  EXPECT_EQ(d(0, 1), Complex(3.0));
  EXPECT_EQ(d(1, 1), Complex(4.0));
}

TEST(MatrixMarket, ComplexField) {
  std::istringstream in("%%MatrixMarket matrix coordinate complex general\n2 3 2\n1 3 1.5 -2\n2 1 0 1\n");
  const CsrMatrix m = read_matrix_market(in);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m.at(0, 2), Complex(1.5, -2.0));
  EXPECT_EQ(m.at(1, 0), Complex(0.0, 1.0));
}

TEST(MatrixMarket, Rejections) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_matrix_market(in);
  };
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 1\n"), ParseError);
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n"), ParseError);
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n"), ParseError);
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"), ParseError);
  EXPECT_THROW(parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"), ParseError);
  EXPECT_THROW(parse("not a banner\n"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(MatrixMarket, FileSpecWithShift) {
  const auto path = std::filesystem::temp_directory_path() / "fnorm_test_shift.mtx";
  {
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real general\n3 3 4\n1 1 1\n2 2 2\n3 3 3\n1 3 -1\n";
  }
  const LinearOperator a = build_operator(MatrixSpec::a4(path.string(), 10.0));
  const DenseMatrix d = a.to_dense();
  EXPECT_EQ(d(0, 0), Complex(11.0));
  EXPECT_EQ(d(2, 2), Complex(13.0));
  EXPECT_EQ(d(0, 2), Complex(-1.0));
  EXPECT_EQ(a.structure().kind, StructureKind::general_sparse);
  const LinearOperator plain = build_operator(MatrixSpec::from_file(path.string()));
  EXPECT_EQ(plain.to_dense()(1, 1), Complex(2.0));
  std::filesystem::remove(path);
  EXPECT_THROW(build_operator(MatrixSpec::a4("/nonexistent/e20r1000.mtx")), Error);
}

TEST(Csr, DuplicatesAndTranspose) {
  std::vector<MatrixEntry> e{{0, 1, 2.0}, {0, 1, 3.0}};
  EXPECT_THROW(CsrMatrix::from_entries(2, 2, e), ParseError);
  const CsrMatrix summed = CsrMatrix::from_entries(2, 2, e, false);
  EXPECT_EQ(summed.at(0, 1), Complex(5.0));
  const CsrMatrix t = CsrMatrix::from_entries(2, 2, {{0, 1, Complex(1, 2)}}).conj_transpose();
  EXPECT_EQ(t.at(1, 0), Complex(1, -2));
}

TEST(Csr, PermutedMatchesDefinition) {
  const DenseMatrix d = oracle::random_matrix(5, 5, 11);
  const CsrMatrix a = CsrMatrix::from_dense(d);
  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  const CsrMatrix p = a.permuted(perm);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(p.at(i, j), d(perm[i], perm[j]));
}

namespace {

double solve_residual(const LinearOperator& a, const CVector& b, bool adjoint) {
  const CVector x = dense::lu_solve(a.factorization(), b, adjoint);
  const CVector ax = adjoint ? a.apply_adjoint(x) : a.apply(x);
  return distance(ax, b) / (a.norm_fro() * norm2(x));
}

}  // namespace

TEST(Lu, IdentitySolve) {
  const LinearOperator a = build_operator(MatrixSpec::from_dense(DenseMatrix::identity(4)));
  const CVector b{{1, 0}, {2, 1}, {-3, 0}, {0, 4}};
  EXPECT_EQ(dense::lu_solve(a.factorization(), b), b);
}

TEST(Lu, ResidualsForEveryStructure) {
  // tridiagonal, banded, general sparse (through a file spec) and dense routes
  std::vector<LinearOperator> ops{build("A2:n=100"), build("A1:n=100:seed=2"), build("A3:n=300"),
                                  build("A5:n=400"),
                                  build_operator(MatrixSpec::from_dense(oracle::random_matrix(40, 40, 9)))};
  {
    const auto path = std::filesystem::temp_directory_path() / "fnorm_test_lu.mtx";
    std::ofstream out(path);
    const DenseMatrix d = build("A5:n=64").to_dense();
    std::size_t nnz = 0;
    for (std::size_t j = 0; j < 64; ++j)
      for (std::size_t i = 0; i < 64; ++i) nnz += d(i, j) != Complex{};
    out << "%%MatrixMarket matrix coordinate real general\n64 64 " << nnz << "\n";
    for (std::size_t j = 0; j < 64; ++j)
      for (std::size_t i = 0; i < 64; ++i)
        if (d(i, j) != Complex{}) out << i + 1 << " " << j + 1 << " " << d(i, j).real() << "\n";
    out.close();
    ops.push_back(build_operator(MatrixSpec::from_file(path.string())));
    std::filesystem::remove(path);
  }
  for (const auto& a : ops) {
    const std::size_t n = a.dim();
    CVector e1(n);
    e1[0] = 1.0;
    EXPECT_LE(solve_residual(a, e1, false), 1e3 * n * kEps);
    const CVector b = oracle::random_vector(n, 17);
    EXPECT_LE(solve_residual(a, b, false), 1e3 * n * kEps);
    EXPECT_LE(solve_residual(a, b, true), 1e3 * n * kEps);
  }
}

TEST(Lu, AdjointSolveMatchesEigen) {
  const LinearOperator a = build("A3:n=60");
  const CVector b = oracle::random_vector(60, 3);
  const oracle::Vec want = oracle::to_eigen(a).adjoint().partialPivLu().solve(oracle::to_eigen(b));
  const CVector x = dense::lu_solve(a.factorization(), b, true);
  EXPECT_LE((oracle::to_eigen(x) - want).norm() / want.norm(), 1e-12);
}

TEST(Lu, SingularMatrixIsReported) {
  DenseMatrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  const LinearOperator a = build_operator(MatrixSpec::from_dense(d));
  EXPECT_THROW(a.factorization(), SingularMatrixError);
  EXPECT_THROW(dense::TridiagonalLu({0.0}, {0.0, 0.0}, {0.0}), SingularMatrixError);
}

TEST(Lu, ReverseCuthillMcKeeIsPermutation) {
  const CsrMatrix a = build("A5:n=49").matrix();
  auto perm = dense::reverse_cuthill_mckee(a);
  std::sort(perm.begin(), perm.end());
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(perm[i], i);
}
