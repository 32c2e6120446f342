#include "fnorm/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "fnorm/errors.hpp"
#include "fnorm/givens.hpp"
#include "fnorm/lu.hpp"

namespace fnorm::dense {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTheta13 = 5.371920351148152;
constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,       1323241920.0,
                              40840800.0,          960960.0,            16380.0,
                              182.0,               1.0};

DenseMatrix lincomb(double a, const DenseMatrix& x, double b, const DenseMatrix& y, double c,
                    const DenseMatrix& z) {
  DenseMatrix r(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j)
    for (std::size_t i = 0; i < x.rows(); ++i) r(i, j) = a * x(i, j) + b * y(i, j) + c * z(i, j);
  return r;
}

void add_identity(DenseMatrix& m, double a) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += a;
}

}  // namespace

DenseMatrix expm(const DenseMatrix& a_in) {
  if (!a_in.square()) throw DimensionError("expm: matrix is not square");
  if (!a_in.all_finite()) throw Error("expm: non-finite entries");
  const std::size_t n = a_in.rows();
  if (n == 0) return {};
  const double nrm = a_in.norm_one();
  int s = 0;
  if (nrm > kTheta13) s = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  DenseMatrix a = a_in;
  if (s > 0) a *= std::ldexp(1.0, -s);

  const auto& b = kPade13;
  const DenseMatrix a2 = a * a;
  const DenseMatrix a4 = a2 * a2;
  const DenseMatrix a6 = a4 * a2;
  DenseMatrix u_inner = a6 * lincomb(b[13], a6, b[11], a4, b[9], a2);
  u_inner += lincomb(b[7], a6, b[5], a4, b[3], a2);
  add_identity(u_inner, b[1]);
  const DenseMatrix u = a * u_inner;
  DenseMatrix v = a6 * lincomb(b[12], a6, b[10], a4, b[8], a2);
  v += lincomb(b[6], a6, b[4], a4, b[2], a2);
  add_identity(v, b[0]);

  DenseMatrix x = solve(v - u, v + u);
  for (int k = 0; k < s; ++k) x = x * x;
  return x;
}

DenseMatrix sqrtm_triangular(const DenseMatrix& t) {
  const std::size_t n = t.rows();
  DenseMatrix r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    r(j, j) = std::sqrt(t(j, j));
    for (std::size_t ii = j; ii-- > 0;) {
      Complex s = t(ii, j);
      for (std::size_t k = ii + 1; k < j; ++k) s -= r(ii, k) * r(k, j);
      const Complex den = r(ii, ii) + r(j, j);
      if (den == Complex{}) throw SingularMatrixError("sqrtm_triangular: singular recurrence");
      r(ii, j) = s / den;
    }
  }
  return r;
}

DenseMatrix phi1m(const DenseMatrix& x) {
  const std::size_t n = x.rows();
  DenseMatrix aug(2 * n, 2 * n);
  aug.set_block(0, 0, x);
  for (std::size_t i = 0; i < n; ++i) aug(i, n + i) = 1.0;
  return expm(aug).block(0, n, n, n);
}

DenseMatrix triangular_matfun(const DenseMatrix& t, ScalarFunction f) {
  switch (f.id()) {
    case FunctionId::identity: return t;
    case FunctionId::exp: return expm(t);
    case FunctionId::expneg: return expm(Complex(-1.0) * t);
    case FunctionId::sqrt: return sqrtm_triangular(t);
    case FunctionId::invsqrt: return triangular_inverse(sqrtm_triangular(t));
    case FunctionId::phi: {
      // (exp(-s) - 1)/s^2 = -phi1(-s) s^{-1}, s = sqrt(t)
      const DenseMatrix s = sqrtm_triangular(t);
      return Complex(-1.0) * (phi1m(Complex(-1.0) * s) * triangular_inverse(s));
    }
  }
  return t;
}

namespace {

// Exchange diagonal entries k and k+1 of the Schur form.
void swap_adjacent(SchurForm& s, std::size_t k) {
  DenseMatrix& t = s.t;
  const std::size_t n = t.rows();
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  if (t11 == t22) return;
  const auto g = Givens::make(t(k, k + 1), t22 - t11);
  g.apply_left(t, k, k + 1, k, n);
  g.apply_right_adjoint(t, k, k + 1, 0, k + 2);
  g.apply_right_adjoint(s.z, k, k + 1, 0, n);
  t(k + 1, k) = 0.0;
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
}

// Connected components of eigenvalues under |l_i - l_j| <= gap.
std::vector<std::size_t> cluster_ids(const std::vector<Complex>& lambda, double gap) {
  const std::size_t n = lambda.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(lambda[i] - lambda[j]) <= gap) parent[find(i)] = find(j);
  std::vector<std::size_t> id(n);
  std::vector<std::size_t> root_to_id(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (root_to_id[r] == n) root_to_id[r] = next++;
    id[i] = root_to_id[r];
  }
  return id;
}

struct Breakdown {
  std::size_t left, right;  // cluster ids to merge
};

// Solves a x - x b = c for upper triangular a, b. Returns false on a tiny
// denominator.
bool triangular_sylvester(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                          double tiny) {
  const std::size_t m = a.rows();
  const std::size_t n = b.rows();
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t l = 0; l < col; ++l) {
      const Complex blc = b(l, col);
      if (blc == Complex{}) continue;
      for (std::size_t r = 0; r < m; ++r) c(r, col) += c(r, l) * blc;
    }
    const Complex mu = b(col, col);
    for (std::size_t r = m; r-- > 0;) {
      Complex s = c(r, col);
      for (std::size_t q = r + 1; q < m; ++q) s -= a(r, q) * c(q, col);
      const Complex den = a(r, r) - mu;
      if (std::abs(den) <= tiny) return false;
      c(r, col) = s / den;
    }
  }
  return true;
}

}  // namespace

DenseMatrix schur_parlett(SchurForm s, ScalarFunction f, double cluster_gap) {
  const std::size_t n = s.t.rows();
  if (n == 0) return {};
  std::vector<Complex> lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = s.t(i, i);
  std::vector<std::size_t> cluster = cluster_ids(lambda, cluster_gap);
  const double tiny = 10.0 * kEps * std::max(s.t.norm_fro(), 1e-300);

  for (std::size_t attempt = 0; attempt <= n; ++attempt) {
    // Bubble positions into cluster order with adjacent swaps.
    std::vector<std::size_t>& pos_cluster = cluster;
    for (std::size_t pass = 0; pass < n; ++pass) {
      bool moved = false;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        if (pos_cluster[k] > pos_cluster[k + 1]) {
          swap_adjacent(s, k);
          std::swap(pos_cluster[k], pos_cluster[k + 1]);
          moved = true;
        }
      }
      if (!moved) break;
    }
    std::vector<std::size_t> start{0};
    for (std::size_t k = 1; k < n; ++k)
      if (pos_cluster[k] != pos_cluster[k - 1]) start.push_back(k);
    start.push_back(n);
    const std::size_t p = start.size() - 1;

    DenseMatrix ft(n, n);
    auto blk = [&](const DenseMatrix& m, std::size_t i, std::size_t j) {
      return m.block(start[i], start[j], start[i + 1] - start[i], start[j + 1] - start[j]);
    };
    for (std::size_t i = 0; i < p; ++i) ft.set_block(start[i], start[i], triangular_matfun(blk(s.t, i, i), f));

    bool ok = true;
    Breakdown bad{};
    for (std::size_t j = 1; j < p && ok; ++j) {
      const DenseMatrix tjj = blk(s.t, j, j);
      const DenseMatrix fjj = blk(ft, j, j);
      for (std::size_t i = j; i-- > 0;) {
        const DenseMatrix tij = blk(s.t, i, j);
        DenseMatrix c = blk(ft, i, i) * tij - tij * fjj;
        for (std::size_t k = i + 1; k < j; ++k) c += blk(ft, i, k) * blk(s.t, k, j) - blk(s.t, i, k) * blk(ft, k, j);
        if (!triangular_sylvester(blk(s.t, i, i), tjj, c, tiny)) {
          ok = false;
          bad = {pos_cluster[start[i]], pos_cluster[start[j]]};
          break;
        }
        ft.set_block(start[i], start[j], c);
      }
    }
    if (ok) return s.z * ft * s.z.adjoint();
    // Merge the two offending clusters and retry.
    for (auto& c : cluster)
      if (c == bad.right) c = bad.left;
  }
  throw Error("schur_parlett: block recurrence broke down after cluster merging");
}

namespace {

void check_domain(const DenseMatrix& t, ScalarFunction f, double hn) {
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const Complex lambda = t(i, i);
    if (distance_to_negative_axis(lambda) <= 1e-12 * hn) {
      std::ostringstream os;
      os << f.name() << ": eigenvalue " << lambda.real() << (lambda.imag() < 0 ? "" : "+")
         << lambda.imag() << "i of the projected matrix is on or near the branch cut (-inf, 0]";
      throw DomainError(os.str(), lambda);
    }
  }
}

}  // namespace

CVector dense_matfun_e1(const DenseMatrix& h, ScalarFunction f, Complex beta) {
  if (!h.square()) throw DimensionError("dense_matfun: matrix is not square");
  if (!h.all_finite()) throw Error("dense_matfun: non-finite entries");
  const std::size_t n = h.rows();
  auto first_column = [&](const DenseMatrix& m) {
    CVector c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = beta * m(i, 0);
    return c;
  };
  switch (f.id()) {
    case FunctionId::identity: return first_column(h);
    case FunctionId::exp: return first_column(expm(h));
    case FunctionId::expneg: return first_column(expm(Complex(-1.0) * h));
    default: break;
  }
  if (n == 0) return {};
  const SchurFactor sf = schur_factor(h);
  check_domain(sf.t, f, h.norm_fro());
  const DenseMatrix y = triangular_eigenvectors(sf.t);
  const DenseMatrix yinv = triangular_inverse(y);
  if (y.norm_one() * yinv.norm_one() > kDiagonalizationConditionLimit) return first_column(dense_matfun(h, f));
  CVector e1(n);
  e1[0] = beta;
  CVector w = yinv * std::span<const Complex>(sf.apply_z_adjoint(e1));
  for (std::size_t i = 0; i < n; ++i) w[i] *= f(sf.t(i, i));
  return sf.apply_z(y * std::span<const Complex>(w));
}

DenseMatrix dense_matfun(const DenseMatrix& h, ScalarFunction f, MatfunRoute* route) {
  if (!h.square()) throw DimensionError("dense_matfun: matrix is not square");
  if (!h.all_finite()) throw Error("dense_matfun: non-finite entries");
  auto set_route = [&](MatfunRoute r) {
    if (route) *route = r;
  };
  switch (f.id()) {
    case FunctionId::identity: set_route(MatfunRoute::identity); return h;
    case FunctionId::exp: set_route(MatfunRoute::pade); return expm(h);
    case FunctionId::expneg: set_route(MatfunRoute::pade); return expm(Complex(-1.0) * h);
    default: break;
  }
  const std::size_t n = h.rows();
  if (n == 0) return {};
  SchurForm s = schur(h);
  const double hn = h.norm_fro();
  check_domain(s.t, f, hn);
  const DenseMatrix y = triangular_eigenvectors(s.t);
  const DenseMatrix yinv = triangular_inverse(y);
  const double kappa = y.norm_one() * yinv.norm_one();
  if (kappa <= kDiagonalizationConditionLimit) {
    set_route(MatfunRoute::diagonalization);
    DenseMatrix yf = y;
    for (std::size_t j = 0; j < n; ++j) {
      const Complex fj = f(s.t(j, j));
      for (std::size_t i = 0; i <= j; ++i) yf(i, j) *= fj;
    }
    const DenseMatrix zy = s.z * yf;
    return zy * (yinv * s.z.adjoint());
  }
  set_route(MatfunRoute::schur_parlett);
  return schur_parlett(std::move(s), f, 0.1 * hn);
}

}  // namespace fnorm::dense
