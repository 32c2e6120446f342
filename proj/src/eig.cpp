#include "fnorm/eig.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "fnorm/errors.hpp"
#include "fnorm/givens.hpp"
#include "fnorm/lu.hpp"

namespace fnorm::dense {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

void require_finite_square(const DenseMatrix& h, const char* who) {
  if (!h.square()) throw DimensionError(std::string(who) + ": matrix is not square");
  if (!h.all_finite()) throw Error(std::string(who) + ": non-finite entries");
}

// Subdiagonal entry t(i, i-1) is negligible relative to its neighbours.
bool negligible(DenseMatrix& t, std::size_t i, double small) {
  const double sd = abs1(t(i, i - 1));
  if (sd == 0.0) return true;
  double tst = abs1(t(i - 1, i - 1)) + abs1(t(i, i));
  if (tst == 0.0) {
    if (i >= 2) tst += abs1(t(i - 1, i - 2));
    if (i + 1 < t.rows()) tst += abs1(t(i + 1, i));
  }
  if (sd <= kEps * tst || sd <= small) {
    t(i, i - 1) = 0.0;
    return true;
  }
  return false;
}

Complex wilkinson_shift(const DenseMatrix& t, std::size_t iu, std::size_t iter) {
  if ((iter == 10 || iter == 30) && iu >= 2) {
    return std::abs(t(iu, iu - 1).real()) + std::abs(t(iu - 1, iu - 2).real());
  }
  Complex a = t(iu - 1, iu - 1);
  Complex b = t(iu - 1, iu);
  Complex c = t(iu, iu - 1);
  Complex d = t(iu, iu);
  const double scale = abs1(a) + abs1(b) + abs1(c) + abs1(d);
  if (scale == 0.0) return 0.0;
  a /= scale;
  b /= scale;
  c /= scale;
  d /= scale;
  const Complex bc = b * c;
  const Complex diff = a - d;
  const Complex disc = std::sqrt(diff * diff + 4.0 * bc);
  const Complex det = a * d - bc;
  const Complex trace = a + d;
  Complex e1 = 0.5 * (trace + disc);
  Complex e2 = 0.5 * (trace - disc);
  if (abs1(e1) > abs1(e2)) {
    e2 = det / e1;
  } else if (e2 != Complex{}) {
    e1 = det / e2;
  }
  return scale * (abs1(e1 - d) < abs1(e2 - d) ? e1 : e2);
}

}  // namespace

double eig_tolerance(std::size_t d) { return 1e3 * static_cast<double>(d) * kEps; }

namespace {

HessenbergResult hessenberg_impl(const DenseMatrix& h, bool want_q) {
  require_finite_square(h, "hessenberg_reduce");
  const std::size_t n = h.rows();
  HessenbergResult out{want_q ? DenseMatrix::identity(n) : DenseMatrix{}, h};
  DenseMatrix& a = out.hess;
  DenseMatrix& q = out.q;
  CVector v(n);
  CVector s(n);
  // m <- m (I - 2 v v^*) on columns k+1.., column-oriented
  auto right_update = [&](DenseMatrix& m, std::size_t k, std::size_t len) {
    std::fill(s.begin(), s.end(), Complex{});
    for (std::size_t l = 0; l < len; ++l) {
      const Complex vl = v[l];
      const Complex* col = m.data() + (k + 1 + l) * n;
      for (std::size_t i = 0; i < n; ++i) s[i] += col[i] * vl;
    }
    for (std::size_t l = 0; l < len; ++l) {
      const Complex cv = 2.0 * std::conj(v[l]);
      Complex* col = m.data() + (k + 1 + l) * n;
      for (std::size_t i = 0; i < n; ++i) col[i] -= s[i] * cv;
    }
  };
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;
    const Complex x0 = a(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    v.assign(len, Complex{});
    v[0] = x0 - alpha;
    for (std::size_t i = 1; i < len; ++i) v[i] = a(k + 1 + i, k);
    const double vn = norm2(v);
    for (auto& e : v) e /= vn;
    // a <- (I - 2 v v^*) a on rows k+1.., then a <- a (I - 2 v v^*) on cols k+1..
    for (std::size_t j = k + 1; j < n; ++j) {
      Complex* col = a.data() + j * n + k + 1;
      Complex sum{};
      for (std::size_t i = 0; i < len; ++i) sum += std::conj(v[i]) * col[i];
      sum *= 2.0;
      for (std::size_t i = 0; i < len; ++i) col[i] -= v[i] * sum;
    }
    right_update(a, k, len);
    if (want_q) right_update(q, k, len);
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
  return out;
}

// Single-shift QR on the Hessenberg matrix t. Without z only the active
// window is updated, which leaves t triangular on the diagonal but not a
// valid Schur form above it.
void qr_iterate(DenseMatrix& t, DenseMatrix* z, std::vector<PlaneRotation>* log = nullptr) {
  const std::size_t n = t.rows();
  if (n < 2) return;
  const bool full = z != nullptr || log != nullptr;
  const double small = DBL_MIN * static_cast<double>(n) / kEps;
  const std::size_t max_total = 30 * n;
  std::size_t iu = n - 1;
  std::size_t iter = 0;
  std::size_t total = 0;
  while (true) {
    while (iu > 0 && negligible(t, iu, small)) {
      iter = 0;
      --iu;
    }
    if (iu == 0) break;
    ++iter;
    if (++total > max_total) {
      throw ConvergenceError("schur: QR iteration did not converge for eigenvalue index " +
                                 std::to_string(iu),
                             iu);
    }
    std::size_t il = iu - 1;
    while (il > 0 && !negligible(t, il, small)) --il;

    const std::size_t col_end = full ? n : iu + 1;
    const std::size_t row_begin = full ? 0 : il;
    const Complex shift = wilkinson_shift(t, iu, iter);
    auto g = Givens::make(t(il, il) - shift, t(il + 1, il));
    g.apply_left(t, il, il + 1, il, col_end);
    g.apply_right_adjoint(t, il, il + 1, row_begin, std::min(il + 2, iu) + 1);
    if (z) g.apply_right_adjoint(*z, il, il + 1, 0, n);
    if (log) log->push_back({il, g.c, g.s});
    for (std::size_t i = il + 1; i < iu; ++i) {
      Complex r;
      g = Givens::make(t(i, i - 1), t(i + 1, i - 1), &r);
      t(i, i - 1) = r;
      t(i + 1, i - 1) = 0.0;
      g.apply_left(t, i, i + 1, i, col_end);
      g.apply_right_adjoint(t, i, i + 1, row_begin, std::min(i + 2, iu) + 1);
      if (z) g.apply_right_adjoint(*z, i, i + 1, 0, n);
      if (log) log->push_back({i, g.c, g.s});
    }
  }
}

}  // namespace

HessenbergResult hessenberg_reduce(const DenseMatrix& h) { return hessenberg_impl(h, true); }

SchurForm schur(const DenseMatrix& h) {
  auto hr = hessenberg_impl(h, true);
  SchurForm s{std::move(hr.q), std::move(hr.hess)};
  qr_iterate(s.t, &s.z);
  const std::size_t n = s.t.rows();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) s.t(i, j) = 0.0;
  return s;
}

SchurFactor schur_factor(const DenseMatrix& h) {
  auto hr = hessenberg_impl(h, true);
  SchurFactor f;
  f.q = std::move(hr.q);
  f.t = std::move(hr.hess);
  qr_iterate(f.t, nullptr, &f.rotations);
  const std::size_t n = f.t.rows();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) f.t(i, j) = 0.0;
  return f;
}

// z = q G_1^* G_2^* ... G_m^*
CVector SchurFactor::apply_z(CVector w) const {
  for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
    const Complex a = w[it->i];
    const Complex b = w[it->i + 1];
    w[it->i] = it->c * a - it->s * b;
    w[it->i + 1] = std::conj(it->s) * a + it->c * b;
  }
  return q * std::span<const Complex>(w);
}

CVector SchurFactor::apply_z_adjoint(std::span<const Complex> x) const {
  CVector w(q.cols());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = dot(q.col(j), x);
  for (const auto& r : rotations) {
    const Complex a = w[r.i];
    const Complex b = w[r.i + 1];
    w[r.i] = r.c * a + r.s * b;
    w[r.i + 1] = -std::conj(r.s) * a + r.c * b;
  }
  return w;
}

std::vector<Complex> eigenvalues(const DenseMatrix& h) {
  DenseMatrix t = hessenberg_impl(h, false).hess;
  qr_iterate(t, nullptr);
  std::vector<Complex> out(t.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = t(i, i);
  return out;
}

CVector inverse_iteration(const DenseMatrix& h, Complex lambda, std::size_t steps) {
  const std::size_t n = h.rows();
  if (n == 0) return {};
  const double shift = 10.0 * kEps * std::max(h.norm_fro(), DBL_MIN);
  DenseMatrix a = h;
  const Complex mu = lambda + Complex(shift, shift);
  for (std::size_t i = 0; i < n; ++i) a(i, i) -= mu;
  const DenseLu lu(std::move(a));
  CVector x(n);
  // Deterministic start with no special alignment.
  for (std::size_t i = 0; i < n; ++i) x[i] = Complex(1.0 + 0.37 * std::sin(1.0 + static_cast<double>(i)), 0.11 * std::cos(3.0 * static_cast<double>(i)));
  for (std::size_t s = 0; s < steps; ++s) {
    lu.solve_in_place(x);
    const double nx = norm2(x);
    if (!(nx > 0.0) || !std::isfinite(nx)) throw Error("inverse_iteration: breakdown");
    for (auto& v : x) v /= nx;
  }
  return x;
}

namespace {

CVector triangular_eigenvector(const DenseMatrix& t, std::size_t k, double norm_t) {
  CVector y(k + 1);
  y[k] = 1.0;
  const Complex lambda = t(k, k);
  const double smin = std::max({kEps * std::abs(lambda), 1e-3 * kEps * norm_t, DBL_MIN});
  for (std::size_t ii = k; ii-- > 0;) {
    Complex s{};
    for (std::size_t j = ii + 1; j <= k; ++j) s += t(ii, j) * y[j];
    Complex d = t(ii, ii) - lambda;
    if (std::abs(d) < smin) d = smin;
    y[ii] = -s / d;
    if (std::abs(y[ii]) > 1e150) {
      const double f = 1.0 / std::abs(y[ii]);
      for (std::size_t j = ii; j <= k; ++j) y[j] *= f;
    }
  }
  const double nrm = norm2(y);
  for (auto& v : y) v /= nrm;
  return y;
}

}  // namespace

DenseMatrix triangular_eigenvectors(const DenseMatrix& t) {
  const std::size_t n = t.rows();
  DenseMatrix y(n, n);
  const double nt = t.norm_fro();
  for (std::size_t k = 0; k < n; ++k) {
    const auto col = triangular_eigenvector(t, k, nt);
    for (std::size_t i = 0; i <= k; ++i) y(i, k) = col[i];
  }
  return y;
}

CVector schur_eigenvector(const SchurForm& s, std::size_t k) {
  const auto y = triangular_eigenvector(s.t, k, s.t.norm_fro());
  const std::size_t n = s.t.rows();
  CVector x(n);
  for (std::size_t j = 0; j <= k; ++j) axpy(y[j], s.z.col(j), x);
  const double nrm = norm2(x);
  for (auto& v : x) v /= nrm;
  return x;
}

DenseMatrix triangular_inverse(const DenseMatrix& t) {
  const std::size_t n = t.rows();
  DenseMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (t(j, j) == Complex{}) throw SingularMatrixError("triangular_inverse: zero diagonal");
    inv(j, j) = 1.0 / t(j, j);
    for (std::size_t ii = j; ii-- > 0;) {
      Complex s{};
      for (std::size_t k = ii + 1; k <= j; ++k) s += t(ii, k) * inv(k, j);
      inv(ii, j) = -s / t(ii, ii);
    }
  }
  return inv;
}

EigDecomp eig_dense(const DenseMatrix& h) {
  require_finite_square(h, "eig_dense");
  const auto s = schur(h);
  const std::size_t n = h.rows();
  EigDecomp out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = s.t(i, i);
  const DenseMatrix y = triangular_eigenvectors(s.t);
  out.vectors = s.z * y;
  if (n > 0) out.condition_estimate = y.norm_one() * triangular_inverse(y).norm_one();
  return out;
}

}  // namespace fnorm::dense
