#include "fnorm/inner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fnorm/errors.hpp"
#include "fnorm/matfun.hpp"

namespace fnorm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Coefficients of z_k in the basis, c = beta f(H_k) e1.
CVector projected_coefficients(const DenseMatrix& h, ScalarFunction f, double beta) {
  return dense::dense_matfun_e1(h, f, beta);
}

double coefficient_distance(const CVector& longer, const CVector& shorter) {
  double s = 0.0;
  for (std::size_t i = 0; i < longer.size(); ++i) {
    const Complex d = longer[i] - (i < shorter.size() ? shorter[i] : Complex{});
    s += std::norm(d);
  }
  return std::sqrt(s);
}

CVector combine(const std::vector<CVector>& basis, const CVector& c, std::size_t n) {
  CVector z(n);
  for (std::size_t k = 0; k < c.size(); ++k) axpy(c[k], basis[k], z);
  return z;
}

// Tracks iterates and applies the omega test. Iterates are kept as coefficient
// vectors; nested orthonormal bases make ||z_{k+j} - z_k|| a coefficient norm.
class OmegaMonitor {
 public:
  explicit OmegaMonitor(const InnerConfig& cfg) : cfg_(cfg) {}

  // Returns true when iterate (size() - 1 - lag) is certified.
  bool push(CVector c) {
    iterates_.push_back(std::move(c));
    const std::size_t last = iterates_.size() - 1;
    if (last < cfg_.lag) return false;
    const CVector& zk = iterates_[last - cfg_.lag];
    const double nz = norm2(zk);
    if (nz == 0.0) {
      omega_.push_back(std::numeric_limits<double>::infinity());
      return false;
    }
    const double w = coefficient_distance(iterates_[last], zk) / nz;
    omega_.push_back(w);
    if (w >= 1.0) return false;
    const double est = w / (1.0 - w);
    estimate_ = est * nz;
    if (cfg_.reference_norm) return estimate_ <= cfg_.eps_inner * *cfg_.reference_norm;
    return est <= cfg_.eps_inner;
  }

  const CVector& certified() const { return iterates_[iterates_.size() - 1 - cfg_.lag]; }
  const CVector& latest() const { return iterates_.back(); }
  double estimate() const { return estimate_; }
  std::vector<double>& omega() { return omega_; }

 private:
  const InnerConfig& cfg_;
  std::vector<CVector> iterates_;
  std::vector<double> omega_;
  double estimate_ = std::numeric_limits<double>::infinity();
};

InnerResult finish_exact(const std::vector<CVector>& basis, CVector c, std::size_t n,
                         std::size_t dims, std::size_t iters, OmegaMonitor& mon) {
  InnerResult r;
  r.vector = combine(basis, c, n);
  r.err_estimate = 0.0;
  r.dims_used = dims;
  r.iterations = iters;
  r.omega_history = std::move(mon.omega());
  r.converged = true;
  r.breakdown = true;
  return r;
}

InnerResult finish(const std::vector<CVector>& basis, OmegaMonitor& mon, bool converged,
                   std::size_t n, std::size_t dims, std::size_t iters) {
  InnerResult r;
  r.vector = combine(basis, converged ? mon.certified() : mon.latest(), n);
  r.err_estimate = std::isfinite(mon.estimate()) ? mon.estimate() : norm2(r.vector);
  r.dims_used = dims;
  r.iterations = iters;
  r.omega_history = std::move(mon.omega());
  r.converged = converged;
  return r;
}

InnerResult arnoldi(const LinearOperator& a, ScalarFunction f, std::span<const Complex> v,
                    double beta, const InnerConfig& cfg, bool adjoint) {
  const std::size_t n = a.dim();
  const std::size_t max_dim = std::min(cfg.max_dim, n);
  std::vector<CVector> basis;
  basis.reserve(max_dim + 1);
  basis.emplace_back(v.begin(), v.end());
  for (auto& x : basis[0]) x /= beta;

  DenseMatrix h(max_dim + 1, max_dim);
  OmegaMonitor mon(cfg);
  CVector w(n);
  for (std::size_t k = 0; k < max_dim; ++k) {
    if (adjoint)
      a.apply_adjoint(basis[k], w);
    else
      a.apply(basis[k], w);
    const double wn0 = norm2(w);
    const CVector coeff = detail::orthogonalize_twice(basis, k + 1, w);
    for (std::size_t i = 0; i <= k; ++i) h(i, k) = coeff[i];
    const double wn = norm2(w);
    const std::size_t dim = k + 1;
    const CVector c = projected_coefficients(h.block(0, 0, dim, dim), f, beta);
    if (wn < static_cast<double>(n) * kEps * std::max(1.0, wn0)) {
      return finish_exact(basis, c, n, dim, dim, mon);
    }
    if (mon.push(c)) return finish(basis, mon, true, n, dim, dim);
    h(k + 1, k) = wn;
    if (k + 1 < max_dim) {
      for (auto& x : w) x /= wn;
      basis.push_back(w);
    }
  }
  return finish(basis, mon, false, n, max_dim, max_dim);
}

// Orthonormalizes w against the basis and appends it; returns false when the
// direction collapses.
bool append_direction(std::vector<CVector>& basis, CVector w, double scale_ref) {
  detail::orthogonalize_twice(basis, basis.size(), w);
  const double wn = norm2(w);
  if (wn < static_cast<double>(w.size()) * kEps * std::max(1.0, scale_ref)) return false;
  for (auto& x : w) x /= wn;
  basis.push_back(std::move(w));
  return true;
}

InnerResult extended(const LinearOperator& a, ScalarFunction f, std::span<const Complex> v,
                     double beta, const InnerConfig& cfg, bool adjoint) {
  const std::size_t n = a.dim();
  const std::size_t max_dim = std::min(cfg.max_dim, n);
  const auto& lu = a.factorization();
  auto mul = [&](const CVector& x) { return adjoint ? a.apply_adjoint(x) : a.apply(x); };
  auto inv = [&](const CVector& x) { return lu.solve(x, adjoint); };

  std::vector<CVector> basis;
  std::vector<CVector> abasis;  // A p for every basis column
  basis.reserve(max_dim + 2);
  abasis.reserve(max_dim + 2);
  basis.emplace_back(v.begin(), v.end());
  for (auto& x : basis[0]) x /= beta;

  OmegaMonitor mon(cfg);
  DenseMatrix h;
  // Columns of the newest block that seed the next one.
  std::size_t a_col = 0;
  std::optional<std::size_t> inv_col;

  auto extend_projection = [&]() {
    const std::size_t old = h.rows();
    const std::size_t dim = basis.size();
    for (std::size_t j = abasis.size(); j < dim; ++j) abasis.push_back(mul(basis[j]));
    h.resize(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t i = (j < old ? old : 0); i < dim; ++i) h(i, j) = dot(basis[i], abasis[j]);
  };

  bool exact = false;
  {
    const CVector y = inv(basis[0]);
    if (append_direction(basis, y, norm2(y)))
      inv_col = 1;
    else
      exact = true;
  }
  std::size_t iter = 0;
  while (true) {
    extend_projection();
    ++iter;
    const CVector c = projected_coefficients(h, f, beta);
    if (exact) return finish_exact(basis, c, n, basis.size(), iter, mon);
    if (mon.push(c)) return finish(basis, mon, true, n, basis.size(), iter);
    if (basis.size() + 2 > max_dim) break;

    const std::size_t before = basis.size();
    const CVector& ap = abasis[a_col];
    const CVector ai = inv(basis[*inv_col]);
    const bool ok_a = append_direction(basis, ap, norm2(ap));
    if (ok_a) a_col = basis.size() - 1;
    const bool ok_i = append_direction(basis, ai, norm2(ai));
    if (ok_i) inv_col = basis.size() - 1;
    if (!ok_a || !ok_i) exact = true;
    if (basis.size() == before) {
      // Nothing new: the current space is already invariant.
      return finish_exact(basis, c, n, basis.size(), iter, mon);
    }
  }
  return finish(basis, mon, false, n, basis.size(), iter);
}

}  // namespace

void InnerConfig::validate() const {
  if (!(eps_inner > 0.0 && eps_inner < 1.0)) throw std::invalid_argument("eps_inner must lie in (0, 1)");
  if (lag < 1) throw std::invalid_argument("lag must be at least 1");
  if (max_dim < lag + 2) throw std::invalid_argument("max_dim must be at least lag + 2");
  if (reference_norm && !(*reference_norm > 0.0)) throw std::invalid_argument("reference_norm must be positive");
}

namespace detail {

CVector orthogonalize_twice(const std::vector<CVector>& basis, std::size_t count, std::span<Complex> w) {
  CVector coeff(count);
  for (int pass = 0; pass < 2; ++pass) {
    CVector c(count);
    for (std::size_t i = 0; i < count; ++i) c[i] = dot(basis[i], w);
    for (std::size_t i = 0; i < count; ++i) {
      axpy(-c[i], basis[i], w);
      coeff[i] += c[i];
    }
  }
  return coeff;
}

}  // namespace detail

InnerResult approx_fAv(const LinearOperator& a, ScalarFunction f, std::span<const Complex> v,
                       const InnerConfig& cfg, bool adjoint) {
  cfg.validate();
  if (v.size() != a.dim()) throw DimensionError("approx_fAv: vector length does not match operator");
  const double beta = norm2(v);
  if (beta == 0.0) {
    InnerResult r;
    r.vector.assign(v.size(), Complex{});
    r.converged = true;
    return r;
  }
  return cfg.method == InnerMethod::standard_krylov ? arnoldi(a, f, v, beta, cfg, adjoint)
                                                    : extended(a, f, v, beta, cfg, adjoint);
}

}  // namespace fnorm
