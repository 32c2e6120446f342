#include "fnorm/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fnorm/eig.hpp"
#include "fnorm/errors.hpp"
#include "fnorm/lu.hpp"

namespace fnorm {

RunReport power_method(const LinearOperator& a, ScalarFunction f, const PowerOptions& opts) {
  if (!(opts.eps_out > 0.0 && opts.eps_out < 1.0)) throw std::invalid_argument("eps_out must lie in (0, 1)");
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.seed = opts.seed;
  InnerConfig cfg = opts.inner;
  cfg.eps_inner = opts.eps_inner.value_or(opts.eps_out / 100.0);

  CVector v = random_unit_vector(a.dim(), opts.seed, opts.start_distribution);
  CVector w;
  double lambda = 0.0;
  try {
    for (std::size_t k = 1; k <= opts.max_iters; ++k) {
      const InnerResult fw = approx_fAv(a, f, v, cfg, false);
      const InnerResult fy = approx_fAv(a, f, fw.vector, cfg, true);
      rep.inner_total += fw.dims_used + fy.dims_used;
      rep.ledger.push_back({fw.err_estimate, fy.err_estimate, cfg.eps_inner, fw.dims_used, fy.dims_used,
                            fw.converged && fy.converged});
      rep.eps_history.push_back(cfg.eps_inner);
      ++rep.outer_iters;
      w = fw.vector;
      const CVector& y = fy.vector;
      lambda = std::abs(dot(v, y));
      double res = std::numeric_limits<double>::infinity();
      if (lambda > 0.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += std::norm(y[i] - lambda * v[i]);
        res = std::sqrt(s) / lambda;
      }
      rep.sigma_history.push_back(std::sqrt(lambda));
      rep.residual_history.push_back(res);
      if (res <= opts.eps_out) {
        rep.converged = true;
        rep.status = RunStatus::converged;
        break;
      }
      const double yn = norm2(y);
      if (yn == 0.0) {
        rep.status = RunStatus::breakdown;
        break;
      }
      v = y;
      scale(1.0 / yn, v);
    }
  } catch (const DomainError& e) {
    rep.status = RunStatus::aborted;
    rep.message = e.what();
  }

  if (rep.outer_iters > 0) {
    TripletEstimate te;
    te.theta = std::sqrt(lambda);
    te.eigenvalue = te.theta;
    te.right = v;
    te.left = w;
    const double wn = norm2(te.left);
    if (wn > 0.0) scale(1.0 / wn, te.left);
    te.computed_residual = rep.residual_history.back() * te.theta;
    te.theta_gap_second = std::numeric_limits<double>::quiet_NaN();
    rep.triplets.push_back(std::move(te));
  }
  rep.inner_avg = rep.outer_iters ? static_cast<double>(rep.inner_total) / (2.0 * static_cast<double>(rep.outer_iters)) : 0.0;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

// Largest eigenvalue of the symmetric tridiagonal (alpha, beta) by Sturm bisection.
double top_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const std::size_t k = alpha.size();
  double lo = alpha[0];
  double hi = alpha[0];
  for (std::size_t i = 0; i < k; ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) + (i + 1 < k ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  // number of eigenvalues above x
  auto above = [&](double x) {
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      d = alpha[i] - x - (i > 0 ? beta[i - 1] * beta[i - 1] / d : 0.0);
      if (d == 0.0) d = -std::numeric_limits<double>::min();
      if (d > 0.0) ++count;
    }
    return count;
  };
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (above(mid) > 0) lo = mid;
    else hi = mid;
  }
  return hi;
}

// Hermitian part in lower band storage, reordered by RCM when that narrows it.
class HermitianBand {
 public:
  HermitianBand(const LinearOperator& a, double sign) {
    const std::size_t n = a.dim();
    std::vector<MatrixEntry> e;
    for (const CsrMatrix* m : {&a.matrix(), &a.adjoint_matrix()}) {
      const auto rp = m->row_ptr();
      const auto ci = m->col_idx();
      const auto v = m->values();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) e.push_back({i, ci[k], 0.5 * sign * v[k]});
    }
    CsrMatrix h = CsrMatrix::from_entries(n, n, std::move(e), false);
    if (a.structure().kind == StructureKind::general_sparse) {
      CsrMatrix p = h.permuted(dense::reverse_cuthill_mckee(h));
      if (p.lower_bandwidth() < h.lower_bandwidth()) h = std::move(p);
    }
    n_ = n;
    p_ = h.lower_bandwidth();
    band_.assign(n_ * (p_ + 1), Complex{});
    const auto rp = h.row_ptr();
    const auto ci = h.col_idx();
    const auto v = h.values();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = rp[i]; k < rp[i + 1]; ++k)
        if (ci[k] <= i) at(band_, i, ci[k]) = v[k];
  }

  // Cholesky of sigma I - H; succeeds exactly when sigma lies above the spectrum.
  bool below(double sigma) const {
    std::vector<Complex> l(band_.size());
    for (std::size_t k = 0; k < band_.size(); ++k) l[k] = -band_[k];
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t j0 = j > p_ ? j - p_ : 0;
      double d = sigma + at(l, j, j).real();
      for (std::size_t k = j0; k < j; ++k) d -= std::norm(at(l, j, k));
      if (!(d > 0.0)) return false;
      const double ljj = std::sqrt(d);
      at(l, j, j) = ljj;
      for (std::size_t i = j + 1; i <= std::min(n_ - 1, j + p_); ++i) {
        Complex s = at(l, i, j);
        for (std::size_t k = i > p_ ? i - p_ : 0; k < j; ++k) s -= at(l, i, k) * std::conj(at(l, j, k));
        at(l, i, j) = s / ljj;
      }
    }
    return true;
  }

 private:
  Complex& at(std::vector<Complex>& b, std::size_t i, std::size_t j) const { return b[j * (p_ + 1) + (i - j)]; }

  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<Complex> band_;
};

}  // namespace

ExpBound exp_norm_bound(const LinearOperator& a, int sign, double rel_tol, std::size_t max_iters,
                        std::uint64_t seed) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const std::size_t n = a.dim();
  const double sg = sign;
  auto herm = [&](const CVector& x) {
    CVector y = a.apply(x);
    const CVector z = a.apply_adjoint(x);
    for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * sg * (y[i] + z[i]);
    return y;
  };

  // Lanczos gives the top Ritz value, a lower bound on alpha.
  ExpBound out;
  std::vector<CVector> basis{random_unit_vector(n, seed)};
  std::vector<double> alpha;
  std::vector<double> beta;
  double theta = 0.0;
  double b = 0.0;
  const std::size_t kmax = std::min(max_iters, n);
  for (std::size_t k = 0; k < kmax; ++k) {
    CVector w = herm(basis[k]);
    const CVector c = detail::orthogonalize_twice(basis, k + 1, w);
    alpha.push_back(c[k].real());
    b = norm2(w);
    const double prev = theta;
    theta = top_eigenvalue(alpha, beta);
    out.iterations = k + 1;
    const double scale_ref = std::max(std::abs(theta), 1e-300);
    if (b <= static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale_ref) break;
    if (k > 0 && std::abs(theta - prev) <= 1e-3 * rel_tol * scale_ref) break;
    if (k + 1 == kmax) break;
    beta.push_back(b);
    for (auto& x : w) x /= b;
    basis.push_back(std::move(w));
  }
  out.lower = theta;

  // Bracket alpha from above with Cholesky tests, then bisect.
  const HermitianBand h(a, sg);
  const double tol = rel_tol * std::max(std::abs(theta), 1e-300);
  double lo = theta - tol;
  double step = std::max(tol, 1e-3 * std::abs(theta));
  double hi = theta + step;
  while (!h.below(hi)) {
    lo = hi;
    step *= 4.0;
    hi = theta + step;
    if (!std::isfinite(hi)) break;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (h.below(mid)) hi = mid;
    else lo = mid;
  }
  out.alpha = hi;
  out.converged = std::isfinite(hi) && hi - lo <= tol;
  out.bound = std::exp(out.alpha);
  return out;
}

}  // namespace fnorm
