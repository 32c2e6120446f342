#include "fnorm/relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fnorm/eig.hpp"
#include "fnorm/errors.hpp"
#include "fnorm/svd.hpp"

namespace fnorm {

double next_tolerance(std::size_t k, const std::optional<PreviousStep>& prev, double eps_out,
                      std::size_t m_max) {
  const double floor = eps_out / static_cast<double>(m_max);
  if (k <= 2 || !prev) return floor;
  double quotient = 1.0;
  if (prev->residual > 0.0) quotient = std::min(1.0, prev->delta / (2.0 * static_cast<double>(m_max) * prev->residual));
  return std::max(floor, quotient * eps_out);
}

double spectral_gap(std::span<const Complex> values, std::size_t lead) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (i != lead) gap = std::min(gap, std::abs(values[lead] - values[i]));
  return gap;
}

TauDiagnostics verify_tau(const DenseMatrix& khat, std::size_t k, Complex theta_k,
                          std::span<const Complex> q_k, double tol) {
  if (!khat.square() || khat.rows() % 2 != 0) throw DimensionError("verify_tau: khat must be 2m x 2m");
  const std::size_t m = khat.rows() / 2;
  if (k < 1 || k > m || q_k.size() != 2 * k) throw DimensionError("verify_tau: step or eigenvector size mismatch");
  const std::size_t d = 2 * m;

  // q~ = [x; 0; y; 0], unit.
  CVector qt(d);
  for (std::size_t i = 0; i < k; ++i) {
    qt[i] = q_k[i];
    qt[m + i] = q_k[k + i];
  }
  const double qn = norm2(qt);
  if (qn == 0.0) throw DimensionError("verify_tau: zero eigenvector");
  for (auto& x : qt) x /= qn;

  TauDiagnostics out;
  const CVector kq = khat * std::span<const Complex>(qt);
  CVector r(d);
  for (std::size_t i = 0; i < d; ++i) r[i] = kq[i] - theta_k * qt[i];
  out.r_norm = norm2(r);
  const DenseMatrix kh_adj = khat.adjoint();
  const CVector kaq = kh_adj * std::span<const Complex>(qt);
  CVector s(d);
  for (std::size_t i = 0; i < d; ++i) s[i] = kaq[i] - std::conj(theta_k) * qt[i];
  out.s_norm = norm2(s);

  // Householder reflector P = I - 2 w w^*/(w^* w) with P q~ = -phase e1;
  // its trailing columns span the complement of q~.
  CVector w = qt;
  const Complex phase = std::abs(qt[0]) > 0.0 ? qt[0] / std::abs(qt[0]) : Complex(1.0);
  w[0] += phase;
  const double ww = std::pow(norm2(w), 2);
  DenseMatrix y(d, d - 1);
  for (std::size_t j = 1; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) y(i, j - 1) = (i == j ? 1.0 : 0.0) - 2.0 * w[i] * std::conj(w[j]) / ww;
  const DenseMatrix kunder = adjoint_times(y, khat * y);
  out.delta_true = d > 1 ? dense::sigma_min_shifted(kunder, theta_k) : 0.0;
  out.tau_bound = out.delta_true > 0.0 ? 2.0 * out.r_norm / out.delta_true : std::numeric_limits<double>::infinity();
  out.condition_ok = out.r_norm == 0.0 ||
                     (out.s_norm > 0.0 && out.r_norm < out.delta_true * out.delta_true / (4.0 * out.s_norm)) ||
                     (out.s_norm == 0.0 && out.delta_true > 0.0);
  if (!out.condition_ok) return out;

  const dense::EigDecomp e = dense::eig_dense(khat);
  std::size_t best = 0;
  double best_cos = -1.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double c = std::abs(dot(e.vectors.col(j), qt)) / std::max(norm2(e.vectors.col(j)), 1e-300);
    if (c > best_cos) {
      best_cos = c;
      best = j;
    }
  }
  const auto q = e.vectors.col(best);
  const double qnorm = norm2(q);
  double tail = 0.0;
  for (std::size_t i = k; i < m; ++i) tail += std::norm(q[i]) + std::norm(q[m + i]);
  out.tail_norm = std::sqrt(tail) / qnorm;
  out.theta_shift = std::abs(e.values[best] - theta_k);
  const double tb = out.tau_bound;
  const double tail_limit = std::isfinite(tb) ? tb / std::sqrt(1.0 + tb * tb) : 1.0;
  out.tail_ok = out.tail_norm <= tail_limit + tol;
  out.shift_ok = out.theta_shift <= out.s_norm * tb + tol;
  return out;
}

}  // namespace fnorm
