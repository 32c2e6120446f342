#include "fnorm/bidiag.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fnorm/eig.hpp"
#include "fnorm/errors.hpp"
#include "fnorm/random.hpp"

namespace fnorm {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

RgsResult rgs(std::span<const Complex> z, const std::vector<CVector>& basis, std::size_t count) {
  RgsResult r;
  CVector w(z.begin(), z.end());
  r.coeffs = detail::orthogonalize_twice(basis, count, w);
  const double zn = norm2(z);
  const double wn = norm2(w);
  r.coeffs.push_back(wn);
  if (wn <= static_cast<double>(z.size()) * kEps * zn || wn == 0.0) {
    r.breakdown = true;
    r.coeffs.back() = 0.0;
    return r;
  }
  for (auto& x : w) x /= wn;
  r.q = std::move(w);
  return r;
}

BidiagState start_state(std::span<const Complex> v1) {
  const double nv = norm2(v1);
  if (nv == 0.0) throw DimensionError("start vector is zero");
  BidiagState s;
  s.v.emplace_back(v1.begin(), v1.end());
  for (auto& x : s.v[0]) x /= nv;
  return s;
}

StepStatus bidiag_step(BidiagState& state, const LinearOperator& a, ScalarFunction f,
                       const InnerConfig& cfg) {
  const std::size_t j = state.steps();
  if (state.invariant || state.v.size() != j + 1) throw std::logic_error("bidiag_step: recurrence already terminated");

  const InnerResult z1 = approx_fAv(a, f, state.v[j], cfg, false);
  RgsResult left = rgs(z1.vector, state.u);
  if (left.breakdown) return StepStatus::breakdown_left;
  state.u.push_back(std::move(left.q));

  const InnerResult z2 = approx_fAv(a, f, state.u[j], cfg, true);
  RgsResult right = rgs(z2.vector, state.v);

  // M padded with a zero row, then the new column.
  state.m.resize(j + 1, j + 1);
  for (std::size_t i = 0; i <= j; ++i) state.m(i, j) = left.coeffs[i];
  state.t.resize(j + 2, j + 1);
  for (std::size_t i = 0; i <= j + 1; ++i) state.t(i, j) = right.coeffs[i];

  LedgerEntry e;
  e.g1_norm = z1.err_estimate;
  e.g2_norm = z2.err_estimate;
  e.eps_requested = cfg.eps_inner;
  e.dims_v = z1.dims_used;
  e.dims_u = z2.dims_used;
  e.inner_converged = z1.converged && z2.converged;
  state.ledger.push_back(e);

  if (right.breakdown) {
    state.invariant = true;
    return StepStatus::breakdown_right;
  }
  state.v.push_back(std::move(right.q));
  return StepStatus::ok;
}

DenseMatrix assemble_khat(const BidiagState& state, std::size_t k) {
  const std::size_t j = state.steps();
  if (k == 0) k = j;
  if (k > j) throw DimensionError("assemble_khat: more steps requested than available");
  DenseMatrix kh(2 * k, 2 * k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < k; ++r) {
      kh(r, k + c) = state.m(r, c);
      kh(k + r, c) = state.t(r, c);
    }
  return kh;
}

namespace {

// Eigenpairs of khat from the half-size product M T: khat^2 = diag(M T, T M),
// so each eigenvalue mu of M T gives the pair +-sqrt(mu), with eigenvector
// [x; T x / theta] for M T x = mu x.
struct ProjectedSpectrum {
  std::vector<Complex> values;  // khat eigenvalues, +sqrt(mu_i) at 2i, -sqrt(mu_i) at 2i+1
  DenseMatrix product;          // M T
  DenseMatrix tj;
};

ProjectedSpectrum projected_spectrum(const BidiagState& state) {
  const std::size_t j = state.steps();
  ProjectedSpectrum ps;
  ps.tj = state.t.block(0, 0, j, j);
  ps.product = state.m * ps.tj;
  const std::vector<Complex> mu = dense::eigenvalues(ps.product);
  ps.values.reserve(2 * j);
  for (const Complex& m : mu) {
    const Complex r = std::sqrt(m);
    ps.values.push_back(r);
    ps.values.push_back(-r);
  }
  return ps;
}

CVector projected_eigenvector(const ProjectedSpectrum& ps, std::size_t idx) {
  const std::size_t j = ps.tj.rows();
  const Complex theta = ps.values[idx];
  CVector q(2 * j);
  const CVector x = dense::inverse_iteration(ps.product, theta * theta);
  const CVector tx = ps.tj * std::span<const Complex>(x);
  for (std::size_t i = 0; i < j; ++i) {
    q[i] = x[i];
    q[j + i] = tx[i] / theta;
  }
  const double qn = norm2(q);
  for (auto& v : q) v /= qn;
  return q;
}

}  // namespace

Extraction extract_leading(const BidiagState& state, std::size_t num_triplets, bool with_vectors) {
  const std::size_t j = state.steps();
  if (j == 0) throw std::logic_error("extract_leading: no completed step");
  const ProjectedSpectrum ps = projected_spectrum(state);
  Extraction out;
  out.eigenvalues = ps.values;
  const auto& values = out.eigenvalues;

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i].real() > 0.0) order.push_back(i);
  if (order.empty()) {
    order.resize(values.size());
    std::iota(order.begin(), order.end(), 0);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    if (values[a].real() != values[b].real()) return values[a].real() > values[b].real();
    return values[a].imag() > values[b].imag();
  });
  out.lead_index = order.front();
  out.delta = spectral_gap(values, out.lead_index);

  const double tn = std::abs(state.t_next());
  const std::size_t count = std::min(num_triplets, order.size());
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t idx = order[r];
    TripletEstimate te;
    te.eigenvalue = values[idx];
    te.theta = std::abs(te.eigenvalue);
    if (te.eigenvalue == Complex{}) {
      const dense::EigDecomp e = dense::eig_dense(assemble_khat(state));
      std::size_t best = 0;
      for (std::size_t i = 1; i < e.values.size(); ++i)
        if (std::abs(e.values[i]) < std::abs(e.values[best])) best = i;
      const auto col = e.vectors.col(best);
      te.q.assign(col.begin(), col.end());
      const double qn = norm2(te.q);
      for (auto& x : te.q) x /= qn;
    } else {
      te.q = projected_eigenvector(ps, idx);
    }
    const std::span<const Complex> x(te.q.data(), j);
    const std::span<const Complex> y(te.q.data() + j, j);
    te.computed_residual = state.invariant ? 0.0 : tn * std::abs(x[j - 1]);
    for (std::size_t k = 0; k < j; ++k) {
      const auto& g = state.ledger[k];
      te.gap_bound += std::sqrt(g.g1_norm * g.g1_norm * std::norm(y[k]) + g.g2_norm * g.g2_norm * std::norm(x[k]));
    }
    const double next = r + 1 < order.size() ? std::abs(values[order[r + 1]]) : 0.0;
    te.theta_gap_second = te.theta > 0.0 ? (te.theta - next) / te.theta : 0.0;
    if (with_vectors) {
      const std::size_t n = state.v[0].size();
      te.left.assign(n, Complex{});
      te.right.assign(n, Complex{});
      for (std::size_t k = 0; k < j; ++k) {
        axpy(x[k], state.u[k], te.left);
        axpy(y[k], state.v[k], te.right);
      }
      const double ln = norm2(te.left);
      const double rn = norm2(te.right);
      if (ln > 0.0) scale(1.0 / ln, te.left);
      if (rn > 0.0) scale(1.0 / rn, te.right);
    }
    out.triplets.push_back(std::move(te));
  }
  return out;
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::breakdown: return "breakdown";
    case RunStatus::max_iterations: return "max_iterations";
    case RunStatus::aborted: return "aborted";
  }
  return "unknown";
}

CVector random_unit_vector(std::size_t n, std::uint64_t seed, StartDistribution dist) {
  Rng rng(seed);
  CVector v(n);
  for (auto& x : v) x = dist == StartDistribution::uniform ? rng.uniform() : rng.normal();
  const double nv = norm2(v);
  for (auto& x : v) x /= nv;
  return v;
}

RunReport run(const LinearOperator& a, ScalarFunction f, const RunOptions& opts) {
  if (!(opts.eps_out > 0.0 && opts.eps_out < 1.0)) throw std::invalid_argument("eps_out must lie in (0, 1)");
  if (opts.m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  if (opts.num_triplets < 1) throw std::invalid_argument("num_triplets must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();

  RunReport rep;
  rep.seed = opts.seed;
  const std::size_t n = a.dim();
  BidiagState state = start_state(opts.start.empty() ? random_unit_vector(n, opts.seed, opts.start_distribution) : opts.start);

  std::optional<PreviousStep> prev;
  std::optional<Extraction> last;
  try {
    for (std::size_t k = 1; k <= opts.m_max; ++k) {
      InnerConfig cfg = opts.inner;
      if (opts.relaxed) {
        cfg.eps_inner = next_tolerance(k, prev, opts.eps_out, opts.m_max);
        if (prev) cfg.reference_norm = prev->theta;
        rep.schedule.push_back({k, prev ? std::optional(prev->delta) : std::nullopt,
                                prev ? std::optional(prev->residual) : std::nullopt, cfg.eps_inner});
      } else {
        cfg.eps_inner = opts.fixed_eps_inner.value_or(opts.eps_out / static_cast<double>(opts.m_max));
      }
      rep.eps_history.push_back(cfg.eps_inner);

      const StepStatus st = bidiag_step(state, a, f, cfg);
      if (st == StepStatus::breakdown_left) {
        // f(A) v_k lies in span(U): nothing new on the left side.
        rep.status = RunStatus::breakdown;
        rep.converged = last.has_value();
        rep.eps_history.pop_back();
        break;
      }
      ++rep.outer_iters;
      const auto& le = state.ledger.back();
      rep.inner_total += le.dims_u + le.dims_v;

      Extraction ex = extract_leading(state, opts.num_triplets, false);
      const auto& lead = ex.triplets.front();
      const double rel = lead.theta > 0.0 ? lead.computed_residual / lead.theta : std::numeric_limits<double>::infinity();
      rep.sigma_history.push_back(lead.theta);
      rep.residual_history.push_back(rel);
      prev = PreviousStep{lead.theta, ex.delta, lead.computed_residual};
      last = std::move(ex);

      if (st == StepStatus::breakdown_right) {
        rep.status = RunStatus::breakdown;
        rep.converged = true;
        break;
      }
      bool done = rel < opts.eps_out;
      if (done && opts.stop_on_all_triplets) {
        done = last->triplets.size() == opts.num_triplets;
        for (const auto& te : last->triplets)
          done = done && te.theta > 0.0 && te.computed_residual / te.theta < opts.eps_out;
      }
      if (done) {
        rep.status = RunStatus::converged;
        rep.converged = true;
        break;
      }
    }
  } catch (const DomainError& e) {
    rep.status = RunStatus::aborted;
    rep.converged = false;
    rep.message = std::string("inner solve failed at outer step ") + std::to_string(rep.outer_iters + 1) + ": " + e.what();
  }

  if (state.steps() > 0) rep.triplets = extract_leading(state, opts.num_triplets, true).triplets;
  rep.inner_avg = rep.outer_iters ? static_cast<double>(rep.inner_total) / (2.0 * static_cast<double>(rep.outer_iters)) : 0.0;
  rep.ledger = state.ledger;
  if (opts.keep_state) rep.state = std::move(state);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace fnorm
