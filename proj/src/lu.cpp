#include "fnorm/lu.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "fnorm/errors.hpp"

namespace fnorm::dense {

namespace {

[[noreturn]] void singular(const char* who, std::size_t k) {
  throw SingularMatrixError(std::string(who) + ": zero pivot in column " + std::to_string(k));
}

}  // namespace

// ---------------------------------------------------------------------------
// Dense

DenseLu::DenseLu(DenseMatrix a) : lu_(std::move(a)), piv_(lu_.rows()) {
  if (!lu_.square()) throw DimensionError("DenseLu: matrix is not square");
  const std::size_t n = lu_.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    piv_[k] = p;
    if (best == 0.0) singular("DenseLu", k);
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
    const Complex inv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) lu_(i, k) *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      const Complex ukj = lu_(k, j);
      if (ukj == Complex{}) continue;
      for (std::size_t i = k + 1; i < n; ++i) lu_(i, j) -= lu_(i, k) * ukj;
    }
  }
}

void DenseLu::solve_in_place(std::span<Complex> b, bool adjoint) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw DimensionError("DenseLu::solve: size mismatch");
  if (!adjoint) {
    for (std::size_t k = 0; k < n; ++k) std::swap(b[k], b[piv_[k]]);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * b[k];
    for (std::size_t k = n; k-- > 0;) {
      b[k] /= lu_(k, k);
      for (std::size_t i = 0; i < k; ++i) b[i] -= lu_(i, k) * b[k];
    }
    return;
  }
  // a^* = U^* L^* P
  for (std::size_t k = 0; k < n; ++k) {
    Complex s = b[k];
    for (std::size_t i = 0; i < k; ++i) s -= std::conj(lu_(i, k)) * b[i];
    b[k] = s / std::conj(lu_(k, k));
  }
  for (std::size_t k = n; k-- > 0;) {
    Complex s = b[k];
    for (std::size_t i = k + 1; i < n; ++i) s -= std::conj(lu_(i, k)) * b[i];
    b[k] = s;
  }
  for (std::size_t k = n; k-- > 0;) std::swap(b[k], b[piv_[k]]);
}

DenseMatrix DenseLu::solve(const DenseMatrix& b) const {
  DenseMatrix x = b;
  for (std::size_t j = 0; j < x.cols(); ++j) solve_in_place(x.col(j));
  return x;
}

DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b) { return DenseLu(a).solve(b); }

// ---------------------------------------------------------------------------
// Tridiagonal

TridiagonalLu::TridiagonalLu(std::vector<Complex> sub, std::vector<Complex> diag,
                             std::vector<Complex> super)
    : dl_(std::move(sub)), d_(std::move(diag)), du_(std::move(super)) {
  const std::size_t n = d_.size();
  if (n == 0) throw DimensionError("TridiagonalLu: empty matrix");
  if (dl_.size() != n - 1 || du_.size() != n - 1) throw DimensionError("TridiagonalLu: band sizes");
  du2_.assign(n >= 2 ? n - 2 : 0, Complex{});
  swapped_.assign(n >= 1 ? n - 1 : 0, false);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      if (d_[i] != Complex{}) {
        const Complex fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      }
    } else {
      const Complex fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const Complex temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
      swapped_[i] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (d_[i] == Complex{}) singular("TridiagonalLu", i);
}

void TridiagonalLu::solve_in_place(std::span<Complex> b, bool adjoint) const {
  const std::size_t n = d_.size();
  if (b.size() != n) throw DimensionError("TridiagonalLu::solve: size mismatch");
  if (!adjoint) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const Complex temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t i = n >= 2 ? n - 2 : 0; i-- > 0;)
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    return;
  }
  b[0] /= std::conj(d_[0]);
  if (n > 1) b[1] = (b[1] - std::conj(du_[0]) * b[0]) / std::conj(d_[1]);
  for (std::size_t i = 2; i < n; ++i)
    b[i] = (b[i] - std::conj(du_[i - 1]) * b[i - 1] - std::conj(du2_[i - 2]) * b[i - 2]) /
           std::conj(d_[i]);
  for (std::size_t i = n - 1; i-- > 0;) {
    if (!swapped_[i]) {
      b[i] -= std::conj(dl_[i]) * b[i + 1];
    } else {
      const Complex temp = b[i + 1];
      b[i + 1] = b[i] - std::conj(dl_[i]) * temp;
      b[i] = temp;
    }
  }
}

// ---------------------------------------------------------------------------
// Banded

BandedLu::BandedLu(const CsrMatrix& a, std::size_t lower, std::size_t upper)
    : n_(a.rows()), kl_(lower), kv_(lower + upper), ld_(2 * lower + upper + 1) {
  if (a.rows() != a.cols()) throw DimensionError("BandedLu: matrix is not square");
  ab_.assign(ld_ * n_, Complex{});
  piv_.assign(n_, 0);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto vals = a.values();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const std::size_t j = ci[k];
      if ((i > j && i - j > lower) || (j > i && j - i > upper))
        throw DimensionError("BandedLu: entry outside declared band");
      at(i, j) = vals[k];
    }
  }
  std::size_t ju = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t km = std::min(kl_, n_ - 1 - j);
    std::size_t p = 0;
    double best = std::abs(at(j, j));
    for (std::size_t r = 1; r <= km; ++r) {
      if (std::abs(at(j + r, j)) > best) {
        best = std::abs(at(j + r, j));
        p = r;
      }
    }
    piv_[j] = j + p;
    if (best == 0.0) singular("BandedLu", j);
    ju = std::max(ju, std::min(j + upper + p, n_ - 1));
    if (p != 0)
      for (std::size_t c = j; c <= ju; ++c) std::swap(at(j, c), at(j + p, c));
    if (km > 0) {
      const Complex inv = 1.0 / at(j, j);
      for (std::size_t r = 1; r <= km; ++r) at(j + r, j) *= inv;
      for (std::size_t c = j + 1; c <= ju; ++c) {
        const Complex ujc = at(j, c);
        if (ujc == Complex{}) continue;
        for (std::size_t r = 1; r <= km; ++r) at(j + r, c) -= at(j + r, j) * ujc;
      }
    }
  }
}

void BandedLu::solve_in_place(std::span<Complex> b, bool adjoint) const {
  if (b.size() != n_) throw DimensionError("BandedLu::solve: size mismatch");
  if (!adjoint) {
    for (std::size_t j = 0; j < n_; ++j) {
      std::swap(b[j], b[piv_[j]]);
      const std::size_t km = std::min(kl_, n_ - 1 - j);
      for (std::size_t r = 1; r <= km; ++r) b[j + r] -= at(j + r, j) * b[j];
    }
    for (std::size_t j = n_; j-- > 0;) {
      b[j] /= at(j, j);
      const std::size_t i0 = j > kv_ ? j - kv_ : 0;
      for (std::size_t i = i0; i < j; ++i) b[i] -= at(i, j) * b[j];
    }
    return;
  }
  for (std::size_t j = 0; j < n_; ++j) {
    Complex s = b[j];
    const std::size_t i0 = j > kv_ ? j - kv_ : 0;
    for (std::size_t i = i0; i < j; ++i) s -= std::conj(at(i, j)) * b[i];
    b[j] = s / std::conj(at(j, j));
  }
  for (std::size_t j = n_; j-- > 0;) {
    const std::size_t km = std::min(kl_, n_ - 1 - j);
    Complex s = b[j];
    for (std::size_t r = 1; r <= km; ++r) s -= std::conj(at(j + r, j)) * b[j + r];
    b[j] = s;
    std::swap(b[j], b[piv_[j]]);
  }
}

// ---------------------------------------------------------------------------
// Ordering and dispatch

std::vector<std::size_t> reverse_cuthill_mckee(const CsrMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::vector<std::size_t>> adj(n);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const std::size_t j = ci[k];
      if (i == j) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](std::size_t x, std::size_t y) { return adj[x].size() < adj[y].size(); });
  for (std::size_t start : by_degree) {
    if (seen[start]) continue;
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          next.push_back(w);
        }
      std::stable_sort(next.begin(), next.end(),
                       [&](std::size_t x, std::size_t y) { return adj[x].size() < adj[y].size(); });
      queue.insert(queue.end(), next.begin(), next.end());
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

namespace {

TridiagonalLu make_tridiagonal(const CsrMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Complex> sub(n - 1), diag(n), super(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = a.at(i, i);
    if (i + 1 < n) {
      super[i] = a.at(i, i + 1);
      sub[i] = a.at(i + 1, i);
    }
  }
  return TridiagonalLu(std::move(sub), std::move(diag), std::move(super));
}

}  // namespace

Factorization lu_factor(const CsrMatrix& a, const Structure& structure) {
  if (a.rows() != a.cols()) throw DimensionError("lu_factor: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) throw DimensionError("lu_factor: empty matrix");
  switch (structure.kind) {
    case StructureKind::tridiagonal:
      if (n == 1) break;
      return Factorization(make_tridiagonal(a), StructureKind::tridiagonal, {});
    case StructureKind::banded:
      return Factorization(BandedLu(a, structure.lower, structure.upper), StructureKind::banded, {});
    case StructureKind::general_sparse: {
      auto perm = reverse_cuthill_mckee(a);
      CsrMatrix p = a.permuted(perm);
      const std::size_t kl = p.lower_bandwidth();
      const std::size_t ku = p.upper_bandwidth();
      if ((2 * kl + ku + 1) < n / 2) {
        return Factorization(BandedLu(p, kl, ku), StructureKind::banded, std::move(perm));
      }
      return Factorization(DenseLu(p.to_dense()), StructureKind::dense, std::move(perm));
    }
    case StructureKind::dense:
      break;
  }
  return Factorization(DenseLu(a.to_dense()), StructureKind::dense, {});
}

std::size_t Factorization::size() const noexcept {
  return std::visit([](const auto& f) { return f.size(); }, impl_);
}

CVector Factorization::solve(std::span<const Complex> b, bool adjoint) const {
  const std::size_t n = size();
  if (b.size() != n) throw DimensionError("Factorization::solve: size mismatch");
  CVector x(n);
  if (perm_.empty()) {
    std::copy(b.begin(), b.end(), x.begin());
    std::visit([&](const auto& f) { f.solve_in_place(x, adjoint); }, impl_);
    return x;
  }
  // (P A P^T) y = P b, x = P^T y; same for the adjoint.
  for (std::size_t k = 0; k < n; ++k) x[k] = b[perm_[k]];
  std::visit([&](const auto& f) { f.solve_in_place(x, adjoint); }, impl_);
  CVector out(n);
  for (std::size_t k = 0; k < n; ++k) out[perm_[k]] = x[k];
  return out;
}

CVector lu_solve(const Factorization& f, std::span<const Complex> b, bool adjoint) {
  return f.solve(b, adjoint);
}

}  // namespace fnorm::dense
