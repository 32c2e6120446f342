#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fnorm/dense_matrix.hpp"

namespace fnorm {

/// What the scheduler needs from the previous outer step.
struct PreviousStep {
  double theta = 0.0;     ///< leading |eigenvalue| of the projected matrix
  double delta = 0.0;     ///< its distance to the rest of the projected spectrum
  double residual = 0.0;  ///< computed residual norm
};

struct RelaxEntry {
  std::size_t k = 0;
  std::optional<double> delta_prev;
  std::optional<double> r_prev;
  double eps_k = 0.0;
};
using RelaxSchedule = std::vector<RelaxEntry>;

/// Inner tolerance for outer step k (1-based).
///
/// eps_out/m_max for k <= 2 or without a previous step, otherwise
/// max(eps_out/m_max, min(1, delta/(2 m_max r)) eps_out). A zero residual
/// takes the quotient as 1.
double next_tolerance(std::size_t k, const std::optional<PreviousStep>& prev, double eps_out,
                      std::size_t m_max);

/// min_{i != lead} |values[lead] - values[i]|; +inf when there is no other value.
double spectral_gap(std::span<const Complex> values, std::size_t lead);

struct TauDiagnostics {
  double s_norm = 0.0;
  double delta_true = 0.0;
  double r_norm = 0.0;
  double tau_bound = 0.0;
  double tail_norm = 0.0;
  double theta_shift = 0.0;
  bool condition_ok = false;
  /// Only meaningful when condition_ok.
  bool tail_ok = false;
  bool shift_ok = false;
};

/// Post-hoc check of the eigenvector tail proposition.
///
/// khat is the full 2m x 2m projected matrix of a finished run; (theta_k, q_k)
/// is an eigenpair of its leading k-step submatrix with q_k = [x; y] of unit
/// norm and length 2k. Inequalities are checked with slack tol.
TauDiagnostics verify_tau(const DenseMatrix& khat, std::size_t k, Complex theta_k,
                          std::span<const Complex> q_k, double tol = 1e-10);

}  // namespace fnorm
