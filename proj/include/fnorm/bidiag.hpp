#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fnorm/dense_matrix.hpp"
#include "fnorm/inner.hpp"
#include "fnorm/linear_operator.hpp"
#include "fnorm/relax.hpp"
#include "fnorm/scalar_function.hpp"

namespace fnorm {

struct RgsResult {
  CVector q;       ///< unit, empty on breakdown
  CVector coeffs;  ///< projections, then the normalization coefficient last
  bool breakdown = false;
};

/// Double classical Gram-Schmidt of z against the first `count` columns of basis.
RgsResult rgs(std::span<const Complex> z, const std::vector<CVector>& basis, std::size_t count);
inline RgsResult rgs(std::span<const Complex> z, const std::vector<CVector>& basis) {
  return rgs(z, basis, basis.size());
}

/// Per-step inner accuracy record.
struct LedgerEntry {
  double g1_norm = 0.0;  ///< error estimate of f(A) v_k
  double g2_norm = 0.0;  ///< error estimate of f(A)^* u_k
  double eps_requested = 0.0;
  std::size_t dims_v = 0;
  std::size_t dims_u = 0;
  bool inner_converged = true;
};
using InexactnessLedger = std::vector<LedgerEntry>;

struct BidiagState {
  std::vector<CVector> u;  ///< j columns
  std::vector<CVector> v;  ///< j + 1 columns (j after a breakdown in the second half)
  DenseMatrix m;           ///< j x j upper triangular
  DenseMatrix t;           ///< (j + 1) x j upper Hessenberg
  InexactnessLedger ledger;
  bool invariant = false;  ///< f(A)^* U ended up inside span(V)

  std::size_t steps() const noexcept { return m.cols(); }
  Complex t_next() const { return steps() ? t(steps(), steps() - 1) : Complex{}; }
};

/// Starts the recurrence from v1 (normalized here).
BidiagState start_state(std::span<const Complex> v1);

enum class StepStatus { ok, breakdown_left, breakdown_right };

/// One outer step: u_j, column m_j, v_{j+1}, column t_j. On breakdown_left the
/// state is left untouched.
StepStatus bidiag_step(BidiagState& state, const LinearOperator& a, ScalarFunction f,
                       const InnerConfig& cfg);

/// [[0, M], [T(1..k, :), 0]] built from the first k steps (k = 0 means all).
DenseMatrix assemble_khat(const BidiagState& state, std::size_t k = 0);

struct TripletEstimate {
  double theta = 0.0;
  Complex eigenvalue{};
  CVector left;   ///< U x / ||x||
  CVector right;  ///< V y / ||y||
  CVector q;      ///< unit eigenvector [x; y] of the projected matrix
  double computed_residual = 0.0;
  double gap_bound = 0.0;
  double theta_gap_second = 1.0;  ///< (theta - next theta) / theta
};

struct Extraction {
  std::vector<TripletEstimate> triplets;
  std::vector<Complex> eigenvalues;
  std::size_t lead_index = 0;  ///< position of the leading eigenvalue in `eigenvalues`
  double delta = 0.0;          ///< distance from the leading eigenvalue to the rest
};

/// Eigenpairs of the projected matrix with positive real part, ordered by
/// modulus (ties: larger real part, then larger imaginary part). Falls back
/// to all eigenvalues when none has positive real part.
Extraction extract_leading(const BidiagState& state, std::size_t num_triplets,
                           bool with_vectors = true);

/// Entry distribution of the seeded start vector (normalized afterwards).
enum class StartDistribution { uniform, normal };

enum class RunStatus { converged, breakdown, max_iterations, aborted };
std::string_view to_string(RunStatus s);

struct RunOptions {
  double eps_out = 1e-4;
  std::size_t m_max = 500;
  InnerConfig inner;
  bool relaxed = false;
  /// Fixed mode inner tolerance; eps_out / m_max when unset.
  std::optional<double> fixed_eps_inner;
  std::size_t num_triplets = 1;
  /// Stop only once every requested triplet meets eps_out (default: the leading one).
  bool stop_on_all_triplets = false;
  std::uint64_t seed = 1;
  StartDistribution start_distribution = StartDistribution::uniform;
  /// Optional explicit start vector (otherwise drawn from the seed).
  CVector start;
  bool keep_state = false;
};

struct RunReport {
  std::vector<TripletEstimate> triplets;
  std::size_t outer_iters = 0;
  std::size_t inner_total = 0;
  double inner_avg = 0.0;  ///< per inner solve (two per outer step)
  InexactnessLedger ledger;
  RelaxSchedule schedule;
  std::vector<double> eps_history;
  std::vector<double> sigma_history;
  std::vector<double> residual_history;  ///< relative computed residual per step
  double wall_time = 0.0;
  bool converged = false;
  RunStatus status = RunStatus::max_iterations;
  std::string message;
  std::uint64_t seed = 0;
  std::optional<BidiagState> state;

  double sigma() const { return triplets.empty() ? 0.0 : triplets.front().theta; }
};

/// Inexact Golub-Kahan bidiagonalization for the leading singular triplet(s)
/// of f(A). Stops when the leading relative computed residual is below eps_out.
RunReport run(const LinearOperator& a, ScalarFunction f, const RunOptions& opts);

/// Seeded random vector with U(0,1) or N(0,1) entries, normalized.
CVector random_unit_vector(std::size_t n, std::uint64_t seed,
                           StartDistribution dist = StartDistribution::uniform);

}  // namespace fnorm
