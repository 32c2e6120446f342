#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fnorm/bidiag.hpp"
#include "fnorm/generators.hpp"
#include "fnorm/scalar_function.hpp"

namespace fnorm {

enum class OuterMethod { lanczos, power };

OuterMethod parse_outer_method(std::string_view token);  ///< lanczos | power
InnerMethod parse_inner_method(std::string_view token);  ///< krylov | eksm
std::string_view to_string(OuterMethod m);
std::string_view to_string(InnerMethod m);

struct ExperimentConfig {
  std::vector<MatrixSpec> matrices;
  std::vector<ScalarFunction> functions;
  OuterMethod method = OuterMethod::lanczos;
  InnerMethod inner = InnerMethod::standard_krylov;
  double eps_out = 1e-2;
  std::size_t m_max = 500;
  bool relax = false;
  std::uint64_t seed = 1;
  std::size_t triplets = 1;
  bool stop_on_all_triplets = false;
  std::optional<double> eps_inner;  ///< overrides the default inner tolerance
  std::size_t max_dim = 400;
  StartDistribution start = StartDistribution::uniform;
  unsigned threads = 1;  ///< rows run concurrently; output keeps config order
};

/// One line of a result table. Values are rounded to reporting precision when
/// the row is built, so text round trips are exact.
struct ResultRow {
  std::string matrix;
  std::string function;
  double sigma = 0.0;                     ///< 6 significant digits
  std::optional<double> rel_gap_second;   ///< 3 significant digits
  std::size_t outer = 0;
  std::size_t inner_total = 0;
  double inner_avg = 0.0;  ///< 1 decimal
  double time_s = 0.0;     ///< milliseconds resolution
  bool converged = false;
  double gap_bound = 0.0;  ///< 3 significant digits
  std::string status;      ///< converged | breakdown | max_iterations | aborted | skipped
  std::string note;        ///< skip or abort reason
  std::vector<double> eps_history;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

ResultRow make_row(std::string matrix, ScalarFunction f, const RunReport& rep);
ResultRow skipped_row(std::string matrix, ScalarFunction f, std::string reason);

/// One row per (matrix, function), in config order.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// Rows that ran (not skipped) all converged.
bool all_converged(const std::vector<ResultRow>& rows);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
/// Throws ParseError on malformed input.
std::vector<ResultRow> rows_from_csv(std::string_view text);
std::string rows_to_json(const std::vector<ResultRow>& rows);

struct MultiTripletRow {
  std::size_t index = 0;  ///< 1-based
  double sigma_fixed = 0.0;
  double sigma_relaxed = 0.0;
  double rel_discrepancy = 0.0;  ///< |relaxed - fixed| / relaxed
};

struct MultiTripletResult {
  std::string matrix;
  std::string function;
  std::vector<MultiTripletRow> rows;
  RunReport fixed;
  RunReport relaxed;
};

/// Leading `triplets` singular values of f(A) for each configured matrix and
/// function, from a fixed-tolerance and a relaxed run.
std::vector<MultiTripletResult> run_multi_triplet(const ExperimentConfig& config);

std::string multi_to_csv(const std::vector<MultiTripletResult>& results);
std::string multi_to_json(const std::vector<MultiTripletResult>& results);

/// Value rounded to `digits` significant digits (via decimal text).
double round_significant(double x, int digits);

}  // namespace fnorm
