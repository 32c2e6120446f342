// Command line front end: result tables for ||f(A)|| experiments.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fnorm/baselines.hpp"
#include "fnorm/errors.hpp"
#include "fnorm/experiment.hpp"

namespace {

using namespace fnorm;

struct Args {
  std::vector<std::string> matrices;
  std::vector<std::string> functions;
  std::string method = "lanczos";
  std::string inner = "krylov";
  double eps_out = 1e-2;
  std::size_t m_max = 500;
  bool relax = false;
  std::uint64_t seed = 1;
  std::size_t triplets = 1;
  bool stop_all = false;
  std::string out;
  std::string format = "csv";
  double eps_in = 0.0;
  std::size_t max_dim = 400;
  std::string start = "uniform";
  unsigned threads = 1;
};

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& it : items) {
    std::stringstream ss(it);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

ExperimentConfig to_config(const Args& a) {
  ExperimentConfig c;
  for (const auto& m : split_commas(a.matrices)) c.matrices.push_back(parse_matrix_spec(m));
  for (const auto& f : split_commas(a.functions)) {
    if (f == "all") {
      for (auto id : {FunctionId::expneg, FunctionId::sqrt, FunctionId::phi, FunctionId::exp, FunctionId::invsqrt})
        c.functions.emplace_back(id);
    } else {
      c.functions.push_back(parse_function(f));
    }
  }
  c.method = parse_outer_method(a.method);
  c.inner = parse_inner_method(a.inner);
  c.eps_out = a.eps_out;
  c.m_max = a.m_max;
  c.relax = a.relax;
  c.seed = a.seed;
  c.triplets = a.triplets;
  c.stop_on_all_triplets = a.stop_all;
  if (a.eps_in > 0.0) c.eps_inner = a.eps_in;
  c.max_dim = a.max_dim;
  if (a.start == "uniform")
    c.start = StartDistribution::uniform;
  else if (a.start == "normal")
    c.start = StartDistribution::normal;
  else
    throw ParseError("unknown start distribution '" + a.start + "' (expected uniform or normal)");
  c.threads = a.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.threads;
  if (!(c.eps_out > 0.0 && c.eps_out < 1.0)) throw ParseError("--eps-out must lie in (0, 1)");
  if (c.m_max < 1) throw ParseError("--m-max must be positive");
  if (c.triplets < 1) throw ParseError("--triplets must be positive");
  return c;
}

void emit(const Args& a, const std::string& text) {
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(a.out);
  if (!f) throw Error("cannot open output file " + a.out);
  f << text;
}

void add_common(CLI::App* sub, Args& a, bool with_functions) {
  sub->add_option("--matrix", a.matrices, "Matrix spec, e.g. A2:n=10000, A1:n=500:seed=7, A4:path=e20r1000.mtx:shift=10")
      ->required();
  if (with_functions)
    sub->add_option("--function", a.functions, "exp, expneg, sqrt, invsqrt, phi, identity, or all")->required();
  sub->add_option("--inner", a.inner, "Inner solver: krylov or eksm");
  sub->add_option("--eps-out", a.eps_out, "Outer tolerance");
  sub->add_option("--m-max", a.m_max, "Maximum outer iterations");
  sub->add_flag("--relax", a.relax, "Relaxed inner tolerances");
  sub->add_option("--seed", a.seed, "Seed of the start vector");
  sub->add_option("--triplets", a.triplets, "Number of singular triplets");
  sub->add_flag("--stop-on-all", a.stop_all, "Stop once every requested triplet has converged");
  sub->add_option("--out", a.out, "Write output to this path instead of stdout");
  sub->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--eps-in", a.eps_in, "Inner tolerance (default eps-out/m-max, power: eps-out/100)");
  sub->add_option("--max-dim", a.max_dim, "Inner basis size cap");
  sub->add_option("--start", a.start, "Start vector entries: uniform or normal");
  sub->add_option("--threads", a.threads, "Rows run concurrently (0: all cores)");
}

int run_table(const Args& a) {
  const auto rows = run_experiment(to_config(a));
  emit(a, a.format == "json" ? rows_to_json(rows) : rows_to_csv(rows));
  for (const auto& r : rows)
    if (!r.note.empty()) std::cerr << r.matrix << "/" << r.function << ": " << r.status << ": " << r.note << "\n";
  return all_converged(rows) ? 0 : 1;
}

int run_multi(const Args& a) {
  const auto res = run_multi_triplet(to_config(a));
  emit(a, a.format == "json" ? multi_to_json(res) : multi_to_csv(res));
  bool ok = true;
  for (const auto& m : res) ok = ok && m.fixed.converged && m.relaxed.converged;
  return ok ? 0 : 1;
}

int run_expbound(const Args& a) {
  const ExperimentConfig c = to_config(a);
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream csv;
  csv << "matrix,sign,alpha,bound,iterations,converged\n";
  bool ok = true;
  for (const auto& spec : c.matrices) {
    const LinearOperator op = build_operator(spec);
    for (int sign : {1, -1}) {
      const ExpBound b = exp_norm_bound(op, sign);
      ok = ok && b.converged;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%+d,%.10g,%.6g,%zu,%s\n", matrix_label(spec).c_str(), sign, b.alpha, b.bound,
                    b.iterations, b.converged ? "true" : "false");
      csv << buf;
      arr.push_back({{"matrix", matrix_label(spec)}, {"sign", sign}, {"alpha", b.alpha}, {"bound", b.bound},
                     {"iterations", b.iterations}, {"converged", b.converged}});
    }
  }
  emit(a, a.format == "json" ? arr.dump(2) + "\n" : csv.str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leading singular values and 2-norm of f(A) by inexact Lanczos bidiagonalization"};
  app.require_subcommand(1);
  Args a;

  auto* run_cmd = app.add_subcommand("run", "One table row per matrix and function");
  add_common(run_cmd, a, true);
  run_cmd->add_option("--method", a.method, "lanczos or power");

  auto* power_cmd = app.add_subcommand("power", "Same as run --method power");
  add_common(power_cmd, a, true);

  auto* multi_cmd = app.add_subcommand("multi", "Several leading singular values, fixed vs relaxed inner tolerance");
  add_common(multi_cmd, a, true);

  auto* bound_cmd = app.add_subcommand("expbound", "Hermitian-part bound on ||exp(+-A)||");
  add_common(bound_cmd, a, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*power_cmd) a.method = "power";
    if (*multi_cmd) {
      if (multi_cmd->count("--triplets") == 0) a.triplets = 10;
      return run_multi(a);
    }
    if (*bound_cmd) return run_expbound(a);
    return run_table(a);
  } catch (const fnorm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
