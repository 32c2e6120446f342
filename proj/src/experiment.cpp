#include "fnorm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fnorm/baselines.hpp"
#include "fnorm/errors.hpp"

namespace fnorm {

namespace {

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view s, std::string_view field) {
  double x = 0.0;
  if (s == "nan") return std::nan("");
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw ParseError("csv: bad number '" + std::string(s) + "' in column " + std::string(field));
  return x;
}

std::size_t parse_size(std::string_view s, std::string_view field) {
  std::size_t x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw ParseError("csv: bad integer '" + std::string(s) + "' in column " + std::string(field));
  return x;
}

double round_to(double x, double unit) { return std::round(x / unit) * unit; }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

// Fields never contain commas or quotes except free text, which is quoted.
std::string csv_text(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> csv_fields(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

constexpr std::string_view kHeader =
    "matrix,function,sigma,rel_gap_second,outer,inner_total,inner_avg,time_s,converged,gap_bound,status,note,eps_history";

RunReport execute(const LinearOperator& op, ScalarFunction f, const ExperimentConfig& c, bool relaxed,
                  std::size_t triplets) {
  InnerConfig inner;
  inner.method = c.inner;
  inner.max_dim = c.max_dim;
  if (c.method == OuterMethod::power) {
    PowerOptions p;
    p.eps_out = c.eps_out;
    p.max_iters = c.m_max;
    p.inner = inner;
    p.eps_inner = c.eps_inner;
    p.seed = c.seed;
    p.start_distribution = c.start;
    return power_method(op, f, p);
  }
  RunOptions o;
  o.eps_out = c.eps_out;
  o.m_max = c.m_max;
  o.inner = inner;
  o.relaxed = relaxed;
  o.fixed_eps_inner = c.eps_inner;
  o.num_triplets = triplets;
  o.stop_on_all_triplets = c.stop_on_all_triplets;
  o.seed = c.seed;
  o.start_distribution = c.start;
  return run(op, f, o);
}

// Runs job(i) for i < count on up to `threads` workers; results in index order.
template <class T, class Job>
std::vector<T> parallel_map(std::size_t count, unsigned threads, Job job) {
  std::vector<T> out(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) out[i] = job(i);
  };
  std::vector<std::future<void>> pool;
  const unsigned w = std::min<unsigned>(threads, static_cast<unsigned>(count));
  for (unsigned t = 0; t < w; ++t) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return out;
}

struct Job {
  const MatrixSpec* spec;
  ScalarFunction f;
};

std::vector<Job> jobs_of(const ExperimentConfig& c) {
  std::vector<Job> jobs;
  for (const auto& m : c.matrices)
    for (const auto& f : c.functions) jobs.push_back({&m, f});
  return jobs;
}

std::optional<std::string> missing_file(const MatrixSpec& spec) {
  if (spec.kind != MatrixKind::A4 && spec.kind != MatrixKind::file) return std::nullopt;
  if (std::filesystem::exists(spec.path)) return std::nullopt;
  return "matrix file not found: " + spec.path;
}

}  // namespace

OuterMethod parse_outer_method(std::string_view t) {
  if (t == "lanczos") return OuterMethod::lanczos;
  if (t == "power") return OuterMethod::power;
  throw ParseError("unknown method '" + std::string(t) + "' (expected lanczos or power)");
}

InnerMethod parse_inner_method(std::string_view t) {
  if (t == "krylov") return InnerMethod::standard_krylov;
  if (t == "eksm") return InnerMethod::extended_krylov;
  throw ParseError("unknown inner method '" + std::string(t) + "' (expected krylov or eksm)");
}

std::string_view to_string(OuterMethod m) { return m == OuterMethod::lanczos ? "lanczos" : "power"; }
std::string_view to_string(InnerMethod m) {
  return m == InnerMethod::standard_krylov ? "krylov" : "eksm";
}

double round_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return std::strtod(buf, nullptr);
}

ResultRow make_row(std::string matrix, ScalarFunction f, const RunReport& rep) {
  ResultRow r;
  r.matrix = std::move(matrix);
  r.function = std::string(f.name());
  r.sigma = round_significant(rep.sigma(), 6);
  if (!rep.triplets.empty() && std::isfinite(rep.triplets.front().theta_gap_second))
    r.rel_gap_second = round_significant(rep.triplets.front().theta_gap_second, 3);
  r.outer = rep.outer_iters;
  r.inner_total = rep.inner_total;
  r.inner_avg = round_to(rep.inner_avg, 0.1);
  r.inner_avg = round_significant(r.inner_avg, 15);
  r.time_s = round_significant(round_to(rep.wall_time, 1e-3), 15);
  r.converged = rep.converged;
  r.gap_bound = rep.triplets.empty() ? 0.0 : round_significant(rep.triplets.front().gap_bound, 3);
  r.status = std::string(to_string(rep.status));
  r.note = rep.message;
  r.eps_history = rep.eps_history;
  return r;
}

ResultRow skipped_row(std::string matrix, ScalarFunction f, std::string reason) {
  ResultRow r;
  r.matrix = std::move(matrix);
  r.function = std::string(f.name());
  r.status = "skipped";
  r.note = std::move(reason);
  return r;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& c) {
  const auto jobs = jobs_of(c);
  return parallel_map<ResultRow>(jobs.size(), c.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    const std::string label = matrix_label(*job.spec);
    if (auto why = missing_file(*job.spec)) return skipped_row(label, job.f, *why);
    const LinearOperator op = build_operator(*job.spec);
    return make_row(label, job.f, execute(op, job.f, c, c.relax, c.triplets));
  });
}

bool all_converged(const std::vector<ResultRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ResultRow& r) { return r.status == "skipped" || r.converged; });
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << kHeader << '\n';
  for (const auto& r : rows) {
    os << csv_text(r.matrix) << ',' << csv_text(r.function) << ',' << fmt(r.sigma) << ','
       << (r.rel_gap_second ? fmt(*r.rel_gap_second) : "") << ',' << r.outer << ',' << r.inner_total << ','
       << fmt(r.inner_avg) << ',' << fmt(r.time_s) << ',' << (r.converged ? "true" : "false") << ','
       << fmt(r.gap_bound) << ',' << r.status << ',' << csv_text(r.note) << ',';
    for (std::size_t i = 0; i < r.eps_history.size(); ++i) os << (i ? ";" : "") << fmt(r.eps_history[i]);
    os << '\n';
  }
  return os.str();
}

std::vector<ResultRow> rows_from_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  const auto lines = split(text, '\n');
  if (lines.empty() || lines[0] != kHeader) throw ParseError("csv: missing or unexpected header");
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto f = csv_fields(lines[li]);
    if (f.size() != 13) throw ParseError("csv: line " + std::to_string(li + 1) + " has " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.matrix = f[0];
    r.function = f[1];
    r.sigma = parse_double(f[2], "sigma");
    if (!f[3].empty()) r.rel_gap_second = parse_double(f[3], "rel_gap_second");
    r.outer = parse_size(f[4], "outer");
    r.inner_total = parse_size(f[5], "inner_total");
    r.inner_avg = parse_double(f[6], "inner_avg");
    r.time_s = parse_double(f[7], "time_s");
    if (f[8] != "true" && f[8] != "false") throw ParseError("csv: bad converged flag '" + f[8] + "'");
    r.converged = f[8] == "true";
    r.gap_bound = parse_double(f[9], "gap_bound");
    r.status = f[10];
    r.note = f[11];
    if (!f[12].empty())
      for (auto e : split(f[12], ';')) r.eps_history.push_back(parse_double(e, "eps_history"));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["matrix"] = r.matrix;
    j["function"] = r.function;
    j["sigma"] = r.sigma;
    j["rel_gap_second"] = r.rel_gap_second ? nlohmann::json(*r.rel_gap_second) : nlohmann::json(nullptr);
    j["outer"] = r.outer;
    j["inner_total"] = r.inner_total;
    j["inner_avg"] = r.inner_avg;
    j["time_s"] = r.time_s;
    j["converged"] = r.converged;
    j["gap_bound"] = r.gap_bound;
    j["status"] = r.status;
    if (!r.note.empty()) j["note"] = r.note;
    j["eps_history"] = r.eps_history;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<MultiTripletResult> run_multi_triplet(const ExperimentConfig& c) {
  if (c.triplets < 1) throw std::invalid_argument("run_multi_triplet needs at least 1 triplet");
  if (c.method != OuterMethod::lanczos) throw std::invalid_argument("run_multi_triplet needs the lanczos method");
  const auto jobs = jobs_of(c);
  std::vector<std::optional<MultiTripletResult>> res =
      parallel_map<std::optional<MultiTripletResult>>(jobs.size(), c.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        if (missing_file(*job.spec)) return std::optional<MultiTripletResult>{};
        const LinearOperator op = build_operator(*job.spec);
        MultiTripletResult m;
        m.matrix = matrix_label(*job.spec);
        m.function = std::string(job.f.name());
        m.fixed = execute(op, job.f, c, false, c.triplets);
        m.relaxed = execute(op, job.f, c, true, c.triplets);
        const std::size_t k = std::min(m.fixed.triplets.size(), m.relaxed.triplets.size());
        for (std::size_t t = 0; t < k; ++t) {
          MultiTripletRow row;
          row.index = t + 1;
          row.sigma_fixed = m.fixed.triplets[t].theta;
          row.sigma_relaxed = m.relaxed.triplets[t].theta;
          row.rel_discrepancy = std::abs(row.sigma_relaxed - row.sigma_fixed) / row.sigma_relaxed;
          m.rows.push_back(row);
        }
        return std::optional<MultiTripletResult>(std::move(m));
      });
  std::vector<MultiTripletResult> out;
  for (auto& r : res)
    if (r) out.push_back(std::move(*r));
  return out;
}

std::string multi_to_csv(const std::vector<MultiTripletResult>& results) {
  std::ostringstream os;
  os << "matrix,function,index,sigma_fixed,sigma_relaxed,rel_discrepancy\n";
  for (const auto& m : results)
    for (const auto& r : m.rows)
      os << m.matrix << ',' << m.function << ',' << r.index << ',' << fmt(r.sigma_fixed) << ','
         << fmt(r.sigma_relaxed) << ',' << fmt(r.rel_discrepancy) << '\n';
  return os.str();
}

std::string multi_to_json(const std::vector<MultiTripletResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : results) {
    nlohmann::json j;
    j["matrix"] = m.matrix;
    j["function"] = m.function;
    j["fixed"] = {{"outer", m.fixed.outer_iters}, {"inner_total", m.fixed.inner_total}, {"converged", m.fixed.converged}};
    j["relaxed"] = {{"outer", m.relaxed.outer_iters}, {"inner_total", m.relaxed.inner_total}, {"converged", m.relaxed.converged}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : m.rows)
      rows.push_back({{"index", r.index}, {"sigma_fixed", r.sigma_fixed}, {"sigma_relaxed", r.sigma_relaxed},
                      {"rel_discrepancy", r.rel_discrepancy}});
    j["values"] = std::move(rows);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace fnorm
