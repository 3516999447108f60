#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "cli.hpp"
#include "efg/generate.hpp"
#include "efg/io.hpp"
#include "efg/tracer.hpp"

namespace efg::cli {

namespace {

using json = nlohmann::json;

struct Row {
  GenSpec gen;
  std::vector<int> m;
  int instances = 10;
  std::vector<Method> methods{Method::kLogm};
  Refinement refinement = Refinement::kNash;
  std::int64_t max_iters = 100000;
  double timeout = 0.0;
  double t_min = 1e-5;
};

struct Outcome {
  bool ok = false;
  std::string status;
  double seconds = 0.0;
  std::int64_t iters = 0;
};

const std::set<std::string> kRowKeys = {
    "family",    "n",         "branching", "m",     "layers",
    "instances", "methods",   "refinement", "seed", "max_iters",
    "timeout_s", "t_min",     "payoff_lo", "payoff_hi", "zero_prob_max"};

Row parse_row(const json& j, std::size_t index) {
  const std::string where = "rows[" + std::to_string(index) + "]";
  if (!j.is_object()) throw std::invalid_argument(where + " is not an object");
  for (const auto& [k, v] : j.items()) {
    if (!kRowKeys.count(k)) {
      throw std::invalid_argument(where + ": unknown key '" + k + "'");
    }
  }
  for (const char* k : {"family", "n", "branching"}) {
    if (!j.contains(k)) {
      throw std::invalid_argument(where + ": missing '" + std::string(k) + "'");
    }
  }
  Row r;
  r.gen.family = parse_family(j.at("family").get<std::string>());
  r.gen.n = j.at("n").get<int>();
  r.gen.branching = j.at("branching").get<std::vector<int>>();
  r.gen.layers = j.value("layers", 1);
  r.gen.seed = j.value("seed", std::uint64_t{0});
  r.gen.payoff_lo = j.value("payoff_lo", -10);
  r.gen.payoff_hi = j.value("payoff_hi", 10);
  r.gen.zero_prob_max = j.value("zero_prob_max", 0.5);
  if (j.contains("m")) r.gen.expected_m = j.at("m").get<std::vector<int>>();
  r.m = infoset_counts(r.gen);
  if (r.gen.expected_m && *r.gen.expected_m != r.m) {
    throw std::invalid_argument(where + ": m does not match the family");
  }
  r.instances = j.value("instances", 10);
  if (r.instances < 0) throw std::invalid_argument(where + ": instances < 0");
  if (j.contains("methods")) {
    r.methods.clear();
    for (const auto& s : j.at("methods").get<std::vector<std::string>>()) {
      if (s == "logm") {
        r.methods.push_back(Method::kLogm);
      } else if (s == "cqpm") {
        r.methods.push_back(Method::kCqpm);
      } else {
        throw std::invalid_argument(where + ": unknown method '" + s + "'");
      }
    }
  }
  const std::string ref = j.value("refinement", std::string("nash"));
  if (ref != "nash" && ref != "sgpe") {
    throw std::invalid_argument(where + ": unknown refinement '" + ref + "'");
  }
  r.refinement = ref == "sgpe" ? Refinement::kSgpe : Refinement::kNash;
  r.max_iters = j.value("max_iters", std::int64_t{100000});
  r.timeout = j.value("timeout_s", 0.0);
  r.t_min = j.value("t_min", 1e-5);
  if (r.max_iters < 1) throw std::invalid_argument(where + ": max_iters < 1");
  return r;
}

std::vector<Row> parse_spec(const std::string& text) {
  const json doc = json::parse(text);
  if (!doc.is_object()) throw std::invalid_argument("spec is not an object");
  std::vector<Row> rows;
  if (!doc.contains("rows")) return rows;
  const json& arr = doc.at("rows");
  if (!arr.is_array()) throw std::invalid_argument("'rows' is not an array");
  for (std::size_t i = 0; i < arr.size(); ++i) rows.push_back(parse_row(arr[i], i));
  return rows;
}

std::string tuple(const std::vector<int>& v) {
  std::string s = "\"(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s + ")\"";
}

std::string number(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string row_prefix(const Row& r, Method method) {
  return std::string(to_string(r.gen.family)) + ',' + std::to_string(r.gen.n) +
         ',' + tuple(r.m) + ',' + tuple(r.gen.branching) + ',' +
         std::to_string(r.gen.layers) + ',' + to_string(method) + ',' +
         to_string(r.refinement);
}

std::vector<Outcome> solve_instance(const Row& r, int k) {
  GenSpec spec = r.gen;
  spec.seed = r.gen.seed + static_cast<std::uint64_t>(k);
  const Game game = generate(spec);
  std::vector<Outcome> out;
  for (Method method : r.methods) {
    SolverConfig cfg = default_config(game);
    cfg.max_iters = r.max_iters;
    cfg.max_seconds = r.timeout;
    cfg.t_min = r.t_min;
    const TraceResult res = trace_path(game, cfg, method, r.refinement);
    Outcome o;
    o.seconds = res.seconds;
    o.iters = res.iterations;
    if (res.ok()) {
      o.ok = check_endpoint(game, res.assessment, r.refinement, cfg.t_min).pass;
      o.status = o.ok ? "ok" : "unverified";
    } else {
      o.status = to_string(res.status);
    }
    spdlog::debug("{} instance {} {}: {} in {} iterations",
                  to_string(r.gen.family), k, to_string(method), o.status,
                  o.iters);
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<Row> rows;
  try {
    rows = parse_spec(read_file(o.spec));
  } catch (const std::exception& e) {
    err << "error: bench spec: " << e.what() << '\n';
    return kError;
  }

  struct Job {
    std::size_t row;
    int instance;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < rows[i].instances; ++k) jobs.push_back({i, k});
  }
  std::vector<std::vector<Outcome>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  auto worker = [&] {
    for (std::size_t j; (j = next++) < jobs.size();) {
      try {
        results[j] = solve_instance(rows[jobs[j].row], jobs[j].instance);
      } catch (const std::exception& e) {
        if (!failed.exchange(true)) failure = e.what();
      }
    }
  };
  const int workers = std::max(1, o.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed) {
    err << "error: " << failure << '\n';
    return kError;
  }

  std::string csv = "family,n,m,branching,L,method,refinement,stat,time_s,iters\n";
  std::string inst =
      "family,n,m,branching,L,method,refinement,instance,seed,status,time_s,"
      "iters\n";
  std::size_t j = 0;
  for (const Row& r : rows) {
    for (std::size_t mi = 0; mi < r.methods.size(); ++mi) {
      const std::string prefix = row_prefix(r, r.methods[mi]);
      std::vector<const Outcome*> ok;
      for (int k = 0; k < r.instances; ++k) {
        const Outcome& oc = results[j + k][mi];
        if (oc.ok) ok.push_back(&oc);
        inst += prefix + ',' + std::to_string(k) + ',' +
                std::to_string(r.gen.seed + k) + ',' + oc.status + ',' +
                number("%.6f", oc.seconds) + ',' + std::to_string(oc.iters) +
                '\n';
      }
      double tsum = 0, tmin = 0, tmax = 0, isum = 0, imin = 0, imax = 0;
      for (std::size_t q = 0; q < ok.size(); ++q) {
        const double t = ok[q]->seconds;
        const double it = static_cast<double>(ok[q]->iters);
        tsum += t;
        isum += it;
        tmin = q ? std::min(tmin, t) : t;
        tmax = q ? std::max(tmax, t) : t;
        imin = q ? std::min(imin, it) : it;
        imax = q ? std::max(imax, it) : it;
      }
      const double n = static_cast<double>(ok.size());
      auto line = [&](const char* stat, double t, double it, const char* ifmt) {
        csv += prefix + ',' + stat + ',';
        if (ok.empty()) {
          csv += "-,-\n";
        } else {
          csv += number("%.6f", t) + ',' + number(ifmt, it) + '\n';
        }
      };
      line("avg", n ? tsum / n : 0, n ? isum / n : 0, "%.1f");
      line("min", tmin, imin, "%.0f");
      line("max", tmax, imax, "%.0f");
      out << prefix << ": " << ok.size() << '/' << r.instances
          << " verified\n";
    }
    j += static_cast<std::size_t>(r.instances);
  }

  auto write = [&](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) err << "error: cannot write '" << path << "'\n";
    return static_cast<bool>(f);
  };
  if (!write(o.out, csv)) return kError;
  if (!o.instances_out.empty() && !write(o.instances_out, inst)) return kError;
  return kOk;
}

}  // namespace efg::cli
