#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "bench.hpp"
#include "efg/generate.hpp"
#include "efg/io.hpp"
#include "efg/tracer.hpp"
#include "efg/verify.hpp"

namespace efg::cli {

namespace {

std::string fmt_prob(double v) {
  std::ostringstream os;
  os << std::setprecision(8) << v;
  return os.str();
}

void print_actions(std::ostream& out, const Game& game,
                   const BehaviorProfile& b) {
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    const Infoset& is = game.infoset(i);
    out << "  " << is.id << " (player " << is.player + 1 << "):";
    for (std::size_t a = 0; a < is.labels.size(); ++a) {
      out << ' ' << is.labels[a] << '=' << fmt_prob(b[i][a]);
    }
    out << '\n';
  }
}

void print_beliefs(std::ostream& out, const Game& game, const BeliefSystem& mu) {
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    const Infoset& is = game.infoset(i);
    out << "  " << is.id << ':';
    for (std::size_t h = 0; h < is.members.size(); ++h) {
      out << ' ' << game.node(is.members[h]).id << '=' << fmt_prob(mu[i][h]);
    }
    out << '\n';
  }
}

void print_report(std::ostream& out, const Game& game, const VerifyReport& r) {
  out << "check " << r.check << ": " << (r.pass ? "pass" : "FAIL")
      << "  max residual " << r.max_residual << "  tol " << r.tol << '\n';
  for (const InfosetCheck& c : r.infosets) {
    if (c.worst > r.tol) {
      out << "  " << game.infoset(c.infoset).id << ": residual " << c.worst
          << '\n';
    }
  }
}

// Writes `text` to `path`; "-" means stdout.
bool write_output(const std::string& path, const std::string& text,
                  std::ostream& out, std::ostream& err) {
  if (path == "-") {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

Refinement parse_refinement(const std::string& s) {
  return s == "sgpe" ? Refinement::kSgpe : Refinement::kNash;
}

Method parse_method(const std::string& s) {
  return s == "cqpm" ? Method::kCqpm : Method::kLogm;
}

int cmd_validate(const std::string& path, std::ostream& out,
                 std::ostream& err) {
  GameDescription desc;
  try {
    desc = parse_description(read_file(path));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  try {
    const Game game = Game::from_description(desc, false);
    const auto violations = validate_perfect_recall(game);
    if (!violations.empty()) {
      out << "invalid: perfect recall fails\n";
      for (const auto& v : violations) {
        out << "  infoset '" << game.infoset(v.infoset).id << "': histories '"
            << game.node(v.first).id << "' and '" << game.node(v.second).id
            << "' differ in the owner's experience\n";
      }
      return kInvalidGame;
    }
    out << "valid: " << game.num_players() << " players, "
        << game.num_nodes() << " nodes, " << game.num_infosets()
        << " information sets, " << game.subgames().roots.size()
        << " subgames\n";
    return kOk;
  } catch (const GameError& e) {
    out << "invalid: " << e.what() << '\n';
    return kInvalidGame;
  }
}

struct SolveOptions {
  std::string game;
  std::string method = "logm";
  std::string refinement = "nash";
  std::uint64_t seed = 0;
  std::string trace;
  std::string output;
  double alpha_norm = 0.0;
  double t_min = 1e-5;
  bool polish = false;
  std::int64_t max_iters = 100000;
  double timeout = 0.0;
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  std::optional<Game> loaded;
  try {
    loaded.emplace(load_game(o.game));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  const Game& game = *loaded;
  const Method method = parse_method(o.method);
  const Refinement ref = parse_refinement(o.refinement);
  SolverConfig cfg = default_config(game);
  cfg.t_min = o.t_min;
  cfg.max_iters = o.max_iters;
  cfg.max_seconds = o.timeout;
  cfg.polish = o.polish;
  if (o.alpha_norm > 0.0) {
    const std::size_t dim = 2 * game.total_actions() + 2 * game.total_members();
    cfg.alpha = random_alpha(dim, o.alpha_norm, o.seed);
  }

  std::ofstream trace_file;
  std::optional<CsvTraceWriter> writer;
  if (!o.trace.empty()) {
    trace_file.open(o.trace, std::ios::binary);
    if (!trace_file) {
      err << "error: cannot write '" << o.trace << "'\n";
      return kError;
    }
    writer.emplace(trace_file);
  }
  TraceResult res;
  try {
    res = trace_path(game, cfg, method, ref, writer ? &*writer : nullptr);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  spdlog::info("{} {} finished: {} after {} iterations", to_string(method),
               to_string(ref), to_string(res.status), res.iterations);
  out << "method " << to_string(method) << ", refinement " << to_string(ref)
      << '\n';
  out << "status: " << to_string(res.status);
  if (!res.message.empty()) out << " (" << res.message << ')';
  out << "\niterations: " << res.iterations << "\ntime: " << res.seconds
      << " s\nfinal t: " << res.state.t << '\n';
  if (!res.ok()) return kTraceFailed;

  const EndpointCheck chk =
      check_endpoint(game, res.assessment, ref, cfg.t_min);
  Assessment shown = res.assessment;
  if (chk.used_companion) shown = complete_assessment(game, shown.beta, ref);
  out << "equilibrium profile:\n";
  print_actions(out, game, shown.beta);
  out << "companion profile:\n";
  print_actions(out, game, shown.beta_tilde);
  out << "beliefs:\n";
  print_beliefs(out, game, shown.mu);
  out << "verification: " << (chk.pass ? "pass" : "FAIL") << " (max residual "
      << chk.max_residual << ", tol " << chk.tol
      << (chk.used_companion ? ", constructed companion" : "")
      << (res.polished ? ", polished" : "") << ")\n";
  if (!o.output.empty() &&
      !write_output(o.output, serialize_assessment(game, shown), out, err)) {
    return kError;
  }
  return chk.pass ? kOk : kNotVerified;
}

struct VerifyOptions {
  std::string game;
  std::string profile;
  std::string refinement = "nash";
  std::optional<double> tol;
  std::string report;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  std::optional<Game> loaded;
  std::optional<ProfileDocument> parsed;
  try {
    loaded.emplace(load_game(o.game));
    parsed.emplace(parse_profile(*loaded, read_file(o.profile)));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  const Game& game = *loaded;
  const ProfileDocument& doc = *parsed;
  const double tol = o.tol.value_or(default_tolerance(game));
  const bool semiseq = o.refinement == "semiseq" || o.refinement == "sgpe-semiseq";
  const Refinement mode = o.refinement == "sgpe" || o.refinement == "sgpe-semiseq"
                              ? Refinement::kSgpe
                              : Refinement::kNash;
  VerifyReport report;
  if (semiseq) {
    const BeliefSystem mu =
        doc.mu ? *doc.mu : solve_beliefs(game, doc.beta, mode);
    report = check_semi_sequential(game, doc.beta, mu, tol, mode);
  } else {
    Assessment a = complete_assessment(game, doc.beta, mode);
    if (doc.beta_tilde) a.beta_tilde = *doc.beta_tilde;
    if (doc.mu) a.mu = *doc.mu;
    report = mode == Refinement::kNash ? check_nash(game, a, tol)
                                       : check_sgpe(game, a, tol);
  }
  print_report(out, game, report);
  if (!o.report.empty() &&
      !write_output(o.report, report_to_json(game, report), out, err)) {
    return kError;
  }
  return report.pass ? kOk : kNotVerified;
}

struct GenerateOptions {
  std::string family = "A";
  int n = 3;
  std::vector<int> branching;
  std::vector<int> m;
  int layers = 1;
  std::uint64_t seed = 0;
  int payoff_lo = -10;
  int payoff_hi = 10;
  double zero_prob_max = 0.5;
  std::string output = "-";
};

int cmd_generate(const GenerateOptions& o, std::ostream& out,
                 std::ostream& err) {
  GenSpec spec;
  try {
    spec.family = parse_family(o.family);
    spec.n = o.n;
    spec.branching = o.branching;
    spec.layers = o.layers;
    spec.seed = o.seed;
    spec.payoff_lo = o.payoff_lo;
    spec.payoff_hi = o.payoff_hi;
    spec.zero_prob_max = o.zero_prob_max;
    if (!o.m.empty()) spec.expected_m = o.m;
    const Generated g = generate_description(spec);
    if (!write_output(o.output, serialize(g.description), out, err)) {
      return kError;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Equilibrium computation for extensive-form games"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a game file");
  validate->add_option("game", validate_path, "game file")->required();

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Trace a homotopy path to an equilibrium");
  solve->add_option("game", so.game, "game file")->required();
  solve->add_option("--method", so.method)
      ->check(CLI::IsMember({"logm", "cqpm"}));
  solve->add_option("--refinement", so.refinement)
      ->check(CLI::IsMember({"nash", "sgpe"}));
  solve->add_option("--seed", so.seed, "seed for the random alpha");
  solve->add_option("--trace", so.trace, "write the path as CSV");
  solve->add_option("--alpha-norm", so.alpha_norm,
                    "norm of a random perturbation vector (0 disables)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--t-min", so.t_min)->check(CLI::Range(1e-15, 0.5));
  solve->add_flag("--polish", so.polish, "Newton polish of the endpoint");
  solve->add_option("--max-iters", so.max_iters)->check(CLI::PositiveNumber);
  solve->add_option("--timeout", so.timeout, "seconds, 0 for none")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("-o,--output", so.output, "write the assessment as JSON");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Check a profile");
  verify->add_option("game", vo.game, "game file")->required();
  verify->add_option("--profile", vo.profile, "profile JSON")->required();
  verify->add_option("--refinement", vo.refinement)
      ->check(CLI::IsMember({"nash", "sgpe", "semiseq", "sgpe-semiseq"}));
  verify->add_option("--tol", vo.tol)->check(CLI::NonNegativeNumber);
  verify->add_option("--report", vo.report, "write the report as JSON");

  GenerateOptions go;
  auto* gen = app.add_subcommand("generate", "Write a random game");
  gen->add_option("--family", go.family)
      ->check(CLI::IsMember({"A", "B", "C", "a", "b", "c"}));
  gen->add_option("--n", go.n)->check(CLI::Range(2, 64));
  gen->add_option("--branching", go.branching, "actions per player")
      ->delimiter(',')
      ->required();
  gen->add_option("--m", go.m, "expected infoset counts")->delimiter(',');
  gen->add_option("--layers", go.layers)->check(CLI::PositiveNumber);
  gen->add_option("--seed", go.seed);
  gen->add_option("--payoff-lo", go.payoff_lo);
  gen->add_option("--payoff-hi", go.payoff_hi);
  gen->add_option("--zero-prob-max", go.zero_prob_max)
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("-o,--output", go.output);

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Run a benchmark spec");
  bench->add_option("--spec", bo.spec, "bench spec JSON")->required();
  bench->add_option("--out", bo.out, "summary CSV")->required();
  bench->add_option("--instances-out", bo.instances_out, "per-instance CSV");
  bench->add_option("--workers", bo.workers)->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }

  if (*validate) return cmd_validate(validate_path, out, err);
  if (*solve) return cmd_solve(so, out, err);
  if (*verify) return cmd_verify(vo, out, err);
  if (*gen) return cmd_generate(go, out, err);
  return cmd_bench(bo, out, err);
}

}  // namespace efg::cli
