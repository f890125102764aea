#include "cli_app.hpp"

#include "cesrank/axioms.hpp"
#include "cesrank/economy.hpp"
#include "cesrank/io.hpp"
#include "cesrank/markov.hpp"
#include "cesrank/solver.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iomanip>
#include <locale>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace cesrank::cli {

namespace {

using nlohmann::json;

struct Input {
  std::optional<RankingProblem> problem;
  std::optional<EdgeList> edges;

  int size() const { return problem ? problem->size() : edges->n; }

  std::vector<std::string> ids() const {
    return problem ? problem->agent_ids() : RankingProblem::default_ids(edges->n);
  }

  Matrix weights() const {
    if (problem) return problem->alpha();
    Matrix w = Matrix::Zero(edges->n, edges->n);
    for (const auto& e : edges->edges) w(e.from, e.to) = e.weight;
    return w;
  }

  DirectedGraph graph() const {
    return problem ? DirectedGraph::from_support(problem->alpha()) : edge_list_graph(*edges);
  }
};

Input load_input(const std::string& path) {
  const std::string text = read_text(path);
  Input input;
  if (is_problem_document(text)) {
    input.problem = parse_problem(text);
  } else {
    input.edges = parse_edge_list(text);
  }
  return input;
}

json vector_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json report_json(const SolverReport& report) {
  return json{{"iterations", report.iterations},
              {"residual", report.residual},
              {"converged", report.converged},
              {"method", report.method},
              {"wall_time_seconds", report.wall_time_seconds}};
}

void write_ranking(std::ostream& out, const std::vector<std::string>& ids, const Vector& scores,
                   const std::string& format, const std::string& method,
                   const SolverReport& report) {
  const auto entries = rank_order(scores);
  if (format == "json") {
    json ranking = json::array();
    for (const auto& e : entries) {
      ranking.push_back(json{{"rank", e.position},
                             {"agent", ids[e.agent]},
                             {"score", e.score},
                             {"tie_group", e.tie_group}});
    }
    json doc{{"format", kFormatVersion},
             {"method", method},
             {"ranking", ranking},
             {"report", report_json(report)}};
    out << doc.dump(2) << "\n";
    return;
  }
  std::ostringstream buffer;
  buffer.imbue(std::locale::classic());
  buffer << std::setprecision(12);
  for (const auto& e : entries) {
    buffer << e.position << '\t' << ids[e.agent] << '\t' << e.score << '\n';
  }
  out << buffer.str();
}

struct SolverFlags {
  double tolerance = 1e-10;
  double gamma = 0.5;
  long max_iters = 200000;
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--tol", tolerance, "Equilibrium tolerance on max |excess demand|")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--gamma", gamma, "Tatonnement step exponent in (0, 1]")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--max-iters", max_iters, "Tatonnement iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Seed for randomized starts and probes");
  }

  SolverConfig config() const {
    SolverConfig c;
    c.tolerance = tolerance;
    c.gamma = gamma;
    c.max_iters = max_iters;
    c.seed = seed;
    return c;
  }
};

// --- rank --------------------------------------------------------------------

struct RankOptions {
  std::string method = "ces";
  std::string input;
  std::optional<double> rho;
  std::optional<double> beta;
  double damping = kDefaultPageRankDamping;
  std::string format = "tsv";
  SolverFlags solver;
};

int run_rank(const RankOptions& opt, std::ostream& out, std::ostream& err) {
  const Input input = load_input(opt.input);
  const auto ids = input.ids();
  const int n = input.size();

  if (opt.method == "ces") {
    RankingProblem problem = [&] {
      if (input.problem) return *input.problem;
      if (!opt.rho) {
        throw ParseError("--rho", "edge-list input needs --rho for the CES method");
      }
      return edge_list_problem(*input.edges, Vector::Constant(n, *opt.rho));
    }();
    if (opt.rho) problem = problem.with_rho(Vector::Constant(n, *opt.rho));
    if (opt.beta) problem = problem.with_beta(*opt.beta);
    const auto result = ces_ranking(problem, opt.solver.config());
    write_ranking(out, ids, result.scores.values(), opt.format, "ces", result.report);
    return kExitOk;
  }

  if (opt.rho || opt.beta) err << "warning: --rho and --beta only apply to --method ces\n";

  if (opt.method == "pagerank") {
    const TransitionMatrix p = build_web_transition(input.graph(), opt.damping);
    StationaryOptions so;
    so.tolerance = opt.solver.tolerance;
    const auto [pi, report] = stationary_distribution(p, so);
    write_ranking(out, ids, pi.values(), opt.format, "pagerank", report);
    return kExitOk;
  }

  // invariant: stationary distribution of the row-normalized preference
  // matrix, which must be irreducible.
  const Matrix weights = input.weights();
  require_strongly_connected(DirectedGraph::from_support(weights), "invariant method");
  const TransitionMatrix p = TransitionMatrix::from_weights(weights);
  StationaryOptions so;
  so.method = StationaryMethod::linear_solve;
  so.tolerance = opt.solver.tolerance;
  const auto [pi, report] = stationary_distribution(p, so);
  write_ranking(out, ids, pi.values(), opt.format, "invariant", report);
  return kExitOk;
}

// --- verify ------------------------------------------------------------------

struct VerifyOptions {
  std::string axiom = "all";
  std::string input;
  std::optional<double> rho;
  std::optional<double> beta;
  std::optional<std::string> row;
  double lambda = 10.0;
  std::optional<std::string> first;
  std::optional<std::string> second;
  double delta = 0.05;
  int probes = 5;
  SolverFlags solver;
};

int agent_index(const RankingProblem& problem, const std::string& id) {
  const auto& ids = problem.agent_ids();
  for (int i = 0; i < problem.size(); ++i) {
    if (ids[i] == id) return i;
  }
  throw ParseError("agent", "unknown agent id '" + id + "'");
}

json verdict_json(const AxiomVerdict& v, const std::string& status) {
  json witness = json::object();
  for (const auto& [k, values] : v.witness) witness[k] = values;
  json tolerances = json::object();
  for (const auto& [k, t] : v.tolerances) tolerances[k] = t;
  return json{{"axiom", v.axiom},
              {"status", status},
              {"summary", v.summary},
              {"witness", witness},
              {"tolerances", tolerances}};
}

int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  RankingProblem problem = [&] {
    if (opt.input.empty()) return regular_counterexample();
    Input input = load_input(opt.input);
    if (input.problem) return *input.problem;
    return edge_list_problem(*input.edges, Vector::Constant(input.size(), opt.rho.value_or(0.0)));
  }();
  const int n = problem.size();
  if (opt.rho) problem = problem.with_rho(Vector::Constant(n, *opt.rho));
  if (opt.beta) problem = problem.with_beta(*opt.beta);
  const SolverConfig config = opt.solver.config();
  const bool all = opt.axiom == "all";

  json verdicts = json::array();
  bool failed = false;
  auto record = [&](const AxiomVerdict& v) {
    if (v.status == VerdictStatus::fail) failed = true;
    verdicts.push_back(verdict_json(v, to_string(v.status)));
  };

  if (all || opt.axiom == "fairness") {
    std::set<double> rhos(problem.rho().data(), problem.rho().data() + n);
    for (double rho : rhos) record(check_minimal_fairness(std::max(n, 2), rho, problem.beta(), config));
  }

  if (all || opt.axiom == "monotone") {
    if (!problem.has_common_rho()) {
      err << "warning: strict monotonicity needs a common rho; check not applicable\n";
    }
    std::vector<std::pair<int, int>> pairs;
    if (opt.first || opt.second) {
      if (!opt.first || !opt.second) throw ParseError("--i/--j", "give both --i and --j");
      pairs.emplace_back(agent_index(problem, *opt.first), agent_index(problem, *opt.second));
    } else {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i != j) pairs.emplace_back(i, j);
        }
      }
    }
    bool any_applicable = false;
    std::optional<AxiomVerdict> last_skip;
    for (const auto& [i, j] : pairs) {
      const auto v = check_strict_monotonicity(problem, i, j, config);
      if (v.applicable() || pairs.size() == 1) {
        any_applicable = any_applicable || v.applicable();
        record(v);
      } else {
        last_skip = v;
      }
    }
    if (!any_applicable && pairs.size() > 1) {
      AxiomVerdict v = *last_skip;
      v.summary = problem.has_common_rho() ? "no agent pair with strict column dominance"
                                           : last_skip->summary;
      record(v);
    }
  }

  if (all || opt.axiom == "invariance") {
    std::vector<int> rows;
    if (opt.row) {
      rows.push_back(agent_index(problem, *opt.row));
    } else {
      for (int i = 0; i < n; ++i) rows.push_back(i);
    }
    for (int i : rows) record(check_invariance(problem, i, opt.lambda, config));
  }

  if (all || opt.axiom == "uniformity") {
    const auto v = check_uniformity(problem, config);
    // The expected outcome is a non-uniform CES ranking; a uniform result on
    // one instance does not refute that.
    json entry = verdict_json(v, v.status == VerdictStatus::fail   ? "pass"
                                 : v.status == VerdictStatus::pass ? "inconclusive"
                                                                   : "not_applicable");
    entry["finding"] = v.status == VerdictStatus::fail   ? "non-uniform, as expected"
                       : v.status == VerdictStatus::pass ? "uniform on this instance"
                                                         : "not regular";
    verdicts.push_back(entry);
  }

  if (all || opt.axiom == "gs") {
    const CesEconomy economy = build_economy(normalize_preferences(problem));
    std::vector<Vector> probes{PriceVector::uniform(n).values()};
    std::mt19937_64 rng(opt.solver.seed);
    std::uniform_real_distribution<double> draw(0.05, 1.0);
    for (int k = 0; k < opt.probes; ++k) {
      Vector p(n);
      for (int j = 0; j < n; ++j) p(j) = draw(rng);
      probes.push_back(p / p.sum());
    }
    std::optional<AxiomVerdict> outcome;
    for (int l = 0; l < n; ++l) {
      auto v = gs_spot_check(economy, l, opt.delta, probes);
      if (!v.passed()) {
        outcome = v;
        break;
      }
      outcome = v;
    }
    if (outcome->passed()) {
      outcome->summary = "gross substitutes held for every good at " +
                         std::to_string(probes.size()) + " probe price vectors";
    }
    record(*outcome);
  }

  out << verdicts.dump(2) << "\n";
  return failed ? kExitCheckFailed : kExitOk;
}

// --- compare -----------------------------------------------------------------

struct CompareOptions {
  std::string input;
  double damping = kDefaultPageRankDamping;
  std::string stationary = "power";
  std::string format = "tsv";
};

constexpr double kCompareTolerance = 1e-8;

int run_compare(const CompareOptions& opt, std::ostream& out) {
  const Input input = load_input(opt.input);
  const TransitionMatrix p = build_web_transition(input.graph(), opt.damping);
  StationaryOptions so;
  so.method = opt.stationary == "linear" ? StationaryMethod::linear_solve
                                         : StationaryMethod::power_iteration;
  const auto [pagerank, chain_report] = stationary_distribution(p, so);
  const auto [prices, market_report] = solve_cobb_douglas(markov_to_economy(p));
  const double diff = (pagerank.values() - prices.values()).cwiseAbs().maxCoeff();
  const bool agree = diff <= kCompareTolerance;
  const auto ids = input.ids();

  if (opt.format == "json") {
    json doc{{"format", kFormatVersion},
             {"agents", ids},
             {"pagerank", vector_json(pagerank.values())},
             {"equilibrium", vector_json(prices.values())},
             {"max_abs_difference", diff},
             {"tolerance", kCompareTolerance},
             {"agree", agree},
             {"pagerank_report", report_json(chain_report)},
             {"equilibrium_report", report_json(market_report)}};
    out << doc.dump(2) << "\n";
  } else {
    std::ostringstream buffer;
    buffer.imbue(std::locale::classic());
    buffer << std::setprecision(12);
    buffer << "# max_abs_difference\t" << diff << "\n# agree\t" << (agree ? "yes" : "no") << "\n";
    buffer << "agent\tpagerank\tequilibrium\n";
    for (int i = 0; i < input.size(); ++i) {
      buffer << ids[i] << '\t' << pagerank[i] << '\t' << prices[i] << '\n';
    }
    out << buffer.str();
  }
  return agree ? kExitOk : kExitCheckFailed;
}

// --- convert -----------------------------------------------------------------

struct ConvertOptions {
  std::string input;
  double damping = kDefaultPageRankDamping;
  std::string output;
};

int run_convert(const ConvertOptions& opt, std::ostream& out) {
  const Input input = load_input(opt.input);
  // Graphs become the Cobb-Douglas market of their PageRank chain; problem
  // documents become the economy of the CES ranking pipeline.
  const CesEconomy economy =
      input.problem ? build_economy(normalize_preferences(*input.problem))
                    : markov_to_economy(build_web_transition(input.graph(), opt.damping));
  const std::string doc = serialize_economy(economy, input.ids());
  if (opt.output.empty()) {
    out << doc;
  } else {
    std::ofstream file(opt.output, std::ios::binary);
    if (!file) throw ParseError(opt.output, "cannot open output file");
    file << doc;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph ranking via exchange-market equilibrium prices", "cesrank"};
  app.require_subcommand(1);

  RankOptions rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank agents by CES equilibrium, PageRank or the invariant method");
  rank_cmd->add_option("--method", rank.method, "ces | pagerank | invariant")
      ->check(CLI::IsMember({"ces", "pagerank", "invariant"}));
  rank_cmd->add_option("--input", rank.input, "Problem document or edge list")->required();
  rank_cmd->add_option("--rho", rank.rho, "Common CES rho (overrides the document)");
  rank_cmd->add_option("--beta", rank.beta, "Preference damping beta in (0, 1]");
  rank_cmd->add_option("--damping", rank.damping, "PageRank damping c in (0, 1)");
  rank_cmd->add_option("--format", rank.format, "tsv | json")
      ->check(CLI::IsMember({"tsv", "json"}));
  rank.solver.add_to(rank_cmd);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run executable ranking-axiom checks");
  verify_cmd->add_option("--axiom", verify.axiom, "fairness | monotone | invariance | uniformity | gs | all")
      ->check(CLI::IsMember({"fairness", "monotone", "invariance", "uniformity", "gs", "all"}));
  verify_cmd->add_option("--input", verify.input,
                         "Problem document or edge list (default: bundled regular counterexample)");
  verify_cmd->add_option("--rho", verify.rho, "Common rho override");
  verify_cmd->add_option("--beta", verify.beta, "Damping override");
  verify_cmd->add_option("--row", verify.row, "Agent id whose preferences are scaled (invariance)");
  verify_cmd->add_option("--lambda", verify.lambda, "Scale factor for invariance")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--i", verify.first, "Dominated agent id (monotone)");
  verify_cmd->add_option("--j", verify.second, "Dominating agent id (monotone)");
  verify_cmd->add_option("--delta", verify.delta, "Price increment for the gross-substitutes probe")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--probes", verify.probes, "Random probe price vectors (gs)")
      ->check(CLI::NonNegativeNumber);
  verify.solver.add_to(verify_cmd);

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Compare PageRank with the Cobb-Douglas market equilibrium");
  compare_cmd->add_option("--input", compare.input, "Edge list or problem document")->required();
  compare_cmd->add_option("--damping", compare.damping, "PageRank damping c in (0, 1)");
  compare_cmd->add_option("--stationary", compare.stationary, "power | linear")
      ->check(CLI::IsMember({"power", "linear"}));
  compare_cmd->add_option("--format", compare.format, "tsv | json")
      ->check(CLI::IsMember({"tsv", "json"}));

  ConvertOptions convert;
  auto* convert_cmd = app.add_subcommand("convert", "Write the exchange economy behind a graph or problem");
  convert_cmd->add_option("--input", convert.input, "Edge list or problem document")->required();
  convert_cmd->add_option("--damping", convert.damping, "PageRank damping c in (0, 1)");
  convert_cmd->add_option("--output", convert.output, "Output path (default: stdout)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("cesrank");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  try {
    if (*rank_cmd) return run_rank(rank, out, err);
    if (*verify_cmd) return run_verify(verify, out, err);
    if (*compare_cmd) return run_compare(compare, out);
    if (*convert_cmd) return run_convert(convert, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitParse;
}

}  // namespace cesrank::cli
