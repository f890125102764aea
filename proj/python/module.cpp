#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cesrank/axioms.hpp"
#include "cesrank/economy.hpp"
#include "cesrank/io.hpp"
#include "cesrank/markov.hpp"
#include "cesrank/problem.hpp"
#include "cesrank/solver.hpp"

namespace py = pybind11;
using namespace cesrank;

namespace {

py::dict report_dict(const SolverReport& r) {
  py::dict d;
  d["iterations"] = r.iterations;
  d["residual"] = r.residual;
  d["converged"] = r.converged;
  d["method"] = r.method;
  d["wall_time_seconds"] = r.wall_time_seconds;
  return d;
}

py::dict verdict_dict(const AxiomVerdict& v) {
  py::dict d;
  d["axiom"] = v.axiom;
  d["status"] = to_string(v.status);
  d["summary"] = v.summary;
  d["witness"] = v.witness;
  d["tolerances"] = v.tolerances;
  return d;
}

SolverMethod solver_method(const std::string& name) {
  if (name == "auto") return SolverMethod::automatic;
  if (name == "closed_form") return SolverMethod::closed_form;
  if (name == "tatonnement") return SolverMethod::tatonnement;
  throw InvalidArgument("unknown solver method '" + name + "'");
}

StationaryMethod stationary_method(const std::string& name) {
  if (name == "auto") return StationaryMethod::automatic;
  if (name == "power") return StationaryMethod::power_iteration;
  if (name == "linear") return StationaryMethod::linear_solve;
  throw InvalidArgument("unknown stationary method '" + name + "'");
}

SolverConfig make_config(const std::string& method, double tol, double gamma, long max_iters,
                         std::uint64_t seed, std::optional<Vector> initial) {
  SolverConfig c;
  c.method = solver_method(method);
  c.tolerance = tol;
  c.gamma = gamma;
  c.max_iters = max_iters;
  c.seed = seed;
  c.initial_prices = std::move(initial);
  return c;
}

}  // namespace

#define SOLVER_ARGS                                                                     \
  py::arg("method") = "auto", py::arg("tol") = 1e-10, py::arg("gamma") = 0.5,           \
      py::arg("max_iters") = 200000L, py::arg("seed") = 0ULL,                           \
      py::arg("initial_prices") = py::none()

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph ranking as exchange-market equilibrium prices";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NotStronglyConnected>(m, "NotStronglyConnected", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<RankingProblem>(m, "RankingProblem")
      .def(py::init<std::vector<std::string>, Matrix, Vector, double>(), py::arg("agent_ids"),
           py::arg("alpha"), py::arg("rho"), py::arg("beta") = kDefaultBeta)
      .def_static("with_common_rho", &RankingProblem::with_common_rho, py::arg("agent_ids"),
                  py::arg("alpha"), py::arg("rho"), py::arg("beta") = kDefaultBeta)
      .def_property_readonly("agent_ids", &RankingProblem::agent_ids)
      .def_property_readonly("alpha", &RankingProblem::alpha)
      .def_property_readonly("rho", &RankingProblem::rho)
      .def_property_readonly("beta", &RankingProblem::beta)
      .def("__len__", &RankingProblem::size)
      .def("__eq__", [](const RankingProblem& a, const RankingProblem& b) { return a == b; });

  py::class_<NormalizedProblem>(m, "NormalizedProblem")
      .def_property_readonly("agent_ids", &NormalizedProblem::agent_ids)
      .def_property_readonly("alpha_hat", &NormalizedProblem::alpha_hat)
      .def_property_readonly("rho", &NormalizedProblem::rho)
      .def_property_readonly("beta", &NormalizedProblem::beta);

  m.def("normalize_preferences", &normalize_preferences, py::arg("problem"));
  m.def("is_regular", py::overload_cast<const Matrix&, double>(&is_regular), py::arg("alpha"),
        py::arg("tol") = kRegularityTolerance);

  m.def(
      "web_transition",
      [](int n, std::vector<DirectedGraph::Edge> edges, double damping) {
        return build_web_transition(DirectedGraph(n, std::move(edges)), damping).matrix();
      },
      py::arg("n"), py::arg("edges"), py::arg("damping") = kDefaultPageRankDamping,
      "PageRank transition matrix of a directed graph");
  m.def(
      "stationary_distribution",
      [](const Matrix& p, const std::string& method, double tol) {
        StationaryOptions o;
        o.method = stationary_method(method);
        o.tolerance = tol;
        auto [pi, report] = stationary_distribution(TransitionMatrix(p), o);
        return py::make_tuple(pi.values(), report_dict(report));
      },
      py::arg("p"), py::arg("method") = "auto", py::arg("tol") = 1e-10);
  m.def(
      "is_strongly_connected",
      [](int n, std::vector<DirectedGraph::Edge> edges) {
        return is_strongly_connected(DirectedGraph(n, std::move(edges)));
      },
      py::arg("n"), py::arg("edges"));
  m.def(
      "is_aperiodic",
      [](int n, std::vector<DirectedGraph::Edge> edges) {
        return is_aperiodic(DirectedGraph(n, std::move(edges)));
      },
      py::arg("n"), py::arg("edges"));

  py::class_<CesEconomy>(m, "CesEconomy")
      .def(py::init<Matrix, Vector, Matrix>(), py::arg("alpha"), py::arg("rho"),
           py::arg("endowments"))
      .def_static("with_unit_endowments", &CesEconomy::with_unit_endowments, py::arg("alpha"),
                  py::arg("rho"))
      .def_property_readonly("alpha", &CesEconomy::alpha)
      .def_property_readonly("rho", &CesEconomy::rho)
      .def_property_readonly("endowments", &CesEconomy::endowments)
      .def("__len__", &CesEconomy::size);

  m.def("ces_demand", &ces_demand, py::arg("economy"), py::arg("trader"), py::arg("prices"));
  m.def("excess_demand", &excess_demand, py::arg("economy"), py::arg("prices"));
  m.def(
      "markov_to_economy", [](const Matrix& p) { return markov_to_economy(TransitionMatrix(p)); },
      py::arg("p"));
  m.def("build_economy", &build_economy, py::arg("normalized"));

  m.def(
      "solve_equilibrium",
      [](const CesEconomy& economy, const std::string& method, double tol, double gamma,
         long max_iters, std::uint64_t seed, std::optional<Vector> initial) {
        auto [prices, report] = solve_equilibrium(
            economy, make_config(method, tol, gamma, max_iters, seed, std::move(initial)));
        return py::make_tuple(prices.values(), report_dict(report));
      },
      py::arg("economy"), SOLVER_ARGS);
  m.def(
      "ces_ranking",
      [](const RankingProblem& problem, const std::string& method, double tol, double gamma,
         long max_iters, std::uint64_t seed, std::optional<Vector> initial) {
        auto result = ces_ranking(
            problem, make_config(method, tol, gamma, max_iters, seed, std::move(initial)));
        return py::make_tuple(result.scores.values(), report_dict(result.report));
      },
      py::arg("problem"), SOLVER_ARGS);
  m.def(
      "verify_equilibrium",
      [](const CesEconomy& economy, const Vector& prices, double tol) {
        const auto check = verify_equilibrium(economy, PriceVector(prices), tol);
        py::dict d;
        d["excess"] = check.excess;
        d["residual"] = check.residual;
        d["worst_good"] = check.worst_good;
        d["passed"] = check.passed;
        return d;
      },
      py::arg("economy"), py::arg("prices"), py::arg("tol") = 1e-9);
  m.def(
      "multistart_probe",
      [](const CesEconomy& economy, int starts, double tol, std::uint64_t seed) {
        SolverConfig c;
        c.tolerance = tol;
        c.seed = seed;
        const auto r = multistart_probe(economy, c, starts);
        py::dict d;
        d["solutions"] = r.solutions;
        d["max_spread"] = r.max_spread;
        d["bound"] = r.bound;
        d["uniqueness_expected"] = r.uniqueness_expected;
        d["within_bound"] = r.within_bound;
        return d;
      },
      py::arg("economy"), py::arg("starts") = 5, py::arg("tol") = 1e-10, py::arg("seed") = 0ULL);

  m.def(
      "check_minimal_fairness",
      [](int n, double rho, double beta) { return verdict_dict(check_minimal_fairness(n, rho, beta)); },
      py::arg("n"), py::arg("rho"), py::arg("beta") = 1.0);
  m.def(
      "check_strict_monotonicity",
      [](const RankingProblem& p, int i, int j) {
        return verdict_dict(check_strict_monotonicity(p, i, j));
      },
      py::arg("problem"), py::arg("i"), py::arg("j"));
  m.def(
      "check_invariance",
      [](const RankingProblem& p, int i, double lambda) {
        return verdict_dict(check_invariance(p, i, lambda));
      },
      py::arg("problem"), py::arg("i"), py::arg("lam"));
  m.def(
      "check_uniformity", [](const RankingProblem& p) { return verdict_dict(check_uniformity(p)); },
      py::arg("problem"));
  m.def(
      "gs_spot_check",
      [](const CesEconomy& economy, int good, double delta, const std::vector<Vector>& probes) {
        return verdict_dict(gs_spot_check(economy, good, delta, probes));
      },
      py::arg("economy"), py::arg("good"), py::arg("delta"), py::arg("probe_prices"));

  m.def("parse_problem", &parse_problem, py::arg("text"));
  m.def(
      "load_problem",
      [](const std::string& path) { return load_problem(std::filesystem::path(path)); },
      py::arg("path"));
  m.def("serialize_problem", &serialize_problem, py::arg("problem"));
  m.def("regular_counterexample", &regular_counterexample);
}
