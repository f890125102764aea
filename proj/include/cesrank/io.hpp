#pragma once

#include "cesrank/economy.hpp"
#include "cesrank/markov.hpp"
#include "cesrank/problem.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cesrank {

inline constexpr int kFormatVersion = 1;

// Problem document (JSON):
//
//   {
//     "format": 1,
//     "agents": ["a", "b"],
//     "alpha": [[0, 1], [1, 0]],            // dense, row-major
//     "alpha_triplets": [[0, 1, 3.0], ...], // or sparse (i, j, weight); not both
//     "rho": 0.5,                           // or one value per agent
//     "beta": 0.85                          // optional
//   }
//
// Errors are ParseError with a JSON pointer (or "line L, column C" for syntax
// errors) as the location.
RankingProblem parse_problem(std::string_view text);
RankingProblem load_problem(std::istream& in);
RankingProblem load_problem(const std::filesystem::path& path);

// Dense form; load_problem(serialize_problem(p)) == p.
std::string serialize_problem(const RankingProblem& problem);

struct WeightedEdge {
  int from = 0;
  int to = 0;
  double weight = 1.0;
};

// Edge list document:
//
//   format: 1
//   n 3
//   0 1
//   1 2 0.5     # weight defaults to 1
//
// Lines starting with '#' and blank lines are ignored. Indices are 0-based.
struct EdgeList {
  int n = 0;
  std::vector<WeightedEdge> edges;
};

EdgeList parse_edge_list(std::string_view text);
EdgeList load_edge_list(std::istream& in);
EdgeList load_edge_list(const std::filesystem::path& path);
std::string serialize_edge_list(const EdgeList& list);

// Edges with positive weight.
DirectedGraph edge_list_graph(const EdgeList& list);
// alpha(i, j) = weight, agents named "0".."n-1".
RankingProblem edge_list_problem(const EdgeList& list, const Vector& rho,
                                 double beta = kDefaultBeta);

// True when the text is a JSON object (problem document) rather than an edge
// list.
bool is_problem_document(std::string_view text);

// Economy document: {"format": 1, "kind": "economy", "agents", "alpha", "rho",
// "endowments"}.
std::string serialize_economy(const CesEconomy& economy,
                              const std::vector<std::string>& agent_ids = {});
CesEconomy parse_economy(std::string_view text);

std::string read_text(const std::filesystem::path& path);

// The three-agent regular problem with common rho = 1/2 and beta = 1 whose
// CES ranking is not uniform. Agents are "1", "2", "3"; the same document ships
// as data/regular_counterexample.json.
RankingProblem regular_counterexample();

}  // namespace cesrank
