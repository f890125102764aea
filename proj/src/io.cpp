#include "cesrank/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace cesrank {

using nlohmann::json;

namespace {

std::string pointer(const std::string& base, std::size_t index) {
  return base + "/" + std::to_string(index);
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte one past the offending character.
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column),
                     "malformed JSON");
  }
}

void require_format(const json& doc) {
  if (!doc.is_object()) throw ParseError("/", "document must be a JSON object");
  if (!doc.contains("format")) throw ParseError("/format", "missing format version");
  const auto& f = doc["format"];
  if (!f.is_number_integer() || f.get<int>() != kFormatVersion) {
    throw ParseError("/format", "unsupported format version (expected 1)");
  }
}

double number_at(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ParseError(where, "number is not finite");
  return v;
}

int index_at(const json& value, const std::string& where, int n) {
  if (!value.is_number_integer()) throw ParseError(where, "expected an integer index");
  const auto v = value.get<long long>();
  if (v < 0 || v >= n) {
    throw ParseError(where, "index " + std::to_string(v) + " is out of range for " +
                                std::to_string(n) + " agents");
  }
  return static_cast<int>(v);
}

double weight_at(const json& value, const std::string& where) {
  const double w = number_at(value, where);
  if (w < 0.0) throw ParseError(where, "negative preference weight");
  return w;
}

Matrix dense_matrix(const json& rows, const std::string& where, int n) {
  if (!rows.is_array()) throw ParseError(where, "expected an array of rows");
  if (static_cast<int>(rows.size()) != n) {
    throw ParseError(where, "has " + std::to_string(rows.size()) + " rows, expected " +
                                std::to_string(n));
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i];
    const std::string row_ptr = pointer(where, i);
    if (!row.is_array()) throw ParseError(row_ptr, "expected an array");
    if (static_cast<int>(row.size()) != n) {
      throw ParseError(row_ptr, "row " + std::to_string(i) + " has " +
                                    std::to_string(row.size()) + " entries, expected " +
                                    std::to_string(n));
    }
    for (int j = 0; j < n; ++j) m(i, j) = weight_at(row[j], pointer(row_ptr, j));
  }
  return m;
}

Matrix triplet_matrix(const json& triplets, int n) {
  const std::string where = "/alpha_triplets";
  if (!triplets.is_array()) throw ParseError(where, "expected an array of [i, j, weight]");
  Matrix m = Matrix::Zero(n, n);
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    const std::string ptr = pointer(where, k);
    if (!t.is_array() || t.size() != 3) throw ParseError(ptr, "expected [i, j, weight]");
    const int i = index_at(t[0], pointer(ptr, 0), n);
    const int j = index_at(t[1], pointer(ptr, 1), n);
    const double w = weight_at(t[2], pointer(ptr, 2));
    if (!seen.emplace(i, j).second) {
      throw ParseError(ptr, "duplicate triplet for (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
    }
    m(i, j) = w;
  }
  return m;
}

Vector rho_vector(const json& doc, int n) {
  if (!doc.contains("rho")) throw ParseError("/rho", "missing rho");
  const auto& r = doc["rho"];
  Vector rho(n);
  if (r.is_number()) {
    rho.setConstant(number_at(r, "/rho"));
  } else if (r.is_array()) {
    if (static_cast<int>(r.size()) != n) {
      throw ParseError("/rho", "has " + std::to_string(r.size()) + " entries, expected " +
                                   std::to_string(n));
    }
    for (int i = 0; i < n; ++i) rho(i) = number_at(r[i], pointer("/rho", i));
  } else {
    throw ParseError("/rho", "expected a number or an array of numbers");
  }
  for (int i = 0; i < n; ++i) {
    try {
      validate_rho(rho(i), "rho");
    } catch (const InvalidArgument& e) {
      throw ParseError(r.is_array() ? pointer("/rho", i) : "/rho", e.what());
    }
  }
  return rho;
}

std::vector<std::string> agent_list(const json& doc) {
  if (!doc.contains("agents")) throw ParseError("/agents", "missing agent list");
  const auto& a = doc["agents"];
  if (!a.is_array() || a.empty()) throw ParseError("/agents", "expected a non-empty array");
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].is_string()) throw ParseError(pointer("/agents", k), "expected a string");
    ids.push_back(a[k].get<std::string>());
    if (!seen.insert(ids.back()).second) {
      throw ParseError(pointer("/agents", k), "duplicate agent id '" + ids.back() + "'");
    }
  }
  return ids;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string location(int line) { return "line " + std::to_string(line); }

template <typename T>
bool parse_token(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    const std::size_t start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k > start) tokens.push_back(line.substr(start, k - start));
  }
  return tokens;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RankingProblem parse_problem(std::string_view text) {
  const json doc = parse_json(text);
  require_format(doc);
  auto ids = agent_list(doc);
  const int n = static_cast<int>(ids.size());

  const bool dense = doc.contains("alpha");
  const bool sparse = doc.contains("alpha_triplets");
  if (dense == sparse) {
    throw ParseError("/alpha", "exactly one of alpha or alpha_triplets is required");
  }
  Matrix alpha = dense ? dense_matrix(doc["alpha"], "/alpha", n)
                       : triplet_matrix(doc["alpha_triplets"], n);
  Vector rho = rho_vector(doc, n);

  double beta = kDefaultBeta;
  if (doc.contains("beta")) {
    beta = number_at(doc["beta"], "/beta");
    if (!(beta > 0.0 && beta <= 1.0)) throw ParseError("/beta", "beta must lie in (0, 1]");
  }
  return RankingProblem(std::move(ids), std::move(alpha), std::move(rho), beta);
}

RankingProblem load_problem(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

RankingProblem load_problem(const std::filesystem::path& path) {
  return parse_problem(read_text(path));
}

std::string serialize_problem(const RankingProblem& problem) {
  json doc;
  doc["format"] = kFormatVersion;
  doc["agents"] = problem.agent_ids();
  doc["alpha"] = matrix_json(problem.alpha());
  doc["rho"] = vector_json(problem.rho());
  doc["beta"] = problem.beta();
  return doc.dump(2) + "\n";
}

EdgeList parse_edge_list(std::string_view text) {
  EdgeList list;
  bool have_format = false;
  bool have_n = false;
  std::set<std::pair<int, int>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }

    if (!have_format) {
      int version = 0;
      if (tokens.size() != 2 || tokens[0] != "format:" || !parse_token(tokens[1], version)) {
        throw ParseError(location(line_no), "expected 'format: 1' header");
      }
      if (version != kFormatVersion) {
        throw ParseError(location(line_no), "unsupported format version");
      }
      have_format = true;
    } else if (!have_n) {
      if (tokens.size() != 2 || tokens[0] != "n" || !parse_token(tokens[1], list.n) ||
          list.n < 1) {
        throw ParseError(location(line_no), "expected 'n <count>' with a positive count");
      }
      have_n = true;
    } else {
      if (tokens.size() != 2 && tokens.size() != 3) {
        throw ParseError(location(line_no), "expected 'i j [weight]'");
      }
      WeightedEdge edge;
      if (!parse_token(tokens[0], edge.from) || !parse_token(tokens[1], edge.to)) {
        throw ParseError(location(line_no), "malformed vertex index");
      }
      if (edge.from < 0 || edge.from >= list.n || edge.to < 0 || edge.to >= list.n) {
        throw ParseError(location(line_no), "vertex index out of range for n = " +
                                                std::to_string(list.n));
      }
      if (tokens.size() == 3) {
        if (!parse_token(tokens[2], edge.weight) || !std::isfinite(edge.weight)) {
          throw ParseError(location(line_no), "malformed weight '" + std::string(tokens[2]) + "'");
        }
        if (edge.weight < 0.0) throw ParseError(location(line_no), "negative weight");
      }
      if (!seen.emplace(edge.from, edge.to).second) {
        throw ParseError(location(line_no), "duplicate edge " + std::to_string(edge.from) +
                                                " -> " + std::to_string(edge.to));
      }
      list.edges.push_back(edge);
    }
    if (end == text.size()) break;
  }
  if (!have_format) throw ParseError(location(line_no), "missing 'format: 1' header");
  if (!have_n) throw ParseError(location(line_no), "missing 'n <count>' line");
  return list;
}

EdgeList load_edge_list(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_edge_list(buffer.str());
}

EdgeList load_edge_list(const std::filesystem::path& path) {
  return parse_edge_list(read_text(path));
}

std::string serialize_edge_list(const EdgeList& list) {
  std::ostringstream out;
  out << "format: " << kFormatVersion << "\n";
  out << "n " << list.n << "\n";
  out << std::setprecision(17);
  for (const auto& e : list.edges) out << e.from << " " << e.to << " " << e.weight << "\n";
  return out.str();
}

DirectedGraph edge_list_graph(const EdgeList& list) {
  std::vector<DirectedGraph::Edge> edges;
  for (const auto& e : list.edges) {
    if (e.weight > 0.0) edges.emplace_back(e.from, e.to);
  }
  return DirectedGraph(list.n, std::move(edges));
}

RankingProblem edge_list_problem(const EdgeList& list, const Vector& rho, double beta) {
  Matrix alpha = Matrix::Zero(list.n, list.n);
  for (const auto& e : list.edges) alpha(e.from, e.to) = e.weight;
  return RankingProblem(RankingProblem::default_ids(list.n), std::move(alpha), rho, beta);
}

bool is_problem_document(std::string_view text) {
  const auto k = text.find_first_not_of(" \t\r\n");
  return k != std::string_view::npos && text[k] == '{';
}

std::string serialize_economy(const CesEconomy& economy,
                              const std::vector<std::string>& agent_ids) {
  json doc;
  doc["format"] = kFormatVersion;
  doc["kind"] = "economy";
  doc["agents"] = agent_ids.empty() ? RankingProblem::default_ids(economy.size()) : agent_ids;
  doc["alpha"] = matrix_json(economy.alpha());
  doc["rho"] = vector_json(economy.rho());
  doc["endowments"] = matrix_json(economy.endowments());
  return doc.dump(2) + "\n";
}

CesEconomy parse_economy(std::string_view text) {
  const json doc = parse_json(text);
  require_format(doc);
  if (!doc.contains("kind") || doc["kind"] != "economy") {
    throw ParseError("/kind", "expected \"economy\"");
  }
  if (!doc.contains("alpha") || !doc["alpha"].is_array()) {
    throw ParseError("/alpha", "missing utility coefficient matrix");
  }
  const int n = static_cast<int>(doc["alpha"].size());
  if (n < 1) throw ParseError("/alpha", "economy needs at least one trader");
  Matrix alpha = dense_matrix(doc["alpha"], "/alpha", n);
  Vector rho = rho_vector(doc, n);
  if (!doc.contains("endowments")) throw ParseError("/endowments", "missing endowments");
  Matrix w = dense_matrix(doc["endowments"], "/endowments", n);
  try {
    return CesEconomy(std::move(alpha), std::move(rho), std::move(w));
  } catch (const InvalidArgument& e) {
    throw ParseError("/", e.what());
  }
}

RankingProblem regular_counterexample() {
  Matrix alpha(3, 3);
  alpha << 1.0 / 3, 1.0 / 3, 1.0 / 3,
           5.0 / 12, 1.0 / 6, 5.0 / 12,
           1.0 / 4, 1.0 / 2, 1.0 / 4;
  return RankingProblem::with_common_rho({"1", "2", "3"}, std::move(alpha), 0.5, 1.0);
}

}  // namespace cesrank
