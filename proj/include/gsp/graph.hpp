#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gsp {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Edge-list file could not be parsed. `line()` is 1-based.
class ParseError : public GraphError {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected, connected, weighted graph without self-loops. Immutable once
/// constructed; the constructor rejects anything violating those invariants.
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges, std::string model_tag = {},
        std::optional<std::uint64_t> seed = std::nullopt);

  std::size_t size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& model_tag() const { return model_tag_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::string model_tag_;
  std::optional<std::uint64_t> seed_;
};

/// Number of connected components of the graph on `n` vertices with `edges`.
std::size_t count_components(std::size_t n, const std::vector<Edge>& edges);

/// Combinatorial Laplacian L = D - W.
Eigen::MatrixXd laplacian_from_graph(const Graph& g);

/// Full eigendecomposition of a symmetric matrix, eigenvalues ascending.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalues[i]
  bool distinct = true;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }

  /// First k eigenvectors (N x k), i.e. the bandlimited basis.
  Eigen::MatrixXd band(std::size_t k) const { return eigenvectors.leftCols(static_cast<Eigen::Index>(k)); }

  /// Projector onto the first k eigenvectors.
  Eigen::MatrixXd band_projector(std::size_t k) const;
};

/// Eigendecomposition with a deterministic sign convention (first entry of
/// each eigenvector whose magnitude exceeds 1e-10 is positive). A smallest
/// eigenvalue within 1e-8 * max(1, lambda_max) of zero is clamped to 0.
Spectrum spectrum(const Eigen::MatrixXd& laplacian);

struct ErdosRenyi {
  double p = 0.8;
};
struct BarabasiAlbert {
  std::size_t attach = 3;
};
struct StochasticBlock {
  std::size_t blocks = 5;
  double p_in = 0.7;
  double p_out = 0.1;
};
using GraphModel = std::variant<ErdosRenyi, BarabasiAlbert, StochasticBlock>;

/// Short model name: "er", "ba" or "sbm".
std::string model_name(const GraphModel& model);
/// Name plus parameters, e.g. "er(p=0.8)".
std::string model_tag(const GraphModel& model);

/// Draws a connected graph. Disconnected draws are rejected and redrawn with
/// seed hash(seed, attempt) for up to 1000 attempts.
Graph generate_graph(const GraphModel& model, std::size_t n, std::uint64_t seed);

inline constexpr std::size_t kMaxGenerationAttempts = 1000;

/// Reads a "u v [w]" edge list (0-based ids, '#' comments, blank lines ok).
Graph load_graph(const std::filesystem::path& path);
Graph parse_edge_list(const std::string& text, std::string model_tag = "file");

/// Writes the edge list format accepted by load_graph.
void write_edge_list(const Graph& g, const std::filesystem::path& path);
std::string format_edge_list(const Graph& g);

}  // namespace gsp
