#include "gsp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "gsp/rng.hpp"

namespace gsp {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), count_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --count_;
  }

  std::size_t count() const { return count_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
  std::size_t count_;
};

std::string format_double(double x) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}

std::size_t count_components(std::size_t n, const std::vector<Edge>& edges) {
  DisjointSets sets(n);
  for (const Edge& e : edges) sets.unite(e.u, e.v);
  return sets.count();
}

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::string model_tag,
             std::optional<std::uint64_t> seed)
    : n_(n), edges_(std::move(edges)), model_tag_(std::move(model_tag)), seed_(seed) {
  if (n_ == 0) throw GraphError("graph must have at least one vertex");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (Edge& e : edges_) {
    if (e.u >= n_ || e.v >= n_) {
      throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") references a vertex outside [0, " + std::to_string(n_) + ")");
    }
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") has non-positive weight " + format_double(e.weight));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.emplace(e.u, e.v).second) {
      throw GraphError("duplicate edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ")");
    }
  }
  const std::size_t components = count_components(n_, edges_);
  if (components != 1) {
    throw GraphError("graph is disconnected: " + std::to_string(components) + " components");
  }
}

Eigen::MatrixXd laplacian_from_graph(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    L(u, v) -= e.weight;
    L(v, u) -= e.weight;
  }
  // Degrees as the negated off-diagonal row sums keep every row sum exactly 0.
  for (Eigen::Index i = 0; i < n; ++i) {
    double degree = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) degree -= L(i, j);
    }
    L(i, i) = degree;
  }
  return L;
}

Eigen::MatrixXd Spectrum::band_projector(std::size_t k) const {
  const Eigen::MatrixXd U = band(k);
  return U * U.transpose();
}

Spectrum spectrum(const Eigen::MatrixXd& laplacian) {
  if (laplacian.rows() != laplacian.cols()) {
    throw std::invalid_argument("spectrum: matrix is not square");
  }
  const double asym = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, laplacian.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("spectrum: matrix is not symmetric (max asymmetry " +
                                format_double(asym) + ")");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectrum: eigensolver did not converge");
  }

  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  const Eigen::Index n = s.eigenvalues.size();

  const double residual =
      (laplacian * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).norm();
  const double scale = std::max(1.0, laplacian.norm());
  if (!(residual <= 1e-8 * scale)) {
    throw std::runtime_error("spectrum: eigendecomposition residual " + format_double(residual) +
                             " exceeds tolerance");
  }

  for (Eigen::Index c = 0; c < n; ++c) {
    auto col = s.eigenvectors.col(c);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(col(r)) > 1e-10) {
        if (col(r) < 0.0) col = -col;
        break;
      }
    }
  }

  const double top = std::max(1.0, std::abs(s.eigenvalues(n - 1)));
  if (std::abs(s.eigenvalues(0)) <= 1e-8 * top) s.eigenvalues(0) = 0.0;

  const double gap_tol = 1e-8 * top;
  s.distinct = true;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (s.eigenvalues(i) - s.eigenvalues(i - 1) <= gap_tol) {
      s.distinct = false;
      break;
    }
  }
  return s;
}

std::string model_name(const GraphModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ErdosRenyi>) return "er";
        else if constexpr (std::is_same_v<T, BarabasiAlbert>) return "ba";
        else return "sbm";
      },
      model);
}

std::string model_tag(const GraphModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ErdosRenyi>) {
          return "er(p=" + format_double(m.p) + ")";
        } else if constexpr (std::is_same_v<T, BarabasiAlbert>) {
          return "ba(attach=" + std::to_string(m.attach) + ")";
        } else {
          return "sbm(blocks=" + std::to_string(m.blocks) + ",p_in=" + format_double(m.p_in) +
                 ",p_out=" + format_double(m.p_out) + ")";
        }
      },
      model);
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

std::vector<Edge> draw_er(const ErdosRenyi& m, std::size_t n, CounterRng& rng) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < m.p) edges.push_back({i, j, 1.0});
    }
  }
  return edges;
}

// Star on attach+1 vertices, then each new vertex attaches to `attach`
// distinct existing vertices chosen proportionally to degree.
std::vector<Edge> draw_ba(const BarabasiAlbert& m, std::size_t n, CounterRng& rng) {
  std::vector<Edge> edges;
  std::vector<std::size_t> endpoints;  // vertex v appears deg(v) times
  const std::size_t seed_size = std::min(n, m.attach + 1);
  for (std::size_t v = 1; v < seed_size; ++v) {
    edges.push_back({0, v, 1.0});
    endpoints.push_back(0);
    endpoints.push_back(v);
  }
  std::vector<std::size_t> targets;
  for (std::size_t v = seed_size; v < n; ++v) {
    targets.clear();
    while (targets.size() < m.attach) {
      const std::size_t t = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    std::sort(targets.begin(), targets.end());
    for (std::size_t t : targets) {
      edges.push_back({t, v, 1.0});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

std::vector<std::size_t> block_labels(std::size_t n, std::size_t blocks) {
  std::vector<std::size_t> label(n);
  const std::size_t base = n / blocks;
  const std::size_t extra = n % blocks;
  std::size_t v = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) label[v++] = b;
  }
  return label;
}

std::vector<Edge> draw_sbm(const StochasticBlock& m, std::size_t n, CounterRng& rng) {
  const std::vector<std::size_t> label = block_labels(n, m.blocks);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = label[i] == label[j] ? m.p_in : m.p_out;
      if (uniform01(rng) < p) edges.push_back({i, j, 1.0});
    }
  }
  return edges;
}

}  // namespace

Graph generate_graph(const GraphModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_graph: n must be at least 2");
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ErdosRenyi>) {
          check_probability(m.p, "ER edge probability");
        } else if constexpr (std::is_same_v<T, BarabasiAlbert>) {
          if (m.attach == 0) throw std::invalid_argument("BA attachment count must be positive");
        } else {
          if (m.blocks == 0) throw std::invalid_argument("SBM needs at least one block");
          check_probability(m.p_in, "SBM p_in");
          check_probability(m.p_out, "SBM p_out");
        }
      },
      model);
  if (const auto* sbm = std::get_if<StochasticBlock>(&model); sbm && sbm->blocks > n) {
    throw std::invalid_argument("SBM has more blocks than vertices");
  }

  const std::string tag = model_tag(model);
  for (std::size_t attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    CounterRng rng(hash_words({seed, attempt}));
    std::vector<Edge> edges = std::visit(
        [&](const auto& m) -> std::vector<Edge> {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ErdosRenyi>) return draw_er(m, n, rng);
          else if constexpr (std::is_same_v<T, BarabasiAlbert>) return draw_ba(m, n, rng);
          else return draw_sbm(m, n, rng);
        },
        model);
    if (count_components(n, edges) == 1) {
      std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
      });
      return Graph(n, std::move(edges), tag, seed);
    }
  }
  throw GraphError("model parameters yield disconnected graphs: " + tag + " with n=" +
                   std::to_string(n) + " failed " + std::to_string(kMaxGenerationAttempts) +
                   " attempts");
}

Graph parse_edge_list(const std::string& text, std::string tag) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  auto parse_index = [&](const std::string& token) -> std::size_t {
    std::size_t pos = 0;
    long long value = 0;
    try {
      value = std::stoll(token, &pos);
    } catch (const std::exception&) {
      throw ParseError(line_no, "invalid vertex id '" + token + "'");
    }
    if (pos != token.size()) throw ParseError(line_no, "invalid vertex id '" + token + "'");
    if (value < 0) throw ParseError(line_no, "negative vertex id '" + token + "'");
    return static_cast<std::size_t>(value);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(line_no, "expected 'u v' or 'u v w', got " + std::to_string(tokens.size()) +
                                    " fields");
    }
    Edge e;
    e.u = parse_index(tokens[0]);
    e.v = parse_index(tokens[1]);
    if (tokens.size() == 3) {
      std::size_t pos = 0;
      try {
        e.weight = std::stod(tokens[2], &pos);
      } catch (const std::exception&) {
        throw ParseError(line_no, "invalid weight '" + tokens[2] + "'");
      }
      if (pos != tokens[2].size()) throw ParseError(line_no, "invalid weight '" + tokens[2] + "'");
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
        throw ParseError(line_no, "weight must be positive, got '" + tokens[2] + "'");
      }
    }
    if (e.u == e.v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(e.u));
    const auto key = std::minmax(e.u, e.v);
    if (!seen.emplace(key.first, key.second).second) {
      throw ParseError(line_no, "duplicate edge " + std::to_string(key.first) + " " +
                                    std::to_string(key.second));
    }
    n = std::max({n, e.u + 1, e.v + 1});
    edges.push_back(e);
  }
  if (edges.empty()) throw GraphError("edge list contains no edges");
  const std::size_t components = count_components(n, edges);
  if (components != 1) {
    throw GraphError("input graph is disconnected: " + std::to_string(components) +
                     " components");
  }
  return Graph(n, std::move(edges), std::move(tag));
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open edge list '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_edge_list(buffer.str(), "file:" + path.filename().string());
}

std::string format_edge_list(const Graph& g) {
  std::ostringstream os;
  os << "# " << (g.model_tag().empty() ? "graph" : g.model_tag()) << " n=" << g.size();
  if (g.seed()) os << " seed=" << *g.seed();
  os << '\n';
  for (const Edge& e : g.edges()) {
    os << e.u << ' ' << e.v;
    if (e.weight != 1.0) os << ' ' << format_double(e.weight);
    os << '\n';
  }
  return os.str();
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << format_edge_list(g);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace gsp
