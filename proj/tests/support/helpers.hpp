#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <sstream>
#include <filesystem>
#include <string>
#include <vector>

#include "gsp/graph.hpp"
#include "gsp/harness.hpp"
#include "gsp/rng.hpp"
#include "graph_enum.hpp"

namespace gsp::testing {

inline GraphInstance p3() { return make_instance(0, path_graph(3)); }

/// Connected graph with i.i.d. uniform(0.5, 2) weights; generic weights make
/// spectra simple and greedy scores tie-free.
inline Graph random_weighted_graph(std::size_t n, double p, std::uint64_t seed) {
  const Graph base = generate_graph(ErdosRenyi{p}, n, seed);
  CounterRng rng(hash_words({seed, 77}));
  std::vector<Edge> edges = base.edges();
  for (Edge& e : edges) e.weight = 0.5 + 1.5 * uniform01(rng);
  return Graph(n, std::move(edges), "weighted-er");
}

inline std::vector<std::size_t> iota_vector(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

/// Uniform random permutation of [0, n).
inline std::vector<std::size_t> random_permutation(std::size_t n, CounterRng& rng) {
  std::vector<std::size_t> v = iota_vector(n);
  for (std::size_t i = n; i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
  return v;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gsp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace gsp::testing
