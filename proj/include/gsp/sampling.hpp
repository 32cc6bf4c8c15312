#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "gsp/graph.hpp"
#include "gsp/rng.hpp"
#include "gsp/sample_set.hpp"
#include "gsp/signal.hpp"

namespace gsp {

enum class Criterion { A, D, E };

/// Relative tolerance below which two greedy scores count as tied; ties go to
/// the lowest vertex id.
inline constexpr double kScoreTieTol = 1e-12;

/// A candidate raises rank(U_SK) when its squared distance to the span of the
/// sampled rows exceeds this fraction of its squared norm.
inline constexpr double kRankIncreaseTol = 1e-10;

/// Greedy A-, D- or E-optimal design on the information matrix P
/// (Pi_bl[S] while |S| < k, U_SK^T U_SK afterwards). Rank-raising vertices
/// always win over the rest.
SampleSet greedy_optimal(const Spectrum& spectrum, std::size_t k, Criterion criterion,
                         std::size_t m);

/// m vertices without replacement, with probability proportional to the
/// squared row norms of U_K among the vertices not yet drawn.
SampleSet weighted_random(const Spectrum& spectrum, std::size_t k, std::size_t m,
                          CounterRng& rng);

SampleSet uniform_random(std::size_t n, std::size_t m, CounterRng& rng);

/// Greedy minimisation of the exact GLR mean-squared error xi1 + sigma^2 xi2.
SampleSet greedy_mmse_glr(const Eigen::MatrixXd& laplacian, const Spectrum& spectrum,
                          std::size_t k, double mu, NoiseKind kind, double snr, std::size_t m);

/// Worst-case (E-optimal) greedy design, used as the SNR-free GLR criterion.
SampleSet greedy_wmse_glr(const Spectrum& spectrum, std::size_t k, std::size_t m);

/// Scheme names used in configs and CSV files.
enum class Scheme { AOptimal, DOptimal, EOptimal, WeightedRandom, UniformRandom, Mmse, Wmse };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& text);
/// Least squares for the A/D/E and weighted-random schemes, GLR otherwise.
bool scheme_uses_glr(Scheme scheme);
bool scheme_is_random(Scheme scheme);

}  // namespace gsp
