#include "gsp/sample_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsp {

SampleSet::SampleSet(std::vector<std::size_t> order, std::size_t n, std::string scheme,
                     std::optional<std::uint64_t> seed)
    : order_(std::move(order)), n_(n), scheme_(std::move(scheme)), seed_(seed) {
  std::vector<bool> seen(n_, false);
  for (std::size_t v : order_) {
    if (v >= n_) {
      throw std::invalid_argument("sample set vertex " + std::to_string(v) + " outside [0, " +
                                  std::to_string(n_) + ")");
    }
    if (seen[v]) throw std::invalid_argument("sample set repeats vertex " + std::to_string(v));
    seen[v] = true;
  }
}

bool SampleSet::contains(std::size_t v) const {
  return std::find(order_.begin(), order_.end(), v) != order_.end();
}

SampleSet SampleSet::prefix(std::size_t m) const {
  if (m > order_.size()) throw std::out_of_range("sample set prefix longer than the set");
  return SampleSet(std::vector<std::size_t>(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(m)),
                   n_, scheme_, seed_);
}

SampleSet SampleSet::without(const std::vector<std::size_t>& removed) const {
  std::vector<std::size_t> kept;
  kept.reserve(order_.size());
  for (std::size_t v : order_) {
    if (std::find(removed.begin(), removed.end(), v) == removed.end()) kept.push_back(v);
  }
  return SampleSet(std::move(kept), n_, scheme_, seed_);
}

}  // namespace gsp
