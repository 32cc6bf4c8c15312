#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gsp {

/// Ordered set of distinct vertex ids. The order is the selection order of
/// the scheme that produced it, so prefixes are meaningful.
class SampleSet {
 public:
  SampleSet() = default;
  /// Throws std::invalid_argument on duplicates or ids outside [0, n).
  SampleSet(std::vector<std::size_t> order, std::size_t n, std::string scheme = {},
            std::optional<std::uint64_t> seed = std::nullopt);

  const std::vector<std::size_t>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  std::size_t universe() const { return n_; }
  const std::string& scheme() const { return scheme_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  std::size_t operator[](std::size_t i) const { return order_[i]; }

  bool contains(std::size_t v) const;
  /// First m selections, same provenance.
  SampleSet prefix(std::size_t m) const;
  /// This set with `removed` taken out, remaining order preserved.
  SampleSet without(const std::vector<std::size_t>& removed) const;

 private:
  std::vector<std::size_t> order_;
  std::size_t n_ = 0;
  std::string scheme_;
  std::optional<std::uint64_t> seed_;
};

}  // namespace gsp
