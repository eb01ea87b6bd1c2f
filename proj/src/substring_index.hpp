#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace homopart::detail {

// k-mer index over a fixed set of texts answering "which texts contain this
// query as a substring". Every query must be at least k residues long; hits
// are verified by direct search, so hash collisions only cost time.
class SubstringIndex {
 public:
  SubstringIndex(std::vector<std::string_view> texts, std::size_t k);

  // Indices of texts containing `query`, ascending.
  std::vector<std::size_t> containing(std::string_view query) const;

  std::size_t k() const { return k_; }

 private:
  std::vector<std::string_view> texts_;
  std::size_t k_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> postings_;
};

// Shortest length among `queries`, capped at 12; the k to use for an index
// that will be probed with them.
std::size_t anchor_length(const std::vector<std::string_view>& queries);

}  // namespace homopart::detail
