#include "substring_index.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace homopart::detail {

namespace {

std::uint64_t kmer_hash(std::string_view kmer) { return std::hash<std::string_view>{}(kmer); }

}  // namespace

SubstringIndex::SubstringIndex(std::vector<std::string_view> texts, std::size_t k)
    : texts_(std::move(texts)), k_(k) {
  if (k_ == 0) throw std::invalid_argument("substring index needs k >= 1");
  for (std::size_t t = 0; t < texts_.size(); ++t) {
    const std::string_view text = texts_[t];
    if (text.size() < k_) continue;
    for (std::size_t p = 0; p + k_ <= text.size(); ++p) {
      auto& list = postings_[kmer_hash(text.substr(p, k_))];
      if (list.empty() || list.back() != t) list.push_back(static_cast<std::uint32_t>(t));
    }
  }
}

std::vector<std::size_t> SubstringIndex::containing(std::string_view query) const {
  if (query.size() < k_) throw std::invalid_argument("query shorter than index anchor length");
  // Probe with the rarest k-mer of the query.
  const std::vector<std::uint32_t>* best = nullptr;
  for (std::size_t p = 0; p + k_ <= query.size(); ++p) {
    auto it = postings_.find(kmer_hash(query.substr(p, k_)));
    if (it == postings_.end()) return {};
    if (best == nullptr || it->second.size() < best->size()) best = &it->second;
  }
  std::vector<std::size_t> hits;
  for (std::uint32_t t : *best) {
    if (texts_[t].size() >= query.size() && texts_[t].find(query) != std::string_view::npos) {
      hits.push_back(t);
    }
  }
  return hits;
}

std::size_t anchor_length(const std::vector<std::string_view>& queries) {
  std::size_t k = 12;
  for (auto q : queries) k = std::min(k, q.size());
  return std::max<std::size_t>(k, 1);
}

}  // namespace homopart::detail
