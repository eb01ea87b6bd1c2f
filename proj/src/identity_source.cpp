#include "homopart/identity_source.hpp"

#include "homopart/align.hpp"
#include "homopart/error.hpp"

namespace homopart {

ComputedIdentity::ComputedIdentity(const std::vector<const Corpus*>& corpora, ScoringScheme scoring,
                                   const IdentityStore* cache)
    : scoring_(std::move(scoring)), cache_(cache) {
  scoring_.validate();
  if (cache_ && !(StoreParams::from(scoring_) == cache_->params())) {
    throw InputError("identity store was built with different alignment parameters");
  }
  for (const auto* corpus : corpora) {
    for (const auto& r : corpus->records()) {
      if (encoded_.contains(r.id)) continue;
      encoded_.emplace(r.id, encode_residues(r.residues));
    }
  }
}

double ComputedIdentity::identity(std::string_view a, std::string_view b) const {
  if (a == b) return 1.0;
  if (cache_ && cache_->contains(a) && cache_->contains(b)) {
    const double stored = cache_->lookup(a, b);
    if (stored > 0.0 || cache_->floor() == 0.0) return stored;
  }
  auto ia = encoded_.find(std::string(a));
  auto ib = encoded_.find(std::string(b));
  if (ia == encoded_.end()) throw InputError("no sequence for id '" + std::string(a) + "'");
  if (ib == encoded_.end()) throw InputError("no sequence for id '" + std::string(b) + "'");
  return homopart::identity(std::span<const std::uint8_t>(ia->second), std::span<const std::uint8_t>(ib->second),
                            scoring_);
}

}  // namespace homopart
