#include "homopart/balance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "homopart/error.hpp"
#include "homopart/format.hpp"
#include "homopart/rng.hpp"

namespace homopart {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::no_balance: return "no_balance";
    case Strategy::hard_balance: return "hard_balance";
    case Strategy::length_control: return "length_control";
    case Strategy::minimal: return "minimal";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "none" || text == "no_balance") return Strategy::no_balance;
  if (text == "hard" || text == "hard_balance") return Strategy::hard_balance;
  if (text == "length" || text == "length_control") return Strategy::length_control;
  if (text == "minimal") return Strategy::minimal;
  throw InputError("unknown strategy '" + std::string(text) + "'");
}

namespace {

std::vector<std::string> sorted(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

BalancedSet no_balance(const Split& split, std::string provenance) {
  return {sorted(split.positives), sorted(split.negatives), Strategy::no_balance, 0, std::move(provenance)};
}

BalancedSet hard_balance(const Split& split, std::uint64_t seed, std::string provenance) {
  BalancedSet out{sorted(split.positives), sorted(split.negatives), Strategy::hard_balance, seed,
                  std::move(provenance)};
  if (out.negatives.size() > out.positives.size()) {
    Rng rng(seed);
    out.negatives = sorted(rng.sample(std::move(out.negatives), out.positives.size()));
  }
  return out;
}

BalancedSet length_control(const Split& split, const Corpus& sequences, std::uint64_t seed, std::string provenance) {
  BalancedSet out{sorted(split.positives), sorted(split.negatives), Strategy::length_control, seed,
                  std::move(provenance)};
  if (out.negatives.size() <= out.positives.size()) return out;

  // length -> unused negatives of that length, ids ascending
  std::map<std::size_t, std::vector<std::string>> pool;
  for (const auto& id : out.negatives) pool[sequences.at(id).residues.size()].push_back(id);

  Rng rng(seed);
  auto order = out.positives;
  rng.shuffle(order);
  std::vector<std::string> chosen;
  for (const auto& id : order) {
    const std::size_t len = sequences.at(id).residues.size();
    auto above = pool.lower_bound(len);
    auto below = above == pool.begin() ? pool.end() : std::prev(above);
    const std::size_t up = above == pool.end() ? SIZE_MAX : above->first - len;
    const std::size_t down = below == pool.end() ? SIZE_MAX : len - below->first;
    std::vector<decltype(above)> buckets;
    if (down <= up) buckets.push_back(below);
    if (up <= down) buckets.push_back(above);
    std::size_t total = 0;
    for (auto b : buckets) total += b->second.size();
    std::size_t pick = rng.index(total);
    for (auto b : buckets) {
      if (pick < b->second.size()) {
        chosen.push_back(b->second[pick]);
        b->second.erase(b->second.begin() + static_cast<std::ptrdiff_t>(pick));
        if (b->second.empty()) pool.erase(b);
        break;
      }
      pick -= b->second.size();
    }
  }
  out.negatives = sorted(std::move(chosen));
  return out;
}

std::vector<BalancedSet> minimal(const std::vector<MinimalSetting>& settings, const IdentityStore& store,
                                 std::uint64_t seed, Scope scope) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> targets;  // scope key -> (pos, neg)
  auto key = [&](const MinimalSetting& s) { return scope == Scope::global ? std::string() : s.dataset; };
  for (const auto& s : settings) {
    auto [it, fresh] = targets.try_emplace(key(s), s.split.positives.size(), s.split.negatives.size());
    if (!fresh) {
      it->second.first = std::min(it->second.first, s.split.positives.size());
      it->second.second = std::min(it->second.second, s.split.negatives.size());
    }
  }

  std::vector<BalancedSet> out;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const auto& s = settings[i];
    const auto [target_pos, target_neg] = targets.at(key(s));
    if (s.t_c > 0.0) store.require_threshold(s.t_c, "t_c");
    Rng rng(mix_seed(seed, i));
    BalancedSet b{sorted(rng.sample(sorted(s.split.positives), target_pos)), {}, Strategy::minimal, seed, s.name};

    std::vector<std::string> pool;
    if (s.t_c == 0.0) {
      pool = sorted(s.split.negatives);
    } else {
      std::vector<char> kept(store.size(), 0);
      for (const auto& id : b.positives) kept[store.index_of(id)] = 1;
      for (const auto& id : sorted(s.split.negatives)) {
        const auto& nbs = store.neighbors(store.index_of(id));
        if (std::any_of(nbs.begin(), nbs.end(),
                        [&](const IdentityStore::Neighbor& nb) { return nb.identity >= s.t_c && kept[nb.index]; })) {
          pool.push_back(id);
        }
      }
    }
    if (pool.size() < target_neg) {
      throw InfeasibleError("setting '" + s.name + "': only " + std::to_string(pool.size()) +
                            " negatives reach t_c " + format_double(s.t_c) + ", " + std::to_string(target_neg) +
                            " needed");
    }
    b.negatives = sorted(rng.sample(std::move(pool), target_neg));
    out.push_back(std::move(b));
  }
  return out;
}

ValidationSplit validation_split(const Split& training, double fraction, std::size_t cap, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InputError("validation fraction must lie in (0, 1]");
  const std::size_t p = training.positives.size();
  const std::size_t q = training.negatives.size();
  const std::size_t n = p + q;
  // The epsilon absorbs representation error, e.g. 0.1 * 1000.
  const auto wanted = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  const std::size_t total = std::min(wanted, cap);
  if (p == 0 || q == 0 || total < 2) {
    throw InfeasibleError("validation split of " + std::to_string(total) + " cannot hold both classes");
  }

  // Largest remainder; an exact tie goes to the positives.
  std::size_t vp = total * p / n;
  std::size_t vq = total * q / n;
  if (vp + vq < total) {
    const std::size_t rp = total * p % n;
    const std::size_t rq = total * q % n;
    (rp >= rq ? vp : vq) += 1;
  }
  if (vp == 0) {
    vp = 1;
    --vq;
  } else if (vq == 0) {
    vq = 1;
    --vp;
  }

  Rng rng(seed);
  ValidationSplit out;
  out.validation.positives = sorted(rng.sample(sorted(training.positives), vp));
  out.validation.negatives = sorted(rng.sample(sorted(training.negatives), vq));
  auto rest = [](const std::vector<std::string>& all, const std::vector<std::string>& taken) {
    std::vector<std::string> r;
    for (const auto& id : sorted(all)) {
      if (!std::binary_search(taken.begin(), taken.end(), id)) r.push_back(id);
    }
    return r;
  };
  out.train.positives = rest(training.positives, out.validation.positives);
  out.train.negatives = rest(training.negatives, out.validation.negatives);
  return out;
}

}  // namespace homopart
