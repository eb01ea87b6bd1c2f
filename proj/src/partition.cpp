#include "homopart/partition.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <tuple>

#include "homopart/error.hpp"
#include "homopart/format.hpp"

namespace homopart {

void Thresholds::validate(const IdentityStore& store) const {
  if (!(t_s > 0.0 && t_s <= 1.0)) throw InputError("t_s must lie in (0, 1], got " + format_double(t_s));
  if (!(t_c >= 0.0 && t_c < 1.0)) throw InputError("t_c must lie in [0, 1), got " + format_double(t_c));
  if (t_s < 1.0) store.require_threshold(t_s, "t_s");
  if (t_c > 0.0) store.require_threshold(t_c, "t_c");
}

namespace {

constexpr int kNone = -1;

using Index = std::uint32_t;

std::vector<Index> indices_of(const std::vector<std::string>& ids, const IdentityStore& store) {
  std::vector<Index> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(store.index_of(id));
  return out;
}

// Split membership per store index; kNone outside every split.
std::vector<int> membership(const IdSets& splits, const IdentityStore& store) {
  std::vector<int> of(store.size(), kNone);
  for (std::size_t s = 0; s < splits.size(); ++s) {
    for (const auto& id : splits[s]) {
      auto& slot = of[store.index_of(id)];
      if (slot != kNone) throw InputError("id '" + id + "' appears in more than one split");
      slot = static_cast<int>(s);
    }
  }
  return of;
}

// Store indices are in lexicographic id order, so sorting indices sorts ids.
IdSets to_id_sets(const std::vector<int>& split_of, std::size_t k, const IdentityStore& store) {
  IdSets out(k);
  for (Index i = 0; i < split_of.size(); ++i) {
    if (split_of[i] != kNone) out[split_of[i]].push_back(store.id(i));
  }
  return out;
}

std::size_t conflicts(Index u, int split, const std::vector<int>& split_of, const IdentityStore& store, double t_s) {
  std::size_t n = 0;
  for (const auto& nb : store.neighbors(u)) {
    if (nb.identity > t_s && split_of[nb.index] != kNone && split_of[nb.index] != split) ++n;
  }
  return n;
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  std::vector<std::size_t> parent;
  std::vector<std::size_t> size;
};

}  // namespace

IdSets cluster_positives(const std::vector<std::string>& positives, const IdentityStore& store, std::size_t k) {
  if (k < 2) throw InputError("k must be at least 2");
  const std::size_t n = positives.size();
  if (n < k) {
    throw InputError("cannot form " + std::to_string(k) + " splits from " + std::to_string(n) + " positives");
  }
  auto members = indices_of(positives, store);
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw InputError("duplicate id among positives");
  }
  std::vector<int> local(store.size(), kNone);
  for (std::size_t i = 0; i < n; ++i) local[members[i]] = static_cast<int>(i);

  struct Edge {
    double identity;
    std::size_t a, b;  // local positions; a < b
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : store.neighbors(members[i])) {
      if (nb.index > members[i] && local[nb.index] != kNone) {
        edges.push_back({nb.identity, i, static_cast<std::size_t>(local[nb.index])});
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.identity != y.identity) return x.identity > y.identity;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  const std::size_t cap = (n + k - 1) / k;
  DisjointSets sets(n);
  for (const auto& e : edges) {
    const auto ra = sets.find(e.a);
    const auto rb = sets.find(e.b);
    if (ra == rb || sets.size[ra] + sets.size[rb] > cap) continue;
    const auto [keep, drop] = std::minmax(ra, rb);
    sets.parent[drop] = keep;
    sets.size[keep] += sets.size[drop];
  }

  // Members ascend within each cluster, so front() is the smallest id.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<int> slot(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = sets.find(i);
    if (slot[root] == kNone) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[slot[root]].push_back(i);
  }

  auto smaller = [](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    return std::make_pair(x.size(), x.front()) < std::make_pair(y.size(), y.front());
  };
  while (clusters.size() > k) {
    std::sort(clusters.begin(), clusters.end(), smaller);
    auto merged = std::move(clusters[0]);
    merged.insert(merged.end(), clusters[1].begin(), clusters[1].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin(), clusters.begin() + 2);
    clusters.push_back(std::move(merged));
  }
  // The cap can leave fewer than k clusters (e.g. n = 9, k = 4 gives cap 3);
  // the largest one is then halved, upper ids moving to the new cluster.
  while (clusters.size() < k) {
    auto largest = std::max_element(clusters.begin(), clusters.end(), [](const auto& x, const auto& y) {
      return std::make_pair(x.size(), y.front()) < std::make_pair(y.size(), x.front());
    });
    const std::size_t keep = (largest->size() + 1) / 2;
    std::vector<std::size_t> upper(largest->begin() + static_cast<std::ptrdiff_t>(keep), largest->end());
    largest->resize(keep);
    clusters.push_back(std::move(upper));
  }
  std::sort(clusters.begin(), clusters.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });

  IdSets out;
  for (const auto& c : clusters) {
    auto& ids = out.emplace_back();
    for (auto i : c) ids.push_back(store.id(members[i]));
  }
  return out;
}

CleanResult remove_inter_split_violations(const IdSets& splits, Label label, const IdentityStore& store, double t_s,
                                          Rng& rng) {
  if (t_s < 1.0) store.require_threshold(t_s, "t_s");
  auto split_of = membership(splits, store);
  std::vector<std::size_t> sizes;
  for (const auto& s : splits) sizes.push_back(s.size());

  struct Pair {
    Index a, b;
  };
  std::vector<Pair> pairs;
  std::vector<std::size_t> count(store.size(), 0);
  for (Index u = 0; u < store.size(); ++u) {
    if (split_of[u] == kNone) continue;
    for (const auto& nb : store.neighbors(u)) {
      const Index v = nb.index;
      if (v > u && nb.identity > t_s && split_of[v] != kNone && split_of[v] != split_of[u]) {
        pairs.push_back({u, v});
        ++count[u];
        ++count[v];
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
    const auto vx = count[x.a] + count[x.b];
    const auto vy = count[y.a] + count[y.b];
    if (vx != vy) return vx > vy;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  CleanResult out;
  for (const auto& p : pairs) {
    const int sa = split_of[p.a];
    const int sb = split_of[p.b];
    if (sa == kNone || sb == kNone) continue;
    Index victim;
    if (sizes[sa] != sizes[sb]) {
      victim = sizes[sa] > sizes[sb] ? p.a : p.b;
    } else {
      victim = rng.index(2) == 0 ? p.a : p.b;
    }
    const int s = split_of[victim];
    --sizes[s];
    split_of[victim] = kNone;
    out.removed.push_back({store.id(victim), label, static_cast<std::size_t>(s), count[victim], false});
  }
  out.splits = to_id_sets(split_of, splits.size(), store);
  return out;
}

void readd_removed(IdSets& splits, std::vector<RemovalRecord>& removed, const IdentityStore& store, double t_s) {
  if (t_s < 1.0) store.require_threshold(t_s, "t_s");
  auto split_of = membership(splits, store);
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < removed.size(); ++r) {
    if (!removed[r].restored) order.push_back(r);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::tie(removed[x].violations, removed[x].id) < std::tie(removed[y].violations, removed[y].id);
  });
  for (auto r : order) {
    auto& rec = removed[r];
    if (rec.split >= splits.size()) throw InputError("removal record for '" + rec.id + "' names a missing split");
    const Index u = store.index_of(rec.id);
    if (split_of[u] != kNone) throw InputError("removed id '" + rec.id + "' is still assigned");
    if (conflicts(u, static_cast<int>(rec.split), split_of, store, t_s) != 0) continue;
    split_of[u] = static_cast<int>(rec.split);
    rec.restored = true;
  }
  splits = to_id_sets(split_of, splits.size(), store);
}

NegativeAssignment assign_negatives(const IdSets& positive_splits, const std::vector<std::string>& negatives,
                                    const IdentityStore& store, const Thresholds& thresholds, Rng& rng,
                                    const NegativeAssignment* base) {
  thresholds.validate(store);
  const std::size_t k = positive_splits.size();
  const auto pos_split = membership(positive_splits, store);

  // Sorted candidate splits per negative.
  auto neg = indices_of(negatives, store);
  std::sort(neg.begin(), neg.end());
  if (std::adjacent_find(neg.begin(), neg.end()) != neg.end()) throw InputError("duplicate id among negatives");
  std::vector<std::vector<int>> candidates(neg.size());
  for (std::size_t i = 0; i < neg.size(); ++i) {
    if (pos_split[neg[i]] != kNone) throw InputError("id '" + store.id(neg[i]) + "' is both positive and negative");
    auto& c = candidates[i];
    if (thresholds.t_c == 0.0) {
      for (std::size_t s = 0; s < k; ++s) c.push_back(static_cast<int>(s));
      continue;
    }
    for (const auto& nb : store.neighbors(neg[i])) {
      if (nb.identity >= thresholds.t_c && pos_split[nb.index] != kNone) c.push_back(pos_split[nb.index]);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }

  NegativeAssignment out;
  std::vector<int> split_of(store.size(), kNone);
  std::vector<std::size_t> counts(k, 0);
  if (base) {
    if (base->splits.size() != k) throw InputError("base assignment has a different split count");
    std::vector<int> local(store.size(), kNone);
    for (std::size_t i = 0; i < neg.size(); ++i) local[neg[i]] = static_cast<int>(i);
    for (std::size_t s = 0; s < k; ++s) {
      for (const auto& id : base->splits[s]) {
        const Index u = store.index_of(id);
        if (local[u] == kNone) throw InputError("base negative '" + id + "' is not among the negatives");
        const auto& c = candidates[local[u]];
        if (!std::binary_search(c.begin(), c.end(), static_cast<int>(s))) {
          throw InputError("base negative '" + id + "' has no positive at t_c in its split");
        }
        if (split_of[u] != kNone) throw InputError("base negative '" + id + "' appears in more than one split");
        split_of[u] = static_cast<int>(s);
        ++counts[s];
      }
    }
    out.removed = base->removed;
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < neg.size(); ++i) {
    if (candidates[i].empty()) {
      out.unassigned.push_back(store.id(neg[i]));
    } else if (split_of[neg[i]] == kNone) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return candidates[x].size() < candidates[y].size(); });

  auto fewest = [&](const std::vector<int>& c) {
    int best = c.front();
    for (int s : c) {
      if (counts[s] < counts[best]) best = s;
    }
    return best;
  };

  if (!base) {
    for (auto i : order) {
      const int s = fewest(candidates[i]);
      split_of[neg[i]] = s;
      ++counts[s];
    }
    auto clean = remove_inter_split_violations(to_id_sets(split_of, k, store), Label::negative, store,
                                               thresholds.t_s, rng);
    readd_removed(clean.splits, clean.removed, store, thresholds.t_s);
    out.splits = std::move(clean.splits);
    out.removed = std::move(clean.removed);
    return out;
  }

  std::vector<int> record_of(store.size(), kNone);
  for (std::size_t r = 0; r < out.removed.size(); ++r) record_of[store.index_of(out.removed[r].id)] = static_cast<int>(r);
  for (auto i : order) {
    const Index u = neg[i];
    const int s = fewest(candidates[i]);
    const auto v = conflicts(u, s, split_of, store, thresholds.t_s);
    if (v == 0) {
      split_of[u] = s;
      ++counts[s];
      if (record_of[u] != kNone) {
        auto& rec = out.removed[record_of[u]];
        rec.restored = true;
        rec.split = static_cast<std::size_t>(s);
      }
    } else if (record_of[u] == kNone) {
      out.removed.push_back({store.id(u), Label::negative, static_cast<std::size_t>(s), v, false});
    }
  }
  out.splits = to_id_sets(split_of, k, store);
  return out;
}

std::map<std::pair<double, double>, Partition> build_cv_sets(const std::vector<std::string>& positives,
                                                            const std::vector<std::string>& negatives,
                                                            const IdentityStore& store, std::size_t k,
                                                            const std::vector<double>& t_s_list,
                                                            const std::vector<double>& t_c_list, std::uint64_t seed,
                                                            const std::string& dataset) {
  if (t_s_list.empty() || t_c_list.empty()) throw InputError("threshold lists must not be empty");
  std::vector<double> t_c_desc = t_c_list;
  std::sort(t_c_desc.begin(), t_c_desc.end(), std::greater<>());
  t_c_desc.erase(std::unique(t_c_desc.begin(), t_c_desc.end()), t_c_desc.end());
  for (double t_s : t_s_list) {
    for (double t_c : t_c_desc) Thresholds{t_s, t_c}.validate(store);
  }

  std::map<std::pair<double, double>, Partition> out;
  for (double t_s : t_s_list) {
    if (out.contains({t_s, t_c_desc.front()})) continue;  // repeated t_s value
    // Each t_s level draws from its own stream, so a grid and a single
    // setting produce the same partition.
    Rng rng(mix_seed(seed, std::bit_cast<std::uint64_t>(t_s)));
    auto pos = remove_inter_split_violations(cluster_positives(positives, store, k), Label::positive, store, t_s, rng);
    readd_removed(pos.splits, pos.removed, store, t_s);

    std::optional<NegativeAssignment> previous;
    for (double t_c : t_c_desc) {
      auto neg = assign_negatives(pos.splits, negatives, store, {t_s, t_c}, rng, previous ? &*previous : nullptr);
      Partition p;
      p.k = k;
      p.thresholds = {t_s, t_c};
      p.seed = seed;
      p.dataset = dataset;
      for (std::size_t s = 0; s < k; ++s) p.splits.push_back({pos.splits[s], neg.splits[s]});
      p.removed = pos.removed;
      p.removed.insert(p.removed.end(), neg.removed.begin(), neg.removed.end());
      p.unassigned_negatives = neg.unassigned;
      out.emplace(std::make_pair(t_s, t_c), std::move(p));
      previous = std::move(neg);
    }
  }
  return out;
}

Split derive_train_for_test(const Split& test, const Split& pool, const IdentityStore& store, double t_s,
                            double train_t_c) {
  Thresholds{t_s, train_t_c}.validate(store);
  std::vector<char> in_test_pos(store.size(), 0), in_test_neg(store.size(), 0);
  for (const auto& id : test.positives) in_test_pos[store.index_of(id)] = 1;
  for (const auto& id : test.negatives) in_test_neg[store.index_of(id)] = 1;

  auto survivors = [&](const std::vector<std::string>& ids, const std::vector<char>& same_class_test) {
    std::vector<Index> kept;
    for (const auto& id : ids) {
      const Index u = store.index_of(id);
      if (in_test_pos[u] || in_test_neg[u]) throw InputError("pool id '" + id + "' is part of the test split");
      const auto& nbs = store.neighbors(u);
      const bool leaks = std::any_of(nbs.begin(), nbs.end(), [&](const IdentityStore::Neighbor& nb) {
        return nb.identity > t_s && same_class_test[nb.index];
      });
      if (!leaks) kept.push_back(u);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  };

  const auto pos = survivors(pool.positives, in_test_pos);
  if (pos.empty()) throw InfeasibleError("no training positive survives the t_s filter");
  const auto neg = survivors(pool.negatives, in_test_neg);

  std::vector<char> kept_pos(store.size(), 0);
  Split out;
  for (auto u : pos) {
    kept_pos[u] = 1;
    out.positives.push_back(store.id(u));
  }
  for (auto u : neg) {
    const auto& nbs = store.neighbors(u);
    const bool anchored = train_t_c == 0.0 || std::any_of(nbs.begin(), nbs.end(), [&](const IdentityStore::Neighbor& nb) {
                            return nb.identity >= train_t_c && kept_pos[nb.index];
                          });
    if (anchored) out.negatives.push_back(store.id(u));
  }
  return out;
}

Partition greedy_representative_partition(const Corpus& positives, const Corpus& negatives,
                                          const IdentitySource& identity, double threshold, std::size_t k,
                                          std::uint64_t seed) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InputError("threshold must lie in (0, 1)");
  if (threshold < identity.exact_above()) {
    throw InputError("threshold " + format_double(threshold) + " is below the identity store floor");
  }
  if (k < 2) throw InputError("k must be at least 2");

  Rng rng(seed);
  Partition p;
  p.k = k;
  p.splits.resize(k);
  p.thresholds = {threshold, 0.0};
  p.seed = seed;

  for (const Corpus* corpus : {&positives, &negatives}) {
    std::vector<const SequenceRecord*> recs;
    for (const auto& r : corpus->records()) recs.push_back(&r);
    std::sort(recs.begin(), recs.end(), [](const SequenceRecord* x, const SequenceRecord* y) {
      if (x->residues.size() != y->residues.size()) return x->residues.size() > y->residues.size();
      return x->id < y->id;
    });
    std::vector<std::vector<const SequenceRecord*>> clusters;  // front() is the founder
    for (const auto* r : recs) {
      auto home = std::find_if(clusters.begin(), clusters.end(), [&](const auto& c) {
        return identity.identity(c.front()->id, r->id) >= threshold;
      });
      if (home == clusters.end()) {
        clusters.push_back({r});
      } else {
        home->push_back(r);
      }
    }
    rng.shuffle(clusters);
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });

    const bool pos = corpus == &positives;
    std::vector<std::size_t> counts(k, 0);
    for (const auto& c : clusters) {
      const auto s = static_cast<std::size_t>(std::min_element(counts.begin(), counts.end()) - counts.begin());
      counts[s] += c.size();
      auto& dest = pos ? p.splits[s].positives : p.splits[s].negatives;
      for (const auto* r : c) dest.push_back(r->id);
    }
  }
  for (auto& s : p.splits) {
    std::sort(s.positives.begin(), s.positives.end());
    std::sort(s.negatives.begin(), s.negatives.end());
  }
  return p;
}

}  // namespace homopart
