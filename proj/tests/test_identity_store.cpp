#include <doctest.h>

#include <sstream>

#include "homopart/align.hpp"
#include "homopart/error.hpp"
#include "homopart/identity_source.hpp"
#include "homopart/identity_store.hpp"
#include "homopart/synth.hpp"
#include "oracles/reference_sw.hpp"
#include "support.hpp"

using namespace homopart;

namespace {

Corpus small_families(std::uint64_t seed, std::size_t families = 6, const std::string& prefix = "s") {
  SynthOptions o;
  o.families = families;
  o.family_size = 4;
  o.min_length = 40;
  o.max_length = 90;
  o.seed = seed;
  o.id_prefix = prefix;
  return synthesize_corpus(o);
}

std::string text_of(const IdentityStore& s) {
  std::ostringstream out;
  s.write(out);
  return out.str();
}

}  // namespace

TEST_CASE("all pairs evaluates n(n-1)/2 pairs and matches direct identity") {
  const auto c = small_families(1);
  const ScoringScheme sc;
  AllPairsReport report;
  const auto store = all_pairs_identity(c, sc, {0.25, 1}, &report);
  const auto n = c.size();
  CHECK(report.pairs_evaluated == n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = c.records()[i];
      const auto& b = c.records()[j];
      const double expect = oracle::reference_identity(a.residues, b.residues, sc);
      CHECK(store.lookup(a.id, b.id) == (expect >= 0.25 ? expect : 0.0));
      CHECK(store.lookup(a.id, b.id) == store.lookup(b.id, a.id));
    }
  }
}

TEST_CASE("store text is independent of the worker count") {
  const auto c = small_families(4, 10);
  const ScoringScheme sc;
  const auto one = text_of(all_pairs_identity(c, sc, {0.2, 1}));
  CHECK(one == text_of(all_pairs_identity(c, sc, {0.2, 3})));
  CHECK(one == text_of(all_pairs_identity(c, sc, {0.2, 8})));
}

TEST_CASE("store write/read round trip") {
  const auto c = small_families(2);
  const auto store = all_pairs_identity(c, ScoringScheme{}, {0.3, 2});
  std::istringstream in(text_of(store));
  const auto back = IdentityStore::read(in);
  CHECK(text_of(back) == text_of(store));
  CHECK(back.floor() == store.floor());
  CHECK(back.params() == store.params());
  CHECK(back.entries() == store.entries());
}

TEST_CASE("unrelated corpora give a sparse cross store") {
  std::mt19937_64 gen(8);
  Corpus a, b;
  for (int i = 0; i < 25; ++i) a.add(testing::record("a" + std::to_string(i), testing::random_protein(gen, 120)));
  for (int i = 0; i < 25; ++i) b.add(testing::record("b" + std::to_string(i), testing::random_protein(gen, 120)));
  AllPairsReport report;
  const auto store = all_pairs_identity(a, b, ScoringScheme{}, {0.3, 2}, &report);
  CHECK(report.pairs_evaluated == 625);
  // only short chance local matches clear the floor
  CHECK(store.entry_count() < 625 / 50);
  for (const auto& e : store.entries()) CHECK(e.identity < 0.4);
}

TEST_CASE("cross store rejects shared ids") {
  Corpus a, b;
  a.add(testing::record("x", "ACDEFGHIK"));
  b.add(testing::record("x", "ACDEFGHIK"));
  CHECK_THROWS_AS(all_pairs_identity(a, b, ScoringScheme{}, {}), InputError);
}

TEST_CASE("floor is enforced at use time") {
  const auto s = testing::toy_store({"a", "b"}, {{"a", "b", 0.5}}, 0.3);
  CHECK_NOTHROW(s.require_threshold(0.3, "t_s"));
  CHECK_THROWS_AS(s.require_threshold(0.29, "t_s"), InputError);
  CHECK_THROWS_AS(s.lookup("a", "zz"), InputError);
  CHECK(s.lookup("a", "b") == 0.5);
}

TEST_CASE("max identity profile") {
  const auto s = testing::toy_store({"x", "y", "z", "w"}, {{"x", "y", 0.4}, {"x", "z", 0.7}, {"y", "z", 0.2}});
  CHECK(max_identity_profile({"x"}, {"x"}, s) == std::vector<double>{0.0});
  CHECK(max_identity_profile({"x", "y"}, {}, s) == std::vector<double>{0.0, 0.0});
  CHECK(max_identity_profile({"x", "y", "w"}, {"x", "y", "z"}, s) == std::vector<double>{0.7, 0.4, 0.0});
  CHECK_THROWS_AS(max_identity_profile({"q"}, {"x"}, s), InputError);

  // brute-force comparison on a computed store
  const auto c = small_families(6);
  const auto store = all_pairs_identity(c, ScoringScheme{}, {0.25, 1});
  const auto ids = c.ids();
  std::vector<std::string> a(ids.begin(), ids.begin() + 10), b(ids.begin() + 5, ids.end());
  const auto profile = max_identity_profile(a, b, store);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = 0;
    for (const auto& y : b) {
      if (y != a[i]) best = std::max(best, store.lookup(a[i], y));
    }
    CHECK(profile[i] == best);
  }
}

TEST_CASE("computed identity source uses the cache and aligns the rest") {
  const auto c = small_families(3);
  const ScoringScheme sc;
  const auto store = all_pairs_identity(c, sc, {0.5, 1});
  const ComputedIdentity source({&c}, sc, &store);
  const auto& r = c.records();
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j) {
      CHECK(source.identity(r[i].id, r[j].id) == identity(r[i].residues, r[j].residues, sc));
    }
  }
  CHECK(source.exact_above() == 0.0);
  CHECK(StoreIdentity(store).exact_above() == 0.5);
}
