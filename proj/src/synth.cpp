#include "homopart/synth.hpp"

#include <chrono>

#include "homopart/error.hpp"
#include "homopart/rng.hpp"

namespace homopart {

namespace {

std::string padded(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::size_t digits(std::size_t n) { return std::to_string(n).size(); }

char random_residue(Rng& rng) { return kCanonicalResidues[rng.index(kCanonicalResidues.size())]; }

// A residue other than `c`.
char substitute(Rng& rng, char c) {
  const auto pos = kCanonicalResidues.find(c);
  const auto pick = rng.index(kCanonicalResidues.size() - 1);
  return kCanonicalResidues[pick < pos ? pick : pick + 1];
}

std::string mutate(const std::string& founder, double rate, Rng& rng) {
  const double indel_rate = rate / 20.0;
  std::string out;
  out.reserve(founder.size() + 8);
  for (std::size_t i = 0; i < founder.size(); ++i) {
    if (indel_rate > 0 && rng.bernoulli(indel_rate)) {
      const std::size_t len = 1 + rng.index(3);
      if (rng.bernoulli(0.5)) {
        i += len - 1;  // deletion of founder[i .. i + len)
        continue;
      }
      for (std::size_t k = 0; k < len; ++k) out.push_back(random_residue(rng));
    }
    out.push_back(rate > 0 && rng.bernoulli(rate) ? substitute(rng, founder[i]) : founder[i]);
  }
  return out.empty() ? founder : out;
}

}  // namespace

Corpus synthesize_corpus(const SynthOptions& o) {
  if (o.families == 0 || o.family_size == 0) throw InputError("families and family size must be positive");
  if (o.min_length == 0 || o.min_length > o.max_length) throw InputError("invalid length range");
  for (double p : {o.mutation_rate, o.negative_fraction, o.mixed_fraction}) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("rates and fractions must lie in [0, 1]");
  }

  using namespace std::chrono;
  const sys_days first{year{2015} / January / 1};
  const sys_days last{year{2024} / December / 31};
  const auto span = static_cast<std::size_t>((last - first).count()) + 1;

  Rng rng(o.seed);
  Corpus corpus({}, "synthetic families=" + std::to_string(o.families) + " size=" + std::to_string(o.family_size));
  const std::size_t fam_width = std::max<std::size_t>(3, digits(o.families - 1));
  const std::size_t mem_width = digits(o.family_size - 1);
  for (std::size_t f = 0; f < o.families; ++f) {
    const std::size_t len = o.min_length + rng.index(o.max_length - o.min_length + 1);
    std::string founder;
    for (std::size_t i = 0; i < len; ++i) founder.push_back(random_residue(rng));
    const bool mixed = rng.bernoulli(o.mixed_fraction);
    const bool family_negative = rng.bernoulli(o.negative_fraction);
    for (std::size_t m = 0; m < o.family_size; ++m) {
      SequenceRecord r;
      r.id = o.id_prefix + padded(f, fam_width) + "_" + padded(m, mem_width);
      r.residues = mutate(founder, o.mutation_rate, rng);
      const bool negative = mixed ? rng.bernoulli(o.negative_fraction) : family_negative;
      r.label = negative ? Label::negative : Label::positive;
      r.created = year_month_day{first + days{static_cast<int>(rng.index(span))}};
      r.source = "synthetic";
      corpus.add(std::move(r));
    }
  }
  return corpus;
}

}  // namespace homopart
