#include "homopart/manifest.hpp"

#include <algorithm>

#include "homopart/error.hpp"

namespace homopart {

namespace {

std::vector<std::string> sorted(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("manifest lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("manifest field '") + key + "' has the wrong type");
  }
}

}  // namespace

Json partition_json(const Partition& p) {
  Json splits = Json::array();
  for (std::size_t s = 0; s < p.splits.size(); ++s) {
    splits.push_back({{"index", s},
                      {"positives", sorted(p.splits[s].positives)},
                      {"negatives", sorted(p.splits[s].negatives)}});
  }
  auto removed = p.removed;
  std::sort(removed.begin(), removed.end(), [](const RemovalRecord& a, const RemovalRecord& b) { return a.id < b.id; });
  Json rec = Json::array();
  for (const auto& r : removed) {
    rec.push_back({{"id", r.id},
                   {"class", to_string(r.label)},
                   {"split", r.split},
                   {"violations", r.violations},
                   {"restored", r.restored}});
  }
  return {{"version", kManifestVersion},
          {"params",
           {{"k", p.k},
            {"t_s", p.thresholds.t_s},
            {"t_c", p.thresholds.t_c},
            {"seed", p.seed},
            {"dataset", p.dataset}}},
          {"splits", splits},
          {"removed", rec},
          {"unassigned_negatives", sorted(p.unassigned_negatives)}};
}

Partition parse_partition(const Json& m) {
  if (field<int>(m, "version") != kManifestVersion) throw InputError("unsupported manifest version");
  const Json& params = m.at("params");
  Partition p;
  p.k = field<std::size_t>(params, "k");
  p.thresholds = {field<double>(params, "t_s"), field<double>(params, "t_c")};
  p.seed = field<std::uint64_t>(params, "seed");
  p.dataset = field<std::string>(params, "dataset");
  const auto splits = field<Json>(m, "splits");
  if (!splits.is_array() || splits.size() != p.k) throw InputError("manifest must list exactly k splits");
  p.splits.resize(p.k);
  for (const auto& s : splits) {
    const auto index = field<std::size_t>(s, "index");
    if (index >= p.k) throw InputError("split index out of range");
    p.splits[index] = {field<std::vector<std::string>>(s, "positives"), field<std::vector<std::string>>(s, "negatives")};
  }
  for (const auto& r : field<Json>(m, "removed")) {
    p.removed.push_back({field<std::string>(r, "id"), parse_label(field<std::string>(r, "class")),
                         field<std::size_t>(r, "split"), field<std::size_t>(r, "violations"),
                         field<bool>(r, "restored")});
  }
  p.unassigned_negatives = field<std::vector<std::string>>(m, "unassigned_negatives");
  return p;
}

Json balanced_json(const Partition& source, const std::vector<BalancedSet>& sets, Json strategy) {
  if (sets.size() != source.splits.size()) throw InputError("one balanced set per split is required");
  Partition p = source;
  for (std::size_t s = 0; s < sets.size(); ++s) p.splits[s] = {sets[s].positives, sets[s].negatives};
  Json j = partition_json(p);
  j["strategy"] = std::move(strategy);
  return j;
}

Json report_json(const ViolationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"id_a", v.id_a},
                          {"split_a", v.split_a},
                          {"id_b", v.id_b},
                          {"split_b", v.split_b},
                          {"class", to_string(v.label)},
                          {"identity", v.identity}});
  }
  Json histograms = Json::array();
  for (const auto& h : report.histograms) {
    histograms.push_back(
        {{"set_a", h.set_a}, {"set_b", h.set_b}, {"edges", h.edges}, {"all_vs_all", h.all_vs_all}, {"maximum", h.maximum}});
  }
  return {{"schema", "homopart-violation-report"},
          {"version", kManifestVersion},
          {"t_s", report.thresholds.t_s},
          {"t_c", report.thresholds.t_c},
          {"passes", report.passes()},
          {"violations", violations},
          {"anchor_failures", report.anchor_failures},
          {"histograms", histograms}};
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace homopart
