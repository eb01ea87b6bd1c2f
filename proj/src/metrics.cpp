#include "homopart/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include "homopart/error.hpp"
#include "homopart/format.hpp"

namespace homopart {

namespace {

// (positives, negatives) per distinct score, highest score first.
struct Step {
  double pos = 0;
  double neg = 0;
};

std::vector<Step> threshold_steps(const std::vector<ScoredInstance>& instances) {
  std::vector<const ScoredInstance*> order;
  double p = 0, n = 0;
  for (const auto& x : instances) {
    if (!std::isfinite(x.score)) throw InputError("score of '" + x.id + "' is not finite");
    order.push_back(&x);
    (x.label == Label::positive ? p : n) += 1;
  }
  if (p == 0 || n == 0) throw InputError("scores need at least one positive and one negative");
  std::sort(order.begin(), order.end(),
            [](const ScoredInstance* a, const ScoredInstance* b) { return a->score > b->score; });
  std::vector<Step> steps;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || order[i]->score != order[i - 1]->score) steps.emplace_back();
    (order[i]->label == Label::positive ? steps.back().pos : steps.back().neg) += 1;
  }
  return steps;
}

}  // namespace

double auroc(const std::vector<ScoredInstance>& instances) {
  const auto steps = threshold_steps(instances);
  double p = 0, n = 0;
  for (const auto& s : steps) {
    p += s.pos;
    n += s.neg;
  }
  // Walk from the lowest score up, counting negatives already passed.
  double below = 0, wins = 0;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    wins += it->pos * below + 0.5 * it->pos * it->neg;
    below += it->neg;
  }
  return wins / (p * n);
}

double auprc(const std::vector<ScoredInstance>& instances) {
  const auto steps = threshold_steps(instances);
  double p = 0;
  for (const auto& s : steps) p += s.pos;

  double area = 0, tp = 0, fp = 0;
  for (const auto& s : steps) {
    const double tp_b = tp + s.pos;
    const double fp_b = fp + s.neg;
    if (s.pos > 0) {
      // Precision along the segment is tp / (a * tp + b); integrate over tp.
      const double h = s.neg / s.pos;
      const double a = 1.0 + h;
      const double b = fp - h * tp;
      double seg = (tp_b - tp) / a;
      if (b != 0.0) seg -= b / (a * a) * (std::log(a * tp_b + b) - std::log(a * tp + b));
      area += seg;
    }
    tp = tp_b;
    fp = fp_b;
  }
  return area / p;
}

double background_auprc(const std::vector<ScoredInstance>& instances) {
  if (instances.empty()) throw InputError("background AUPRC of an empty set");
  const auto p = std::count_if(instances.begin(), instances.end(),
                               [](const ScoredInstance& x) { return x.label == Label::positive; });
  return static_cast<double>(p) / static_cast<double>(instances.size());
}

std::vector<ScoredInstance> read_scores(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("scores file is empty");
  std::vector<ScoredInstance> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw InputError("scores line " + std::to_string(line_no) + ": expected id, label and score");
    }
    const std::string label = line.substr(t1 + 1, t2 - t1 - 1);
    if (label != "0" && label != "1") {
      throw InputError("scores line " + std::to_string(line_no) + ": label must be 0 or 1");
    }
    try {
      out.push_back({line.substr(0, t1), label == "1" ? Label::positive : Label::negative,
                     parse_double(std::string_view(line).substr(t2 + 1))});
    } catch (const InputError& e) {
      throw InputError("scores line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace homopart
