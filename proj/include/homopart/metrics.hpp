#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "homopart/corpus.hpp"

namespace homopart {

struct ScoredInstance {
  std::string id;
  Label label = Label::positive;
  double score = 0.0;  // higher means more likely positive
};

/// Probability that a random positive outscores a random negative, ties
/// counting one half.
double auroc(const std::vector<ScoredInstance>& instances);

/// Area under the precision-recall curve. Achievable points are joined by
/// the continuous interpolation of Davis and Goadrich (true positives vary
/// linearly, false positives follow at the local rate); the curve starts at
/// recall 0 with the precision of the first step. Tied scores form a single
/// threshold.
double auprc(const std::vector<ScoredInstance>& instances);

/// P / (P + N): the expected AUPRC of an uninformative scorer.
double background_auprc(const std::vector<ScoredInstance>& instances);

/// TSV with header `id<TAB>label<TAB>score`, label 1 (positive) or 0.
std::vector<ScoredInstance> read_scores(std::istream& in);

}  // namespace homopart
