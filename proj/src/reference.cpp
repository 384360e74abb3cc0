// Copyright 2026 The forensic-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forensic_eval/reference.hpp"

#include <algorithm>
#include <utility>

#include "forensic_eval/error.hpp"
#include "forensic_eval/ssim.hpp"

namespace fe::reference {

ConfusionCounts confusion_scalar(const BinaryMask& pred, const BinaryMask& gt, const ShapeMask* shape) {
  if (!pred.same_dims(gt) || (shape && !shape->same_dims(gt))) {
    throw DimensionError("reference confusion: dimension mismatch");
  }
  ConfusionCounts c;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (shape && !shape->test(x, y)) continue;
      const bool p = pred.test(x, y);
      const bool g = gt.test(x, y);
      if (p && g) {
        ++c.tp;
      } else if (!p && !g) {
        ++c.tn;
      } else if (p) {
        ++c.fp;
      } else {
        ++c.fn;
      }
    }
  }
  return c;
}

double auc_rank_pairs(std::span<const float> scores, std::span<const std::uint8_t> labels) {
  std::vector<float> pos;
  std::vector<float> neg;
  for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] ? pos : neg).push_back(scores[i]);
  if (pos.empty() || neg.empty()) throw UndefinedMetricError("single-class labels");
  std::uint64_t twice_wins = 0;
  for (const float p : pos) {
    for (const float n : neg) {
      if (p > n) {
        twice_wins += 2;
      } else if (p == n) {
        twice_wins += 1;
      }
    }
  }
  return static_cast<double>(twice_wins) /
         (2.0 * static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

double auc_trapezoid_sorted(std::span<const float> scores, std::span<const std::uint8_t> labels) {
  std::vector<std::pair<float, std::uint8_t>> items(scores.size());
  double positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    items[i] = {scores[i], labels[i]};
    positives += labels[i] ? 1 : 0;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0 || negatives == 0) throw UndefinedMetricError("single-class labels");
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  double area = 0.0;
  double tp = 0;
  double fp = 0;
  double prev_tpr = 0.0;
  double prev_fpr = 0.0;
  std::size_t i = 0;
  while (i < items.size()) {
    const float value = items[i].first;
    while (i < items.size() && items[i].first == value) {
      if (items[i].second) {
        tp += 1;
      } else {
        fp += 1;
      }
      ++i;
    }
    const double tpr = tp / positives;
    const double fpr = fp / negatives;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  return area;
}

SampleEvaluation evaluate_sample_scalar(const ScoreMap& scores, const BinaryMask& gt,
                                        const ShapeMask* shape, double threshold) {
  SampleEvaluation out;
  std::vector<float> valid_scores;
  std::vector<std::uint8_t> valid_labels;
  valid_scores.reserve(scores.size());
  valid_labels.reserve(scores.size());
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (shape && !shape->test(x, y)) continue;
      const float s = scores.at(x, y);
      const bool p = static_cast<double>(s) >= threshold;
      const bool g = gt.test(x, y);
      if (p && g) {
        ++out.counts.tp;
      } else if (!p && !g) {
        ++out.counts.tn;
      } else if (p) {
        ++out.counts.fp;
      } else {
        ++out.counts.fn;
      }
      valid_scores.push_back(s);
      valid_labels.push_back(g ? 1 : 0);
    }
  }
  std::optional<double> area;
  if (out.counts.positives() > 0 && out.counts.negatives() > 0) {
    area = auc_trapezoid_sorted(valid_scores, valid_labels);
  }
  out.metrics = metrics_from_counts(out.counts, area);
  return out;
}

double ssim_windowed(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height) throw DimensionError("size mismatch");
  if (a.width < kSsimWindow || a.height < kSsimWindow) throw DimensionError("too small");
  const auto& w = ssim_window();
  double total = 0.0;
  std::size_t positions = 0;
  for (int y0 = 0; y0 + kSsimWindow <= a.height; ++y0) {
    for (int x0 = 0; x0 + kSsimWindow <= a.width; ++x0) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int dy = 0; dy < kSsimWindow; ++dy) {
        for (int dx = 0; dx < kSsimWindow; ++dx) {
          const double weight = w[static_cast<std::size_t>(dy)] * w[static_cast<std::size_t>(dx)];
          const double va = *a.pixel(x0 + dx, y0 + dy);
          const double vb = *b.pixel(x0 + dx, y0 + dy);
          ma += weight * va;
          mb += weight * vb;
          saa += weight * va * va;
          sbb += weight * vb * vb;
          sab += weight * va * vb;
        }
      }
      const double var_a = saa - ma * ma;
      const double var_b = sbb - mb * mb;
      const double cov = sab - ma * mb;
      total += ((2 * ma * mb + kSsimC1) * (2 * cov + kSsimC2)) /
               ((ma * ma + mb * mb + kSsimC1) * (var_a + var_b + kSsimC2));
      ++positions;
    }
  }
  return total / static_cast<double>(positions);
}

BoolMatrix warshall_closure(BoolMatrix reach) {
  const std::size_t n = reach.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

std::vector<std::vector<std::size_t>> closure_classes(const BoolMatrix& adjacency) {
  const BoolMatrix reach = warshall_closure(adjacency);
  const std::size_t n = reach.size();
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> members{i};
    assigned[i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!assigned[j] && reach[i][j]) {
        members.push_back(j);
        assigned[j] = true;
      }
    }
    classes.push_back(std::move(members));
  }
  return classes;
}

}  // namespace fe::reference
