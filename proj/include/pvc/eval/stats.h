// Copyright 2026  The prosody-vc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PVC_EVAL_STATS_H_
#define PVC_EVAL_STATS_H_

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pvc::eval {

inline constexpr int kDefaultBins = 50;
inline constexpr double kSmoothing = 1e-6;

/// Uniform-bin histogram. probabilities = (counts / n + eps) / (1 + bins * eps),
/// so every bin is positive and they sum to one.
struct Histogram {
  std::vector<double> edges;  // bins + 1, increasing
  std::vector<double> counts;
  std::vector<double> probabilities;

  int bins() const { return static_cast<int>(counts.size()); }
};

/// Samples must lie in [lo, hi] (the last bin is closed). A degenerate range
/// lo == hi is widened to [lo - 0.5, hi + 0.5]. InvalidArgument on an empty
/// sample, a non-finite value, bins < 1 or a value outside the range.
Histogram MakeHistogram(std::span<const double> samples, double lo, double hi, int bins = kDefaultBins,
                        double epsilon = kSmoothing);

/// Histograms of a and b over the pooled min-max range of both.
std::pair<Histogram, Histogram> PooledHistograms(std::span<const double> a, std::span<const double> b,
                                                 int bins = kDefaultBins, double epsilon = kSmoothing);

/// sum p_i ln(p_i / q_i). InvalidArgument unless the edges are identical.
double KlDivergence(const Histogram& p, const Histogram& q);

/// KL(a || b) of pooled-range histograms.
double SampleKl(std::span<const double> a, std::span<const double> b, int bins = kDefaultBins);

/// 1-based ranks, ties sharing their average rank.
std::vector<double> AverageRanks(std::span<const double> x);

/// Pearson correlation of average ranks. InvalidArgument on unequal sizes or
/// fewer than two values; 0 when either side is constant.
double Spearman(std::span<const double> x, std::span<const double> y);

/// Empty when either vector has zero norm.
std::optional<double> Cosine(std::span<const double> a, std::span<const double> b);

double Mean(std::span<const double> x);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double StdDev(std::span<const double> x);

}  // namespace pvc::eval

#endif  // PVC_EVAL_STATS_H_
