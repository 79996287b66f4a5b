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

#include "pvc/eval/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pvc/base/error.h"

namespace pvc::eval {

Histogram MakeHistogram(std::span<const double> samples, double lo, double hi, int bins, double epsilon) {
  if (samples.empty()) throw InvalidArgument("histogram of an empty sample");
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  if (!(epsilon >= 0.0)) throw InvalidArgument("histogram smoothing must be non-negative");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) throw InvalidArgument("bad histogram range");
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * i / bins;
  h.edges[bins] = hi;
  h.counts.assign(bins, 0.0);
  for (double v : samples) {
    if (!std::isfinite(v)) throw InvalidArgument("histogram sample is not finite");
    if (v < lo || v > hi) throw InvalidArgument("histogram sample " + std::to_string(v) + " outside the range");
    int bin = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    h.counts[std::clamp(bin, 0, bins - 1)] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  const double norm = 1.0 + bins * epsilon;
  h.probabilities.resize(bins);
  for (int i = 0; i < bins; ++i) h.probabilities[i] = (h.counts[i] / n + epsilon) / norm;
  return h;
}

std::pair<Histogram, Histogram> PooledHistograms(std::span<const double> a, std::span<const double> b, int bins,
                                                 double epsilon) {
  if (a.empty() || b.empty()) throw InvalidArgument("histogram of an empty sample");
  const auto [alo, ahi] = std::minmax_element(a.begin(), a.end());
  const auto [blo, bhi] = std::minmax_element(b.begin(), b.end());
  const double lo = std::min(*alo, *blo);
  const double hi = std::max(*ahi, *bhi);
  return {MakeHistogram(a, lo, hi, bins, epsilon), MakeHistogram(b, lo, hi, bins, epsilon)};
}

double KlDivergence(const Histogram& p, const Histogram& q) {
  if (p.edges != q.edges) throw InvalidArgument("KL divergence needs identical bin edges");
  if (p.probabilities.size() != q.probabilities.size()) throw InvalidArgument("KL divergence: bin count mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
    const double pi = p.probabilities[i];
    if (pi > 0.0) kl += pi * std::log(pi / q.probabilities[i]);
  }
  return std::max(kl, 0.0);
}

double SampleKl(std::span<const double> a, std::span<const double> b, int bins) {
  const auto [p, q] = PooledHistograms(a, b, bins);
  return KlDivergence(p, q);
}

std::vector<double> AverageRanks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("Spearman: samples differ in size");
  if (x.size() < 2) throw InvalidArgument("Spearman needs at least two values");
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double mx = Mean(rx), my = Mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<double> Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine: vectors differ in size");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return std::nullopt;
  return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

double Mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double StdDev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = Mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace pvc::eval
