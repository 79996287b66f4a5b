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

#include "pvc/signal/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pvc/base/error.h"
#include "pvc/signal/fft.h"

namespace pvc::signal {

double Rms(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

std::vector<double> HannWindow(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

int NumFrames(std::size_t num_samples, int window, int hop) {
  if (num_samples < static_cast<std::size_t>(window)) return 0;
  return 1 + static_cast<int>((num_samples - window) / hop);
}

ComplexMatrix Stft(const std::vector<double>& samples, int window, int hop) {
  if (window <= 0 || hop <= 0) throw InvalidArgument("stft: window and hop must be positive");
  if (samples.size() < static_cast<std::size_t>(window)) {
    throw InvalidArgument("input too short");
  }
  const int frames = NumFrames(samples.size(), window, hop);
  const std::vector<double> hann = HannWindow(window);
  RealFft fft(window);
  ComplexMatrix spec(frames, fft.bins());
  std::vector<double> frame(window);
  for (int t = 0; t < frames; ++t) {
    const double* src = samples.data() + static_cast<std::size_t>(t) * hop;
    for (int i = 0; i < window; ++i) frame[i] = src[i] * hann[i];
    fft.Forward(frame, std::span<std::complex<double>>(spec.row(t).data(), fft.bins()));
  }
  return spec;
}

std::vector<double> Istft(const ComplexMatrix& spec, int window, int hop) {
  const int frames = static_cast<int>(spec.rows());
  if (spec.cols() != window / 2 + 1) throw InvalidArgument("istft: bin count does not match window");
  if (frames == 0) return {};
  const std::size_t length = static_cast<std::size_t>(frames - 1) * hop + window;
  std::vector<double> out(length, 0.0), norm(length, 0.0), frame(window);
  const std::vector<double> hann = HannWindow(window);
  RealFft fft(window);
  for (int t = 0; t < frames; ++t) {
    fft.Inverse(std::span<const std::complex<double>>(spec.row(t).data(), fft.bins()), frame);
    const std::size_t base = static_cast<std::size_t>(t) * hop;
    for (int i = 0; i < window; ++i) {
      out[base + i] += frame[i] * hann[i];
      norm[base + i] += hann[i] * hann[i];
    }
  }
  // Near the signal ends only window tails overlap; flooring the normalizer
  // keeps inconsistent spectrograms from being amplified there.
  const double floor = 1e-3 * *std::max_element(norm.begin(), norm.end());
  for (std::size_t i = 0; i < length; ++i) out[i] /= std::max(norm[i], floor);
  return out;
}

}  // namespace pvc::signal
