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

#include "pvc/signal/pitch.h"

#include <algorithm>
#include <cmath>

#include "pvc/signal/fft.h"
#include "pvc/signal/stft.h"

namespace pvc::signal {

std::vector<double> F0Track::Voiced() const {
  std::vector<double> out;
  for (double f : hz) {
    if (f > 0.0) out.push_back(f);
  }
  return out;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double MedianVoicedF0(const F0Track& track) { return Median(track.Voiced()); }

F0Track EstimateF0(const Waveform& w, const F0Options& options) {
  F0Track track;
  const int n = options.frame;
  const int frames = NumFrames(w.samples.size(), n, options.hop);
  if (frames == 0) return track;
  track.hz.assign(frames, 0.0);
  track.confidence.assign(frames, 0.0);

  const double sr = w.sample_rate;
  const int lag_min = static_cast<int>(std::ceil(sr / options.max_hz));
  const int lag_max = std::min(static_cast<int>(std::floor(sr / options.min_hz)), n - 2);
  // Autocorrelation by FFT of the zero-padded frame (no circular wrap).
  int fft_size = 1;
  while (fft_size < 2 * n) fft_size *= 2;
  RealFft fft(fft_size);
  std::vector<double> buf(fft_size), acf(fft_size), prefix(n + 1);
  std::vector<std::complex<double>> spec(fft.bins());
  std::vector<double> r(lag_max + 2, 0.0);

  for (int t = 0; t < frames; ++t) {
    const double* x = w.samples.data() + static_cast<std::size_t>(t) * options.hop;
    prefix[0] = 0.0;
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];
    if (prefix[n] <= 1e-12 * n) continue;

    std::fill(buf.begin(), buf.end(), 0.0);
    std::copy(x, x + n, buf.begin());
    fft.Forward(buf, spec);
    for (auto& z : spec) z = std::norm(z);
    fft.Inverse(spec, acf);

    for (int lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      // Energies of the two overlapping segments [0, n-lag) and [lag, n).
      const double e0 = prefix[n - lag];
      const double e1 = prefix[n] - prefix[lag];
      const double denom = std::sqrt(e0 * e1);
      r[lag] = denom > 0.0 ? acf[lag] / denom : 0.0;
    }
    int best = lag_min;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      if (r[lag] > r[best]) best = lag;
    }
    const double peak = r[best];
    track.confidence[t] = std::clamp(peak, 0.0, 1.0);
    if (!(peak > options.voicing_threshold)) continue;

    int chosen = best;
    for (int lag = lag_min; lag < best; ++lag) {
      if (r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1] && r[lag] >= options.octave_ratio * peak) {
        chosen = lag;
        break;
      }
    }
    // Parabolic refinement around the chosen lag.
    const double a = r[chosen - 1], b = r[chosen], c = r[chosen + 1];
    const double curvature = a - 2.0 * b + c;
    double offset = curvature < 0.0 ? 0.5 * (a - c) / curvature : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    const double hz = sr / (chosen + offset);
    track.hz[t] = std::clamp(hz, options.min_hz, options.max_hz);
    track.confidence[t] = std::clamp(r[chosen], 0.0, 1.0);
  }
  return track;
}

std::vector<double> FrameRms(const Waveform& w, int frame, int hop) {
  const int frames = NumFrames(w.samples.size(), frame, hop);
  std::vector<double> out(frames);
  for (int t = 0; t < frames; ++t) {
    const double* x = w.samples.data() + static_cast<std::size_t>(t) * hop;
    double acc = 0.0;
    for (int i = 0; i < frame; ++i) acc += x[i] * x[i];
    out[t] = std::sqrt(acc / frame);
  }
  return out;
}

}  // namespace pvc::signal
