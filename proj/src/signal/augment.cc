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

#include "pvc/signal/augment.h"

#include <cmath>
#include <numbers>
#include <string>

#include "pvc/base/error.h"
#include "pvc/signal/resample.h"
#include "pvc/signal/stft.h"

namespace pvc::signal {

namespace {

void CheckIntensity(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw InvalidArgument("invalid intensity: tau=" + std::to_string(tau) + " not in (0,1)");
  }
}

double WrapPhase(double x) {
  return x - 2.0 * std::numbers::pi * std::round(x / (2.0 * std::numbers::pi));
}

}  // namespace

const char* ProsodyName(Prosody pro) { return pro == Prosody::kPitch ? "pitch" : "volume"; }

double PitchShiftSemitones(double tau) { return 4.0 * (2.0 * tau - 1.0); }

double VolumeGainDb(double tau) { return 12.0 * (2.0 * tau - 1.0); }

std::vector<double> TimeStretch(const std::vector<double>& x, double factor, int n_fft, int hop) {
  if (!(factor > 0.0)) throw InvalidArgument("time stretch factor must be positive");
  // Zero margins so the first and last samples sit under full analysis frames.
  std::vector<double> padded(x.size() + 2 * static_cast<std::size_t>(n_fft), 0.0);
  std::copy(x.begin(), x.end(), padded.begin() + n_fft);
  const ComplexMatrix spec = Stft(padded, n_fft, hop);
  const int frames = static_cast<int>(spec.rows());
  const int bins = static_cast<int>(spec.cols());

  std::vector<double> expected(bins);
  for (int b = 0; b < bins; ++b) expected[b] = 2.0 * std::numbers::pi * b * hop / n_fft;

  const double rate = 1.0 / factor;
  const int steps = static_cast<int>(std::ceil((frames - 1) / rate));
  ComplexMatrix out(std::max(steps, 1), bins);
  std::vector<double> phase(bins), mag(bins), locked(bins);
  std::vector<int> peaks;
  for (int b = 0; b < bins; ++b) phase[b] = std::arg(spec(0, b));
  for (int s = 0; s < steps; ++s) {
    const double pos = s * rate;
    const int k = static_cast<int>(pos);
    const double alpha = pos - k;
    const int k1 = std::min(k + 1, frames - 1);
    for (int b = 0; b < bins; ++b) {
      mag[b] = (1.0 - alpha) * std::abs(spec(k, b)) + alpha * std::abs(spec(k1, b));
    }
    // Identity phase locking: bins around a magnitude peak keep their
    // analysis-frame phase offset relative to the peak.
    peaks.clear();
    for (int b = 1; b + 1 < bins; ++b) {
      if (mag[b] > mag[b - 1] && mag[b] >= mag[b + 1]) peaks.push_back(b);
    }
    if (peaks.empty()) {
      locked = phase;
    } else {
      std::size_t p = 0;
      for (int b = 0; b < bins; ++b) {
        while (p + 1 < peaks.size() && b > (peaks[p] + peaks[p + 1]) / 2) ++p;
        const int peak = peaks[p];
        locked[b] = phase[peak] + std::arg(spec(k, b)) - std::arg(spec(k, peak));
      }
    }
    for (int b = 0; b < bins; ++b) {
      out(s, b) = std::polar(mag[b], locked[b]);
      const double delta = std::arg(spec(k1, b)) - std::arg(spec(k, b)) - expected[b];
      phase[b] = locked[b] + expected[b] + WrapPhase(delta);
    }
  }
  const std::vector<double> stretched = Istft(out, n_fft, hop);
  // Drop the (scaled) leading margin and keep the stretched body.
  const auto lead = static_cast<std::size_t>(std::llround(n_fft * factor));
  const auto body = static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) * factor));
  std::vector<double> result(body, 0.0);
  for (std::size_t i = 0; i < body && lead + i < stretched.size(); ++i) result[i] = stretched[lead + i];
  return result;
}

Waveform TransformPitch(const Waveform& w, double tau) {
  CheckIntensity(tau);
  const double semitones = PitchShiftSemitones(tau);
  if (semitones == 0.0) return w;
  const double ratio = std::pow(2.0, semitones / 12.0);
  const std::vector<double> stretched = TimeStretch(w.samples, ratio);
  Waveform out;
  out.sample_rate = w.sample_rate;
  // Reading the stretched signal `ratio` samples per output sample restores
  // the duration and scales every frequency by `ratio`.
  out.samples = ResampleByStep(stretched, 0.0, ratio, w.samples.size());
  return out;
}

Waveform TransformVolume(const Waveform& w, double tau, std::size_t* clipped) {
  CheckIntensity(tau);
  const double gain_db = VolumeGainDb(tau);
  if (gain_db == 0.0) return w;
  const double gain = std::pow(10.0, gain_db / 20.0);
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(w.samples.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    double v = w.samples[i] * gain;
    if (v > 1.0) {
      v = 1.0;
      ++count;
    } else if (v < -1.0) {
      v = -1.0;
      ++count;
    }
    out.samples[i] = v;
  }
  if (clipped) *clipped += count;
  return out;
}

Waveform ApplyAugmentation(const Waveform& w, const AugmentationSpec& spec, std::size_t* clipped) {
  return spec.pro == Prosody::kPitch ? TransformPitch(w, spec.tau)
                                     : TransformVolume(w, spec.tau, clipped);
}

}  // namespace pvc::signal
