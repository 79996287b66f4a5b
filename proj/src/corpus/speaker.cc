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

#include "pvc/corpus/speaker.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>

#include "pvc/base/error.h"
#include "pvc/base/rng.h"

namespace pvc::corpus {

namespace {

// Token formant pairs on a 4 x 4 grid of (F1, F2), vowel-like.
constexpr std::array<double, 4> kTokenF1{300.0, 450.0, 620.0, 780.0};
constexpr std::array<double, 4> kTokenF2{900.0, 1300.0, 1800.0, 2400.0};

constexpr double kAspirationCornerHz = 1500.0;

double Resonance(double f, double center, double bandwidth) {
  const double x = (f - center) / bandwidth;
  return 1.0 / (1.0 + x * x);
}

double Envelope(double f, int token, const SyntheticSpeaker& speaker) {
  const double f1 = kTokenF1[token / 4];
  const double f2 = kTokenF2[token % 4];
  double e = 0.05 + Resonance(f, f1, 90.0) + 0.7 * Resonance(f, f2, 120.0);
  for (double fs : speaker.formants_hz) e += 0.5 * Resonance(f, fs, 150.0);
  const double tilt = 1.0 / std::sqrt(1.0 + (f / 800.0) * (f / 800.0));
  return e * tilt;
}

}  // namespace

const char* GroupName(PitchGroup group) {
  return group == PitchGroup::kLow ? "low_pitch" : "high_pitch";
}

PitchGroup ParseGroup(const std::string& name) {
  if (name == "low_pitch") return PitchGroup::kLow;
  if (name == "high_pitch") return PitchGroup::kHigh;
  throw InvalidArgument("unknown pitch group '" + name + "'");
}

Utterance RenderUtterance(const SyntheticSpeaker& speaker, std::span<const int> content,
                          std::uint64_t seed, const RenderOptions& options) {
  for (int token : content) {
    if (token < 0 || token >= kVocabularySize) {
      throw InvalidArgument("unknown token id " + std::to_string(token));
    }
  }
  const int sr = signal::kSampleRate;
  const auto segment = static_cast<std::size_t>(std::lround(kTokenSeconds * sr));
  const auto fade = static_cast<std::size_t>(std::lround(kCrossfadeSeconds * sr));

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double utt_f0 = speaker.base_f0 * std::exp(speaker.f0_spread * normal(rng));
  const double utt_gain =
      speaker.base_gain_db +
      std::clamp(options.utterance_gain_jitter_db * normal(rng), -2.5 * options.utterance_gain_jitter_db,
                 2.5 * options.utterance_gain_jitter_db);

  Utterance utt;
  utt.speaker_id = speaker.id;
  utt.content.assign(content.begin(), content.end());
  utt.waveform.sample_rate = sr;
  utt.waveform.samples.assign(content.empty() ? 0 : content.size() * segment + fade, 0.0);

  const std::size_t seg_len = segment + fade;
  std::vector<double> seg(seg_len);
  double f0_sum = 0.0;
  for (std::size_t i = 0; i < content.size(); ++i) {
    const double f0 = utt_f0 * std::exp(options.segment_f0_jitter * normal(rng));
    const double gain_db =
        utt_gain + options.segment_gain_jitter_db * (2.0 * unit(rng) - 1.0);
    f0_sum += f0;

    std::fill(seg.begin(), seg.end(), 0.0);
    const int harmonics = static_cast<int>(std::floor(0.45 * sr / f0));
    for (int h = 1; h <= harmonics; ++h) {
      const double f = h * f0;
      const double amp = Envelope(f, content[i], speaker);
      const double phase0 = 2.0 * std::numbers::pi * unit(rng);
      // Complex rotator: z_n = exp(i (w n + phase0)).
      const std::complex<double> step = std::polar(1.0, 2.0 * std::numbers::pi * f / sr);
      std::complex<double> z = std::polar(1.0, phase0);
      for (std::size_t n = 0; n < seg_len; ++n) {
        seg[n] += amp * z.imag();
        z *= step;
      }
    }
    double energy = 0.0;
    for (double v : seg) energy += v * v;
    if (options.aspiration_db > -120.0) {
      // Breath noise: white noise through a one-pole low-pass, at a fixed
      // level below the harmonic part.
      const double a = std::exp(-2.0 * std::numbers::pi * kAspirationCornerHz / sr);
      std::vector<double> noise(seg_len);
      double state = 0.0, noise_energy = 0.0;
      for (double& v : noise) {
        state = a * state + (1.0 - a) * normal(rng);
        v = state;
        noise_energy += v * v;
      }
      const double k = std::sqrt(energy / noise_energy) * std::pow(10.0, options.aspiration_db / 20.0);
      energy = 0.0;
      for (std::size_t n = 0; n < seg_len; ++n) {
        seg[n] += k * noise[n];
        energy += seg[n] * seg[n];
      }
    }
    const double scale = options.reference_amplitude * std::pow(10.0, gain_db / 20.0) /
                         std::sqrt(energy / static_cast<double>(seg_len));

    const std::size_t offset = i * segment;
    for (std::size_t n = 0; n < seg_len; ++n) {
      double g = 1.0;
      if (i > 0 && n < fade) {
        g = 0.5 - 0.5 * std::cos(std::numbers::pi * (n + 0.5) / fade);
      } else if (i + 1 < content.size() && n >= segment) {
        g = 0.5 + 0.5 * std::cos(std::numbers::pi * (n - segment + 0.5) / fade);
      }
      utt.waveform.samples[offset + n] += g * scale * seg[n];
    }
  }
  for (double& v : utt.waveform.samples) v = static_cast<double>(static_cast<float>(v));
  utt.f0_mean_hz = content.empty() ? 0.0 : f0_sum / static_cast<double>(content.size());
  utt.rms = signal::Rms(utt.waveform.samples);
  return utt;
}

SyntheticSpeaker DrawSpeaker(int index, std::uint64_t seed, double f0_spread) {
  Rng rng(DeriveSeed(seed, 0x5eed, static_cast<std::uint64_t>(index)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SyntheticSpeaker spk;
  char id[16];
  std::snprintf(id, sizeof(id), "spk%03d", index);
  spk.id = id;
  spk.group = index % 2 == 0 ? PitchGroup::kLow : PitchGroup::kHigh;
  // Log-uniform base F0 inside disjoint group bands.
  const double lo = spk.group == PitchGroup::kLow ? 85.0 : 180.0;
  const double hi = spk.group == PitchGroup::kLow ? 150.0 : 340.0;
  spk.base_f0 = lo * std::pow(hi / lo, unit(rng));
  spk.f0_spread = f0_spread;
  spk.base_gain_db = -12.0 * unit(rng);
  spk.formants_hz = {400.0 + 500.0 * unit(rng), 1100.0 + 900.0 * unit(rng),
                     2200.0 + 1000.0 * unit(rng)};
  return spk;
}

}  // namespace pvc::corpus
