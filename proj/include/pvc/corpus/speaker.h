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

#ifndef PVC_CORPUS_SPEAKER_H_
#define PVC_CORPUS_SPEAKER_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pvc/signal/waveform.h"

namespace pvc::corpus {

/// Stand-in for a speaker-sex split: low_pitch speakers have base F0 below
/// kGroupBoundaryHz, high_pitch ones at or above it.
enum class PitchGroup { kLow, kHigh };

inline constexpr double kGroupBoundaryHz = 165.0;
inline constexpr int kVocabularySize = 16;
inline constexpr double kTokenSeconds = 0.25;
inline constexpr double kCrossfadeSeconds = 0.01;
inline constexpr double kDefaultF0Spread = 0.12;

const char* GroupName(PitchGroup group);
PitchGroup ParseGroup(const std::string& name);

struct SyntheticSpeaker {
  std::string id;
  double base_f0 = 120.0;      // Hz, median pitch
  double f0_spread = 0.0;      // log-std of the per-utterance pitch draw
  double base_gain_db = -6.0;  // in [-12, 0]
  PitchGroup group = PitchGroup::kLow;
  std::array<double, 3> formants_hz{500.0, 1500.0, 2500.0};
};

struct RenderOptions {
  double reference_amplitude = 0.05;  // RMS at 0 dB gain
  double utterance_gain_jitter_db = 2.0;
  double segment_gain_jitter_db = 0.25;
  double segment_f0_jitter = 0.005;  // log-std around the utterance F0
  double aspiration_db = -20.0;      // noise level re. the harmonic part; <= -120 disables
};

struct Utterance {
  std::string speaker_id;
  std::vector<int> content;
  signal::Waveform waveform;
  double f0_mean_hz = 0.0;  // mean of the realized per-token source F0
  double rms = 0.0;
};

/// Additive harmonic synthesis, one 0.25 s segment per token with 10 ms
/// raised-cosine crossfades. Each token emphasizes its own two formants on
/// top of the speaker's three timbre formants. Segment level is set from the
/// gain alone, independent of F0 and formants. Samples are rounded to float32
/// so the in-memory utterance matches its WAV file exactly.
/// Throws InvalidArgument on token ids outside [0, kVocabularySize).
Utterance RenderUtterance(const SyntheticSpeaker& speaker, std::span<const int> content,
                          std::uint64_t seed, const RenderOptions& options = {});

/// Draws speaker `index` of a corpus: even indices low_pitch, odd high_pitch.
SyntheticSpeaker DrawSpeaker(int index, std::uint64_t seed, double f0_spread = kDefaultF0Spread);

}  // namespace pvc::corpus

#endif  // PVC_CORPUS_SPEAKER_H_
