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

#ifndef PVC_SIGNAL_AUGMENT_H_
#define PVC_SIGNAL_AUGMENT_H_

#include <cstddef>
#include <vector>

#include "pvc/signal/waveform.h"

namespace pvc::signal {

enum class Prosody { kPitch, kVolume };

const char* ProsodyName(Prosody pro);

/// Which prosody attribute to perturb and how strongly. tau in (0, 1):
/// 0.5 is the identity, below decreases, above increases.
struct AugmentationSpec {
  Prosody pro = Prosody::kPitch;
  double tau = 0.5;
};

/// s = 4 (2 tau - 1) semitones.
double PitchShiftSemitones(double tau);
/// g = 12 (2 tau - 1) dB.
double VolumeGainDb(double tau);

/// Phase-vocoder time stretch: the output is ~factor times as long as x with
/// the same pitch.
std::vector<double> TimeStretch(const std::vector<double>& x, double factor, int n_fft = 1024,
                                int hop = 256);

/// Duration-preserving pitch shift by 2^(s/12): phase-vocoder stretch, then
/// band-limited resampling by the inverse factor, trimmed or zero-padded to
/// the input length. tau = 0.5 returns the input unchanged.
/// Throws InvalidArgument("invalid intensity") unless tau is in (0, 1).
Waveform TransformPitch(const Waveform& w, double tau);

/// Scales by 10^(g/20) and hard-clips to [-1, 1]. The number of clipped
/// samples is added to *clipped when non-null.
Waveform TransformVolume(const Waveform& w, double tau, std::size_t* clipped = nullptr);

Waveform ApplyAugmentation(const Waveform& w, const AugmentationSpec& spec,
                           std::size_t* clipped = nullptr);

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_AUGMENT_H_
