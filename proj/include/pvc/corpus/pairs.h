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

#ifndef PVC_CORPUS_PAIRS_H_
#define PVC_CORPUS_PAIRS_H_

#include "pvc/base/rng.h"
#include "pvc/signal/augment.h"
#include "pvc/signal/mel.h"

namespace pvc::corpus {

inline constexpr double kTauMin = 0.05;
inline constexpr double kTauMax = 0.95;

/// Member i is always the original; member j carries exactly one transform.
struct ProsodyPair {
  signal::MelSpectrogram mel_i;
  signal::MelSpectrogram mel_j;
  double tau_p = 0.5;
  double tau_v = 0.5;
};

/// Prosody uniform over {pitch, volume}, tau ~ U[0.05, 0.95]. The other
/// prosody's label is 0.5.
signal::AugmentationSpec DrawAugmentation(Rng& rng);

/// Labels for a drawn augmentation: (tau_p, tau_v).
std::pair<double, double> PairLabels(const signal::AugmentationSpec& spec);

ProsodyPair MakeProsodyPair(const signal::Waveform& w, const signal::AugmentationSpec& spec,
                            const signal::MelConfig& config = {});
ProsodyPair MakeProsodyPair(const signal::Waveform& w, Rng& rng,
                            const signal::MelConfig& config = {});

}  // namespace pvc::corpus

#endif  // PVC_CORPUS_PAIRS_H_
