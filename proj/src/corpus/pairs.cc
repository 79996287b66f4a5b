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

#include "pvc/corpus/pairs.h"

namespace pvc::corpus {

signal::AugmentationSpec DrawAugmentation(Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> tau(kTauMin, kTauMax);
  signal::AugmentationSpec spec;
  spec.pro = coin(rng) ? signal::Prosody::kVolume : signal::Prosody::kPitch;
  spec.tau = tau(rng);
  return spec;
}

std::pair<double, double> PairLabels(const signal::AugmentationSpec& spec) {
  if (spec.pro == signal::Prosody::kPitch) return {spec.tau, 0.5};
  return {0.5, spec.tau};
}

ProsodyPair MakeProsodyPair(const signal::Waveform& w, const signal::AugmentationSpec& spec,
                            const signal::MelConfig& config) {
  ProsodyPair pair;
  pair.mel_i = signal::ComputeMelSpectrogram(w, config);
  pair.mel_j = spec.tau == 0.5 ? pair.mel_i
                               : signal::ComputeMelSpectrogram(
                                     signal::ApplyAugmentation(w, spec), config);
  std::tie(pair.tau_p, pair.tau_v) = PairLabels(spec);
  return pair;
}

ProsodyPair MakeProsodyPair(const signal::Waveform& w, Rng& rng,
                            const signal::MelConfig& config) {
  return MakeProsodyPair(w, DrawAugmentation(rng), config);
}

}  // namespace pvc::corpus
