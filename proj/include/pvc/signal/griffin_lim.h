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

#ifndef PVC_SIGNAL_GRIFFIN_LIM_H_
#define PVC_SIGNAL_GRIFFIN_LIM_H_

#include <cstdint>
#include <vector>

#include "pvc/base/matrix.h"
#include "pvc/signal/mel.h"
#include "pvc/signal/waveform.h"

namespace pvc::signal {

struct GriffinLimOptions {
  int iterations = 60;
  /// Seed for the initial random phase.
  std::uint64_t seed = 0;
  /// Projected-gradient refinement steps for the non-negative mel inversion,
  /// starting from the clipped pseudo-inverse. Zero keeps the clipped
  /// pseudo-inverse.
  int nnls_iterations = 0;
};

/// Linear magnitude spectrogram (T x bins) whose mel projection approximates
/// exp(mel): pseudo-inverse clipped at zero, optionally refined by NNLS.
MatrixD InvertMel(const MelSpectrogram& mel, const MelConfig& config, int nnls_iterations = 0);

/// Mel spectrogram to waveform by Griffin-Lim phase retrieval. If
/// inconsistency is non-null it receives, per iteration, the relative
/// distance between the current spectrogram estimate and its nearest
/// consistent STFT (non-increasing).
Waveform GriffinLim(const MelSpectrogram& mel, const GriffinLimOptions& options = {},
                    const MelConfig& config = {}, std::vector<double>* inconsistency = nullptr);

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_GRIFFIN_LIM_H_
