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

#ifndef PVC_SIGNAL_STFT_H_
#define PVC_SIGNAL_STFT_H_

#include <vector>

#include "pvc/base/matrix.h"
#include "pvc/signal/waveform.h"

namespace pvc::signal {

/// Periodic Hann window of length n.
std::vector<double> HannWindow(int n);

/// Number of frames produced by Stft: 1 + floor((len - window) / hop).
int NumFrames(std::size_t num_samples, int window, int hop);

/// Hann-windowed STFT without center padding; frame t covers samples
/// [t*hop, t*hop + window). The incomplete tail frame is dropped.
/// Throws InvalidArgument("input too short") when len < window.
ComplexMatrix Stft(const std::vector<double>& samples, int window, int hop);

/// Weighted overlap-add inverse of Stft (Hann synthesis window, normalized by
/// the summed squared window). Output length is (T - 1) * hop + window.
std::vector<double> Istft(const ComplexMatrix& spec, int window, int hop);

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_STFT_H_
