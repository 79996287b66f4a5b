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

#ifndef PVC_SIGNAL_RESAMPLE_H_
#define PVC_SIGNAL_RESAMPLE_H_

#include <cstddef>
#include <vector>

#include "pvc/signal/waveform.h"

namespace pvc::signal {

/// Band-limited (Hann-windowed sinc) interpolation: out[n] = x(start + n*step)
/// for n in [0, out_len). When step > 1 the kernel cutoff drops to 1/step of
/// the input Nyquist to prevent aliasing. Positions outside x read as zero.
std::vector<double> ResampleByStep(const std::vector<double>& x, double start, double step,
                                   std::size_t out_len);

/// Converts w to target_rate. Returns a copy when the rates already match.
Waveform ResampleTo(const Waveform& w, int target_rate);

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_RESAMPLE_H_
