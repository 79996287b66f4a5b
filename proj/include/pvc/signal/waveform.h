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

#ifndef PVC_SIGNAL_WAVEFORM_H_
#define PVC_SIGNAL_WAVEFORM_H_

#include <vector>

namespace pvc::signal {

inline constexpr int kSampleRate = 22050;

/// Mono audio. Samples are nominally in [-1, 1] and always finite.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  double Seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
};

double Rms(const std::vector<double>& samples);

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_WAVEFORM_H_
