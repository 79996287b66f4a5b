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

#ifndef PVC_SIGNAL_PITCH_H_
#define PVC_SIGNAL_PITCH_H_

#include <vector>

#include "pvc/signal/waveform.h"

namespace pvc::signal {

struct F0Options {
  int frame = 1024;
  int hop = 256;
  double min_hz = 50.0;
  double max_hz = 600.0;
  double voicing_threshold = 0.3;
  /// A shorter-lag local maximum is preferred over the global one when it
  /// reaches this fraction of the global peak (guards against octave errors).
  double octave_ratio = 0.85;
};

/// Per-frame F0 in Hz (0 = unvoiced) and the peak normalized autocorrelation.
struct F0Track {
  std::vector<double> hz;
  std::vector<double> confidence;

  std::size_t size() const { return hz.size(); }
  std::vector<double> Voiced() const;
};

/// Frame-wise normalized autocorrelation pitch tracker. Voiced frames always
/// report a value inside [min_hz, max_hz].
F0Track EstimateF0(const Waveform& w, const F0Options& options = {});

/// RMS per frame (1024 / 256 by default). Empty when the input is shorter
/// than one frame.
std::vector<double> FrameRms(const Waveform& w, int frame = 1024, int hop = 256);

double Median(std::vector<double> values);

/// Median of the voiced frames, 0 when nothing is voiced.
double MedianVoicedF0(const F0Track& track);

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_PITCH_H_
