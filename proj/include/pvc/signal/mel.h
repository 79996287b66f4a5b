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

#ifndef PVC_SIGNAL_MEL_H_
#define PVC_SIGNAL_MEL_H_

#include "pvc/base/matrix.h"
#include "pvc/signal/waveform.h"

namespace pvc::signal {

struct MelConfig {
  int sample_rate = kSampleRate;
  int n_mels = 80;
  int window = 1024;
  // 5.8 ms at 22050 Hz is 127.9 samples; an integer hop is required.
  int hop = 128;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;

  int bins() const { return window / 2 + 1; }
};

/// HTK-scale mel conversion.
double HzToMel(double hz);
double MelToHz(double mel);

/// n_mels x (window/2 + 1) bank of triangular, peak-normalized filters.
class MelFilterbank {
 public:
  explicit MelFilterbank(const MelConfig& config = {});

  const MatrixD& weights() const { return weights_; }
  /// Moore-Penrose pseudo-inverse, (window/2 + 1) x n_mels.
  const MatrixD& pseudo_inverse() const { return pinv_; }

 private:
  MatrixD weights_;
  MatrixD pinv_;
};

/// Process-wide, lazily built filterbank for a configuration.
const MelFilterbank& SharedFilterbank(const MelConfig& config);

/// T x n_mels natural-log mel magnitudes; every entry >= log(log_floor).
struct MelSpectrogram {
  MatrixD frames;
  int hop = 128;
  int window = 1024;

  int num_frames() const { return static_cast<int>(frames.rows()); }
  int num_bins() const { return static_cast<int>(frames.cols()); }
};

/// log(max(W |STFT(w)|, floor)). Propagates "input too short".
MelSpectrogram ComputeMelSpectrogram(const Waveform& w, const MelConfig& config = {});

/// Same projection applied to an existing magnitude spectrogram (T x bins).
MatrixD LogMelFromMagnitude(const MatrixD& magnitude, const MelFilterbank& bank,
                            double log_floor);

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_MEL_H_
