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

#ifndef PVC_SIGNAL_FFT_H_
#define PVC_SIGNAL_FFT_H_

#include <complex>
#include <span>

namespace pvc::signal {

/// Real-input FFT of a fixed length n (FFTW backed). Plans are shared across
/// instances and threads; scratch buffers belong to the instance, so use one
/// instance per thread.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  int bins() const { return n_ / 2 + 1; }

  /// out[k] = sum_t in[t] exp(-2 pi i k t / n), k in [0, n/2].
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  /// Inverse of Forward, normalized by 1/n.
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  int n_;
  double* real_;
  void* spec_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_FFT_H_
