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

#include "pvc/signal/fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "pvc/base/error.h"

namespace pvc::signal {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW planning is not thread-safe; execution of an existing plan on fresh
// (equally aligned) arrays is.
PlanPair GetPlans(int n) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* real = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
  PlanPair plans;
  plans.forward = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
  plans.inverse = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  fftw_free(real);
  fftw_free(spec);
  if (!plans.forward || !plans.inverse) throw Error("FFTW planning failed");
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

RealFft::RealFft(int n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("FFT size must be even and >= 2");
  PlanPair plans = GetPlans(n);
  forward_plan_ = plans.forward;
  inverse_plan_ = plans.inverse;
  real_ = fftw_alloc_real(n);
  spec_ = fftw_alloc_complex(n / 2 + 1);
}

RealFft::~RealFft() {
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft::Forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (static_cast<int>(in.size()) != n_ || static_cast<int>(out.size()) != bins()) {
    throw InvalidArgument("RealFft::Forward: size mismatch");
  }
  std::copy(in.begin(), in.end(), real_);
  auto* spec = static_cast<fftw_complex*>(spec_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real_, spec);
  for (int k = 0; k < bins(); ++k) out[k] = {spec[k][0], spec[k][1]};
}

void RealFft::Inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (static_cast<int>(in.size()) != bins() || static_cast<int>(out.size()) != n_) {
    throw InvalidArgument("RealFft::Inverse: size mismatch");
  }
  auto* spec = static_cast<fftw_complex*>(spec_);
  for (int k = 0; k < bins(); ++k) {
    spec[k][0] = in[k].real();
    spec[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), spec, real_);
  const double scale = 1.0 / n_;
  for (int t = 0; t < n_; ++t) out[t] = real_[t] * scale;
}

}  // namespace pvc::signal
