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

#include "pvc/signal/resample.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "pvc/base/error.h"

namespace pvc::signal {

namespace {

constexpr int kZeroCrossings = 16;
// Transition band headroom below the new Nyquist.
constexpr double kRolloff = 0.95;

}  // namespace

std::vector<double> ResampleByStep(const std::vector<double>& x, double start, double step,
                                   std::size_t out_len) {
  if (!(step > 0.0)) throw InvalidArgument("resample: step must be positive");
  std::vector<double> out(out_len, 0.0);
  const double cutoff = step > 1.0 ? kRolloff / step : 1.0;
  const double half_width = kZeroCrossings / cutoff;
  const long long n_in = static_cast<long long>(x.size());
  const std::complex<double> sinc_step = std::polar(1.0, -std::numbers::pi * cutoff);
  const std::complex<double> taper_step = std::polar(1.0, -std::numbers::pi / half_width);
  for (std::size_t n = 0; n < out_len; ++n) {
    const double t = start + static_cast<double>(n) * step;
    const double nearest = std::round(t);
    if (cutoff == 1.0 && std::abs(t - nearest) < 1e-12) {
      const long long k = static_cast<long long>(nearest);
      out[n] = (k >= 0 && k < n_in) ? x[k] : 0.0;
      continue;
    }
    const long long lo = std::max<long long>(0, static_cast<long long>(std::ceil(t - half_width)));
    const long long hi = std::min<long long>(n_in - 1, static_cast<long long>(std::floor(t + half_width)));
    // sin(pi c u) and cos(pi u / half_width) as rotators stepped per tap.
    const double u0 = t - static_cast<double>(lo);
    std::complex<double> sinc_phase = std::polar(1.0, std::numbers::pi * cutoff * u0);
    std::complex<double> taper_phase = std::polar(1.0, std::numbers::pi * u0 / half_width);
    double acc = 0.0;
    for (long long k = lo; k <= hi; ++k) {
      const double u = t - static_cast<double>(k);
      const double cu = cutoff * u;
      const double sinc =
          std::abs(cu) < 1e-12 ? 1.0 : sinc_phase.imag() / (std::numbers::pi * cu);
      const double taper = 0.5 + 0.5 * taper_phase.real();
      acc += x[k] * cutoff * sinc * taper;
      sinc_phase *= sinc_step;
      taper_phase *= taper_step;
    }
    out[n] = acc;
  }
  return out;
}

Waveform ResampleTo(const Waveform& w, int target_rate) {
  if (target_rate <= 0 || w.sample_rate <= 0) throw InvalidArgument("resample: invalid rate");
  if (w.sample_rate == target_rate) return w;
  const double step = static_cast<double>(w.sample_rate) / target_rate;
  const auto out_len = static_cast<std::size_t>(
      std::floor(static_cast<double>(w.samples.size()) * target_rate / w.sample_rate));
  Waveform out;
  out.sample_rate = target_rate;
  out.samples = ResampleByStep(w.samples, 0.0, step, out_len);
  return out;
}

}  // namespace pvc::signal
