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

#include "pvc/signal/griffin_lim.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "pvc/base/error.h"
#include "pvc/base/rng.h"
#include "pvc/signal/stft.h"

namespace pvc::signal {

MatrixD InvertMel(const MelSpectrogram& mel, const MelConfig& config, int nnls_iterations) {
  const MelFilterbank& bank = SharedFilterbank(config);
  if (mel.num_bins() != config.n_mels) {
    throw InvalidArgument("griffin_lim: mel has " + std::to_string(mel.num_bins()) +
                          " bins, expected " + std::to_string(config.n_mels));
  }
  const MatrixD linear_mel = mel.frames.array().exp().matrix();
  MatrixD mag = (linear_mel * bank.pseudo_inverse().transpose()).cwiseMax(0.0);
  if (nnls_iterations > 0) {
    // Projected gradient on 0.5 ||mag W^T - linear_mel||^2 with step 1/L,
    // L = largest eigenvalue of W^T W.
    const MatrixD& w = bank.weights();
    const MatrixD gram = w.transpose() * w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(gram),
                                                       Eigen::EigenvaluesOnly);
    const double step = 1.0 / eig.eigenvalues().maxCoeff();
    const MatrixD target = linear_mel * w;
    for (int it = 0; it < nnls_iterations; ++it) {
      mag = (mag - step * (mag * gram - target)).cwiseMax(0.0);
    }
  }
  return mag;
}

Waveform GriffinLim(const MelSpectrogram& mel, const GriffinLimOptions& options,
                    const MelConfig& config, std::vector<double>* inconsistency) {
  if (options.iterations < 1) throw InvalidArgument("griffin_lim: iterations must be >= 1");
  const MatrixD mag = InvertMel(mel, config, options.nnls_iterations);
  const double mag_norm = std::max(mag.norm(), 1e-300);

  Rng rng(options.seed);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  ComplexMatrix estimate(mag.rows(), mag.cols());
  for (Eigen::Index t = 0; t < mag.rows(); ++t) {
    for (Eigen::Index k = 0; k < mag.cols(); ++k) estimate(t, k) = std::polar(mag(t, k), phase(rng));
  }
  if (inconsistency) inconsistency->clear();

  std::vector<double> samples;
  for (int it = 0; it < options.iterations; ++it) {
    samples = Istft(estimate, config.window, config.hop);
    const ComplexMatrix rebuilt = Stft(samples, config.window, config.hop);
    if (inconsistency) inconsistency->push_back((rebuilt - estimate).norm() / mag_norm);
    for (Eigen::Index t = 0; t < mag.rows(); ++t) {
      for (Eigen::Index k = 0; k < mag.cols(); ++k) {
        const std::complex<double> z = rebuilt(t, k);
        const double a = std::abs(z);
        estimate(t, k) = a > 0.0 ? mag(t, k) * (z / a) : std::complex<double>(mag(t, k), 0.0);
      }
    }
  }
  Waveform out;
  out.samples = Istft(estimate, config.window, config.hop);
  out.sample_rate = config.sample_rate;
  return out;
}

}  // namespace pvc::signal
