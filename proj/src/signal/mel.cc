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

#include "pvc/signal/mel.h"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "pvc/base/error.h"
#include "pvc/signal/stft.h"

namespace pvc::signal {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(const MelConfig& config) {
  const int bins = config.bins();
  if (config.n_mels < 1 || config.fmax <= config.fmin ||
      config.fmax > config.sample_rate / 2.0) {
    throw InvalidArgument("invalid mel filterbank configuration");
  }
  const double mel_lo = HzToMel(config.fmin);
  const double mel_hi = HzToMel(config.fmax);
  std::vector<double> edges(config.n_mels + 2);
  for (int i = 0; i < config.n_mels + 2; ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (config.n_mels + 1));
  }
  const double hz_per_bin = static_cast<double>(config.sample_rate) / config.window;
  weights_ = MatrixD::Zero(config.n_mels, bins);
  for (int m = 0; m < config.n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    bool any = false;
    for (int k = 0; k < bins; ++k) {
      const double f = k * hz_per_bin;
      const double w = std::min((f - left) / (center - left), (right - f) / (right - center));
      if (w > 0.0) {
        weights_(m, k) = w;
        any = true;
      }
    }
    if (!any) throw InvalidArgument("mel filter " + std::to_string(m) + " covers no FFT bin");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(weights_),
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double tol = 1e-10 * s(0);
  Eigen::VectorXd inv = s.unaryExpr([tol](double x) { return x > tol ? 1.0 / x : 0.0; });
  pinv_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

MatrixD LogMelFromMagnitude(const MatrixD& magnitude, const MelFilterbank& bank,
                            double log_floor) {
  MatrixD mel = magnitude * bank.weights().transpose();
  return mel.unaryExpr([log_floor](double x) { return std::log(std::max(x, log_floor)); });
}

const MelFilterbank& SharedFilterbank(const MelConfig& config) {
  using Key = std::tuple<int, int, int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<MelFilterbank>> cache;
  const Key key{config.sample_rate, config.n_mels, config.window, config.fmin, config.fmax};
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[key];
  if (!slot) slot = std::make_unique<MelFilterbank>(config);
  return *slot;
}

MelSpectrogram ComputeMelSpectrogram(const Waveform& w, const MelConfig& config) {
  const ComplexMatrix spec = Stft(w.samples, config.window, config.hop);
  MelSpectrogram out;
  out.frames = LogMelFromMagnitude(spec.cwiseAbs(), SharedFilterbank(config), config.log_floor);
  out.hop = config.hop;
  out.window = config.window;
  return out;
}

}  // namespace pvc::signal
