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

#ifndef PVC_VC_MODEL_H_
#define PVC_VC_MODEL_H_

#include <cstdint>
#include <vector>

#include "pvc/base/rng.h"
#include "pvc/grad/ops.h"
#include "pvc/grad/tape.h"
#include "pvc/prosody/model.h"

namespace pvc::vc {

struct VcConfig {
  int n_mels = 80;
  int dim = 64;              // d: width of E, Q, C and S
  int prosody_dim = 64;      // d_psi of the frozen prosody encoder
  int codebook_size = 64;    // V
  int cpc_steps = 4;         // K
  int negatives = 10;        // n_neg
  double beta = 0.25;
  int decoder_channels = 64;
  // Ablations: drop psi_p / psi_v from the decoder input.
  bool condition_pitch = true;
  bool condition_volume = true;
};

/// Content encoder, codebook, CPC head and decoder.
template <typename T>
class VcModel {
 public:
  VcModel(const VcConfig& config, std::uint64_t seed);

  const VcConfig& config() const { return config_; }
  grad::ParameterSet<T>& params() { return params_; }
  const grad::ParameterSet<T>& params() const { return params_; }

  /// 5 x [conv k5, replicate padding] each followed by instance norm, ReLU
  /// after the first four. (batch*T) x n_mels -> (batch*T) x dim.
  grad::Var<T> EncodeContent(grad::Tape<T>& tape, grad::Var<T> mels, int batch);

  /// Decoder input is concat(q_t, S, psi_p, psi_v) per frame, minus any
  /// ablated prosody. q: (batch*T) x dim; s: batch x dim; psi: batch x d_psi
  /// (ignored when the matching condition flag is off).
  grad::Var<T> Decode(grad::Tape<T>& tape, grad::Var<T> q, grad::Var<T> s, grad::Var<T> psi_p,
                      grad::Var<T> psi_v, int batch);

  /// LSTM context over each item of q: (batch*T) x dim.
  grad::Var<T> Context(grad::Tape<T>& tape, grad::Var<T> q, int batch);
  /// Pred^k, k in [1, K].
  grad::Var<T> Predict(grad::Tape<T>& tape, grad::Var<T> context, int k);

  grad::Parameter<T>& codebook() { return params_.Get("vq.codebook"); }

  template <typename U>
  void LoadValues(const grad::ParameterSet<U>& other) {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      params_[i].value = other.Get(params_[i].name).value.template cast<T>();
    }
  }

 private:
  VcConfig config_;
  grad::ParameterSet<T> params_;
};

/// Nearest codebook row per row of e (squared Euclidean distance); ties go
/// to the lowest index.
template <typename T>
std::vector<int> Quantize(const RowMatrix<T>& e, const RowMatrix<T>& book);

}  // namespace pvc::vc

#endif  // PVC_VC_MODEL_H_
