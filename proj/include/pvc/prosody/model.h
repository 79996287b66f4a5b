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

#ifndef PVC_PROSODY_MODEL_H_
#define PVC_PROSODY_MODEL_H_

#include <cstdint>
#include <vector>

#include "pvc/grad/ops.h"
#include "pvc/grad/tape.h"

namespace pvc::prosody {

struct ProsodyConfig {
  int n_mels = 80;
  int channels = 128;  // conv width h
  int dim = 64;        // d_psi
};

/// Four stride-2 layers need at least this many frames.
inline constexpr int kMinFrames = 16;

/// Prosody encoder (4 x [conv k5 s2, circular padding, ReLU], mean pool,
/// affine heads for psi_p and psi_v) plus the two affine Rank maps.
/// Circular padding keeps a time-tiled input equivalent to a single copy
/// when the length is a multiple of 16.
template <typename T>
class ProsodyModel {
 public:
  ProsodyModel(const ProsodyConfig& config, std::uint64_t seed);

  const ProsodyConfig& config() const { return config_; }
  grad::ParameterSet<T>& params() { return params_; }
  const grad::ParameterSet<T>& params() const { return params_; }

  struct Repr {
    grad::Var<T> psi_p;  // batch x dim
    grad::Var<T> psi_v;
  };
  /// mels: (batch*T) x n_mels. Throws InvalidArgument when T < kMinFrames.
  Repr Encode(grad::Tape<T>& tape, grad::Var<T> mels, int batch);
  /// batch x 1 scores.
  grad::Var<T> ScoreP(grad::Tape<T>& tape, grad::Var<T> psi_p);
  grad::Var<T> ScoreV(grad::Tape<T>& tape, grad::Var<T> psi_v);

  /// Copies values from another precision; names and shapes must match.
  template <typename U>
  void LoadValues(const grad::ParameterSet<U>& other);

 private:
  ProsodyConfig config_;
  grad::ParameterSet<T> params_;
};

/// Plain-value view of one utterance.
struct ProsodyOutput {
  std::vector<double> psi_p;
  std::vector<double> psi_v;
  double r_p = 0.0;
  double r_v = 0.0;
};

/// Encodes one T x n_mels log-mel.
template <typename T>
ProsodyOutput EncodeProsody(ProsodyModel<T>& model, const RowMatrix<T>& mel);

/// Stacks equal-width matrices item-major.
template <typename T, typename U>
RowMatrix<T> StackRows(const std::vector<RowMatrix<U>>& items);

template <typename T>
template <typename U>
void ProsodyModel<T>::LoadValues(const grad::ParameterSet<U>& other) {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    const auto& q = other.Get(p.name);
    p.value = q.value.template cast<T>();
  }
}

template <typename T, typename U>
RowMatrix<T> StackRows(const std::vector<RowMatrix<U>>& items) {
  Eigen::Index rows = 0;
  for (const auto& m : items) rows += m.rows();
  RowMatrix<T> out(rows, items.empty() ? 0 : items[0].cols());
  Eigen::Index at = 0;
  for (const auto& m : items) {
    out.middleRows(at, m.rows()) = m.template cast<T>();
    at += m.rows();
  }
  return out;
}

}  // namespace pvc::prosody

#endif  // PVC_PROSODY_MODEL_H_
