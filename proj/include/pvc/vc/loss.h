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

#ifndef PVC_VC_LOSS_H_
#define PVC_VC_LOSS_H_

#include <vector>

#include "pvc/base/rng.h"
#include "pvc/grad/tape.h"
#include "pvc/prosody/model.h"
#include "pvc/vc/model.h"

namespace pvc::vc {

/// mean(sg[E] - Q)^2 + beta * mean(E - sg[Q])^2.
template <typename T>
grad::Var<T> VqLoss(grad::Var<T> e, grad::Var<T> q, double beta);

/// Per item: S = (1/T) sum_t (e_t - sg[q_t]). (batch*T) x d -> batch x d.
template <typename T>
grad::Var<T> SpeakerEmbedding(grad::Var<T> e, grad::Var<T> q, int batch);

/// mean |I - I_hat| + mean (I - I_hat)^2.
template <typename T>
grad::Var<T> ReconLoss(grad::Var<T> target, grad::Var<T> output);

/// InfoNCE over all valid (item, t, k): the prediction Pred^k(c_t) scores
/// the code at t + k against `negatives` codes drawn uniformly from the
/// other positions of the batch. k is limited to k < T; throws
/// InvalidArgument when T < 2.
template <typename T>
grad::Var<T> CpcLoss(grad::Tape<T>& tape, VcModel<T>& model, grad::Var<T> q, int batch, Rng& rng);

/// Output of the content path: E, codebook indices, Q and the straight-
/// through Q fed forward.
template <typename T>
struct ContentCodes {
  grad::Var<T> e;
  std::vector<int> indices;
  grad::Var<T> q;
  grad::Var<T> q_st;
};

template <typename T>
ContentCodes<T> EncodeAndQuantize(grad::Tape<T>& tape, VcModel<T>& model, grad::Var<T> mels, int batch);

template <typename T>
struct VcLoss {
  grad::Var<T> total;
  grad::Var<T> rec;
  grad::Var<T> vq;
  grad::Var<T> cpc;
  grad::Var<T> output;
};

/// Psi from the frozen prosody encoder is computed on a separate tape and
/// enters as a constant, so its parameters never receive a gradient.
template <typename T>
VcLoss<T> VcForwardLoss(grad::Tape<T>& tape, prosody::ProsodyModel<T>& prosody, VcModel<T>& model,
                        const RowMatrix<T>& mels, int batch, Rng& rng);

/// Q from the source, S and psi from the target. Output has the source
/// length. Both inputs are T x n_mels.
template <typename T>
RowMatrix<T> Convert(const RowMatrix<T>& source, const RowMatrix<T>& target,
                     prosody::ProsodyModel<T>& prosody, VcModel<T>& model);

/// Convert(mel, mel).
template <typename T>
RowMatrix<T> Reconstruct(const RowMatrix<T>& mel, prosody::ProsodyModel<T>& prosody, VcModel<T>& model);

/// S of a single T x n_mels log-mel; 1 x d.
template <typename T>
RowMatrix<T> SpeakerVector(const RowMatrix<T>& mel, VcModel<T>& model);

}  // namespace pvc::vc

#endif  // PVC_VC_LOSS_H_
