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

#ifndef PVC_PROSODY_LOSS_H_
#define PVC_PROSODY_LOSS_H_

#include <vector>

#include "pvc/base/matrix.h"
#include "pvc/prosody/model.h"

namespace pvc::prosody {

/// 1 / (1 + exp(-(r_i - r_j))), evaluated without overflow.
double PairProbability(double r_i, double r_j);

/// -tau log p - (1 - tau) log(1 - p), computed from the logit of p.
double RankLoss(double p, double tau);

/// Same loss as a function of the score difference d = r_i - r_j:
/// softplus(d) - tau d. Minimum over d is the binary entropy of tau.
double RankLossFromDifference(double d, double tau);

template <typename T>
struct ProsodyLoss {
  grad::Var<T> total;  // loss_p + loss_v
  grad::Var<T> loss_p;
  grad::Var<T> loss_v;
};

/// Mean pairwise rank loss over a batch of pairs (member i original, member j
/// augmented). p_ij = sigmoid(r_i - r_j) is the probability that the
/// original ranks above the augmented input. tau > 0.5 raises the augmented
/// input, so the target of p_ij is 1 - tau; scores then grow with pitch and
/// volume.
template <typename T>
ProsodyLoss<T> ComputeProsodyLoss(grad::Tape<T>& tape, ProsodyModel<T>& model,
                                  const RowMatrix<T>& mel_i, const RowMatrix<T>& mel_j, int batch,
                                  const std::vector<double>& tau_p, const std::vector<double>& tau_v);

}  // namespace pvc::prosody

#endif  // PVC_PROSODY_LOSS_H_
