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

#include "pvc/prosody/loss.h"

#include <cmath>

#include "pvc/base/error.h"

namespace pvc::prosody {

double PairProbability(double r_i, double r_j) {
  const double d = r_i - r_j;
  if (d >= 0.0) return 1.0 / (1.0 + std::exp(-d));
  const double e = std::exp(d);
  return e / (1.0 + e);
}

double RankLossFromDifference(double d, double tau) {
  const double softplus = d > 0.0 ? d + std::log1p(std::exp(-d)) : std::log1p(std::exp(d));
  return softplus - tau * d;
}

double RankLoss(double p, double tau) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("rank_loss: p must lie in (0, 1)");
  return RankLossFromDifference(std::log(p) - std::log1p(-p), tau);
}

template <typename T>
ProsodyLoss<T> ComputeProsodyLoss(grad::Tape<T>& tape, ProsodyModel<T>& model,
                                  const RowMatrix<T>& mel_i, const RowMatrix<T>& mel_j, int batch,
                                  const std::vector<double>& tau_p, const std::vector<double>& tau_v) {
  if (mel_i.rows() != mel_j.rows() || mel_i.cols() != mel_j.cols()) {
    throw InvalidArgument("prosody_loss: pair members differ in shape");
  }
  if (static_cast<int>(tau_p.size()) != batch || static_cast<int>(tau_v.size()) != batch) {
    throw InvalidArgument("prosody_loss: one label per pair required");
  }
  // Both members go through the encoder as one batch of 2B items.
  RowMatrix<T> both(mel_i.rows() * 2, mel_i.cols());
  both.topRows(mel_i.rows()) = mel_i;
  both.bottomRows(mel_j.rows()) = mel_j;
  const auto repr = model.Encode(tape, tape.Constant(std::move(both)), 2 * batch);
  const grad::Var<T> r_p = model.ScoreP(tape, repr.psi_p);
  const grad::Var<T> r_v = model.ScoreV(tape, repr.psi_v);
  const grad::Var<T> d_p = grad::Sub(grad::SliceRows(r_p, 0, batch), grad::SliceRows(r_p, batch, batch));
  const grad::Var<T> d_v = grad::Sub(grad::SliceRows(r_v, 0, batch), grad::SliceRows(r_v, batch, batch));
  std::vector<double> target_p(batch), target_v(batch);
  for (int b = 0; b < batch; ++b) {
    target_p[b] = 1.0 - tau_p[b];
    target_v[b] = 1.0 - tau_v[b];
  }
  ProsodyLoss<T> out;
  out.loss_p = grad::LogisticXent(d_p, target_p);
  out.loss_v = grad::LogisticXent(d_v, target_v);
  out.total = grad::Add(out.loss_p, out.loss_v);
  return out;
}

template ProsodyLoss<float> ComputeProsodyLoss<float>(grad::Tape<float>&, ProsodyModel<float>&,
                                                      const RowMatrix<float>&, const RowMatrix<float>&,
                                                      int, const std::vector<double>&,
                                                      const std::vector<double>&);
template ProsodyLoss<double> ComputeProsodyLoss<double>(grad::Tape<double>&, ProsodyModel<double>&,
                                                        const RowMatrix<double>&,
                                                        const RowMatrix<double>&, int,
                                                        const std::vector<double>&,
                                                        const std::vector<double>&);

}  // namespace pvc::prosody
