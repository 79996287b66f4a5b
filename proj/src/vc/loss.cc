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

#include "pvc/vc/loss.h"

#include <algorithm>
#include <string>

#include "pvc/base/error.h"
#include "pvc/grad/ops.h"

namespace pvc::vc {

template <typename T>
grad::Var<T> VqLoss(grad::Var<T> e, grad::Var<T> q, double beta) {
  if (e.rows() != q.rows() || e.cols() != q.cols()) throw InvalidArgument("vq_loss: E and Q shapes differ");
  auto codebook_term = grad::MeanSquare(grad::Sub(grad::StopGradient(e), q));
  auto commitment = grad::MeanSquare(grad::Sub(e, grad::StopGradient(q)));
  return grad::Add(codebook_term, grad::Scale(commitment, beta));
}

template <typename T>
grad::Var<T> SpeakerEmbedding(grad::Var<T> e, grad::Var<T> q, int batch) {
  if (e.rows() != q.rows() || e.cols() != q.cols()) {
    throw InvalidArgument("speaker_embedding: E and Q shapes differ");
  }
  return grad::TimeMean(grad::Sub(e, grad::StopGradient(q)), batch);
}

template <typename T>
grad::Var<T> ReconLoss(grad::Var<T> target, grad::Var<T> output) {
  if (target.rows() != output.rows() || target.cols() != output.cols()) {
    throw InvalidArgument("recon_loss: shape mismatch (" + std::to_string(target.rows()) + " x " +
                          std::to_string(target.cols()) + " vs " + std::to_string(output.rows()) +
                          " x " + std::to_string(output.cols()) + ")");
  }
  auto diff = grad::Sub(output, target);
  return grad::Add(grad::MeanAbs(diff), grad::MeanSquare(diff));
}

template <typename T>
grad::Var<T> CpcLoss(grad::Tape<T>& tape, VcModel<T>& model, grad::Var<T> q, int batch, Rng& rng) {
  if (batch < 1 || q.rows() % batch != 0) throw InvalidArgument("cpc_loss: rows do not split into items");
  const int frames = q.rows() / batch;
  const int steps = std::min(model.config().cpc_steps, frames - 1);
  if (steps < 1) throw InvalidArgument("cpc_loss: no valid prediction step (T = " + std::to_string(frames) + ")");
  const int total = q.rows();
  const int m = 1 + model.config().negatives;

  auto context = model.Context(tape, q, batch);
  std::vector<grad::Var<T>> predictions;
  std::vector<int> index;
  std::uniform_int_distribution<int> pick(0, total - 2);
  for (int k = 1; k <= steps; ++k) {
    std::vector<int> rows;
    rows.reserve(static_cast<std::size_t>(batch * (frames - k)));
    for (int b = 0; b < batch; ++b) {
      for (int t = 0; t + k < frames; ++t) {
        const int row = b * frames + t;
        const int positive = row + k;
        rows.push_back(row);
        index.push_back(positive);
        for (int n = 1; n < m; ++n) {
          int j = pick(rng);
          if (j >= positive) ++j;
          index.push_back(j);
        }
      }
    }
    predictions.push_back(grad::GatherRows(model.Predict(tape, context, k), rows));
  }
  auto z = predictions.size() == 1 ? predictions[0] : grad::ConcatRows(predictions);
  auto scores = grad::GatherDot(z, q, index, m);
  return grad::SoftmaxXent(scores, std::vector<int>(static_cast<std::size_t>(z.rows()), 0));
}

template <typename T>
ContentCodes<T> EncodeAndQuantize(grad::Tape<T>& tape, VcModel<T>& model, grad::Var<T> mels, int batch) {
  ContentCodes<T> out;
  out.e = model.EncodeContent(tape, mels, batch);
  auto book = tape.Bind(model.codebook());
  out.indices = Quantize(out.e.value(), book.value());
  out.q = grad::GatherRows(book, out.indices);
  out.q_st = grad::StraightThrough(out.e, out.q);
  return out;
}

template <typename T>
VcLoss<T> VcForwardLoss(grad::Tape<T>& tape, prosody::ProsodyModel<T>& prosody, VcModel<T>& model,
                        const RowMatrix<T>& mels, int batch, Rng& rng) {
  grad::Tape<T> frozen;
  auto repr = prosody.Encode(frozen, frozen.Constant(mels), batch);

  auto input = tape.Constant(mels);
  auto codes = EncodeAndQuantize(tape, model, input, batch);
  auto s = SpeakerEmbedding(codes.e, codes.q, batch);
  auto psi_p = tape.Constant(repr.psi_p.value());
  auto psi_v = tape.Constant(repr.psi_v.value());

  VcLoss<T> out;
  out.output = model.Decode(tape, codes.q_st, s, psi_p, psi_v, batch);
  out.rec = ReconLoss(input, out.output);
  out.vq = VqLoss(codes.e, codes.q, model.config().beta);
  out.cpc = CpcLoss(tape, model, codes.q_st, batch, rng);
  out.total = grad::Add(grad::Add(out.rec, out.vq), out.cpc);
  return out;
}

template <typename T>
RowMatrix<T> Convert(const RowMatrix<T>& source, const RowMatrix<T>& target,
                     prosody::ProsodyModel<T>& prosody, VcModel<T>& model) {
  grad::Tape<T> tape;
  auto src = EncodeAndQuantize(tape, model, tape.Constant(source), 1);
  auto tgt = EncodeAndQuantize(tape, model, tape.Constant(target), 1);
  auto s = SpeakerEmbedding(tgt.e, tgt.q, 1);
  auto repr = prosody.Encode(tape, tape.Constant(target), 1);
  return model.Decode(tape, src.q, s, repr.psi_p, repr.psi_v, 1).value();
}

template <typename T>
RowMatrix<T> Reconstruct(const RowMatrix<T>& mel, prosody::ProsodyModel<T>& prosody, VcModel<T>& model) {
  return Convert(mel, mel, prosody, model);
}

template <typename T>
RowMatrix<T> SpeakerVector(const RowMatrix<T>& mel, VcModel<T>& model) {
  grad::Tape<T> tape;
  auto codes = EncodeAndQuantize(tape, model, tape.Constant(mel), 1);
  return SpeakerEmbedding(codes.e, codes.q, 1).value();
}

#define PVC_INSTANTIATE(T)                                                                      \
  template grad::Var<T> VqLoss<T>(grad::Var<T>, grad::Var<T>, double);                          \
  template grad::Var<T> SpeakerEmbedding<T>(grad::Var<T>, grad::Var<T>, int);                   \
  template grad::Var<T> ReconLoss<T>(grad::Var<T>, grad::Var<T>);                               \
  template grad::Var<T> CpcLoss<T>(grad::Tape<T>&, VcModel<T>&, grad::Var<T>, int, Rng&);       \
  template ContentCodes<T> EncodeAndQuantize<T>(grad::Tape<T>&, VcModel<T>&, grad::Var<T>, int); \
  template VcLoss<T> VcForwardLoss<T>(grad::Tape<T>&, prosody::ProsodyModel<T>&, VcModel<T>&,   \
                                      const RowMatrix<T>&, int, Rng&);                          \
  template RowMatrix<T> Convert<T>(const RowMatrix<T>&, const RowMatrix<T>&,                    \
                                   prosody::ProsodyModel<T>&, VcModel<T>&);                     \
  template RowMatrix<T> Reconstruct<T>(const RowMatrix<T>&, prosody::ProsodyModel<T>&,          \
                                       VcModel<T>&);                                            \
  template RowMatrix<T> SpeakerVector<T>(const RowMatrix<T>&, VcModel<T>&);

PVC_INSTANTIATE(float)
PVC_INSTANTIATE(double)

}  // namespace pvc::vc
