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

#include "pvc/prosody/model.h"

#include <string>

#include "pvc/base/error.h"

namespace pvc::prosody {

namespace {

const grad::ConvSpec kConv{5, 2, 2, grad::PadMode::kCircular};

}  // namespace

template <typename T>
ProsodyModel<T>::ProsodyModel(const ProsodyConfig& config, std::uint64_t seed) : config_(config) {
  if (config.n_mels < 1 || config.channels < 1 || config.dim < 1) {
    throw InvalidArgument("prosody model dimensions must be positive");
  }
  Rng rng(seed);
  int cin = config.n_mels;
  for (int l = 1; l <= 4; ++l) {
    const std::string name = "prosody.conv" + std::to_string(l);
    const int fan_in = kConv.kernel * cin;
    params_.Add(name + ".w", grad::UniformFanIn<T>(fan_in, config.channels, fan_in, rng));
    params_.Add(name + ".b", grad::UniformFanIn<T>(1, config.channels, fan_in, rng));
    cin = config.channels;
  }
  for (const char* head : {"head_p", "head_v"}) {
    const std::string name = std::string("prosody.") + head;
    params_.Add(name + ".w", grad::UniformFanIn<T>(config.channels, config.dim, config.channels, rng));
    params_.Add(name + ".b", grad::UniformFanIn<T>(1, config.dim, config.channels, rng));
  }
  for (const char* rank : {"rank_p", "rank_v"}) {
    const std::string name = std::string("prosody.") + rank;
    params_.Add(name + ".w", grad::UniformFanIn<T>(config.dim, 1, config.dim, rng));
    params_.Add(name + ".b", grad::UniformFanIn<T>(1, 1, config.dim, rng));
  }
}

template <typename T>
typename ProsodyModel<T>::Repr ProsodyModel<T>::Encode(grad::Tape<T>& tape, grad::Var<T> mels,
                                                       int batch) {
  if (batch < 1 || mels.rows() % batch != 0) {
    throw InvalidArgument("encode_prosody: rows do not split into items");
  }
  const int frames = mels.rows() / batch;
  if (frames < kMinFrames) {
    throw InvalidArgument("encode_prosody: input too short (" + std::to_string(frames) +
                          " frames, need " + std::to_string(kMinFrames) + ")");
  }
  if (mels.cols() != config_.n_mels) {
    throw InvalidArgument("encode_prosody: expected " + std::to_string(config_.n_mels) +
                          " mel bins, got " + std::to_string(mels.cols()));
  }
  grad::Var<T> h = mels;
  for (int l = 1; l <= 4; ++l) {
    const std::string name = "prosody.conv" + std::to_string(l);
    h = grad::Relu(grad::Conv1d(h, tape.Bind(params_.Get(name + ".w")),
                                tape.Bind(params_.Get(name + ".b")), batch, kConv));
  }
  const grad::Var<T> pooled = grad::TimeMean(h, batch);
  Repr r;
  r.psi_p = grad::Linear(pooled, tape.Bind(params_.Get("prosody.head_p.w")),
                         tape.Bind(params_.Get("prosody.head_p.b")));
  r.psi_v = grad::Linear(pooled, tape.Bind(params_.Get("prosody.head_v.w")),
                         tape.Bind(params_.Get("prosody.head_v.b")));
  return r;
}

template <typename T>
grad::Var<T> ProsodyModel<T>::ScoreP(grad::Tape<T>& tape, grad::Var<T> psi_p) {
  return grad::Linear(psi_p, tape.Bind(params_.Get("prosody.rank_p.w")),
                      tape.Bind(params_.Get("prosody.rank_p.b")));
}

template <typename T>
grad::Var<T> ProsodyModel<T>::ScoreV(grad::Tape<T>& tape, grad::Var<T> psi_v) {
  return grad::Linear(psi_v, tape.Bind(params_.Get("prosody.rank_v.w")),
                      tape.Bind(params_.Get("prosody.rank_v.b")));
}

template <typename T>
ProsodyOutput EncodeProsody(ProsodyModel<T>& model, const RowMatrix<T>& mel) {
  grad::Tape<T> tape;
  auto repr = model.Encode(tape, tape.Constant(mel), 1);
  ProsodyOutput out;
  const auto& p = repr.psi_p.value();
  const auto& v = repr.psi_v.value();
  out.psi_p.assign(p.data(), p.data() + p.size());
  out.psi_v.assign(v.data(), v.data() + v.size());
  out.r_p = static_cast<double>(model.ScoreP(tape, repr.psi_p).value()(0, 0));
  out.r_v = static_cast<double>(model.ScoreV(tape, repr.psi_v).value()(0, 0));
  return out;
}

template class ProsodyModel<float>;
template class ProsodyModel<double>;
template ProsodyOutput EncodeProsody<float>(ProsodyModel<float>&, const RowMatrix<float>&);
template ProsodyOutput EncodeProsody<double>(ProsodyModel<double>&, const RowMatrix<double>&);

}  // namespace pvc::prosody
