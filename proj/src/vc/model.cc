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

#include "pvc/vc/model.h"

#include <cmath>
#include <limits>
#include <string>

#include "pvc/base/error.h"

namespace pvc::vc {

namespace {

const grad::ConvSpec kEncoderConv{5, 1, 2, grad::PadMode::kReplicate};
const grad::ConvSpec kDecoderConv{5, 1, 2, grad::PadMode::kZeros};

template <typename T>
void AddConv(grad::ParameterSet<T>& params, const std::string& name, int cin, int cout, Rng& rng) {
  const int fan_in = 5 * cin;
  params.Add(name + ".w", grad::UniformFanIn<T>(fan_in, cout, fan_in, rng));
  params.Add(name + ".b", grad::UniformFanIn<T>(1, cout, fan_in, rng));
}

template <typename T>
void AddAffine(grad::ParameterSet<T>& params, const std::string& name, int cin, int cout, Rng& rng) {
  params.Add(name + ".w", grad::UniformFanIn<T>(cin, cout, cin, rng));
  params.Add(name + ".b", grad::UniformFanIn<T>(1, cout, cin, rng));
}

}  // namespace

template <typename T>
VcModel<T>::VcModel(const VcConfig& config, std::uint64_t seed) : config_(config) {
  if (config.dim < 1 || config.codebook_size < 2 || config.cpc_steps < 1 || config.negatives < 1 ||
      config.decoder_channels < 1 || config.prosody_dim < 1 || config.beta < 0.0) {
    throw InvalidArgument("invalid vc model configuration");
  }
  Rng rng(seed);
  const int d = config.dim;
  int cin = config.n_mels;
  for (int l = 1; l <= 5; ++l) {
    AddConv(params_, "content.conv" + std::to_string(l), cin, d, rng);
    cin = d;
  }
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
  grad::Matrix<T> book(config.codebook_size, d);
  for (Eigen::Index i = 0; i < book.size(); ++i) book.data()[i] = static_cast<T>(normal(rng));
  params_.Add("vq.codebook", std::move(book));

  params_.Add("cpc.lstm.wx", grad::UniformFanIn<T>(d, 4 * d, d, rng));
  params_.Add("cpc.lstm.wh", grad::UniformFanIn<T>(d, 4 * d, d, rng));
  params_.Add("cpc.lstm.b", grad::UniformFanIn<T>(1, 4 * d, d, rng));
  for (int k = 1; k <= config.cpc_steps; ++k) AddAffine(params_, "cpc.pred" + std::to_string(k), d, d, rng);

  int dec_in = 2 * d;
  if (config.condition_pitch) dec_in += config.prosody_dim;
  if (config.condition_volume) dec_in += config.prosody_dim;
  cin = dec_in;
  for (int l = 1; l <= 4; ++l) {
    AddConv(params_, "decoder.conv" + std::to_string(l), cin, config.decoder_channels, rng);
    cin = config.decoder_channels;
  }
  AddAffine(params_, "decoder.out", cin, config.n_mels, rng);
}

template <typename T>
grad::Var<T> VcModel<T>::EncodeContent(grad::Tape<T>& tape, grad::Var<T> mels, int batch) {
  if (batch < 1 || mels.rows() % batch != 0) throw InvalidArgument("encode_content: rows do not split into items");
  if (mels.rows() / batch < 2) throw InvalidArgument("encode_content: input too short (need >= 2 frames)");
  if (mels.cols() != config_.n_mels) {
    throw InvalidArgument("encode_content: expected " + std::to_string(config_.n_mels) +
                          " mel bins, got " + std::to_string(mels.cols()));
  }
  grad::Var<T> h = mels;
  for (int l = 1; l <= 5; ++l) {
    const std::string name = "content.conv" + std::to_string(l);
    h = grad::Conv1d(h, tape.Bind(params_.Get(name + ".w")), tape.Bind(params_.Get(name + ".b")),
                     batch, kEncoderConv);
    h = grad::InstanceNorm(h, batch);
    if (l < 5) h = grad::Relu(h);
  }
  return h;
}

template <typename T>
grad::Var<T> VcModel<T>::Decode(grad::Tape<T>& tape, grad::Var<T> q, grad::Var<T> s,
                                grad::Var<T> psi_p, grad::Var<T> psi_v, int batch) {
  if (batch < 1 || q.rows() % batch != 0) throw InvalidArgument("decode: rows do not split into items");
  const int frames = q.rows() / batch;
  if (q.cols() != config_.dim || s.cols() != config_.dim || s.rows() != batch) {
    throw InvalidArgument("decode: dimension mismatch between Q and S");
  }
  std::vector<grad::Var<T>> parts{q, grad::TileRows(s, frames)};
  if (config_.condition_pitch) {
    if (psi_p.rows() != batch || psi_p.cols() != config_.prosody_dim) {
      throw InvalidArgument("decode: psi_p must be batch x " + std::to_string(config_.prosody_dim));
    }
    parts.push_back(grad::TileRows(psi_p, frames));
  }
  if (config_.condition_volume) {
    if (psi_v.rows() != batch || psi_v.cols() != config_.prosody_dim) {
      throw InvalidArgument("decode: psi_v must be batch x " + std::to_string(config_.prosody_dim));
    }
    parts.push_back(grad::TileRows(psi_v, frames));
  }
  grad::Var<T> h = grad::ConcatCols(parts);
  for (int l = 1; l <= 4; ++l) {
    const std::string name = "decoder.conv" + std::to_string(l);
    h = grad::Relu(grad::Conv1d(h, tape.Bind(params_.Get(name + ".w")),
                                tape.Bind(params_.Get(name + ".b")), batch, kDecoderConv));
  }
  return grad::Linear(h, tape.Bind(params_.Get("decoder.out.w")), tape.Bind(params_.Get("decoder.out.b")));
}

template <typename T>
grad::Var<T> VcModel<T>::Context(grad::Tape<T>& tape, grad::Var<T> q, int batch) {
  return grad::Lstm(q, tape.Bind(params_.Get("cpc.lstm.wx")), tape.Bind(params_.Get("cpc.lstm.wh")),
                    tape.Bind(params_.Get("cpc.lstm.b")), batch);
}

template <typename T>
grad::Var<T> VcModel<T>::Predict(grad::Tape<T>& tape, grad::Var<T> context, int k) {
  const std::string name = "cpc.pred" + std::to_string(k);
  return grad::Linear(context, tape.Bind(params_.Get(name + ".w")), tape.Bind(params_.Get(name + ".b")));
}

template <typename T>
std::vector<int> Quantize(const RowMatrix<T>& e, const RowMatrix<T>& book) {
  if (e.cols() != book.cols()) throw InvalidArgument("quantize: code width mismatch");
  if (book.rows() < 1) throw InvalidArgument("quantize: empty codebook");
  std::vector<int> idx(static_cast<std::size_t>(e.rows()));
  for (Eigen::Index t = 0; t < e.rows(); ++t) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index v = 0; v < book.rows(); ++v) {
      double dist = 0.0;
      for (Eigen::Index c = 0; c < e.cols(); ++c) {
        const double diff = static_cast<double>(e(t, c)) - static_cast<double>(book(v, c));
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        arg = static_cast<int>(v);
      }
    }
    idx[static_cast<std::size_t>(t)] = arg;
  }
  return idx;
}

template class VcModel<float>;
template class VcModel<double>;
template std::vector<int> Quantize<float>(const RowMatrix<float>&, const RowMatrix<float>&);
template std::vector<int> Quantize<double>(const RowMatrix<double>&, const RowMatrix<double>&);

}  // namespace pvc::vc
