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

#include "pvc/corpus/batch.h"

#include <algorithm>

#include "pvc/base/error.h"
#include "pvc/base/parallel.h"
#include "pvc/corpus/pairs.h"
#include "pvc/signal/wav.h"

namespace pvc::corpus {

UtteranceStore::UtteranceStore(const Manifest& manifest, const std::vector<std::size_t>& indices,
                               const signal::MelConfig& config)
    : manifest_(manifest), config_(config) {
  std::vector<std::size_t> which = indices;
  if (which.empty()) {
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) which.push_back(i);
  }
  items_.resize(which.size());
  ParallelFor(which.size(), [&](std::size_t k) {
    StoredUtterance& s = items_[k];
    s.entry = which[k];
    s.waveform = signal::ReadWav(manifest_.Resolve(manifest_.entries[which[k]]), config_.sample_rate);
    s.mel = signal::ComputeMelSpectrogram(s.waveform, config_).frames.cast<float>();
  });
}

UtteranceStore UtteranceStore::ForSplit(const Manifest& manifest, Split split,
                                        const signal::MelConfig& config) {
  const auto indices = manifest.Indices(split);
  if (indices.empty()) throw InvalidArgument(std::string("no ") + SplitName(split) + " utterances");
  return UtteranceStore(manifest, indices, config);
}

MatrixF CropFrames(const MatrixF& mel, int start, int frames) {
  if (mel.rows() == 0) throw InvalidArgument("empty mel spectrogram");
  MatrixF out(frames, mel.cols());
  for (int t = 0; t < frames; ++t) {
    const int src = std::min<int>(start + t, static_cast<int>(mel.rows()) - 1);
    out.row(t) = mel.row(src);
  }
  return out;
}

BatchIterator::BatchIterator(const UtteranceStore& store, int batch_size, int crop_frames,
                             std::uint64_t seed)
    : store_(store), batch_size_(batch_size), crop_(crop_frames), rng_(seed) {
  if (store.size() == 0) throw InvalidArgument("batch iterator over an empty store");
  if (batch_size < 1 || crop_frames < 1) throw InvalidArgument("batch size and crop must be >= 1");
}

MelBatch BatchIterator::NextMelBatch() {
  std::uniform_int_distribution<std::size_t> pick(0, store_.size() - 1);
  MelBatch batch;
  for (int b = 0; b < batch_size_; ++b) {
    const std::size_t item = pick(rng_);
    const MatrixF& mel = store_[item].mel;
    const int frames = static_cast<int>(mel.rows());
    int start = 0;
    if (frames > crop_) start = std::uniform_int_distribution<int>(0, frames - crop_)(rng_);
    batch.mels.push_back(CropFrames(mel, start, crop_));
    batch.items.push_back(item);
    batch.padded.push_back(frames < crop_);
  }
  return batch;
}

PairBatch BatchIterator::NextPairBatch() {
  std::uniform_int_distribution<std::size_t> pick(0, store_.size() - 1);
  const auto& config = store_.config();
  PairBatch batch;
  std::vector<int> starts;
  for (int b = 0; b < batch_size_; ++b) {
    const std::size_t item = pick(rng_);
    const int frames = static_cast<int>(store_[item].mel.rows());
    int start = 0;
    if (frames > crop_) start = std::uniform_int_distribution<int>(0, frames - crop_)(rng_);
    const auto spec = DrawAugmentation(rng_);
    batch.items.push_back(item);
    batch.specs.push_back(spec);
    const auto [tp, tv] = PairLabels(spec);
    batch.tau_p.push_back(tp);
    batch.tau_v.push_back(tv);
    batch.padded.push_back(frames < crop_);
    starts.push_back(start);
  }
  batch.mel_i.resize(batch_size_);
  batch.mel_j.resize(batch_size_);
  ParallelFor(static_cast<std::size_t>(batch_size_), [&](std::size_t b) {
    const StoredUtterance& u = store_[batch.items[b]];
    const int start = starts[b];
    batch.mel_i[b] = CropFrames(u.mel, start, crop_);
    if (batch.specs[b].tau == 0.5) {
      batch.mel_j[b] = batch.mel_i[b];
      return;
    }
    // Transform a margin of whole hops around the crop so that the frame grid
    // of the augmented audio lines up with the original.
    const auto& x = u.waveform.samples;
    const std::size_t margin = static_cast<std::size_t>(config.hop) *
                               static_cast<std::size_t>((config.window + config.hop - 1) / config.hop);
    const std::size_t first = static_cast<std::size_t>(start) * config.hop;
    const std::size_t last = std::min(
        x.size(), first + static_cast<std::size_t>(crop_ - 1) * config.hop + config.window);
    const std::size_t a = first > margin ? first - margin : 0;
    const std::size_t e = std::min(x.size(), last + margin);
    signal::Waveform seg;
    seg.sample_rate = u.waveform.sample_rate;
    seg.samples.assign(x.begin() + static_cast<std::ptrdiff_t>(a),
                       x.begin() + static_cast<std::ptrdiff_t>(e));
    const auto aug = signal::ApplyAugmentation(seg, batch.specs[b]);
    const MatrixF mel = signal::ComputeMelSpectrogram(aug, config).frames.cast<float>();
    batch.mel_j[b] = CropFrames(mel, static_cast<int>((first - a) / config.hop), crop_);
  });
  return batch;
}

}  // namespace pvc::corpus
