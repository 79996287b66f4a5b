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

#ifndef PVC_CORPUS_BATCH_H_
#define PVC_CORPUS_BATCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pvc/base/matrix.h"
#include "pvc/base/rng.h"
#include "pvc/corpus/manifest.h"
#include "pvc/signal/augment.h"
#include "pvc/signal/mel.h"

namespace pvc::corpus {

struct StoredUtterance {
  std::size_t entry = 0;  // index into the manifest
  signal::Waveform waveform;
  MatrixF mel;  // frames x n_mels
};

/// Waveforms and their log-mels, loaded once and shared read-only.
class UtteranceStore {
 public:
  /// Loads the entries listed in `indices` (all entries when empty).
  UtteranceStore(const Manifest& manifest, const std::vector<std::size_t>& indices,
                 const signal::MelConfig& config = {});
  static UtteranceStore ForSplit(const Manifest& manifest, Split split,
                                 const signal::MelConfig& config = {});

  std::size_t size() const { return items_.size(); }
  const StoredUtterance& operator[](std::size_t i) const { return items_[i]; }
  const ManifestEntry& entry(std::size_t i) const { return manifest_.entries[items_[i].entry]; }
  const Manifest& manifest() const { return manifest_; }
  const signal::MelConfig& config() const { return config_; }

 private:
  Manifest manifest_;
  signal::MelConfig config_;
  std::vector<StoredUtterance> items_;
};

struct MelBatch {
  std::vector<MatrixF> mels;  // each crop x n_mels
  std::vector<std::size_t> items;
  std::vector<bool> padded;
};

struct PairBatch {
  std::vector<MatrixF> mel_i;
  std::vector<MatrixF> mel_j;
  std::vector<double> tau_p;
  std::vector<double> tau_v;
  std::vector<signal::AugmentationSpec> specs;
  std::vector<std::size_t> items;
  std::vector<bool> padded;
};

/// Crop of `frames` rows starting at `start`; rows past the end repeat the
/// last row.
MatrixF CropFrames(const MatrixF& mel, int start, int frames);

/// Seeded stream of random crops, sampled with replacement. The sequence of
/// batches is a pure function of (store, batch_size, crop_frames, seed); the
/// waveform and mel work inside one batch may run on several workers.
class BatchIterator {
 public:
  BatchIterator(const UtteranceStore& store, int batch_size, int crop_frames, std::uint64_t seed);

  MelBatch NextMelBatch();
  /// Both members share the same crop; member j is the augmented audio,
  /// transformed with a margin around the crop and re-analyzed.
  PairBatch NextPairBatch();

  std::string SaveState() const { return SerializeRng(rng_); }
  void LoadState(const std::string& state) { DeserializeRng(state, &rng_); }

 private:
  const UtteranceStore& store_;
  int batch_size_;
  int crop_;
  Rng rng_;
};

}  // namespace pvc::corpus

#endif  // PVC_CORPUS_BATCH_H_
