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

#ifndef PVC_CORPUS_MANIFEST_H_
#define PVC_CORPUS_MANIFEST_H_

#include <filesystem>
#include <string>
#include <vector>

#include "pvc/corpus/speaker.h"

namespace pvc::corpus {

enum class Split { kSeen, kUnseen };

const char* SplitName(Split split);
Split ParseSplit(const std::string& name);

struct ManifestEntry {
  std::string path;  // relative to the manifest directory unless absolute
  std::string speaker;
  Split split = Split::kSeen;
  double f0_mean_hz = 0.0;
  double rms = 0.0;
  PitchGroup group = PitchGroup::kLow;
  std::vector<int> content;  // empty for ingested audio
};

struct Manifest {
  std::filesystem::path root;  // directory the entry paths are relative to
  std::vector<ManifestEntry> entries;

  std::filesystem::path Resolve(const ManifestEntry& e) const;
  /// Sorted distinct speaker ids, optionally restricted to one split.
  std::vector<std::string> Speakers() const;
  std::vector<std::string> Speakers(Split split) const;
  /// Indices of the entries in `split`.
  std::vector<std::size_t> Indices(Split split) const;
  PitchGroup GroupOf(const std::string& speaker) const;
};

/// Number of speakers held out as unseen: ceil(20%).
int UnseenCount(int n_speakers);

/// JSON-lines, one record per utterance. Fields are written in a fixed
/// order so identical manifests are byte-identical.
std::string SerializeManifest(const Manifest& manifest);
void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);
/// Throws IoError when unreadable, ConfigError on malformed records.
Manifest ReadManifest(const std::filesystem::path& path);

}  // namespace pvc::corpus

#endif  // PVC_CORPUS_MANIFEST_H_
