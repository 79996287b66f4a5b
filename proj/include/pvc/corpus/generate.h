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

#ifndef PVC_CORPUS_GENERATE_H_
#define PVC_CORPUS_GENERATE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "pvc/corpus/manifest.h"
#include "pvc/corpus/speaker.h"

namespace pvc::corpus {

struct CorpusOptions {
  int min_tokens = 6;
  int max_tokens = 10;
  double f0_spread = kDefaultF0Spread;
  RenderOptions render;
};

/// Renders n_speakers x utts_per_speaker utterances into
/// out_dir/wav/<speaker>/<speaker>_uNNN.wav and writes out_dir/manifest.jsonl
/// and out_dir/speakers.json. Speakers alternate low/high pitch; the last
/// ceil(20%) are unseen. Output is a pure function of the arguments.
Manifest GenCorpus(int n_speakers, int utts_per_speaker, std::uint64_t seed,
                   const std::filesystem::path& out_dir, const CorpusOptions& options = {});

/// Token sequence of utterance `index` for a speaker, as used by GenCorpus.
std::vector<int> DrawContent(std::uint64_t seed, int speaker, int index,
                             const CorpusOptions& options = {});

/// Recursively collects *.wav files under `dir`. The speaker id is the parent
/// directory name unless `speaker_map` (relative path or file name -> id) has
/// an entry. Unreadable files are skipped with a warning; InvalidArgument
/// "no usable audio" when nothing remains. Groups come from the median voiced
/// F0 of each speaker, splits from the ceil(20%) rule over sorted speaker ids.
Manifest IngestWavDir(const std::filesystem::path& dir,
                      const std::map<std::string, std::string>& speaker_map = {});

/// Reads the speakers.json written by GenCorpus. ConfigError when malformed.
std::vector<SyntheticSpeaker> ReadSpeakers(const std::filesystem::path& path);

/// Reads a JSON object {"path-or-file": "speaker"}.
std::map<std::string, std::string> ReadSpeakerMap(const std::filesystem::path& path);

}  // namespace pvc::corpus

#endif  // PVC_CORPUS_GENERATE_H_
