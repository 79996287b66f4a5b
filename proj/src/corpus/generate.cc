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

#include "pvc/corpus/generate.h"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "json.hpp"
#include "pvc/base/error.h"
#include "pvc/base/io.h"
#include "pvc/base/parallel.h"
#include "pvc/base/rng.h"
#include "pvc/signal/pitch.h"
#include "pvc/signal/wav.h"

namespace pvc::corpus {

namespace fs = std::filesystem;

std::vector<int> DrawContent(std::uint64_t seed, int speaker, int index,
                             const CorpusOptions& options) {
  Rng rng(DeriveSeed(seed, 0xc0de + static_cast<std::uint64_t>(speaker),
                     static_cast<std::uint64_t>(index)));
  std::uniform_int_distribution<int> length(options.min_tokens, options.max_tokens);
  std::uniform_int_distribution<int> token(0, kVocabularySize - 1);
  std::vector<int> content(static_cast<std::size_t>(length(rng)));
  for (int& t : content) t = token(rng);
  return content;
}

Manifest GenCorpus(int n_speakers, int utts_per_speaker, std::uint64_t seed,
                   const fs::path& out_dir, const CorpusOptions& options) {
  if (n_speakers < 1 || utts_per_speaker < 1) {
    throw InvalidArgument("gen_corpus needs at least one speaker and one utterance");
  }
  if (options.min_tokens < 4 || options.max_tokens < options.min_tokens) {
    throw InvalidArgument("utterances need at least 4 tokens");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create corpus directory " + out_dir.string());
  }

  std::vector<SyntheticSpeaker> speakers;
  for (int s = 0; s < n_speakers; ++s) speakers.push_back(DrawSpeaker(s, seed, options.f0_spread));
  const int first_unseen = n_speakers - UnseenCount(n_speakers);

  Manifest manifest;
  manifest.root = out_dir;
  manifest.entries.resize(static_cast<std::size_t>(n_speakers) * utts_per_speaker);
  ParallelFor(manifest.entries.size(), [&](std::size_t k) {
    const int s = static_cast<int>(k) / utts_per_speaker;
    const int u = static_cast<int>(k) % utts_per_speaker;
    const auto& spk = speakers[s];
    const auto content = DrawContent(seed, s, u, options);
    const Utterance utt = RenderUtterance(
        spk, content, DeriveSeed(seed, 0xa0d10 + static_cast<std::uint64_t>(s), u),
        options.render);
    char name[64];
    std::snprintf(name, sizeof(name), "wav/%s/%s_u%03d.wav", spk.id.c_str(), spk.id.c_str(), u);
    signal::WriteWav(out_dir / name, utt.waveform);
    ManifestEntry& e = manifest.entries[k];
    e.path = name;
    e.speaker = spk.id;
    e.split = s < first_unseen ? Split::kSeen : Split::kUnseen;
    e.f0_mean_hz = utt.f0_mean_hz;
    e.rms = utt.rms;
    e.group = spk.group;
    e.content = content;
  });

  nlohmann::ordered_json sj = nlohmann::ordered_json::array();
  for (int s = 0; s < n_speakers; ++s) {
    const auto& spk = speakers[s];
    nlohmann::ordered_json j;
    j["id"] = spk.id;
    j["base_f0"] = spk.base_f0;
    j["f0_spread"] = spk.f0_spread;
    j["base_gain_db"] = spk.base_gain_db;
    j["group"] = GroupName(spk.group);
    j["formants_hz"] = spk.formants_hz;
    j["split"] = SplitName(s < first_unseen ? Split::kSeen : Split::kUnseen);
    sj.push_back(j);
  }
  WriteFileBytes(out_dir / "speakers.json", sj.dump(2) + "\n");
  WriteManifest(out_dir / "manifest.jsonl", manifest);
  return manifest;
}

std::vector<SyntheticSpeaker> ReadSpeakers(const fs::path& path) {
  std::vector<SyntheticSpeaker> out;
  try {
    const auto j = nlohmann::json::parse(ReadFileBytes(path));
    if (!j.is_array()) throw ConfigError("speakers file " + path.string() + " is not an array");
    for (const auto& r : j) {
      SyntheticSpeaker spk;
      spk.id = r.at("id").get<std::string>();
      spk.base_f0 = r.at("base_f0").get<double>();
      spk.f0_spread = r.at("f0_spread").get<double>();
      spk.base_gain_db = r.at("base_gain_db").get<double>();
      spk.group = ParseGroup(r.at("group").get<std::string>());
      spk.formants_hz = r.at("formants_hz").get<std::array<double, 3>>();
      out.push_back(spk);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("bad speakers file " + path.string() + ": " + ex.what());
  } catch (const InvalidArgument& ex) {
    throw ConfigError("bad speakers file " + path.string() + ": " + ex.what());
  }
  return out;
}

std::map<std::string, std::string> ReadSpeakerMap(const fs::path& path) {
  try {
    const auto j = nlohmann::json::parse(ReadFileBytes(path));
    return j.get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("bad speaker map " + path.string() + ": " + ex.what());
  }
}

Manifest IngestWavDir(const fs::path& dir, const std::map<std::string, std::string>& speaker_map) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& item : fs::recursive_directory_iterator(dir)) {
    if (!item.is_regular_file()) continue;
    std::string ext = item.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".wav") files.push_back(item.path());
  }
  std::sort(files.begin(), files.end());

  struct Probe {
    bool ok = false;
    std::string speaker;
    double f0 = 0.0;
    double rms = 0.0;
  };
  std::vector<Probe> probes(files.size());
  ParallelFor(files.size(), [&](std::size_t i) {
    const fs::path rel = fs::relative(files[i], dir);
    Probe& p = probes[i];
    try {
      const auto w = signal::ReadWav(files[i]);
      const auto track = signal::EstimateF0(w);
      p.f0 = signal::MedianVoicedF0(track);
      p.rms = signal::Rms(w.samples);
      p.ok = true;
    } catch (const Error& ex) {
      Warn("skipping " + files[i].string() + ": " + ex.what());
      return;
    }
    if (auto it = speaker_map.find(rel.generic_string()); it != speaker_map.end()) {
      p.speaker = it->second;
    } else if (auto it2 = speaker_map.find(rel.filename().string()); it2 != speaker_map.end()) {
      p.speaker = it2->second;
    } else {
      p.speaker = rel.has_parent_path() ? rel.parent_path().filename().string()
                                        : dir.filename().string();
    }
  });

  Manifest manifest;
  manifest.root = dir;
  std::map<std::string, std::vector<double>> speaker_f0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!probes[i].ok) continue;
    ManifestEntry e;
    e.path = fs::relative(files[i], dir).generic_string();
    e.speaker = probes[i].speaker;
    e.f0_mean_hz = probes[i].f0;
    e.rms = probes[i].rms;
    if (probes[i].f0 > 0.0) speaker_f0[e.speaker].push_back(probes[i].f0);
    manifest.entries.push_back(std::move(e));
  }
  if (manifest.entries.empty()) throw InvalidArgument("no usable audio in " + dir.string());

  const auto ids = manifest.Speakers();
  const int first_unseen = static_cast<int>(ids.size()) - UnseenCount(static_cast<int>(ids.size()));
  std::map<std::string, Split> split;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
    split[ids[i]] = i < first_unseen ? Split::kSeen : Split::kUnseen;
  }
  for (auto& e : manifest.entries) {
    e.split = split[e.speaker];
    const auto it = speaker_f0.find(e.speaker);
    const double f0 = it == speaker_f0.end() ? 0.0 : signal::Median(it->second);
    e.group = f0 >= kGroupBoundaryHz ? PitchGroup::kHigh : PitchGroup::kLow;
  }
  return manifest;
}

}  // namespace pvc::corpus
