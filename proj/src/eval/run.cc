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

#include "pvc/eval/run.h"

#include <algorithm>

#include "pvc/base/error.h"
#include "pvc/base/hash.h"
#include "pvc/base/io.h"
#include "pvc/corpus/generate.h"
#include "pvc/eval/report.h"
#include "pvc/train/run.h"
#include "pvc/vc/loss.h"

namespace pvc::eval {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <typename V>
V Get(const json& j, const std::string& key) {
  try {
    return j.get<V>();
  } catch (const json::exception&) {
    throw ConfigError("eval config field '" + key + "' has the wrong type");
  }
}

void RequireFile(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError("eval config field '" + what + "' is required");
  if (!std::filesystem::exists(path)) throw ConfigError(what + " not found: " + path);
}

ConvertFn Converter(train::VcBundle& b) {
  return [&b](const MatrixF& source, const MatrixF& target) {
    return vc::Convert(source, target, *b.prosody, *b.vc);
  };
}

}  // namespace

EvalConfig EvalConfigFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("eval config must be a JSON object");
  EvalConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "manifest") {
      c.manifest = Get<std::string>(v, key);
    } else if (key == "vc_checkpoint") {
      c.vc_checkpoint = Get<std::string>(v, key);
    } else if (key == "prosody_checkpoint") {
      c.prosody_checkpoint = Get<std::string>(v, key);
    } else if (key == "map_checkpoint") {
      c.map_checkpoint = Get<std::string>(v, key);
    } else if (key == "ablations") {
      c.ablations = Get<std::map<std::string, std::string>>(v, key);
    } else if (key == "pairs_per_direction") {
      c.protocol.pairs_per_direction = Get<int>(v, key);
    } else if (key == "utterances") {
      c.protocol.utterances = Get<int>(v, key);
    } else if (key == "griffin_lim_iterations") {
      c.protocol.griffin_lim_iterations = Get<int>(v, key);
    } else if (key == "seed") {
      c.seed = Get<std::uint64_t>(v, key);
    } else {
      throw ConfigError("unknown eval config field '" + key + "'");
    }
  }
  if (c.protocol.pairs_per_direction < 1 || c.protocol.utterances < 1 || c.protocol.griffin_lim_iterations < 1) {
    throw ConfigError("pairs_per_direction, utterances and griffin_lim_iterations must be positive");
  }
  for (const auto& [label, path] : c.ablations) {
    if (label.empty() || label.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789_-") != std::string::npos) {
      throw ConfigError("ablation label '" + label + "' must use [a-z0-9_-]");
    }
  }
  c.protocol.seed = c.seed;
  return c;
}

ordered_json EvalConfigToJson(const EvalConfig& c) {
  ordered_json j;
  j["manifest"] = c.manifest;
  j["vc_checkpoint"] = c.vc_checkpoint;
  j["prosody_checkpoint"] = c.prosody_checkpoint;
  j["map_checkpoint"] = c.map_checkpoint;
  j["ablations"] = c.ablations;
  j["pairs_per_direction"] = c.protocol.pairs_per_direction;
  j["utterances"] = c.protocol.utterances;
  j["griffin_lim_iterations"] = c.protocol.griffin_lim_iterations;
  j["seed"] = c.seed;
  return j;
}

EvalRun RunEval(const EvalConfig& config, const std::filesystem::path& out_dir) {
  RequireFile(config.manifest, "manifest");
  RequireFile(config.vc_checkpoint, "vc_checkpoint");
  if (!config.prosody_checkpoint.empty()) RequireFile(config.prosody_checkpoint, "prosody_checkpoint");
  if (!config.map_checkpoint.empty()) RequireFile(config.map_checkpoint, "map_checkpoint");
  for (const auto& [label, path] : config.ablations) RequireFile(path, "ablation '" + label + "'");

  const auto manifest = corpus::ReadManifest(config.manifest);
  auto full = train::LoadVc(config.vc_checkpoint);
  const auto store = corpus::UtteranceStore::ForSplit(manifest, corpus::Split::kUnseen, full.config.mel);
  std::filesystem::create_directories(out_dir);

  const std::string config_hash = Sha256Hex(EvalConfigToJson(config).dump());
  const Provenance vc_prov{Sha256File(config.vc_checkpoint), config_hash, config.seed};
  EvalRun run;
  ordered_json& report = run.report;
  report["config"] = EvalConfigToJson(config);
  report["provenance"] = ProvenanceJson(vc_prov);
  const auto write = [&](const std::string& name, const std::string& text) {
    WriteFileBytes(out_dir / name, text);
    run.files.push_back(out_dir / name);
  };

  // Rank densities.
  {
    const std::string path = config.prosody_checkpoint.empty() ? config.vc_checkpoint : config.prosody_checkpoint;
    auto pros = train::LoadProsody(path);
    const Provenance prov{Sha256File(path), config_hash, config.seed};
    const auto r = RankDensityExport(*pros.model, store);
    write("rank_density.csv", RankDensityCsv(r, prov));
    report["rank_density"] = RankSummaryJson(r.summary);
    report["rank_density"]["checkpoint_sha256"] = prov.checkpoint_sha256;
    report["rank_density"]["file"] = "rank_density.csv";
  }
  // Two-dimensional map.
  if (!config.map_checkpoint.empty()) {
    auto pros = train::LoadProsody(config.map_checkpoint);
    const auto speakers_file = manifest.root / "speakers.json";
    if (!std::filesystem::exists(speakers_file)) {
      throw ConfigError("prosody map needs the synthetic corpus speakers file " + speakers_file.string());
    }
    std::vector<corpus::SyntheticSpeaker> unseen;
    const auto ids = manifest.Speakers(corpus::Split::kUnseen);
    for (const auto& s : corpus::ReadSpeakers(speakers_file)) {
      if (std::find(ids.begin(), ids.end(), s.id) != ids.end()) unseen.push_back(s);
    }
    const Provenance prov{Sha256File(config.map_checkpoint), config_hash, config.seed};
    const auto m = ProsodyMap2d(*pros.model, unseen, config.seed, pros.config.mel);
    write("prosody_map.csv", ProsodyMapCsv(m, prov));
    report["prosody_map"] = ProsodyMapJson(m);
    report["prosody_map"]["checkpoint_sha256"] = prov.checkpoint_sha256;
    report["prosody_map"]["file"] = "prosody_map.csv";
  }
  // Conversion KL, full model then ablations.
  {
    const auto k = ConversionKlEval(store, Converter(full), config.protocol);
    write("conversion_kl.csv", ConversionKlCsv(k, vc_prov));
    report["conversion_kl"]["full"] = ConversionKlJson(k);
    report["conversion_kl"]["full"]["checkpoint_sha256"] = vc_prov.checkpoint_sha256;
    report["conversion_kl"]["full"]["file"] = "conversion_kl.csv";
  }
  for (const auto& [label, path] : config.ablations) {
    auto b = train::LoadVc(path);
    const Provenance prov{Sha256File(path), config_hash, config.seed};
    const auto k = ConversionKlEval(store, Converter(b), config.protocol);
    const std::string name = "conversion_kl_" + label + ".csv";
    write(name, ConversionKlCsv(k, prov));
    report["conversion_kl"][label] = ConversionKlJson(k);
    report["conversion_kl"][label]["checkpoint_sha256"] = prov.checkpoint_sha256;
    report["conversion_kl"][label]["file"] = name;
  }
  // Speaker similarity proxy.
  {
    const EmbedFn embed = [&full](const MatrixF& mel) { return vc::SpeakerVector(mel, *full.vc); };
    const auto s = SpeakerSimilarityEval(store, Converter(full), embed, config.protocol);
    write("speaker_similarity.csv", SimilarityCsv(s, vc_prov));
    report["speaker_similarity"] = SimilarityJson(s);
    report["speaker_similarity"]["file"] = "speaker_similarity.csv";
  }
  write("report.json", report.dump(2) + "\n");
  return run;
}

}  // namespace pvc::eval
