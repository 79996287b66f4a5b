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

#ifndef PVC_EVAL_RUN_H_
#define PVC_EVAL_RUN_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvc/eval/analysis.h"

namespace pvc::eval {

/// Evaluation job. Paths are resolved against the working directory.
struct EvalConfig {
  std::string manifest;
  std::string vc_checkpoint;       // required; embeds its prosody encoder
  std::string prosody_checkpoint;  // rank densities; default: the one inside vc_checkpoint
  std::string map_checkpoint;      // optional d_psi = 2 prosody encoder for the 2-D map
  std::map<std::string, std::string> ablations;  // label -> vc checkpoint
  ConversionProtocol protocol;
  std::uint64_t seed = 0;
};

/// Fields: manifest, vc_checkpoint, prosody_checkpoint, map_checkpoint,
/// ablations (object), pairs_per_direction, utterances,
/// griffin_lim_iterations, seed. Unknown fields and wrong types raise
/// ConfigError.
EvalConfig EvalConfigFromJson(const nlohmann::json& j);
nlohmann::ordered_json EvalConfigToJson(const EvalConfig& config);

struct EvalRun {
  nlohmann::ordered_json report;
  std::vector<std::filesystem::path> files;
};

/// Writes into out_dir:
///   rank_density.csv, prosody_map.csv (with map_checkpoint),
///   conversion_kl.csv, conversion_kl_<ablation>.csv,
///   speaker_similarity.csv, report.json
/// Missing inputs raise ConfigError before anything is written.
EvalRun RunEval(const EvalConfig& config, const std::filesystem::path& out_dir);

}  // namespace pvc::eval

#endif  // PVC_EVAL_RUN_H_
