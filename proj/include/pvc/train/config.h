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

#ifndef PVC_TRAIN_CONFIG_H_
#define PVC_TRAIN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "pvc/prosody/model.h"
#include "pvc/signal/mel.h"
#include "pvc/vc/model.h"

namespace pvc::train {

enum class Stage { kProsody, kVc };
enum class Profile { kDesk, kPaper };

const char* StageName(Stage stage);
const char* ProfileName(Profile profile);

struct TrainConfig {
  Profile profile = Profile::kDesk;
  Stage stage = Stage::kProsody;
  double lr = 1e-3;
  int batch_size = 16;
  int iterations = 3000;
  std::uint64_t seed = 7;
  int crop_frames = 128;

  int d = 64;
  int d_psi = 64;
  int V = 64;
  int K = 4;
  int n_neg = 10;
  double beta = 0.25;
  int prosody_channels = 128;
  int decoder_channels = 64;
  bool condition_pitch = true;
  bool condition_volume = true;

  double clip_norm = 0.0;
  signal::MelConfig mel;

  std::string manifest;
  std::string prosody_checkpoint;  // stage vc only
  int checkpoint_every = 0;        // 0: final checkpoint only
  int metrics_every = 50;
};

/// Defaults for a (profile, stage) combination.
TrainConfig Preset(Profile profile, Stage stage);

/// Starts from the preset named by "profile" (default desk) and "stage"
/// (required), then applies every other field present. Unknown fields,
/// wrong types and non-positive sizes raise ConfigError.
TrainConfig ConfigFromJson(const nlohmann::json& j);
/// Parsed JSON of a config file; ConfigError when unreadable or malformed.
nlohmann::json ReadConfigJson(const std::filesystem::path& path);
TrainConfig LoadConfig(const std::filesystem::path& path);
Profile ParseProfile(const std::string& name);
nlohmann::ordered_json ConfigToJson(const TrainConfig& config);

/// Throws ConfigError on an inconsistent configuration.
void ValidateConfig(const TrainConfig& config);

prosody::ProsodyConfig ProsodyModelConfig(const TrainConfig& config);
vc::VcConfig VcModelConfig(const TrainConfig& config);

}  // namespace pvc::train

#endif  // PVC_TRAIN_CONFIG_H_
