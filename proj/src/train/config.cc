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

#include "pvc/train/config.h"

#include <functional>
#include <map>

#include "pvc/base/error.h"
#include "pvc/base/io.h"

namespace pvc::train {

using nlohmann::json;
using nlohmann::ordered_json;

const char* StageName(Stage stage) { return stage == Stage::kProsody ? "prosody" : "vc"; }

const char* ProfileName(Profile profile) { return profile == Profile::kDesk ? "desk" : "paper"; }

Profile ParseProfile(const std::string& s) {
  if (s == "desk") return Profile::kDesk;
  if (s == "paper") return Profile::kPaper;
  throw ConfigError("profile must be \"paper\" or \"desk\", got \"" + s + "\"");
}

namespace {

Stage ParseStage(const std::string& s) {
  if (s == "prosody") return Stage::kProsody;
  if (s == "vc") return Stage::kVc;
  throw ConfigError("stage must be \"prosody\" or \"vc\", got \"" + s + "\"");
}

template <typename V>
V Field(const json& j, const std::string& key) {
  try {
    return j.get<V>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + key + "' has the wrong type");
  }
}

std::uint64_t SeedField(const json& j, const std::string& key) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0)) {
    throw ConfigError("config field '" + key + "' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

void ApplyMel(const json& j, signal::MelConfig& mel) {
  if (!j.is_object()) throw ConfigError("config field 'mel' must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string name = "mel." + key;
    if (key == "sample_rate") mel.sample_rate = Field<int>(value, name);
    else if (key == "n_mels") mel.n_mels = Field<int>(value, name);
    else if (key == "window") mel.window = Field<int>(value, name);
    else if (key == "hop") mel.hop = Field<int>(value, name);
    else if (key == "fmin") mel.fmin = Field<double>(value, name);
    else if (key == "fmax") mel.fmax = Field<double>(value, name);
    else if (key == "log_floor") mel.log_floor = Field<double>(value, name);
    else throw ConfigError("unknown config field '" + name + "'");
  }
}

}  // namespace

TrainConfig Preset(Profile profile, Stage stage) {
  TrainConfig c;
  c.profile = profile;
  c.stage = stage;
  if (profile == Profile::kPaper) {
    c.d = 512;
    c.d_psi = 512;
    c.K = 20;
    c.prosody_channels = 512;
    c.decoder_channels = 512;
    if (stage == Stage::kProsody) {
      c.batch_size = 32;
      c.lr = 1e-4;
      c.iterations = 150000;
    } else {
      c.batch_size = 64;
      c.lr = 3e-5;
      c.iterations = 300000;
    }
    c.checkpoint_every = 10000;
  } else {
    c.batch_size = 16;
    if (stage == Stage::kProsody) {
      c.lr = 1e-3;
      c.iterations = 3000;
    } else {
      c.lr = 1e-3;
      c.iterations = 10000;
    }
  }
  return c;
}

TrainConfig ConfigFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("stage")) throw ConfigError("config is missing required field 'stage'");
  const Stage stage = ParseStage(Field<std::string>(j.at("stage"), "stage"));
  const Profile profile =
      j.contains("profile") ? ParseProfile(Field<std::string>(j.at("profile"), "profile")) : Profile::kDesk;
  TrainConfig c = Preset(profile, stage);

  for (const auto& [key, v] : j.items()) {
    if (key == "stage" || key == "profile") continue;
    if (key == "lr") c.lr = Field<double>(v, key);
    else if (key == "batch_size") c.batch_size = Field<int>(v, key);
    else if (key == "iterations") c.iterations = Field<int>(v, key);
    else if (key == "seed") c.seed = SeedField(v, key);
    else if (key == "crop_frames") c.crop_frames = Field<int>(v, key);
    else if (key == "d") c.d = Field<int>(v, key);
    else if (key == "d_psi") c.d_psi = Field<int>(v, key);
    else if (key == "V") c.V = Field<int>(v, key);
    else if (key == "K") c.K = Field<int>(v, key);
    else if (key == "n_neg") c.n_neg = Field<int>(v, key);
    else if (key == "beta") c.beta = Field<double>(v, key);
    else if (key == "prosody_channels") c.prosody_channels = Field<int>(v, key);
    else if (key == "decoder_channels") c.decoder_channels = Field<int>(v, key);
    else if (key == "condition_pitch") c.condition_pitch = Field<bool>(v, key);
    else if (key == "condition_volume") c.condition_volume = Field<bool>(v, key);
    else if (key == "clip_norm") c.clip_norm = Field<double>(v, key);
    else if (key == "mel") ApplyMel(v, c.mel);
    else if (key == "manifest") c.manifest = Field<std::string>(v, key);
    else if (key == "prosody_checkpoint") c.prosody_checkpoint = Field<std::string>(v, key);
    else if (key == "checkpoint_every") c.checkpoint_every = Field<int>(v, key);
    else if (key == "metrics_every") c.metrics_every = Field<int>(v, key);
    else throw ConfigError("unknown config field '" + key + "'");
  }
  ValidateConfig(c);
  return c;
}

json ReadConfigJson(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFileBytes(path);
  } catch (const IoError& e) {
    throw ConfigError("cannot read config " + path.string() + ": " + e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return j;
}

TrainConfig LoadConfig(const std::filesystem::path& path) { return ConfigFromJson(ReadConfigJson(path)); }

ordered_json ConfigToJson(const TrainConfig& c) {
  ordered_json j;
  j["profile"] = ProfileName(c.profile);
  j["stage"] = StageName(c.stage);
  j["lr"] = c.lr;
  j["batch_size"] = c.batch_size;
  j["iterations"] = c.iterations;
  j["seed"] = c.seed;
  j["crop_frames"] = c.crop_frames;
  j["d"] = c.d;
  j["d_psi"] = c.d_psi;
  j["V"] = c.V;
  j["K"] = c.K;
  j["n_neg"] = c.n_neg;
  j["beta"] = c.beta;
  j["prosody_channels"] = c.prosody_channels;
  j["decoder_channels"] = c.decoder_channels;
  j["condition_pitch"] = c.condition_pitch;
  j["condition_volume"] = c.condition_volume;
  j["clip_norm"] = c.clip_norm;
  j["mel"] = {{"sample_rate", c.mel.sample_rate}, {"n_mels", c.mel.n_mels}, {"window", c.mel.window},
              {"hop", c.mel.hop}, {"fmin", c.mel.fmin}, {"fmax", c.mel.fmax},
              {"log_floor", c.mel.log_floor}};
  j["manifest"] = c.manifest;
  j["prosody_checkpoint"] = c.prosody_checkpoint;
  j["checkpoint_every"] = c.checkpoint_every;
  j["metrics_every"] = c.metrics_every;
  return j;
}

void ValidateConfig(const TrainConfig& c) {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw ConfigError(std::string("config field '") + name + "' must be positive");
  };
  const auto non_negative = [](double v, const char* name) {
    if (!(v >= 0)) throw ConfigError(std::string("config field '") + name + "' must be non-negative");
  };
  positive(c.lr, "lr");
  positive(c.batch_size, "batch_size");
  non_negative(c.iterations, "iterations");
  positive(c.crop_frames, "crop_frames");
  positive(c.d, "d");
  positive(c.d_psi, "d_psi");
  positive(c.K, "K");
  positive(c.n_neg, "n_neg");
  non_negative(c.beta, "beta");
  positive(c.prosody_channels, "prosody_channels");
  positive(c.decoder_channels, "decoder_channels");
  non_negative(c.clip_norm, "clip_norm");
  non_negative(c.checkpoint_every, "checkpoint_every");
  positive(c.metrics_every, "metrics_every");
  positive(c.mel.n_mels, "mel.n_mels");
  positive(c.mel.window, "mel.window");
  positive(c.mel.hop, "mel.hop");
  positive(c.mel.log_floor, "mel.log_floor");
  if (c.V < 2) throw ConfigError("config field 'V' must be at least 2");
  if (c.mel.sample_rate != signal::kSampleRate) {
    throw ConfigError("config field 'mel.sample_rate' must be " + std::to_string(signal::kSampleRate));
  }
  if (c.mel.fmax <= c.mel.fmin || c.mel.fmax > c.mel.sample_rate / 2.0) {
    throw ConfigError("config fields 'mel.fmin' / 'mel.fmax' are out of range");
  }
  if (c.crop_frames < prosody::kMinFrames) {
    throw ConfigError("config field 'crop_frames' must be at least " + std::to_string(prosody::kMinFrames));
  }
}

prosody::ProsodyConfig ProsodyModelConfig(const TrainConfig& c) {
  prosody::ProsodyConfig p;
  p.n_mels = c.mel.n_mels;
  p.channels = c.prosody_channels;
  p.dim = c.d_psi;
  return p;
}

vc::VcConfig VcModelConfig(const TrainConfig& c) {
  vc::VcConfig v;
  v.n_mels = c.mel.n_mels;
  v.dim = c.d;
  v.prosody_dim = c.d_psi;
  v.codebook_size = c.V;
  v.cpc_steps = c.K;
  v.negatives = c.n_neg;
  v.beta = c.beta;
  v.decoder_channels = c.decoder_channels;
  v.condition_pitch = c.condition_pitch;
  v.condition_volume = c.condition_volume;
  return v;
}

}  // namespace pvc::train
