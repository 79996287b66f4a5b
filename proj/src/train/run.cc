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

#include "pvc/train/run.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pvc/base/error.h"
#include "pvc/base/rng.h"
#include "pvc/corpus/batch.h"
#include "pvc/corpus/manifest.h"
#include "pvc/prosody/loss.h"
#include "pvc/train/adam.h"
#include "pvc/vc/loss.h"

namespace pvc::train {

namespace {

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kBatchStream = 0xba7c;
constexpr std::uint64_t kNegativeStream = 0x4e67;

std::string FormatOptional(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", *v);
  return buf;
}

class MetricsLog {
 public:
  explicit MetricsLog(const std::filesystem::path& path) : out_(path, std::ios::trunc) {
    if (!out_) throw IoError("cannot write " + path.string());
    out_ << kMetricsHeader << '\n';
    out_.flush();
  }
  void Append(const MetricsRow& row) {
    out_ << FormatMetricsRow(row) << '\n';
    out_.flush();
    if (!out_) throw IoError("metrics write failed");
  }

 private:
  std::ofstream out_;
};

void RequireFinite(const MetricsRow& row) {
  if (!std::isfinite(row.total)) {
    throw NumericError("non-finite loss at iteration " + std::to_string(row.iter) + ": " + FormatMetricsRow(row));
  }
}

bool ShouldLog(int iter, int last, int every) { return iter == 1 || iter % every == 0 || iter == last; }

AdamOptions OptimizerOptions(const TrainConfig& c) {
  AdamOptions o;
  o.lr = c.lr;
  o.clip_norm = c.clip_norm;
  return o;
}

template <typename T>
void AddAdamState(Checkpoint& ck, const grad::ParameterSet<T>& params, const Adam<T>& adam) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    ck.Add(MatrixTensor("adam.m." + params[i].name, adam.m()[i]));
    ck.Add(MatrixTensor("adam.v." + params[i].name, adam.v()[i]));
  }
}

nlohmann::ordered_json State(int iteration, std::int64_t adam_step, const std::string& rng,
                             const std::string& batches) {
  nlohmann::ordered_json s;
  s["iteration"] = iteration;
  s["adam_step"] = adam_step;
  s["rng"] = rng;
  s["batch_rng"] = batches;
  return s;
}

TrainConfig ConfigOf(const nlohmann::ordered_json& j, const char* key) {
  if (!j.contains(key)) throw IntegrityError(std::string("checkpoint header lacks '") + key + "'");
  try {
    return ConfigFromJson(nlohmann::json::parse(j.at(key).dump()));
  } catch (const ConfigError& e) {
    throw IntegrityError(std::string("checkpoint config is invalid: ") + e.what());
  }
}

std::string KindOf(const Checkpoint& ck) {
  if (!ck.header.contains("kind") || !ck.header.at("kind").is_string()) {
    throw IntegrityError("checkpoint header lacks 'kind'");
  }
  return ck.header.at("kind").get<std::string>();
}

corpus::Manifest RequireManifest(const TrainConfig& config) {
  if (config.manifest.empty()) throw ConfigError("config field 'manifest' is required");
  if (!std::filesystem::exists(config.manifest)) {
    throw ConfigError("manifest not found: " + config.manifest);
  }
  return corpus::ReadManifest(config.manifest);
}

corpus::UtteranceStore SeenStore(const corpus::Manifest& manifest, const TrainConfig& config) {
  if (manifest.Indices(corpus::Split::kSeen).empty()) {
    throw ConfigError("manifest has no seen-split utterances to train on");
  }
  return corpus::UtteranceStore::ForSplit(manifest, corpus::Split::kSeen, config.mel);
}

std::filesystem::path CheckpointPath(const std::filesystem::path& dir, Stage stage, int iter) {
  const std::string base = StageName(stage);
  return dir / (iter < 0 ? base + ".ckpt" : base + "_" + std::to_string(iter) + ".ckpt");
}

TrainResult TrainProsody(const TrainConfig& config, const corpus::Manifest& manifest,
                         const std::filesystem::path& out_dir, const ProgressFn& progress) {
  auto store = SeenStore(manifest, config);
  corpus::BatchIterator batches(store, config.batch_size, config.crop_frames,
                                DeriveSeed(config.seed, kBatchStream));
  prosody::ProsodyModel<float> model(ProsodyModelConfig(config), DeriveSeed(config.seed, kInitStream));
  Adam<float> adam(model.params(), OptimizerOptions(config));

  TrainResult result;
  result.metrics = out_dir / "metrics.csv";
  MetricsLog log(result.metrics);
  const auto checkpoint = [&](int iter) {
    Checkpoint ck;
    ck.header["kind"] = "prosody";
    ck.header["config"] = ConfigToJson(config);
    ck.header["state"] = State(iter, adam.step(), "", batches.SaveState());
    AddParameters(ck, model.params());
    AddAdamState(ck, model.params(), adam);
    return ck;
  };

  for (int iter = 1; iter <= config.iterations; ++iter) {
    auto b = batches.NextPairBatch();
    grad::Tape<float> tape;
    auto loss = prosody::ComputeProsodyLoss(tape, model, prosody::StackRows<float>(b.mel_i),
                                            prosody::StackRows<float>(b.mel_j), config.batch_size,
                                            b.tau_p, b.tau_v);
    MetricsRow row;
    row.iter = iter;
    row.total = loss.total.value()(0, 0);
    row.rank_p = loss.loss_p.value()(0, 0);
    row.rank_v = loss.loss_v.value()(0, 0);
    RequireFinite(row);
    tape.Backward(loss.total);
    adam.Step();
    if (ShouldLog(iter, config.iterations, config.metrics_every)) {
      log.Append(row);
      result.rows.push_back(row);
      if (progress) progress(row);
    }
    if (config.checkpoint_every > 0 && iter % config.checkpoint_every == 0 && iter < config.iterations) {
      SaveCheckpoint(CheckpointPath(out_dir, config.stage, iter), checkpoint(iter));
    }
  }
  result.checkpoint = CheckpointPath(out_dir, config.stage, -1);
  SaveCheckpoint(result.checkpoint, checkpoint(config.iterations));
  return result;
}

TrainResult TrainVc(const TrainConfig& config, const corpus::Manifest& manifest, ProsodyBundle frozen,
                    const std::filesystem::path& out_dir, const ProgressFn& progress) {
  auto store = SeenStore(manifest, config);
  corpus::BatchIterator batches(store, config.batch_size, config.crop_frames,
                                DeriveSeed(config.seed, kBatchStream));
  vc::VcModel<float> model(VcModelConfig(config), DeriveSeed(config.seed, kInitStream));
  Adam<float> adam(model.params(), OptimizerOptions(config));
  Rng negatives(DeriveSeed(config.seed, kNegativeStream));

  TrainResult result;
  result.metrics = out_dir / "metrics.csv";
  MetricsLog log(result.metrics);
  const auto checkpoint = [&](int iter) {
    Checkpoint ck;
    ck.header["kind"] = "vc";
    ck.header["config"] = ConfigToJson(config);
    ck.header["prosody_config"] = ConfigToJson(frozen.config);
    ck.header["state"] = State(iter, adam.step(), SerializeRng(negatives), batches.SaveState());
    AddParameters(ck, model.params());
    AddParameters(ck, frozen.model->params());
    AddAdamState(ck, model.params(), adam);
    return ck;
  };

  for (int iter = 1; iter <= config.iterations; ++iter) {
    auto b = batches.NextMelBatch();
    grad::Tape<float> tape;
    auto loss = vc::VcForwardLoss(tape, *frozen.model, model, prosody::StackRows<float>(b.mels),
                                  config.batch_size, negatives);
    MetricsRow row;
    row.iter = iter;
    row.total = loss.total.value()(0, 0);
    row.rec = loss.rec.value()(0, 0);
    row.vq = loss.vq.value()(0, 0);
    row.cpc = loss.cpc.value()(0, 0);
    RequireFinite(row);
    tape.Backward(loss.total);
    adam.Step();
    if (ShouldLog(iter, config.iterations, config.metrics_every)) {
      log.Append(row);
      result.rows.push_back(row);
      if (progress) progress(row);
    }
    if (config.checkpoint_every > 0 && iter % config.checkpoint_every == 0 && iter < config.iterations) {
      SaveCheckpoint(CheckpointPath(out_dir, config.stage, iter), checkpoint(iter));
    }
  }
  result.checkpoint = CheckpointPath(out_dir, config.stage, -1);
  SaveCheckpoint(result.checkpoint, checkpoint(config.iterations));
  return result;
}

}  // namespace

std::string FormatMetricsRow(const MetricsRow& row) {
  return std::to_string(row.iter) + "," + FormatOptional(row.total) + "," + FormatOptional(row.rec) + "," +
         FormatOptional(row.vq) + "," + FormatOptional(row.cpc) + "," + FormatOptional(row.rank_p) + "," +
         FormatOptional(row.rank_v);
}

TrainResult RunTraining(const TrainConfig& config, const std::filesystem::path& out_dir,
                        const ProgressFn& progress) {
  ValidateConfig(config);
  const corpus::Manifest manifest = RequireManifest(config);
  std::optional<ProsodyBundle> frozen;
  if (config.stage == Stage::kVc) {
    if (config.prosody_checkpoint.empty()) {
      throw ConfigError("stage vc requires config field 'prosody_checkpoint'");
    }
    if (!std::filesystem::exists(config.prosody_checkpoint)) {
      throw ConfigError("prosody checkpoint not found: " + config.prosody_checkpoint);
    }
    frozen = LoadProsody(config.prosody_checkpoint);
    if (frozen->config.d_psi != config.d_psi) {
      throw ConfigError("d_psi " + std::to_string(config.d_psi) + " does not match the prosody checkpoint (" +
                        std::to_string(frozen->config.d_psi) + ")");
    }
    const auto& a = frozen->config.mel;
    const auto& b = config.mel;
    if (a.n_mels != b.n_mels || a.window != b.window || a.hop != b.hop || a.fmin != b.fmin ||
        a.fmax != b.fmax || a.log_floor != b.log_floor) {
      throw ConfigError("mel parameters differ from those of the prosody checkpoint");
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory " + out_dir.string());
  }
  if (config.stage == Stage::kProsody) return TrainProsody(config, manifest, out_dir, progress);
  return TrainVc(config, manifest, std::move(*frozen), out_dir, progress);
}

ProsodyBundle LoadProsody(const std::filesystem::path& path) {
  const Checkpoint ck = LoadCheckpoint(path);
  const std::string kind = KindOf(ck);
  ProsodyBundle out;
  if (kind == "prosody") {
    out.config = ConfigOf(ck.header, "config");
  } else if (kind == "vc") {
    out.config = ConfigOf(ck.header, "prosody_config");
  } else {
    throw IntegrityError("unknown checkpoint kind '" + kind + "'");
  }
  out.model = std::make_unique<prosody::ProsodyModel<float>>(ProsodyModelConfig(out.config), 0);
  LoadParameters(ck, out.model->params());
  return out;
}

VcBundle LoadVc(const std::filesystem::path& path) {
  const Checkpoint ck = LoadCheckpoint(path);
  if (KindOf(ck) != "vc") throw ConfigError(path.string() + " is not a vc checkpoint");
  VcBundle out;
  out.config = ConfigOf(ck.header, "config");
  out.prosody_config = ConfigOf(ck.header, "prosody_config");
  out.prosody = std::make_unique<prosody::ProsodyModel<float>>(ProsodyModelConfig(out.prosody_config), 0);
  LoadParameters(ck, out.prosody->params());
  out.vc = std::make_unique<vc::VcModel<float>>(VcModelConfig(out.config), 0);
  LoadParameters(ck, out.vc->params());
  return out;
}

}  // namespace pvc::train
