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

#ifndef PVC_TRAIN_RUN_H_
#define PVC_TRAIN_RUN_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pvc/prosody/model.h"
#include "pvc/train/checkpoint.h"
#include "pvc/train/config.h"
#include "pvc/vc/model.h"

namespace pvc::train {

inline constexpr const char* kMetricsHeader = "iter,loss_total,loss_rec,loss_vq,loss_cpc,loss_rank_p,loss_rank_v";

/// One metrics row; parts that do not apply to the stage stay empty.
struct MetricsRow {
  int iter = 0;
  double total = 0.0;
  std::optional<double> rec, vq, cpc, rank_p, rank_v;
};

std::string FormatMetricsRow(const MetricsRow& row);

struct TrainResult {
  std::filesystem::path checkpoint;
  std::filesystem::path metrics;
  std::vector<MetricsRow> rows;
};

using ProgressFn = std::function<void(const MetricsRow&)>;

/// Trains the configured stage and writes into out_dir:
///   metrics.csv            header plus a row at iteration 1, every
///                          metrics_every iterations and the last one
///   <stage>.ckpt           final checkpoint
///   <stage>_<iter>.ckpt    every checkpoint_every iterations (if > 0)
/// A missing manifest or prosody checkpoint raises ConfigError before any
/// training work. The stage-vc checkpoint embeds the frozen prosody encoder.
TrainResult RunTraining(const TrainConfig& config, const std::filesystem::path& out_dir,
                        const ProgressFn& progress = {});

struct ProsodyBundle {
  TrainConfig config;
  std::unique_ptr<prosody::ProsodyModel<float>> model;
};

struct VcBundle {
  TrainConfig config;
  TrainConfig prosody_config;
  std::unique_ptr<prosody::ProsodyModel<float>> prosody;
  std::unique_ptr<vc::VcModel<float>> vc;
};

/// Reads a prosody checkpoint, or the prosody encoder embedded in a vc one.
ProsodyBundle LoadProsody(const std::filesystem::path& path);
VcBundle LoadVc(const std::filesystem::path& path);

}  // namespace pvc::train

#endif  // PVC_TRAIN_RUN_H_
