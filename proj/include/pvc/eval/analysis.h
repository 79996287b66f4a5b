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

#ifndef PVC_EVAL_ANALYSIS_H_
#define PVC_EVAL_ANALYSIS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pvc/corpus/batch.h"
#include "pvc/corpus/manifest.h"
#include "pvc/corpus/speaker.h"
#include "pvc/prosody/model.h"
#include "pvc/signal/mel.h"

namespace pvc::eval {

// ---- Rank-score densities ----

struct RankRow {
  std::string utterance;  // manifest path
  std::string speaker;
  corpus::PitchGroup group = corpus::PitchGroup::kLow;
  double r_p = 0.0;
  double r_v = 0.0;
  double gt_f0 = 0.0;
  double gt_rms = 0.0;
};

struct RankSummary {
  std::size_t utterances = 0;
  double spearman_rp_f0 = 0.0;
  double spearman_rv_rms = 0.0;
  double spearman_rp_rms = 0.0;
  double spearman_rv_f0 = 0.0;
  double mean_rp_low = 0.0, mean_rp_high = 0.0;
  double mean_rv_low = 0.0, mean_rv_high = 0.0;
  /// Pooled within-group standard deviations.
  double pooled_std_rp = 0.0, pooled_std_rv = 0.0;
};

struct RankDensity {
  std::vector<RankRow> rows;
  RankSummary summary;
};

/// Scores every utterance of the store. InvalidArgument when it is empty.
RankDensity RankDensityExport(prosody::ProsodyModel<float>& model, const corpus::UtteranceStore& store);

// ---- Two-dimensional prosody map ----

inline constexpr int kMapSpeakers = 10;
inline constexpr int kMapSamples = 10;
inline constexpr const char* kMapContentId = "shared-0";
/// Token sequence every speaker reads for the map.
const std::vector<int>& MapContent();

struct MapRow {
  std::string speaker;
  corpus::PitchGroup group = corpus::PitchGroup::kLow;
  std::string content_id;
  int sample = 0;
  double psi_p_x = 0.0, psi_p_y = 0.0;
  double psi_v_x = 0.0, psi_v_y = 0.0;
};

struct ProsodyMap {
  std::vector<MapRow> rows;
  /// Mean within-speaker squared spread over the spread of speaker centroids.
  double variance_ratio_p = 0.0;
  double variance_ratio_v = 0.0;
};

/// Renders MapContent() kMapSamples times for each of the first kMapSpeakers
/// speakers (utterance-level prosody redrawn per sample) and records the 2-D
/// representations. InvalidArgument unless the model has d_psi = 2 and at
/// least two speakers are given.
ProsodyMap ProsodyMap2d(prosody::ProsodyModel<float>& model, const std::vector<corpus::SyntheticSpeaker>& speakers,
                        std::uint64_t seed, const signal::MelConfig& mel = {},
                        const corpus::RenderOptions& render = {});

// ---- Conversion protocol ----

/// source mel, target mel -> converted mel.
using ConvertFn = std::function<MatrixF(const MatrixF&, const MatrixF&)>;
/// mel -> speaker embedding (1 x d).
using EmbedFn = std::function<MatrixF(const MatrixF&)>;

enum class Direction { kLowToHigh, kHighToLow, kLowToLow, kHighToHigh };
const char* DirectionName(Direction d);

struct ConversionProtocol {
  int pairs_per_direction = 5;
  int utterances = 10;
  std::uint64_t seed = 0;
  int griffin_lim_iterations = 60;
};

/// One conversion of the protocol: source utterance converted towards the
/// target speaker, using target utterance `target_item` as reference.
struct Conversion {
  std::size_t source_item = 0;  // store index
  std::size_t target_item = 0;
};

struct SpeakerPair {
  Direction direction = Direction::kLowToHigh;
  std::string source, target;
  std::vector<Conversion> conversions;
};

/// Speaker pairs of one direction. Distinct (source, target) combinations are
/// drawn in a seeded order; when fewer exist than requested they are reused
/// with fresh utterances. InvalidArgument when a group has no speaker (or,
/// for same-group directions, fewer than two).
std::vector<SpeakerPair> PlanPairs(const corpus::UtteranceStore& store, Direction direction,
                                   const ConversionProtocol& protocol);

struct PairKl {
  Direction direction = Direction::kLowToHigh;
  std::string source, target;
  double kl_f0_target = 0.0, kl_f0_source = 0.0;
  double kl_rms_target = 0.0, kl_rms_source = 0.0;
  bool f0_success = false;
  bool rms_success = false;
};

struct DirectionKl {
  std::string label;  // direction name, or "all"
  int pairs = 0;
  double median_kl_f0_target = 0.0, median_kl_f0_source = 0.0;
  double median_kl_rms_target = 0.0, median_kl_rms_source = 0.0;
  double f0_success_rate = 0.0;
  double rms_success_rate = 0.0;
};

struct ConversionKl {
  std::vector<PairKl> pairs;
  std::vector<DirectionKl> directions;  // low_to_high, high_to_low, all
  std::vector<std::string> warnings;
};

/// For each cross-group pair, renders every converted mel and every
/// reference mel through Griffin-Lim, pools voiced per-frame log-F0 and
/// per-frame RMS (dB), and compares the converted distribution with the
/// target speaker's and with the source speaker's.
ConversionKl ConversionKlEval(const corpus::UtteranceStore& store, const ConvertFn& convert,
                              const ConversionProtocol& protocol);

struct DirectionSimilarity {
  Direction direction = Direction::kLowToHigh;
  int conversions = 0;
  int excluded = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_cos_target = 0.0;
  double mean_cos_source = 0.0;
};

struct SpeakerSimilarity {
  std::vector<DirectionSimilarity> directions;  // cross-group then same-group
  std::vector<std::string> warnings;
};

/// Proxy speaker similarity: success when cos(S_out, mean S_target) exceeds
/// cos(S_out, mean S_source), the means taken over the pair's reference
/// utterances. Zero-norm embeddings are excluded with a warning. Same-group
/// directions are skipped with a warning when a group has one speaker.
SpeakerSimilarity SpeakerSimilarityEval(const corpus::UtteranceStore& store, const ConvertFn& convert,
                                        const EmbedFn& embed, const ConversionProtocol& protocol);

}  // namespace pvc::eval

#endif  // PVC_EVAL_ANALYSIS_H_
