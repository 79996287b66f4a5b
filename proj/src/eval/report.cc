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

#include "pvc/eval/report.h"

#include <cmath>
#include <cstdio>

namespace pvc::eval {

namespace {

nlohmann::ordered_json Num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string Tail(const Provenance& p) {
  return "," + p.checkpoint_sha256 + "," + p.config_sha256 + "," + std::to_string(p.seed) + "\n";
}

constexpr const char* kTailHeader = ",checkpoint_sha256,config_sha256,seed\n";

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::ordered_json ProvenanceJson(const Provenance& p) {
  nlohmann::ordered_json j;
  j["checkpoint_sha256"] = p.checkpoint_sha256;
  j["config_sha256"] = p.config_sha256;
  j["seed"] = p.seed;
  return j;
}

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string RankDensityCsv(const RankDensity& r, const Provenance& p) {
  std::string out = std::string("utterance,speaker,group,r_p,r_v,gt_f0_mean,gt_rms") + kTailHeader;
  for (const auto& row : r.rows) {
    out += Quote(row.utterance) + "," + Quote(row.speaker) + "," + corpus::GroupName(row.group) + "," +
           FormatNumber(row.r_p) + "," + FormatNumber(row.r_v) + "," + FormatNumber(row.gt_f0) + "," +
           FormatNumber(row.gt_rms) + Tail(p);
  }
  return out;
}

nlohmann::ordered_json RankSummaryJson(const RankSummary& s) {
  nlohmann::ordered_json j;
  j["utterances"] = s.utterances;
  j["spearman_rp_f0"] = Num(s.spearman_rp_f0);
  j["spearman_rv_rms"] = Num(s.spearman_rv_rms);
  j["spearman_rp_rms"] = Num(s.spearman_rp_rms);
  j["spearman_rv_f0"] = Num(s.spearman_rv_f0);
  j["mean_rp_low_pitch"] = Num(s.mean_rp_low);
  j["mean_rp_high_pitch"] = Num(s.mean_rp_high);
  j["mean_rv_low_pitch"] = Num(s.mean_rv_low);
  j["mean_rv_high_pitch"] = Num(s.mean_rv_high);
  j["pooled_std_rp"] = Num(s.pooled_std_rp);
  j["pooled_std_rv"] = Num(s.pooled_std_rv);
  return j;
}

std::string ProsodyMapCsv(const ProsodyMap& m, const Provenance& p) {
  std::string out = std::string("speaker,group,content_id,sample,psi_p_x,psi_p_y,psi_v_x,psi_v_y") + kTailHeader;
  for (const auto& r : m.rows) {
    out += Quote(r.speaker) + "," + corpus::GroupName(r.group) + "," + r.content_id + "," + std::to_string(r.sample) +
           "," + FormatNumber(r.psi_p_x) + "," + FormatNumber(r.psi_p_y) + "," + FormatNumber(r.psi_v_x) + "," +
           FormatNumber(r.psi_v_y) + Tail(p);
  }
  return out;
}

nlohmann::ordered_json ProsodyMapJson(const ProsodyMap& m) {
  nlohmann::ordered_json j;
  j["points"] = m.rows.size();
  j["content_id"] = kMapContentId;
  j["variance_ratio_p"] = Num(m.variance_ratio_p);
  j["variance_ratio_v"] = Num(m.variance_ratio_v);
  return j;
}

std::string ConversionKlCsv(const ConversionKl& k, const Provenance& p) {
  std::string out = std::string(
                        "direction,source,target,kl_f0_target,kl_f0_source,kl_rms_target,kl_rms_source,"
                        "f0_success,rms_success") +
                    kTailHeader;
  for (const auto& r : k.pairs) {
    out += std::string(DirectionName(r.direction)) + "," + Quote(r.source) + "," + Quote(r.target) + "," +
           FormatNumber(r.kl_f0_target) + "," + FormatNumber(r.kl_f0_source) + "," + FormatNumber(r.kl_rms_target) +
           "," + FormatNumber(r.kl_rms_source) + "," + (r.f0_success ? "1" : "0") + "," + (r.rms_success ? "1" : "0") +
           Tail(p);
  }
  return out;
}

nlohmann::ordered_json ConversionKlJson(const ConversionKl& k) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json dirs = nlohmann::ordered_json::array();
  for (const auto& d : k.directions) {
    nlohmann::ordered_json e;
    e["direction"] = d.label;
    e["pairs"] = d.pairs;
    e["median_kl_f0_target"] = Num(d.median_kl_f0_target);
    e["median_kl_f0_source"] = Num(d.median_kl_f0_source);
    e["median_kl_rms_target"] = Num(d.median_kl_rms_target);
    e["median_kl_rms_source"] = Num(d.median_kl_rms_source);
    e["f0_success_rate"] = Num(d.f0_success_rate);
    e["rms_success_rate"] = Num(d.rms_success_rate);
    dirs.push_back(e);
  }
  j["directions"] = dirs;
  j["warnings"] = k.warnings;
  return j;
}

std::string SimilarityCsv(const SpeakerSimilarity& s, const Provenance& p) {
  std::string out =
      std::string("direction,conversions,excluded,successes,success_rate,mean_cos_target,mean_cos_source") +
      kTailHeader;
  for (const auto& d : s.directions) {
    out += std::string(DirectionName(d.direction)) + "," + std::to_string(d.conversions) + "," +
           std::to_string(d.excluded) + "," + std::to_string(d.successes) + "," + FormatNumber(d.success_rate) + "," +
           FormatNumber(d.mean_cos_target) + "," + FormatNumber(d.mean_cos_source) + Tail(p);
  }
  return out;
}

nlohmann::ordered_json SimilarityJson(const SpeakerSimilarity& s) {
  nlohmann::ordered_json j;
  j["metric"] = "proxy: cosine similarity of the model's own speaker embeddings";
  nlohmann::ordered_json dirs = nlohmann::ordered_json::array();
  for (const auto& d : s.directions) {
    nlohmann::ordered_json e;
    e["direction"] = DirectionName(d.direction);
    e["cross_group"] = d.direction == Direction::kLowToHigh || d.direction == Direction::kHighToLow;
    e["conversions"] = d.conversions;
    e["excluded"] = d.excluded;
    e["successes"] = d.successes;
    e["success_rate"] = Num(d.success_rate);
    e["mean_cos_target"] = Num(d.mean_cos_target);
    e["mean_cos_source"] = Num(d.mean_cos_source);
    dirs.push_back(e);
  }
  j["directions"] = dirs;
  j["warnings"] = s.warnings;
  return j;
}

}  // namespace pvc::eval
