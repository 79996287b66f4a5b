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

#ifndef PVC_EVAL_REPORT_H_
#define PVC_EVAL_REPORT_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "pvc/eval/analysis.h"

namespace pvc::eval {

/// Identifies what produced a statistic. Every CSV row and every JSON
/// report carries these fields.
struct Provenance {
  std::string checkpoint_sha256;
  std::string config_sha256;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json ProvenanceJson(const Provenance& p);

/// Doubles print with %.9g; non-finite values as inf / -inf / nan in CSV
/// and null in JSON. Output depends only on the arguments.
std::string FormatNumber(double v);

std::string RankDensityCsv(const RankDensity& r, const Provenance& p);
nlohmann::ordered_json RankSummaryJson(const RankSummary& s);

std::string ProsodyMapCsv(const ProsodyMap& m, const Provenance& p);
nlohmann::ordered_json ProsodyMapJson(const ProsodyMap& m);

std::string ConversionKlCsv(const ConversionKl& k, const Provenance& p);
nlohmann::ordered_json ConversionKlJson(const ConversionKl& k);

std::string SimilarityCsv(const SpeakerSimilarity& s, const Provenance& p);
nlohmann::ordered_json SimilarityJson(const SpeakerSimilarity& s);

}  // namespace pvc::eval

#endif  // PVC_EVAL_REPORT_H_
