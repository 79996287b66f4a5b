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

#include "pvc/eval/analysis.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "pvc/base/error.h"
#include "pvc/base/parallel.h"
#include "pvc/base/rng.h"
#include "pvc/eval/stats.h"
#include "pvc/signal/griffin_lim.h"
#include "pvc/signal/pitch.h"

namespace pvc::eval {

namespace {

constexpr std::uint64_t kMapStream = 0x3a9;
constexpr std::uint64_t kPairStream = 0xd1;
constexpr std::uint64_t kReferenceStream = 0x6c1;
constexpr std::uint64_t kConvertedStream = 0x6c2;
// Frames quieter than this are treated as silence for the level statistic.
constexpr double kSilenceRms = 1e-6;

double PooledStd(std::span<const double> a, std::span<const double> b) {
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  if (na + nb < 3) return 0.0;
  const double sa = StdDev(a), sb = StdDev(b);
  const double va = na > 1 ? (na - 1) * sa * sa : 0.0;
  const double vb = nb > 1 ? (nb - 1) * sb * sb : 0.0;
  return std::sqrt((va + vb) / (na + nb - 2));
}

struct Features {
  std::vector<double> log_f0;  // voiced frames
  std::vector<double> rms_db;  // non-silent frames
};

Features Measure(const MatrixF& mel, const signal::MelConfig& config, int iterations, std::uint64_t seed) {
  signal::MelSpectrogram spec;
  spec.frames = mel.cast<double>();
  spec.hop = config.hop;
  spec.window = config.window;
  signal::GriffinLimOptions gl;
  gl.iterations = iterations;
  gl.seed = seed;
  const signal::Waveform w = signal::GriffinLim(spec, gl, config);
  Features f;
  for (double hz : signal::EstimateF0(w).Voiced()) f.log_f0.push_back(std::log(hz));
  for (double r : signal::FrameRms(w)) {
    if (r > kSilenceRms) f.rms_db.push_back(20.0 * std::log10(r));
  }
  return f;
}

void Append(std::vector<double>& to, const std::vector<double>& from) { to.insert(to.end(), from.begin(), from.end()); }

double KlOrInfinity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return SampleKl(a, b);
}

std::vector<double> Row(const MatrixF& m) {
  std::vector<double> v(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) v[i] = m.data()[i];
  return v;
}

std::vector<double> MeanEmbedding(const std::vector<std::size_t>& items,
                                  const std::map<std::size_t, std::vector<double>>& cache) {
  std::vector<double> mean;
  for (std::size_t i : items) {
    const auto& e = cache.at(i);
    if (mean.empty()) mean.assign(e.size(), 0.0);
    for (std::size_t k = 0; k < e.size(); ++k) mean[k] += e[k];
  }
  for (double& v : mean) v /= static_cast<double>(items.size());
  return mean;
}

template <typename F>
std::vector<std::size_t> Distinct(const SpeakerPair& pair, F field) {
  std::set<std::size_t> s;
  for (const auto& c : pair.conversions) s.insert(field(c));
  return {s.begin(), s.end()};
}

DirectionKl Summarize(const std::string& label, const std::vector<const PairKl*>& pairs) {
  DirectionKl d;
  d.label = label;
  d.pairs = static_cast<int>(pairs.size());
  if (pairs.empty()) return d;
  std::vector<double> ft, fs, rt, rs;
  int f0_ok = 0, rms_ok = 0;
  for (const PairKl* p : pairs) {
    ft.push_back(p->kl_f0_target);
    fs.push_back(p->kl_f0_source);
    rt.push_back(p->kl_rms_target);
    rs.push_back(p->kl_rms_source);
    f0_ok += p->f0_success;
    rms_ok += p->rms_success;
  }
  d.median_kl_f0_target = signal::Median(ft);
  d.median_kl_f0_source = signal::Median(fs);
  d.median_kl_rms_target = signal::Median(rt);
  d.median_kl_rms_source = signal::Median(rs);
  d.f0_success_rate = static_cast<double>(f0_ok) / d.pairs;
  d.rms_success_rate = static_cast<double>(rms_ok) / d.pairs;
  return d;
}

}  // namespace

RankDensity RankDensityExport(prosody::ProsodyModel<float>& model, const corpus::UtteranceStore& store) {
  if (store.size() == 0) throw InvalidArgument("rank density export: the split has no utterances");
  RankDensity out;
  std::vector<double> rp, rv, f0, rms;
  std::vector<double> rp_low, rp_high, rv_low, rv_high;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& e = store.entry(i);
    const auto o = prosody::EncodeProsody(model, store[i].mel);
    RankRow row{e.path, e.speaker, e.group, o.r_p, o.r_v, e.f0_mean_hz, e.rms};
    out.rows.push_back(row);
    rp.push_back(o.r_p);
    rv.push_back(o.r_v);
    f0.push_back(e.f0_mean_hz);
    rms.push_back(e.rms);
    (e.group == corpus::PitchGroup::kLow ? rp_low : rp_high).push_back(o.r_p);
    (e.group == corpus::PitchGroup::kLow ? rv_low : rv_high).push_back(o.r_v);
  }
  auto& s = out.summary;
  s.utterances = out.rows.size();
  if (out.rows.size() >= 2) {
    s.spearman_rp_f0 = Spearman(rp, f0);
    s.spearman_rv_rms = Spearman(rv, rms);
    s.spearman_rp_rms = Spearman(rp, rms);
    s.spearman_rv_f0 = Spearman(rv, f0);
  }
  s.mean_rp_low = Mean(rp_low);
  s.mean_rp_high = Mean(rp_high);
  s.mean_rv_low = Mean(rv_low);
  s.mean_rv_high = Mean(rv_high);
  s.pooled_std_rp = PooledStd(rp_low, rp_high);
  s.pooled_std_rv = PooledStd(rv_low, rv_high);
  return out;
}

const std::vector<int>& MapContent() {
  static const std::vector<int> content{2, 9, 4, 15, 0, 11, 6, 13};
  return content;
}

ProsodyMap ProsodyMap2d(prosody::ProsodyModel<float>& model, const std::vector<corpus::SyntheticSpeaker>& speakers,
                        std::uint64_t seed, const signal::MelConfig& mel, const corpus::RenderOptions& render) {
  if (model.config().dim != 2) {
    throw InvalidArgument("prosody map needs a 2-dimensional prosody encoder, got " +
                          std::to_string(model.config().dim));
  }
  if (speakers.size() < 2) throw InvalidArgument("prosody map needs at least 2 unseen speakers");
  const std::size_t n = std::min<std::size_t>(speakers.size(), kMapSpeakers);
  ProsodyMap out;
  std::vector<std::array<double, 2>> centroid_p(n), centroid_v(n);
  std::vector<std::vector<std::array<double, 2>>> pts_p(n), pts_v(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto& spk = speakers[s];
    for (int k = 0; k < kMapSamples; ++k) {
      const auto utt = corpus::RenderUtterance(spk, MapContent(), DeriveSeed(seed, kMapStream, s * 1000 + k), render);
      const MatrixF m = signal::ComputeMelSpectrogram(utt.waveform, mel).frames.cast<float>();
      const auto o = prosody::EncodeProsody(model, m);
      out.rows.push_back({spk.id, spk.group, kMapContentId, k, o.psi_p[0], o.psi_p[1], o.psi_v[0], o.psi_v[1]});
      pts_p[s].push_back({o.psi_p[0], o.psi_p[1]});
      pts_v[s].push_back({o.psi_v[0], o.psi_v[1]});
    }
  }
  const auto ratio = [&](const std::vector<std::vector<std::array<double, 2>>>& pts) {
    std::vector<std::array<double, 2>> c(n, {0.0, 0.0});
    std::array<double, 2> grand{0.0, 0.0};
    for (std::size_t s = 0; s < n; ++s) {
      for (const auto& p : pts[s]) {
        c[s][0] += p[0] / pts[s].size();
        c[s][1] += p[1] / pts[s].size();
      }
      grand[0] += c[s][0] / n;
      grand[1] += c[s][1] / n;
    }
    double within = 0.0, between = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      for (const auto& p : pts[s]) {
        within += (std::pow(p[0] - c[s][0], 2) + std::pow(p[1] - c[s][1], 2)) / (pts[s].size() * n);
      }
      between += (std::pow(c[s][0] - grand[0], 2) + std::pow(c[s][1] - grand[1], 2)) / n;
    }
    if (between == 0.0) return within == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return within / between;
  };
  out.variance_ratio_p = ratio(pts_p);
  out.variance_ratio_v = ratio(pts_v);
  return out;
}

const char* DirectionName(Direction d) {
  switch (d) {
    case Direction::kLowToHigh:
      return "low_to_high";
    case Direction::kHighToLow:
      return "high_to_low";
    case Direction::kLowToLow:
      return "low_to_low";
    case Direction::kHighToHigh:
      return "high_to_high";
  }
  return "?";
}

std::vector<SpeakerPair> PlanPairs(const corpus::UtteranceStore& store, Direction direction,
                                   const ConversionProtocol& protocol) {
  if (protocol.pairs_per_direction < 1 || protocol.utterances < 1) {
    throw InvalidArgument("conversion protocol needs at least one pair and one utterance");
  }
  std::map<std::string, std::vector<std::size_t>> items;
  std::map<std::string, corpus::PitchGroup> group;
  for (std::size_t i = 0; i < store.size(); ++i) {
    items[store.entry(i).speaker].push_back(i);
    group[store.entry(i).speaker] = store.entry(i).group;
  }
  std::vector<std::string> low, high;
  for (const auto& [spk, g] : group) (g == corpus::PitchGroup::kLow ? low : high).push_back(spk);
  const bool src_low = direction == Direction::kLowToHigh || direction == Direction::kLowToLow;
  const bool tgt_low = direction == Direction::kHighToLow || direction == Direction::kLowToLow;
  const auto& src = src_low ? low : high;
  const auto& tgt = tgt_low ? low : high;

  std::vector<std::pair<std::string, std::string>> combos;
  for (const auto& a : src) {
    for (const auto& b : tgt) {
      if (a != b) combos.emplace_back(a, b);
    }
  }
  if (combos.empty()) {
    throw InvalidArgument(std::string("not enough unseen speakers for ") + DirectionName(direction) +
                          " pairs (low_pitch " + std::to_string(low.size()) + ", high_pitch " +
                          std::to_string(high.size()) + ")");
  }
  Rng rng(DeriveSeed(protocol.seed, kPairStream, static_cast<std::uint64_t>(direction)));
  for (std::size_t i = combos.size(); i > 1; --i) std::swap(combos[i - 1], combos[rng() % i]);

  std::vector<SpeakerPair> pairs;
  for (int k = 0; k < protocol.pairs_per_direction; ++k) {
    const auto& [a, b] = combos[k % combos.size()];
    const int round = k / static_cast<int>(combos.size());
    SpeakerPair p;
    p.direction = direction;
    p.source = a;
    p.target = b;
    const auto& si = items[a];
    const auto& ti = items[b];
    for (int u = 0; u < protocol.utterances; ++u) {
      const std::size_t at = static_cast<std::size_t>(round * protocol.utterances + u);
      p.conversions.push_back({si[at % si.size()], ti[at % ti.size()]});
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

ConversionKl ConversionKlEval(const corpus::UtteranceStore& store, const ConvertFn& convert,
                              const ConversionProtocol& protocol) {
  std::vector<SpeakerPair> pairs = PlanPairs(store, Direction::kLowToHigh, protocol);
  for (auto& p : PlanPairs(store, Direction::kHighToLow, protocol)) pairs.push_back(std::move(p));
  const auto& config = store.config();

  std::set<std::size_t> ref_set;
  std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (pair, conversion)
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t c = 0; c < pairs[p].conversions.size(); ++c) {
      ref_set.insert(pairs[p].conversions[c].source_item);
      ref_set.insert(pairs[p].conversions[c].target_item);
      jobs.emplace_back(p, c);
    }
  }
  const std::vector<std::size_t> refs(ref_set.begin(), ref_set.end());
  std::vector<Features> ref_features(refs.size());
  ParallelFor(refs.size(), [&](std::size_t k) {
    ref_features[k] = Measure(store[refs[k]].mel, config, protocol.griffin_lim_iterations,
                              DeriveSeed(protocol.seed, kReferenceStream, refs[k]));
  });
  std::map<std::size_t, const Features*> ref_of;
  for (std::size_t k = 0; k < refs.size(); ++k) ref_of[refs[k]] = &ref_features[k];

  std::vector<MatrixF> converted(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& c = pairs[jobs[j].first].conversions[jobs[j].second];
    converted[j] = convert(store[c.source_item].mel, store[c.target_item].mel);
  }
  std::vector<Features> conv_features(jobs.size());
  ParallelFor(jobs.size(), [&](std::size_t j) {
    conv_features[j] = Measure(converted[j], config, protocol.griffin_lim_iterations,
                               DeriveSeed(protocol.seed, kConvertedStream, j));
  });

  ConversionKl out;
  std::size_t j = 0;
  for (const auto& pair : pairs) {
    Features conv, tgt, src;
    for (std::size_t c = 0; c < pair.conversions.size(); ++c, ++j) {
      Append(conv.log_f0, conv_features[j].log_f0);
      Append(conv.rms_db, conv_features[j].rms_db);
    }
    for (std::size_t i : Distinct(pair, [](const Conversion& c) { return c.target_item; })) {
      Append(tgt.log_f0, ref_of.at(i)->log_f0);
      Append(tgt.rms_db, ref_of.at(i)->rms_db);
    }
    for (std::size_t i : Distinct(pair, [](const Conversion& c) { return c.source_item; })) {
      Append(src.log_f0, ref_of.at(i)->log_f0);
      Append(src.rms_db, ref_of.at(i)->rms_db);
    }
    if (conv.log_f0.empty()) {
      out.warnings.push_back(pair.source + " -> " + pair.target + ": no voiced frames in the converted audio");
    }
    PairKl r;
    r.direction = pair.direction;
    r.source = pair.source;
    r.target = pair.target;
    r.kl_f0_target = KlOrInfinity(conv.log_f0, tgt.log_f0);
    r.kl_f0_source = KlOrInfinity(conv.log_f0, src.log_f0);
    r.kl_rms_target = KlOrInfinity(conv.rms_db, tgt.rms_db);
    r.kl_rms_source = KlOrInfinity(conv.rms_db, src.rms_db);
    r.f0_success = r.kl_f0_target < r.kl_f0_source;
    r.rms_success = r.kl_rms_target < r.kl_rms_source;
    out.pairs.push_back(r);
  }
  std::vector<const PairKl*> lh, hl, all;
  for (const auto& p : out.pairs) {
    (p.direction == Direction::kLowToHigh ? lh : hl).push_back(&p);
    all.push_back(&p);
  }
  out.directions.push_back(Summarize(DirectionName(Direction::kLowToHigh), lh));
  out.directions.push_back(Summarize(DirectionName(Direction::kHighToLow), hl));
  out.directions.push_back(Summarize("all", all));
  for (const auto& w : out.warnings) Warn(w);
  return out;
}

SpeakerSimilarity SpeakerSimilarityEval(const corpus::UtteranceStore& store, const ConvertFn& convert,
                                        const EmbedFn& embed, const ConversionProtocol& protocol) {
  SpeakerSimilarity out;
  std::map<std::size_t, std::vector<double>> cache;
  const auto embedding = [&](std::size_t item) -> const std::vector<double>& {
    auto it = cache.find(item);
    if (it == cache.end()) it = cache.emplace(item, Row(embed(store[item].mel))).first;
    return it->second;
  };
  for (Direction d : {Direction::kLowToHigh, Direction::kHighToLow, Direction::kLowToLow, Direction::kHighToHigh}) {
    std::vector<SpeakerPair> pairs;
    try {
      pairs = PlanPairs(store, d, protocol);
    } catch (const InvalidArgument& e) {
      if (d == Direction::kLowToHigh || d == Direction::kHighToLow) throw;
      out.warnings.push_back(std::string(DirectionName(d)) + " skipped: " + e.what());
      continue;
    }
    DirectionSimilarity r;
    r.direction = d;
    double sum_t = 0.0, sum_s = 0.0;
    for (const auto& pair : pairs) {
      const auto tgt_items = Distinct(pair, [](const Conversion& c) { return c.target_item; });
      const auto src_items = Distinct(pair, [](const Conversion& c) { return c.source_item; });
      for (std::size_t i : tgt_items) embedding(i);
      for (std::size_t i : src_items) embedding(i);
      const auto mean_t = MeanEmbedding(tgt_items, cache);
      const auto mean_s = MeanEmbedding(src_items, cache);
      for (const auto& c : pair.conversions) {
        ++r.conversions;
        const auto s_out = Row(embed(convert(store[c.source_item].mel, store[c.target_item].mel)));
        const auto ct = Cosine(s_out, mean_t);
        const auto cs = Cosine(s_out, mean_s);
        if (!ct || !cs) {
          ++r.excluded;
          out.warnings.push_back(std::string(DirectionName(d)) + " " + pair.source + " -> " + pair.target +
                                 ": zero-norm speaker embedding excluded");
          continue;
        }
        sum_t += *ct;
        sum_s += *cs;
        r.successes += *ct > *cs;
      }
    }
    const int used = r.conversions - r.excluded;
    if (used > 0) {
      r.success_rate = static_cast<double>(r.successes) / used;
      r.mean_cos_target = sum_t / used;
      r.mean_cos_source = sum_s / used;
    }
    out.directions.push_back(r);
  }
  for (const auto& w : out.warnings) Warn(w);
  return out;
}

}  // namespace pvc::eval
