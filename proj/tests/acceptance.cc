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

// Acceptance runner: evaluates criteria 1-11 on the synthetic desk corpus and
// prints one PASS/FAIL line per criterion. Exit status is 0 only when every
// criterion passes.
//
// Trained checkpoints are kept in the work directory together with a key
// (config, manifest hash, upstream checkpoint hash). A later run reuses a
// checkpoint only when the key matches; --fresh retrains everything.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pvc/base/error.h"
#include "pvc/base/hash.h"
#include "pvc/base/io.h"
#include "pvc/base/rng.h"
#include "pvc/corpus/batch.h"
#include "pvc/corpus/generate.h"
#include "pvc/corpus/manifest.h"
#include "pvc/corpus/pairs.h"
#include "pvc/eval/analysis.h"
#include "pvc/eval/stats.h"
#include "pvc/grad/check.h"
#include "pvc/grad/ops.h"
#include "pvc/prosody/loss.h"
#include "pvc/signal/augment.h"
#include "pvc/signal/pitch.h"
#include "pvc/train/checkpoint.h"
#include "pvc/train/config.h"
#include "pvc/train/run.h"
#include "pvc/vc/loss.h"

namespace {

namespace fs = std::filesystem;
using namespace pvc;
using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr std::uint64_t kCorpusSeed = 7;
constexpr std::uint64_t kTrainSeed = 7;
constexpr std::uint64_t kEvalSeed = 7;
constexpr int kSpeakers = 20;
constexpr int kUtterances = 30;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Runner {
  std::set<int> only;
  int failures = 0;
  int ran = 0;

  bool Wants(int id) const { return only.empty() || only.count(id) > 0; }

  void Run(int id, const std::string& name, const std::function<Outcome()>& body) {
    if (!Wants(id)) return;
    ++ran;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.c_str(), Seconds(start));
    std::fflush(stdout);
  }
};

// ---------------------------------------------------------------------------
// Criterion 1: gradient checks of every differentiable operation.

Outcome GradientSuite() {
  using M = grad::Matrix<double>;
  using V = grad::Var<double>;
  using grad::Tape;
  const auto random = [](int rows, int cols, std::uint64_t seed, double scale = 1.0) {
    Rng rng(DeriveSeed(0x6a7d, seed));
    std::normal_distribution<double> normal(0.0, scale);
    M m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
    return m;
  };
  struct Case {
    std::string name;
    grad::CheckedGraph f;
    std::vector<M> inputs;
    double tol = 1e-4;
  };
  std::vector<Case> cases;
  cases.push_back({"linear", [](Tape<double>&, const std::vector<V>& in) { return grad::Linear(in[0], in[1], in[2]); },
                   {random(8, 8, 1), random(8, 8, 2), random(1, 8, 3)}});
  for (auto mode : {grad::PadMode::kZeros, grad::PadMode::kReplicate, grad::PadMode::kCircular}) {
    for (int stride : {1, 2}) {
      const grad::ConvSpec spec{5, stride, 2, mode};
      cases.push_back({Fmt("conv1d mode %d stride %d", static_cast<int>(mode), stride),
                       [spec](Tape<double>&, const std::vector<V>& in) {
                         return grad::Conv1d(in[0], in[1], in[2], 2, spec);
                       },
                       {random(2 * 12, 3, 4), random(5 * 3, 4, 5), random(1, 4, 6)}});
    }
  }
  const M x = random(6, 5, 7), y = random(6, 5, 8);
  cases.push_back({"relu", [](Tape<double>&, const std::vector<V>& in) { return grad::Relu(in[0]); }, {x}});
  cases.push_back({"sigmoid", [](Tape<double>&, const std::vector<V>& in) { return grad::Sigmoid(in[0]); }, {x}});
  cases.push_back({"tanh", [](Tape<double>&, const std::vector<V>& in) { return grad::Tanh(in[0]); }, {x}});
  cases.push_back({"add", [](Tape<double>&, const std::vector<V>& in) { return grad::Add(in[0], in[1]); }, {x, y}});
  cases.push_back({"sub", [](Tape<double>&, const std::vector<V>& in) { return grad::Sub(in[0], in[1]); }, {x, y}});
  cases.push_back({"mul", [](Tape<double>&, const std::vector<V>& in) { return grad::Mul(in[0], in[1]); }, {x, y}});
  cases.push_back({"scale", [](Tape<double>&, const std::vector<V>& in) { return grad::Scale(in[0], -1.7); }, {x}});
  const M z = random(3 * 4, 5, 9);
  cases.push_back({"time_mean", [](Tape<double>&, const std::vector<V>& in) { return grad::TimeMean(in[0], 3); }, {z}});
  cases.push_back({"tile_rows", [](Tape<double>&, const std::vector<V>& in) { return grad::TileRows(in[0], 4); },
                   {random(3, 5, 10)}});
  cases.push_back({"concat_cols",
                   [](Tape<double>&, const std::vector<V>& in) { return grad::ConcatCols<double>({in[0], in[1]}); },
                   {z, random(12, 2, 11)}});
  cases.push_back({"concat_rows",
                   [](Tape<double>&, const std::vector<V>& in) { return grad::ConcatRows<double>({in[0], in[1]}); },
                   {z, random(2, 5, 12)}});
  cases.push_back({"slice_rows", [](Tape<double>&, const std::vector<V>& in) { return grad::SliceRows(in[0], 3, 6); },
                   {z}});
  cases.push_back({"gather_rows",
                   [](Tape<double>&, const std::vector<V>& in) { return grad::GatherRows(in[0], {2, 0, 2, 5}); },
                   {random(6, 4, 13)}});
  const M w = random(7, 6, 14);
  cases.push_back({"mean_abs", [](Tape<double>&, const std::vector<V>& in) { return grad::MeanAbs(in[0]); }, {w}});
  cases.push_back({"mean_square", [](Tape<double>&, const std::vector<V>& in) { return grad::MeanSquare(in[0]); },
                   {w}});
  const std::vector<int> target{0, 3, 5, 1, 0, 2, 4};
  cases.push_back({"softmax_xent",
                   [target](Tape<double>&, const std::vector<V>& in) { return grad::SoftmaxXent(in[0], target); },
                   {w}});
  const std::vector<double> tau{0.1, 0.5, 0.9, 0.3, 0.7};
  cases.push_back({"logistic_xent",
                   [tau](Tape<double>&, const std::vector<V>& in) { return grad::LogisticXent(in[0], tau); },
                   {random(5, 1, 15, 3.0)}});
  cases.push_back({"instance_norm", [](Tape<double>&, const std::vector<V>& in) { return grad::InstanceNorm(in[0], 2); },
                   {random(2 * 9, 4, 16)}});
  const std::vector<int> index{0, 3, 1, 2, 2, 0, 4, 4, 1};
  cases.push_back({"gather_dot",
                   [index](Tape<double>&, const std::vector<V>& in) { return grad::GatherDot(in[0], in[1], index, 3); },
                   {random(3, 4, 17), random(5, 4, 18)}});
  cases.push_back({"recon_loss",
                   [](Tape<double>&, const std::vector<V>& in) { return vc::ReconLoss(in[0], in[1]); },
                   {random(6, 5, 19), random(6, 5, 20)}});
  // The stop-gradient operand enters as a constant; the check covers the
  // differentiable side.
  const M q = random(2 * 5, 4, 21);
  cases.push_back({"speaker_embedding",
                   [q](Tape<double>& t, const std::vector<V>& in) {
                     return vc::SpeakerEmbedding(in[0], t.Constant(q), 2);
                   },
                   {random(2 * 5, 4, 23)}});
  cases.push_back({"lstm (10 steps)",
                   [](Tape<double>&, const std::vector<V>& in) { return grad::Lstm(in[0], in[1], in[2], in[3], 2); },
                   {random(2 * 10, 3, 24), random(3, 16, 25, 0.5), random(4, 16, 26, 0.5), random(1, 16, 27, 0.5)},
                   1e-3});

  const auto start = Clock::now();
  double worst = 0.0, worst_lstm = 0.0;
  std::vector<std::string> failed;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const double err = grad::GradCheck(c.f, c.inputs, {1e-5, 120, i});
    (c.tol > 1e-4 ? worst_lstm : worst) = std::max(c.tol > 1e-4 ? worst_lstm : worst, err);
    if (!(err <= c.tol)) failed.push_back(c.name + Fmt("=%.2e", err));
  }
  // Stop-gradient ops have designed gradients that differ from the numeric
  // derivative; compare them with their closed forms instead.
  {
    Tape<double> tape;
    const M ev = random(6, 4, 30), qv = random(6, 4, 31);
    auto e = tape.Input(ev), qq = tape.Input(qv);
    tape.Backward(vc::VqLoss(e, qq, 0.25));
    const double n = static_cast<double>(ev.size());
    const double err = std::max((e.grad() - 0.5 * (ev - qv) / n).cwiseAbs().maxCoeff(),
                                (qq.grad() - 2.0 * (qv - ev) / n).cwiseAbs().maxCoeff());
    worst = std::max(worst, err);
    if (!(err <= 1e-12)) failed.push_back(Fmt("vq_loss closed form=%.2e", err));
  }
  {
    Tape<double> tape;
    const M seed = random(6, 4, 32);
    auto e = tape.Input(random(6, 4, 33)), qq = tape.Input(random(6, 4, 34));
    tape.Backward(grad::StraightThrough(e, qq), seed);
    const double err = std::max((e.grad() - seed).cwiseAbs().maxCoeff(), qq.grad().cwiseAbs().maxCoeff());
    worst = std::max(worst, err);
    if (!(err <= 1e-12)) failed.push_back(Fmt("straight_through closed form=%.2e", err));
  }
  const double elapsed = Seconds(start);
  std::string detail = Fmt("%zu finite-difference and 2 closed-form checks, max rel err %.2e (lstm %.2e), %.1f s of 120 s", cases.size(), worst,
                           worst_lstm, elapsed);
  for (const auto& f : failed) detail += "; failed " + f;
  return {failed.empty() && elapsed < 120.0, detail};
}

// ---------------------------------------------------------------------------
// Criterion 2: closed-form loss values.

Outcome ClosedForms() {
  const double p = prosody::PairProbability(0.0, 0.0);
  const double rank = prosody::RankLoss(0.5, 0.5);
  grad::Tape<double> tape;
  MatrixD one(1, 1), zero(1, 1);
  one(0, 0) = 1.0;
  zero(0, 0) = 0.0;
  const double vq = vc::VqLoss(tape.Constant(one), tape.Constant(zero), 0.25).value()(0, 0);
  const auto hp = eval::MakeHistogram(std::vector<double>{0.25, 0.75}, 0.0, 1.0, 2);
  const auto hq = eval::MakeHistogram(std::vector<double>{0.25, 0.75, 0.75, 0.75}, 0.0, 1.0, 2);
  const double kl = eval::KlDivergence(hp, hq);
  const bool ok = p == 0.5 && std::abs(rank - std::log(2.0)) <= 1e-12 && std::abs(vq - 1.25) <= 1e-12 &&
                  std::abs(kl - 0.14384) <= 1e-5;
  return {ok, Fmt("pair_probability(0)=%.17g, rank_loss-ln2=%.1e, vq_loss=%.17g, two-bin KL=%.8f", p,
                  rank - std::log(2.0), vq, kl)};
}

// ---------------------------------------------------------------------------
// Criterion 3: quantizer against exhaustive search.

Outcome QuantizeOracle() {
  Rng rng(DeriveSeed(0x7e51, 3));
  std::normal_distribution<float> normal(0.0f, 1.0f);
  RowMatrix<float> e(1000, 64), book(64, 64);
  for (Eigen::Index i = 0; i < e.size(); ++i) e.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < book.size(); ++i) book.data()[i] = normal(rng);
  const auto start = Clock::now();
  const auto idx = vc::Quantize(e, book);
  int agree = 0;
  for (Eigen::Index t = 0; t < e.rows(); ++t) {
    long double best = INFINITY;
    int arg = -1;
    for (Eigen::Index v = 0; v < book.rows(); ++v) {
      long double dist = 0.0L;
      for (Eigen::Index c = 0; c < e.cols(); ++c) {
        const long double d = static_cast<long double>(e(t, c)) - book(v, c);
        dist += d * d;
      }
      if (dist < best) best = dist, arg = static_cast<int>(v);
    }
    agree += idx[static_cast<std::size_t>(t)] == arg;
  }
  const double elapsed = Seconds(start);
  return {agree == 1000 && elapsed < 5.0, Fmt("%d/1000 indices agree, %.2f s of 5 s", agree, elapsed)};
}

// ---------------------------------------------------------------------------
// Criterion 4: augmentation laws.

signal::Waveform Tone(double hz, double seconds, double amplitude) {
  signal::Waveform w;
  w.samples.resize(static_cast<std::size_t>(seconds * w.sample_rate));
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    w.samples[n] = amplitude * std::sin(2.0 * std::numbers::pi * hz * n / w.sample_rate);
  }
  return w;
}

Outcome SignalLaws() {
  const auto start = Clock::now();
  const std::vector<double> taus{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double gain_err = 0.0;
  const auto quiet = Tone(220.0, 1.0, 0.05);
  for (double tau : taus) {
    const auto out = signal::TransformVolume(quiet, tau);
    const double want = std::pow(10.0, signal::VolumeGainDb(tau) / 20.0);
    gain_err = std::max(gain_err, std::abs(signal::Rms(out.samples) / signal::Rms(quiet.samples) / want - 1.0));
  }
  double pitch_err = 0.0;
  for (double hz : {150.0, 220.0, 300.0}) {
    const auto tone = Tone(hz, 2.0, 0.5);
    const double f_in = signal::MedianVoicedF0(signal::EstimateF0(tone));
    for (double tau : taus) {
      const double f_out = signal::MedianVoicedF0(signal::EstimateF0(signal::TransformPitch(tone, tau)));
      const double want = std::pow(2.0, signal::PitchShiftSemitones(tau) / 12.0);
      pitch_err = std::max(pitch_err, std::abs(f_out / f_in / want - 1.0));
    }
  }
  const auto tone = Tone(220.0, 1.0, 0.5);
  const bool identity = signal::TransformPitch(tone, 0.5).samples == tone.samples &&
                        signal::TransformVolume(tone, 0.5).samples == tone.samples;
  const double elapsed = Seconds(start);
  return {gain_err <= 1e-6 && pitch_err <= 0.02 && identity && elapsed < 60.0,
          Fmt("gain law rel err %.1e, pitch ratio err %.2f%% over 3 tones x 9 tau, identity %s, %.1f s of 60 s",
              gain_err, 100.0 * pitch_err, identity ? "bit-exact" : "differs", elapsed)};
}

// ---------------------------------------------------------------------------
// Desk training with a reusable work directory.

std::vector<train::MetricsRow> ReadMetrics(const fs::path& path) {
  std::vector<train::MetricsRow> rows;
  std::istringstream in(ReadFileBytes(path));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    f.resize(7);
    const auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    train::MetricsRow r;
    r.iter = std::stoi(f[0]);
    r.total = std::stod(f[1]);
    r.rec = opt(f[2]);
    r.vq = opt(f[3]);
    r.cpc = opt(f[4]);
    r.rank_p = opt(f[5]);
    r.rank_v = opt(f[6]);
    rows.push_back(r);
  }
  return rows;
}

struct Trained {
  fs::path checkpoint;
  std::vector<train::MetricsRow> rows;
  double seconds = 0.0;
  bool reused = false;

  std::string Describe() const {
    return Fmt("%s %.1f min", reused ? "reused checkpoint, trained in" : "trained in", seconds / 60.0);
  }
};

class Workspace {
 public:
  Workspace(fs::path dir, bool fresh) : dir_(std::move(dir)), fresh_(fresh) {}

  const fs::path& dir() const { return dir_; }

  const corpus::Manifest& Corpus() {
    if (!manifest_) {
      const fs::path root = dir_ / "corpus";
      const fs::path stamp = root / "acceptance_key.json";
      const std::string key = Fmt("speakers=%d utterances=%d seed=%llu", kSpeakers, kUtterances,
                                  static_cast<unsigned long long>(kCorpusSeed));
      bool reuse = !fresh_ && fs::exists(stamp) && fs::exists(root / "manifest.jsonl") &&
                   json::parse(ReadFileBytes(stamp)).value("key", "") == key;
      if (!reuse) {
        fs::remove_all(root);
        corpus::GenCorpus(kSpeakers, kUtterances, kCorpusSeed, root);
        WriteFileBytes(stamp, json{{"key", key}}.dump());
      }
      manifest_ = corpus::ReadManifest(root / "manifest.jsonl");
    }
    return *manifest_;
  }

  fs::path ManifestPath() {
    Corpus();
    return dir_ / "corpus" / "manifest.jsonl";
  }

  const corpus::UtteranceStore& Unseen() {
    if (!unseen_) unseen_.emplace(corpus::UtteranceStore::ForSplit(Corpus(), corpus::Split::kUnseen));
    return *unseen_;
  }

  Trained Train(const std::string& name, train::TrainConfig config) {
    const auto found = trained_.find(name);
    if (found != trained_.end()) return found->second;
    config.manifest = ManifestPath().string();
    const fs::path out = dir_ / name;
    const fs::path ckpt = out / (std::string(train::StageName(config.stage)) + ".ckpt");
    const fs::path stamp = out / "acceptance_key.json";
    auto key_config = train::ConfigToJson(config);
    key_config.erase("manifest");
    key_config.erase("prosody_checkpoint");
    std::string key = key_config.dump() + Sha256File(config.manifest);
    if (!config.prosody_checkpoint.empty()) key += Sha256File(config.prosody_checkpoint);
    Trained t;
    t.checkpoint = ckpt;
    if (!fresh_ && fs::exists(stamp) && fs::exists(ckpt)) {
      const auto j = json::parse(ReadFileBytes(stamp));
      if (j.value("key", "") == key && j.value("checkpoint_sha256", "") == Sha256File(ckpt)) {
        t.rows = ReadMetrics(out / "metrics.csv");
        t.seconds = j.value("seconds", 0.0);
        t.reused = true;
      }
    }
    if (!t.reused) {
      std::printf("  training %s (%d iterations)...\n", name.c_str(), config.iterations);
      std::fflush(stdout);
      fs::remove_all(out);
      const auto start = Clock::now();
      t.rows = train::RunTraining(config, out).rows;
      t.seconds = Seconds(start);
      WriteFileBytes(stamp, json{{"key", key}, {"checkpoint_sha256", Sha256File(ckpt)}, {"seconds", t.seconds}}
                                .dump());
    }
    trained_[name] = t;
    return t;
  }

  train::TrainConfig ProsodyConfig(int iterations) const {
    auto c = train::Preset(train::Profile::kDesk, train::Stage::kProsody);
    c.seed = kTrainSeed;
    c.d_psi = 64;
    c.batch_size = 16;
    c.iterations = iterations;
    c.metrics_every = 100;
    return c;
  }

  Trained Prosody() { return Train("prosody", ProsodyConfig(3000)); }
  Trained ProsodyNull() { return Train("prosody_untrained", ProsodyConfig(0)); }

  Trained Vc(const std::string& name, bool pitch, bool volume, int iterations = 10000) {
    auto c = train::Preset(train::Profile::kDesk, train::Stage::kVc);
    c.seed = kTrainSeed;
    c.d = 64;
    c.d_psi = 64;
    c.batch_size = 16;
    c.iterations = iterations;
    c.metrics_every = 100;
    c.condition_pitch = pitch;
    c.condition_volume = volume;
    c.prosody_checkpoint = Prosody().checkpoint.string();
    return Train(name, c);
  }

  Trained VcFull() { return Vc("vc_full", true, true); }
  Trained VcPitchOnly() { return Vc("vc_pitch_only", true, false); }
  Trained VcNone() { return Vc("vc_none", false, false); }
  Trained VcNull() { return Vc("vc_untrained", true, true, 0); }

 private:
  fs::path dir_;
  bool fresh_;
  std::optional<corpus::Manifest> manifest_;
  std::optional<corpus::UtteranceStore> unseen_;
  std::map<std::string, Trained> trained_;
};

// ---------------------------------------------------------------------------
// Criterion 5: rank scores on held-out speakers.

bool RankPasses(const eval::RankSummary& s) {
  return s.spearman_rp_f0 >= 0.9 && s.spearman_rv_rms >= 0.9 && std::abs(s.spearman_rp_rms) <= 0.3 &&
         std::abs(s.spearman_rv_f0) <= 0.3;
}

std::string RankText(const eval::RankSummary& s) {
  return Fmt("S(rp,f0)=%.3f S(rv,rms)=%.3f S(rp,rms)=%.3f S(rv,f0)=%.3f", s.spearman_rp_f0, s.spearman_rv_rms,
             s.spearman_rp_rms, s.spearman_rv_f0);
}

Outcome ProsodyRanks(Workspace& ws) {
  const auto trained = ws.Prosody();
  const auto null = ws.ProsodyNull();
  auto model = train::LoadProsody(trained.checkpoint);
  auto untrained = train::LoadProsody(null.checkpoint);
  const auto s = eval::RankDensityExport(*model.model, ws.Unseen()).summary;
  const auto n = eval::RankDensityExport(*untrained.model, ws.Unseen()).summary;
  const bool pass = RankPasses(s), null_pass = RankPasses(n);
  return {pass && !null_pass, Fmt("%zu unseen utterances, ", s.utterances) + RankText(s) + "; " +
                                  trained.Describe() + " (budget ~10 min); untrained null " +
                                  (null_pass ? "PASSES (invalid): " : "fails: ") + RankText(n)};
}

// ---------------------------------------------------------------------------
// Criterion 6: pitch-only and volume-only pairs move their own representation.

double CosineDistance(const std::vector<double>& a, const std::vector<double>& b) {
  const auto c = eval::Cosine(a, b);
  return c ? 1.0 - *c : 1.0;
}

struct Disentanglement {
  double pitch_ratio = 0.0;   // median d(psi_p) / median d(psi_v) on pitch-only pairs
  double volume_ratio = 0.0;  // median d(psi_v) / median d(psi_p) on volume-only pairs
  bool Passes() const { return pitch_ratio >= 3.0 && volume_ratio >= 3.0; }
  std::string Text() const { return Fmt("pitch pairs %.2fx, volume pairs %.2fx", pitch_ratio, volume_ratio); }
};

Disentanglement MeasureDisentanglement(prosody::ProsodyModel<float>& model, const corpus::UtteranceStore& store) {
  constexpr int kPairs = 200;
  Disentanglement out;
  for (auto pro : {signal::Prosody::kPitch, signal::Prosody::kVolume}) {
    Rng rng(DeriveSeed(kEvalSeed, 0xd15e, static_cast<std::uint64_t>(pro)));
    std::uniform_real_distribution<double> tau(corpus::kTauMin, corpus::kTauMax);
    std::uniform_int_distribution<std::size_t> pick(0, store.size() - 1);
    std::vector<double> dp, dv;
    for (int k = 0; k < kPairs; ++k) {
      const auto& w = store[pick(rng)].waveform;
      const auto pair = corpus::MakeProsodyPair(w, {pro, tau(rng)}, store.config());
      const auto a = prosody::EncodeProsody(model, RowMatrix<float>(pair.mel_i.frames.cast<float>()));
      const auto b = prosody::EncodeProsody(model, RowMatrix<float>(pair.mel_j.frames.cast<float>()));
      dp.push_back(CosineDistance(a.psi_p, b.psi_p));
      dv.push_back(CosineDistance(a.psi_v, b.psi_v));
    }
    const double mp = signal::Median(dp), mv = signal::Median(dv);
    if (pro == signal::Prosody::kPitch) out.pitch_ratio = mp / mv;
    else out.volume_ratio = mv / mp;
  }
  return out;
}

Outcome DisentanglementCheck(Workspace& ws) {
  auto model = train::LoadProsody(ws.Prosody().checkpoint);
  auto untrained = train::LoadProsody(ws.ProsodyNull().checkpoint);
  const auto d = MeasureDisentanglement(*model.model, ws.Unseen());
  const auto n = MeasureDisentanglement(*untrained.model, ws.Unseen());
  return {d.Passes() && !n.Passes(), "200+200 unseen pairs, median cosine-distance ratio " + d.Text() +
                                         " (need >= 3); untrained null " +
                                         (n.Passes() ? "PASSES (invalid): " : "fails: ") + n.Text()};
}

// ---------------------------------------------------------------------------
// Criteria 7 and 8: VC losses.

struct HeldOutLosses {
  double cpc = 0.0;
  double rec = 0.0;
};

HeldOutLosses MeasureHeldOut(train::VcBundle& b, const corpus::UtteranceStore& store) {
  constexpr int kBatches = 10;
  corpus::BatchIterator it(store, 16, b.config.crop_frames, DeriveSeed(kEvalSeed, 0xc9c));
  Rng negatives(DeriveSeed(kEvalSeed, 0xc9d));
  HeldOutLosses out;
  for (int i = 0; i < kBatches; ++i) {
    const auto batch = it.NextMelBatch();
    const auto mels = prosody::StackRows<float>(batch.mels);
    grad::Tape<float> tape;
    const auto loss = vc::VcForwardLoss(tape, *b.prosody, *b.vc, mels, static_cast<int>(batch.mels.size()), negatives);
    out.cpc += loss.cpc.value()(0, 0) / kBatches;
    out.rec += loss.rec.value()(0, 0) / kBatches;
  }
  return out;
}

Outcome CpcSanity(Workspace& ws) {
  auto trained = train::LoadVc(ws.VcFull().checkpoint);
  auto untrained = train::LoadVc(ws.VcNull().checkpoint);
  const double chance = std::log(trained.config.n_neg + 1.0);
  const double init = MeasureHeldOut(untrained, ws.Unseen()).cpc / chance;
  const double after = MeasureHeldOut(trained, ws.Unseen()).cpc / chance;
  const bool init_ok = init >= 0.85 && init <= 1.15;
  return {init_ok && after <= 0.8 && init > 0.8,
          Fmt("held-out cpc/ln(n_neg+1): random init %.3f (need 0.85-1.15), after desk run %.3f (need <= 0.8); "
              "untrained null %s",
              init, after, init > 0.8 ? "fails" : "PASSES (invalid)")};
}

Outcome VcDeskRun(Workspace& ws) {
  const auto full = ws.VcFull();
  if (full.rows.size() < 2 || !full.rows.front().rec || !full.rows.back().rec) {
    return {false, "metrics missing"};
  }
  const double first = *full.rows.front().rec, last = *full.rows.back().rec;
  const double ratio = last / first;
  auto b = train::LoadVc(full.checkpoint);
  auto untrained = train::LoadVc(ws.VcNull().checkpoint);
  const double held = MeasureHeldOut(b, ws.Unseen()).rec / first;
  const double null_ratio = MeasureHeldOut(untrained, ws.Unseen()).rec / first;

  // The inference path on a single utterance must reproduce the training-path
  // reconstruction exactly.
  const auto& store = ws.Unseen();
  int exact = 0;
  constexpr int kProbes = 5;
  Rng rng(1);
  for (int i = 0; i < kProbes; ++i) {
    const auto& mel = store[static_cast<std::size_t>(i * 7) % store.size()].mel;
    const RowMatrix<float> self = vc::Convert(mel, mel, *b.prosody, *b.vc);
    grad::Tape<float> tape;
    const RowMatrix<float> train_path = vc::VcForwardLoss(tape, *b.prosody, *b.vc, mel, 1, rng).output.value();
    exact += self.rows() == train_path.rows() && self == train_path;
  }
  const bool pass = ratio <= 0.2 && exact == kProbes && full.seconds <= 45 * 60 && null_ratio > 0.2;
  return {pass, Fmt("L_rec %.4f at iteration %d -> %.4f at iteration %d (ratio %.3f, need <= 0.2; held-out %.3f); "
                    "self-conversion bit-exact %d/%d; ",
                    first, full.rows.front().iter, last, full.rows.back().iter, ratio, held, exact, kProbes) +
                    full.Describe() + " (budget 45 min)" +
                    Fmt("; untrained null ratio %.3f %s", null_ratio, null_ratio > 0.2 ? "fails" : "PASSES (invalid)")};
}

// ---------------------------------------------------------------------------
// Criteria 9 and 10: conversion protocol on unseen speakers.

eval::ConversionProtocol Protocol() {
  eval::ConversionProtocol p;
  p.pairs_per_direction = 5;
  p.utterances = 10;
  p.seed = kEvalSeed;
  p.griffin_lim_iterations = 60;
  return p;
}

eval::ConvertFn Converter(train::VcBundle& b) {
  return [&b](const MatrixF& source, const MatrixF& target) { return vc::Convert(source, target, *b.prosody, *b.vc); };
}

const eval::DirectionKl& AllPairs(const eval::ConversionKl& k) {
  for (const auto& d : k.directions) {
    if (d.label == "all") return d;
  }
  throw Error("conversion KL has no pooled entry");
}

std::string KlText(const eval::DirectionKl& d) {
  return Fmt("F0 %.0f%% RMS %.0f%% median F0-KL %.4f", 100.0 * d.f0_success_rate, 100.0 * d.rms_success_rate,
             d.median_kl_f0_target);
}

Outcome ProsodyTransfer(Workspace& ws) {
  const auto& store = ws.Unseen();
  const auto run = [&](const Trained& t) {
    auto b = train::LoadVc(t.checkpoint);
    return AllPairs(eval::ConversionKlEval(store, Converter(b), Protocol()));
  };
  const auto full = run(ws.VcFull());
  const auto pitch = run(ws.VcPitchOnly());
  const auto none = run(ws.VcNone());
  const auto null = run(ws.VcNull());
  const auto rates_ok = [](const eval::DirectionKl& d) { return d.f0_success_rate >= 0.8 && d.rms_success_rate >= 0.7; };
  const bool ordering = full.median_kl_f0_target <= pitch.median_kl_f0_target &&
                        pitch.median_kl_f0_target <= none.median_kl_f0_target;
  const bool null_pass = rates_ok(null);
  return {rates_ok(full) && ordering && !null_pass,
          Fmt("%d pairs; full: ", full.pairs) + KlText(full) + " (need F0 >= 80%, RMS >= 70%); ordering full " +
              Fmt("%.4f <= pitch-only %.4f <= none %.4f %s", full.median_kl_f0_target, pitch.median_kl_f0_target,
                  none.median_kl_f0_target, ordering ? "holds" : "violated") +
              "; untrained null " + (null_pass ? "PASSES (invalid): " : "fails: ") + KlText(null)};
}

Outcome SimilarityCheck(Workspace& ws) {
  const auto& store = ws.Unseen();
  const auto cross = [&](const Trained& t) {
    auto b = train::LoadVc(t.checkpoint);
    const eval::EmbedFn embed = [&b](const MatrixF& mel) { return vc::SpeakerVector(mel, *b.vc); };
    const auto s = eval::SpeakerSimilarityEval(store, Converter(b), embed, Protocol());
    int used = 0, ok = 0;
    for (const auto& d : s.directions) {
      if (d.direction == eval::Direction::kLowToHigh || d.direction == eval::Direction::kHighToLow) {
        used += d.conversions - d.excluded;
        ok += d.successes;
      }
    }
    return std::pair{ok, used};
  };
  const auto [ok, used] = cross(ws.VcFull());
  const auto [nok, nused] = cross(ws.VcNull());
  const double rate = used > 0 ? static_cast<double>(ok) / used : 0.0;
  const double nrate = nused > 0 ? static_cast<double>(nok) / nused : 0.0;
  return {rate >= 0.7, Fmt("proxy cos(S_out, mean S_target) > cos(S_out, mean S_source) on %d/%d cross-group "
                           "conversions (%.0f%%, need >= 70%%); untrained reference %.0f%%",
                           ok, used, 100.0 * rate, 100.0 * nrate)};
}

// ---------------------------------------------------------------------------
// Criterion 11: checkpoint integrity and reproducibility.

std::map<std::string, std::string> TreeHashes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = Sha256File(e.path());
  }
  return out;
}

Outcome Engineering(Workspace& ws) {
  std::vector<std::string> problems;
  // Round trip of the trained VC checkpoint.
  const auto path = ws.VcFull().checkpoint;
  const std::string bytes = ReadFileBytes(path);
  if (train::SerializeCheckpoint(train::ParseCheckpoint(bytes)) != bytes) problems.push_back("reserialized bytes differ");
  auto bundle = train::LoadVc(path);
  const auto original = train::ParseCheckpoint(bytes);
  int params = 0;
  bool values_equal = true;
  for (std::size_t i = 0; i < bundle.vc->params().size(); ++i, ++params) {
    const auto& p = bundle.vc->params()[i];
    const MatrixF stored = train::TensorMatrix(original.Get(p.name));
    values_equal = values_equal && stored == p.value;
  }
  if (!values_equal) problems.push_back("loaded parameters differ from stored tensors");

  // Corruption: a flipped byte anywhere and a truncated file.
  int detected = 0, trials = 0;
  Rng rng(DeriveSeed(kEvalSeed, 0xbad));
  std::uniform_int_distribution<std::size_t> pos(0, bytes.size() - 1);
  for (int i = 0; i < 20; ++i, ++trials) {
    std::string bad = bytes;
    bad[pos(rng)] ^= 0x10;
    try {
      train::ParseCheckpoint(bad);
    } catch (const IntegrityError&) {
      ++detected;
    }
  }
  ++trials;
  try {
    train::ParseCheckpoint(std::string_view(bytes).substr(0, bytes.size() / 2));
  } catch (const IntegrityError&) {
    ++detected;
  }
  if (detected != trials) problems.push_back(Fmt("corruption detected %d/%d", detected, trials));

  // Seeded end-to-end rerun: corpus, both training stages.
  const auto pipeline = [&](const fs::path& root) {
    fs::remove_all(root);
    corpus::GenCorpus(5, 4, kCorpusSeed, root / "corpus");
    auto p = train::Preset(train::Profile::kDesk, train::Stage::kProsody);
    p.manifest = (root / "corpus" / "manifest.jsonl").string();
    p.iterations = 5;
    p.batch_size = 4;
    p.crop_frames = 32;
    p.prosody_channels = 16;
    p.d_psi = 8;
    p.metrics_every = 2;
    train::RunTraining(p, root / "prosody");
    auto v = train::Preset(train::Profile::kDesk, train::Stage::kVc);
    v.manifest = p.manifest;
    v.prosody_checkpoint = (root / "prosody" / "prosody.ckpt").string();
    v.iterations = 5;
    v.batch_size = 4;
    v.crop_frames = 32;
    v.d = 16;
    v.d_psi = 8;
    v.V = 16;
    v.decoder_channels = 16;
    v.metrics_every = 2;
    train::RunTraining(v, root / "vc");
    return TreeHashes(root);
  };
  // Checkpoints echo their config, paths included, so both runs use the same
  // directory.
  const auto a = pipeline(ws.dir() / "rerun");
  const auto b = pipeline(ws.dir() / "rerun");
  if (a != b) problems.push_back("rerun output hashes differ");
  std::string detail = Fmt("round trip of %d parameters %s; corrupt checkpoints detected %d/%d; rerun of %zu files %s",
                           params, values_equal ? "bit-exact" : "differs", detected, trials, a.size(),
                           a == b ? "identical" : "differs");
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria on the synthetic desk corpus"};
  std::string work = "acceptance_work";
  bool fresh = false;
  std::vector<int> only;
  app.add_option("--work", work, "Work directory for the corpus and trained checkpoints");
  app.add_flag("--fresh", fresh, "Ignore previously trained checkpoints");
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(work);
  Workspace ws(fs::absolute(work), fresh);
  Runner runner;
  runner.only.insert(only.begin(), only.end());
  std::printf("acceptance: corpus %d x %d seed %llu, training seed %llu, evaluation seed %llu, work %s\n", kSpeakers,
              kUtterances, static_cast<unsigned long long>(kCorpusSeed), static_cast<unsigned long long>(kTrainSeed),
              static_cast<unsigned long long>(kEvalSeed), fs::absolute(work).string().c_str());
  std::fflush(stdout);

  runner.Run(1, "gradient suite", GradientSuite);
  runner.Run(2, "closed-form losses", ClosedForms);
  runner.Run(3, "quantizer oracle", QuantizeOracle);
  runner.Run(4, "signal laws", SignalLaws);
  runner.Run(5, "prosody ranks", [&] { return ProsodyRanks(ws); });
  runner.Run(6, "disentanglement", [&] { return DisentanglementCheck(ws); });
  runner.Run(7, "cpc sanity", [&] { return CpcSanity(ws); });
  runner.Run(8, "vc desk run", [&] { return VcDeskRun(ws); });
  runner.Run(9, "prosody transfer", [&] { return ProsodyTransfer(ws); });
  runner.Run(10, "speaker similarity proxy", [&] { return SimilarityCheck(ws); });
  runner.Run(11, "engineering", [&] { return Engineering(ws); });

  std::printf("acceptance: %d of %d criteria passed\n", runner.ran - runner.failures, runner.ran);
  return runner.failures == 0 ? 0 : 1;
}
