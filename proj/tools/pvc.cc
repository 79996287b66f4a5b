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

// Command-line front end: corpus generation, both training stages,
// conversion, evaluation and report export.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pvc/base/error.h"
#include "pvc/base/hash.h"
#include "pvc/base/io.h"
#include "pvc/corpus/generate.h"
#include "pvc/eval/report.h"
#include "pvc/eval/run.h"
#include "pvc/signal/griffin_lim.h"
#include "pvc/signal/mel.h"
#include "pvc/signal/wav.h"
#include "pvc/train/checkpoint.h"
#include "pvc/train/run.h"
#include "pvc/vc/loss.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace pvc {
namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string source, target;
  std::string profile;
  std::string checkpoint;
  std::string in;
  std::string ingest;
  std::string speaker_map;
  int speakers = 20;
  int utterances = 30;
  int griffin_lim_iterations = 60;
};

/// Provenance collected while a command runs; written as run.json.
struct Record {
  std::string command;
  ordered_json arguments = ordered_json::object();
  ordered_json config;
  ordered_json seeds = ordered_json::object();
  ordered_json inputs = ordered_json::object();

  void Input(const std::string& path) {
    if (!path.empty() && fs::is_regular_file(path)) inputs[path] = Sha256File(path);
  }
};

ordered_json OutputHashes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (!e.is_regular_file()) continue;
      const std::string rel = fs::relative(e.path(), dir).generic_string();
      if (rel == "run.json" || rel == "error.json") continue;
      files[rel] = Sha256File(e.path());
    }
  }
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : files) j[k] = v;
  return j;
}

void WriteRunJson(const fs::path& out, const Record& r, const std::string& status) {
  ordered_json j;
  j["command"] = r.command;
  j["status"] = status;
  j["arguments"] = r.arguments;
  j["config"] = r.config;
  j["seeds"] = r.seeds;
  j["inputs"] = r.inputs;
  j["outputs"] = OutputHashes(out);
  WriteFileBytes(out / "run.json", j.dump(2) + "\n");
}

// ---- commands ----

void GenCorpus(const Options& o, Record& r) {
  const std::uint64_t seed = o.seed.value_or(0);
  r.seeds["corpus"] = seed;
  if (!o.ingest.empty()) {
    r.arguments["ingest"] = o.ingest;
    std::map<std::string, std::string> map;
    if (!o.speaker_map.empty()) {
      r.Input(o.speaker_map);
      map = corpus::ReadSpeakerMap(o.speaker_map);
    }
    auto m = corpus::IngestWavDir(o.ingest, map);
    // Paths stay relative to the ingested directory, written absolute.
    for (auto& e : m.entries) e.path = fs::absolute(m.Resolve(e)).lexically_normal().string();
    m.root = o.out;
    corpus::WriteManifest(fs::path(o.out) / "manifest.jsonl", m);
    return;
  }
  r.arguments["speakers"] = o.speakers;
  r.arguments["utterances"] = o.utterances;
  corpus::GenCorpus(o.speakers, o.utterances, seed, o.out);
}

train::TrainConfig ResolveTrainConfig(const Options& o, train::Stage stage) {
  nlohmann::json j = train::ReadConfigJson(o.config);
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("stage") && j["stage"] != train::StageName(stage)) {
    throw ConfigError(std::string("config stage is ") + j["stage"].dump() + " but this command trains stage \"" +
                      train::StageName(stage) + "\"");
  }
  j["stage"] = train::StageName(stage);
  if (!o.profile.empty()) j["profile"] = o.profile;
  if (o.seed) j["seed"] = *o.seed;
  return train::ConfigFromJson(j);
}

void Train(const Options& o, Record& r, train::Stage stage) {
  const auto config = ResolveTrainConfig(o, stage);
  r.config = train::ConfigToJson(config);
  r.seeds["train"] = config.seed;
  r.Input(o.config);
  r.Input(config.manifest);
  r.Input(config.prosody_checkpoint);
  train::RunTraining(config, o.out, [](const train::MetricsRow& row) {
    std::fprintf(stderr, "%s\n", train::FormatMetricsRow(row).c_str());
  });
}

void Convert(const Options& o, Record& r) {
  r.arguments["checkpoint"] = o.checkpoint;
  r.arguments["source"] = o.source;
  r.arguments["target"] = o.target;
  r.arguments["griffin_lim_iterations"] = o.griffin_lim_iterations;
  const std::uint64_t seed = o.seed.value_or(0);
  r.seeds["griffin_lim"] = seed;
  for (const auto* p : {&o.checkpoint, &o.source, &o.target}) {
    if (!fs::exists(*p)) throw ConfigError("input not found: " + *p);
    r.Input(*p);
  }
  auto b = train::LoadVc(o.checkpoint);
  r.config = train::ConfigToJson(b.config);
  const auto& mc = b.config.mel;
  const MatrixF src = signal::ComputeMelSpectrogram(signal::ReadWav(o.source), mc).frames.cast<float>();
  const MatrixF tgt = signal::ComputeMelSpectrogram(signal::ReadWav(o.target), mc).frames.cast<float>();
  const MatrixF out = vc::Convert(src, tgt, *b.prosody, *b.vc);

  train::Checkpoint mel;
  mel.header["kind"] = "mel";
  mel.header["sample_rate"] = mc.sample_rate;
  mel.header["n_mels"] = mc.n_mels;
  mel.header["window"] = mc.window;
  mel.header["hop"] = mc.hop;
  mel.header["fmin"] = mc.fmin;
  mel.header["fmax"] = mc.fmax;
  mel.header["log_floor"] = mc.log_floor;
  mel.Add(train::MatrixTensor("mel", out));
  train::SaveCheckpoint(fs::path(o.out) / "converted.mel", mel, train::kMelMagic);

  signal::MelSpectrogram spec;
  spec.frames = out.cast<double>();
  spec.hop = mc.hop;
  spec.window = mc.window;
  signal::GriffinLimOptions gl;
  gl.iterations = o.griffin_lim_iterations;
  gl.seed = seed;
  signal::WriteWav(fs::path(o.out) / "converted.wav", signal::GriffinLim(spec, gl, mc));
}

void Eval(const Options& o, Record& r) {
  nlohmann::json j = train::ReadConfigJson(o.config);
  if (o.seed && j.is_object()) j["seed"] = *o.seed;
  const auto config = eval::EvalConfigFromJson(j);
  r.config = eval::EvalConfigToJson(config);
  r.seeds["eval"] = config.seed;
  r.Input(o.config);
  r.Input(config.manifest);
  r.Input(config.vc_checkpoint);
  r.Input(config.prosody_checkpoint);
  r.Input(config.map_checkpoint);
  for (const auto& [label, path] : config.ablations) r.Input(path);
  const auto run = eval::RunEval(config, o.out);
  std::cout << run.report.dump(2) << "\n";
}

std::string Num(const ordered_json& v) { return v.is_number() ? eval::FormatNumber(v.get<double>()) : "n/a"; }

void ExportReport(const Options& o, Record& r) {
  const fs::path in = o.in.empty() ? fs::path(o.out) : fs::path(o.in);
  const fs::path report_path = in / "report.json";
  if (!fs::exists(report_path)) throw ConfigError("no report.json in " + in.string());
  r.arguments["in"] = in.string();
  r.Input(report_path.string());
  ordered_json rep;
  try {
    rep = ordered_json::parse(ReadFileBytes(report_path));
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError("report.json is not valid JSON: " + std::string(e.what()));
  }
  std::string md = "# Evaluation summary\n\n";
  if (rep.contains("provenance")) {
    const auto& p = rep["provenance"];
    md += "checkpoint sha256 `" + p.value("checkpoint_sha256", "") + "`, config sha256 `" +
          p.value("config_sha256", "") + "`, seed " + std::to_string(p.value("seed", 0)) + "\n\n";
  }
  if (rep.contains("rank_density")) {
    const auto& s = rep["rank_density"];
    md += "## Rank scores on unseen speakers\n\n| statistic | value |\n|---|---|\n";
    for (const char* k : {"utterances", "spearman_rp_f0", "spearman_rv_rms", "spearman_rp_rms", "spearman_rv_f0",
                          "mean_rp_low_pitch", "mean_rp_high_pitch", "mean_rv_low_pitch", "mean_rv_high_pitch",
                          "pooled_std_rp", "pooled_std_rv"}) {
      if (s.contains(k)) md += std::string("| ") + k + " | " + Num(s[k]) + " |\n";
    }
    md += "\n";
  }
  if (rep.contains("prosody_map")) {
    md += "## Two-dimensional prosody map\n\nwithin/between variance ratio: pitch " +
          Num(rep["prosody_map"]["variance_ratio_p"]) + ", volume " + Num(rep["prosody_map"]["variance_ratio_v"]) +
          "\n\n";
  }
  if (rep.contains("conversion_kl")) {
    md += "## Conversion KL divergence (converted vs target / vs source)\n\n"
          "| model | direction | pairs | log-F0 KL target | log-F0 KL source | RMS KL target | RMS KL source | "
          "F0 success | RMS success |\n|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& [model, k] : rep["conversion_kl"].items()) {
      for (const auto& d : k["directions"]) {
        md += "| " + model + " | " + d.value("direction", "") + " | " + std::to_string(d.value("pairs", 0)) + " | " +
              Num(d["median_kl_f0_target"]) + " | " + Num(d["median_kl_f0_source"]) + " | " +
              Num(d["median_kl_rms_target"]) + " | " + Num(d["median_kl_rms_source"]) + " | " +
              Num(d["f0_success_rate"]) + " | " + Num(d["rms_success_rate"]) + " |\n";
      }
    }
    md += "\n";
  }
  if (rep.contains("speaker_similarity")) {
    md += "## Speaker similarity (proxy: cosine of the model's speaker embeddings)\n\n"
          "| direction | conversions | excluded | success rate | mean cos target | mean cos source |\n"
          "|---|---|---|---|---|---|\n";
    for (const auto& d : rep["speaker_similarity"]["directions"]) {
      md += "| " + d.value("direction", "") + " | " + std::to_string(d.value("conversions", 0)) + " | " +
            std::to_string(d.value("excluded", 0)) + " | " + Num(d["success_rate"]) + " | " +
            Num(d["mean_cos_target"]) + " | " + Num(d["mean_cos_source"]) + " |\n";
    }
  }
  WriteFileBytes(fs::path(o.out) / "summary.md", md);
}

}  // namespace
}  // namespace pvc

int main(int argc, char** argv) {
  using namespace pvc;
  CLI::App app{"Prosody-aware voice conversion toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough(false);
  Options o;

  const auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "JSON configuration file");
    if (config_required) c->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Seed (overrides the configuration)");
    sub->add_option("--out", o.out, "Output directory")->required();
  };

  auto* gen = app.add_subcommand("gen-corpus", "Render the synthetic corpus or ingest a WAV directory");
  common(gen, false);
  gen->add_option("--speakers", o.speakers, "Number of synthetic speakers")->check(CLI::PositiveNumber);
  gen->add_option("--utterances", o.utterances, "Utterances per speaker")->check(CLI::PositiveNumber);
  gen->add_option("--ingest", o.ingest, "Build a manifest from WAV files under this directory")
      ->check(CLI::ExistingDirectory);
  gen->add_option("--speaker-map", o.speaker_map, "JSON map from file to speaker id (with --ingest)")
      ->check(CLI::ExistingFile);

  auto* tp = app.add_subcommand("train-prosody", "Train the prosody encoder");
  common(tp, true);
  tp->add_option("--profile", o.profile, "Hyper-parameter profile")->check(CLI::IsMember({"paper", "desk"}));

  auto* tv = app.add_subcommand("train-vc", "Train the conversion model against a frozen prosody encoder");
  common(tv, true);
  tv->add_option("--profile", o.profile, "Hyper-parameter profile")->check(CLI::IsMember({"paper", "desk"}));

  auto* cv = app.add_subcommand("convert", "Convert one utterance; writes converted.wav and converted.mel");
  common(cv, false);
  cv->add_option("--checkpoint", o.checkpoint, "Conversion-model checkpoint")->required();
  cv->add_option("--source", o.source, "Source WAV (content)")->required();
  cv->add_option("--target", o.target, "Target WAV (speaker and prosody)")->required();
  cv->add_option("--griffin-lim-iterations", o.griffin_lim_iterations, "Phase-retrieval iterations")
      ->check(CLI::PositiveNumber);

  auto* ev = app.add_subcommand("eval", "Run the evaluation protocol");
  common(ev, true);

  auto* ex = app.add_subcommand("export-report", "Summarize an evaluation report as markdown tables");
  common(ex, false);
  ex->add_option("--in", o.in, "Directory holding report.json (default: --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Record record;
  record.command = sub->get_name();
  for (const auto* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    record.arguments[opt->get_name()] = opt->as<std::string>();
  }
  const fs::path out(o.out);
  int code = 0;
  std::string error_type, message;
  try {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory " + o.out);
    if (sub == gen) {
      GenCorpus(o, record);
    } else if (sub == tp) {
      Train(o, record, train::Stage::kProsody);
    } else if (sub == tv) {
      Train(o, record, train::Stage::kVc);
    } else if (sub == cv) {
      Convert(o, record);
    } else if (sub == ev) {
      Eval(o, record);
    } else {
      ExportReport(o, record);
    }
  } catch (const ConfigError& e) {
    code = kExitUsage;
    error_type = "ConfigError";
    message = e.what();
  } catch (const IntegrityError& e) {
    code = kExitRuntime;
    error_type = "IntegrityError";
    message = e.what();
  } catch (const IoError& e) {
    code = kExitRuntime;
    error_type = "IoError";
    message = e.what();
  } catch (const NumericError& e) {
    code = kExitRuntime;
    error_type = "NumericError";
    message = e.what();
  } catch (const InvalidArgument& e) {
    code = kExitRuntime;
    error_type = "InvalidArgument";
    message = e.what();
  } catch (const std::exception& e) {
    code = kExitRuntime;
    error_type = "Error";
    message = e.what();
  }
  try {
    if (fs::is_directory(out)) {
      if (code != 0) {
        ordered_json err;
        err["command"] = record.command;
        err["type"] = error_type;
        err["message"] = message;
        err["exit_code"] = code;
        WriteFileBytes(out / "error.json", err.dump(2) + "\n");
      } else {
        fs::remove(out / "error.json");
      }
      WriteRunJson(out, record, code == 0 ? "ok" : "failed");
    }
  } catch (const std::exception& e) {
    std::cerr << "warning: could not write provenance: " << e.what() << "\n";
  }
  if (code != 0) std::cerr << "error: " << message << "\n";
  return code;
}
