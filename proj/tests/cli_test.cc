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

#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "pvc/base/io.h"
#include "pvc/train/checkpoint.h"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;

int Run(const std::string& args, const fs::path& cwd) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" PVC_CLI_PATH "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void Write(const fs::path& p, const std::string& text) { pvc::WriteFileBytes(p, text); }

nlohmann::json Json(const fs::path& p) { return nlohmann::json::parse(pvc::ReadFileBytes(p)); }

const fs::path& Workspace() {
  static const fs::path dir = [] {
    const auto d = pvc::testing::ScratchDir("cli");
    REQUIRE(Run("gen-corpus --out corp --speakers 20 --utterances 2 --seed 7", d) == 0);
    Write(d / "pros.json",
          R"({"stage":"prosody","manifest":"corp/manifest.jsonl","iterations":6,"batch_size":2,)"
          R"("crop_frames":32,"d_psi":4,"prosody_channels":8,"metrics_every":3})");
    Write(d / "vc.json",
          R"({"stage":"vc","manifest":"corp/manifest.jsonl","prosody_checkpoint":"p/prosody.ckpt",)"
          R"("iterations":6,"batch_size":2,"crop_frames":32,"d":8,"d_psi":4,"V":8,"decoder_channels":8,)"
          R"("metrics_every":3})");
    REQUIRE(Run("train-prosody --config pros.json --out p --seed 7", d) == 0);
    REQUIRE(Run("train-vc --config vc.json --out v --seed 7", d) == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  const auto d = pvc::testing::ScratchDir("cli_usage");
  CHECK(Run("", d) == 2);
  CHECK(Run("frobnicate", d) == 2);
  CHECK(Run("train-prosody --out x", d) == 2);                       // --config missing
  CHECK(Run("train-prosody --config missing.json --out x", d) == 2);  // unreadable config
  CHECK(Run("gen-corpus --out x --bogus-flag 1", d) == 2);
  CHECK(Run("--help", d) == 0);
}

TEST_CASE("gen-corpus writes the corpus and a provenance record") {
  const auto& d = Workspace();
  CHECK(fs::exists(d / "corp/manifest.jsonl"));
  CHECK(fs::exists(d / "corp/speakers.json"));
  const auto run = Json(d / "corp/run.json");
  CHECK(run["command"] == "gen-corpus");
  CHECK(run["status"] == "ok");
  CHECK(run["seeds"]["corpus"] == 7);
  CHECK(run["outputs"].contains("manifest.jsonl"));
}

TEST_CASE("seeded training reruns reproduce identical outputs") {
  const auto& d = Workspace();
  REQUIRE(Run("train-prosody --config pros.json --out p_again --seed 7", d) == 0);
  const auto a = Json(d / "p/run.json"), b = Json(d / "p_again/run.json");
  CHECK(a["outputs"] == b["outputs"]);
  CHECK(a["outputs"].contains("prosody.ckpt"));
  CHECK(a["config"]["seed"] == 7);
  CHECK(a["inputs"].contains("corp/manifest.jsonl"));

  REQUIRE(Run("train-prosody --config pros.json --out p_other --seed 8", d) == 0);
  CHECK(Json(d / "p_other/run.json")["outputs"]["prosody.ckpt"] != a["outputs"]["prosody.ckpt"]);
}

TEST_CASE("convert writes converted.wav and converted.mel") {
  const auto& d = Workspace();
  REQUIRE(Run("convert --checkpoint v/vc.ckpt --source corp/wav/spk016/spk016_u000.wav "
              "--target corp/wav/spk017/spk017_u001.wav --out c --griffin-lim-iterations 4",
              d) == 0);
  CHECK(fs::file_size(d / "c/converted.wav") > 44);
  const auto mel = pvc::train::LoadCheckpoint(d / "c/converted.mel", pvc::train::kMelMagic);
  CHECK(mel.header["kind"] == "mel");
  CHECK(mel.Get("mel").dims.size() == 2);
  CHECK(mel.Get("mel").dims[1] == 80);
  CHECK_THROWS(pvc::train::LoadCheckpoint(d / "c/converted.mel"));  // checkpoint magic differs
}

TEST_CASE("runtime and configuration failures write error.json") {
  const auto& d = Workspace();
  fs::copy_file(d / "v/vc.ckpt", d / "broken.ckpt", fs::copy_options::overwrite_existing);
  {
    std::fstream f(d / "broken.ckpt", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('\x5a');
  }
  CHECK(Run("convert --checkpoint broken.ckpt --source corp/wav/spk016/spk016_u000.wav "
            "--target corp/wav/spk017/spk017_u001.wav --out bad_convert",
            d) == 1);
  const auto err = Json(d / "bad_convert/error.json");
  CHECK(err["type"] == "IntegrityError");
  CHECK(err["exit_code"] == 1);
  CHECK(Json(d / "bad_convert/run.json")["status"] == "failed");

  Write(d / "nomanifest.json", R"({"stage":"prosody","manifest":"nope.jsonl"})");
  CHECK(Run("train-prosody --config nomanifest.json --out bad_train", d) == 2);
  CHECK(Json(d / "bad_train/error.json")["type"] == "ConfigError");
  CHECK(!fs::exists(d / "bad_train/prosody.ckpt"));

  CHECK(Run("train-vc --config pros.json --out wrong_stage", d) == 2);
}

TEST_CASE("eval and export-report") {
  const auto& d = Workspace();
  Write(d / "ev.json",
        R"({"manifest":"corp/manifest.jsonl","vc_checkpoint":"v/vc.ckpt","pairs_per_direction":1,)"
        R"("utterances":1,"griffin_lim_iterations":4,"seed":3})");
  REQUIRE(Run("eval --config ev.json --out e", d) == 0);
  for (const char* f : {"rank_density.csv", "conversion_kl.csv", "speaker_similarity.csv", "report.json"}) {
    CHECK(fs::exists(d / "e" / f));
  }
  const auto first = Json(d / "e/run.json")["outputs"];
  REQUIRE(Run("eval --config ev.json --out e", d) == 0);
  CHECK(Json(d / "e/run.json")["outputs"] == first);
  const auto report = Json(d / "e/report.json");
  CHECK(report["provenance"]["seed"] == 3);
  CHECK(report["provenance"]["checkpoint_sha256"].get<std::string>().size() == 64);

  REQUIRE(Run("export-report --in e --out x", d) == 0);
  const std::string md = pvc::ReadFileBytes(d / "x/summary.md");
  CHECK(md.find("Conversion KL divergence") != std::string::npos);
  CHECK(md.find("proxy") != std::string::npos);
}
