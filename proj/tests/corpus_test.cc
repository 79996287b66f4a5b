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

#include <cmath>
#include <set>

#include "doctest.h"
#include "pvc/base/error.h"
#include "pvc/base/io.h"
#include "pvc/corpus/batch.h"
#include "pvc/corpus/generate.h"
#include "pvc/corpus/pairs.h"
#include "pvc/signal/pitch.h"
#include "pvc/signal/wav.h"
#include "test_util.h"

namespace pvc::corpus {

TEST_CASE("rendered pitch matches the speaker") {
  SyntheticSpeaker spk;
  spk.id = "s";
  spk.base_f0 = 120.0;
  spk.f0_spread = 0.0;
  const std::vector<int> content{0, 5, 9, 14, 3, 7};
  const auto u = RenderUtterance(spk, content, 11);
  CHECK(std::abs(signal::MedianVoicedF0(signal::EstimateF0(u.waveform)) - 120.0) / 120.0 < 0.02);
  CHECK(std::abs(u.f0_mean_hz - 120.0) / 120.0 < 0.02);
  const std::size_t segment = 5513, fade = 221;
  CHECK(u.waveform.samples.size() == content.size() * segment + fade);
  CHECK(u.rms == doctest::Approx(signal::Rms(u.waveform.samples)).epsilon(1e-12));
}

TEST_CASE("rendered level follows base gain") {
  SyntheticSpeaker a;
  a.base_f0 = 200.0;
  a.base_gain_db = -6.0;
  SyntheticSpeaker b = a;
  b.base_gain_db = -12.0;
  const std::vector<int> content{1, 2, 3, 4, 5};
  const double ratio = RenderUtterance(a, content, 5).rms / RenderUtterance(b, content, 5).rms;
  CHECK(std::abs(ratio / std::pow(10.0, 0.3) - 1.0) < 0.02);
}

TEST_CASE("rendering is deterministic and validates tokens") {
  const SyntheticSpeaker spk = DrawSpeaker(3, 9);
  const std::vector<int> content{4, 4, 8, 15};
  CHECK(RenderUtterance(spk, content, 1).waveform.samples ==
        RenderUtterance(spk, content, 1).waveform.samples);
  const std::vector<int> bad{1, 16};
  CHECK_THROWS_AS(RenderUtterance(spk, bad, 1), InvalidArgument);
}

TEST_CASE("speaker draws respect the group bands") {
  std::set<double> low, high;
  for (int i = 0; i < 40; ++i) {
    const auto s = DrawSpeaker(i, 2);
    CHECK(s.base_f0 >= 80.0);
    CHECK(s.base_f0 <= 400.0);
    CHECK(s.base_gain_db >= -12.0);
    CHECK(s.base_gain_db <= 0.0);
    if (s.group == PitchGroup::kLow) {
      CHECK(s.base_f0 < kGroupBoundaryHz);
    } else {
      CHECK(s.base_f0 >= kGroupBoundaryHz);
    }
  }
}

TEST_CASE("split rule") {
  CHECK(UnseenCount(20) == 4);
  CHECK(UnseenCount(2) == 1);
  CHECK(UnseenCount(10) == 2);
  CHECK(UnseenCount(11) == 3);
}

TEST_CASE("gen corpus layout, ground truth and determinism") {
  const auto dir = pvc::testing::ScratchDir("corpus_a");
  const auto m = GenCorpus(4, 3, 21, dir);
  CHECK(m.entries.size() == 12);
  CHECK(m.Speakers(Split::kSeen).size() == 3);
  CHECK(m.Speakers(Split::kUnseen).size() == 1);
  for (const auto& e : m.entries) {
    const auto w = signal::ReadWav(m.Resolve(e));
    const double est = signal::MedianVoicedF0(signal::EstimateF0(w));
    CHECK(std::abs(est - e.f0_mean_hz) / e.f0_mean_hz <= 0.02);
    CHECK(e.content.size() >= 4);
  }
  const auto back = ReadManifest(dir / "manifest.jsonl");
  CHECK(SerializeManifest(back) == SerializeManifest(m));

  const auto dir2 = pvc::testing::ScratchDir("corpus_b");
  GenCorpus(4, 3, 21, dir2);
  CHECK(ReadFileBytes(dir / "manifest.jsonl") == ReadFileBytes(dir2 / "manifest.jsonl"));
  CHECK(ReadFileBytes(dir / "speakers.json") == ReadFileBytes(dir2 / "speakers.json"));
  for (const auto& e : m.entries) CHECK(ReadFileBytes(dir / e.path) == ReadFileBytes(dir2 / e.path));

  const auto two = GenCorpus(2, 1, 1, pvc::testing::ScratchDir("corpus_c"));
  CHECK(two.Speakers(Split::kSeen).size() == 1);
  CHECK(two.Speakers(Split::kUnseen).size() == 1);
}

TEST_CASE("gen corpus reports unwritable directories") {
  const auto dir = pvc::testing::ScratchDir("corpus_ro");
  WriteFileBytes(dir / "file", "x");
  CHECK_THROWS_AS(GenCorpus(2, 1, 1, dir / "file" / "sub"), IoError);
}

TEST_CASE("manifest rejects malformed records") {
  const auto dir = pvc::testing::ScratchDir("manifest_bad");
  WriteFileBytes(dir / "m.jsonl", "{\"path\": \"a.wav\"}\n");
  CHECK_THROWS_AS(ReadManifest(dir / "m.jsonl"), ConfigError);
  CHECK_THROWS_AS(ReadManifest(dir / "none.jsonl"), ConfigError);
}

TEST_CASE("prosody pair labels") {
  const auto w = pvc::testing::HarmonicTone(150.0, 0.5, 0.05);
  auto p = MakeProsodyPair(w, {signal::Prosody::kPitch, 0.3});
  CHECK(p.tau_p == 0.3);
  CHECK(p.tau_v == 0.5);
  p = MakeProsodyPair(w, {signal::Prosody::kVolume, 0.8});
  CHECK(p.tau_p == 0.5);
  CHECK(p.tau_v == 0.8);
  p = MakeProsodyPair(w, {signal::Prosody::kVolume, 0.5});
  CHECK(p.mel_i.frames == p.mel_j.frames);
  CHECK(p.tau_p == 0.5);
  CHECK(p.tau_v == 0.5);

  Rng rng(4);
  int exclusive = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto spec = DrawAugmentation(rng);
    CHECK(spec.tau >= kTauMin);
    CHECK(spec.tau <= kTauMax);
    const auto [tp, tv] = PairLabels(spec);
    exclusive += (tp == 0.5) != (tv == 0.5);
  }
  CHECK(exclusive == 10000);
}

TEST_CASE("ingest a directory of wav files") {
  const auto dir = pvc::testing::ScratchDir("ingest");
  CHECK_THROWS_AS(IngestWavDir(dir), InvalidArgument);
  for (int s = 0; s < 2; ++s) {
    for (int u = 0; u < 3; ++u) {
      const double f0 = s == 0 ? 110.0 : 240.0;
      const int rate = u == 0 ? 48000 : 22050;
      const auto w = pvc::testing::HarmonicTone(f0 * (1.0 + 0.01 * u), 0.5, 0.1, rate);
      WriteFileBytes(dir / ("spk" + std::to_string(s)) / ("u" + std::to_string(u) + ".wav"),
                     signal::EncodeWav(w));
    }
  }
  WriteFileBytes(dir / "spk0" / "broken.wav", "not a wav");
  const auto m = IngestWavDir(dir);
  CHECK(m.entries.size() == 6);
  CHECK(m.Speakers().size() == 2);
  CHECK(m.GroupOf("spk0") == PitchGroup::kLow);
  CHECK(m.GroupOf("spk1") == PitchGroup::kHigh);
  CHECK(m.Speakers(Split::kUnseen).size() == 1);
  const auto w = signal::ReadWav(m.Resolve(m.entries[0]));
  CHECK(w.sample_rate == 22050);
  CHECK(w.samples.size() == 11025);

  const auto remapped = IngestWavDir(dir, {{"spk0/u1.wav", "other"}});
  CHECK(remapped.Speakers().size() == 3);
}

TEST_CASE("batch iterator shapes, padding and determinism") {
  const auto dir = pvc::testing::ScratchDir("batches");
  const auto m = GenCorpus(2, 2, 3, dir);
  UtteranceStore store(m, {});
  BatchIterator a(store, 32, 128, 77);
  BatchIterator b(store, 32, 128, 77);
  const auto ba = a.NextMelBatch();
  const auto bb = b.NextMelBatch();
  REQUIRE(ba.mels.size() == 32);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(ba.mels[i].rows() == 128);
    CHECK(ba.mels[i].cols() == 80);
    CHECK(ba.mels[i] == bb.mels[i]);
  }
  const auto pa = a.NextPairBatch();
  const auto pb = b.NextPairBatch();
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(pa.mel_i[i].rows() == 128);
    CHECK(pa.mel_j[i].rows() == 128);
    CHECK(pa.mel_j[i] == pb.mel_j[i]);
    CHECK((pa.tau_p[i] == 0.5) != (pa.tau_v[i] == 0.5));
  }

  MatrixF short_mel = MatrixF::Random(100, 80);
  const MatrixF padded = CropFrames(short_mel, 0, 128);
  CHECK(padded.rows() == 128);
  CHECK(padded.row(127) == short_mel.row(99));
  CHECK(padded.topRows(100) == short_mel);
}

TEST_CASE("short utterances are padded and flagged") {
  const auto dir = pvc::testing::ScratchDir("short");
  CorpusOptions opt;
  opt.min_tokens = 4;
  opt.max_tokens = 4;
  const auto m = GenCorpus(1, 1, 3, dir, opt);
  UtteranceStore store(m, {});
  REQUIRE(store[0].mel.rows() < 200);
  BatchIterator it(store, 2, 200, 1);
  const auto mb = it.NextMelBatch();
  CHECK(mb.padded[0]);
  CHECK(mb.mels[0].rows() == 200);
  const auto pb = it.NextPairBatch();
  CHECK(pb.padded[0]);
  CHECK(pb.mel_j[0].rows() == 200);
}

}  // namespace pvc::corpus
