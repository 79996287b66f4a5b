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
#include <numbers>

#include "doctest.h"
#include "pvc/base/error.h"
#include "pvc/base/io.h"
#include "pvc/base/rng.h"
#include "pvc/signal/augment.h"
#include "pvc/signal/griffin_lim.h"
#include "pvc/signal/mel.h"
#include "pvc/signal/pitch.h"
#include "pvc/signal/resample.h"
#include "pvc/signal/stft.h"
#include "pvc/signal/wav.h"
#include "test_util.h"

namespace pvc::signal {

using pvc::testing::HarmonicTone;
using pvc::testing::Tone;

TEST_CASE("stft peak bin of a 440 Hz sine") {
  const auto w = Tone(440.0, 0.5);
  const ComplexMatrix s = Stft(w.samples, 1024, 128);
  for (int t = 0; t < s.rows(); ++t) {
    Eigen::Index best = 0;
    s.row(t).cwiseAbs().maxCoeff(&best);
    CHECK(best == 20);
  }
}

TEST_CASE("stft framing and zero input") {
  CHECK(NumFrames(22050, 1024, 128) == 165);
  CHECK(Stft(std::vector<double>(22050, 0.0), 1024, 128).rows() == 165);
  CHECK(Stft(std::vector<double>(4096, 0.0), 1024, 128).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(Stft(std::vector<double>(1023, 0.0), 1024, 128), InvalidArgument);
}

TEST_CASE("stft frame energy matches windowed frame energy") {
  Rng rng(3);
  std::normal_distribution<double> normal(0.0, 0.3);
  std::vector<double> x(8192);
  for (double& v : x) v = normal(rng);
  const int n = 1024;
  const ComplexMatrix s = Stft(x, n, 256);
  const auto win = HannWindow(n);
  for (int t = 0; t < s.rows(); ++t) {
    double time_energy = 0.0;
    for (int i = 0; i < n; ++i) time_energy += std::pow(x[t * 256 + i] * win[i], 2);
    // One-sided spectrum: interior bins count twice.
    double freq_energy = std::norm(s(t, 0)) + std::norm(s(t, n / 2));
    for (int k = 1; k < n / 2; ++k) freq_energy += 2.0 * std::norm(s(t, k));
    freq_energy /= n;
    CHECK(std::abs(freq_energy - time_energy) <= 1e-6 * time_energy);
  }
}

TEST_CASE("hann window is periodic") {
  const auto w = HannWindow(8);
  CHECK(w[0] == 0.0);
  CHECK(w[4] == doctest::Approx(1.0));
  CHECK(w[2] == doctest::Approx(0.5));
}

TEST_CASE("mel filterbank rows") {
  const MelConfig config;
  const auto& bank = SharedFilterbank(config);
  CHECK(bank.weights().rows() == 80);
  CHECK(bank.weights().cols() == 513);
  CHECK(bank.weights().minCoeff() >= 0.0);
  for (int m = 0; m < 80; ++m) {
    CHECK(bank.weights().row(m).maxCoeff() > 0.0);
    CHECK(bank.weights().row(m).maxCoeff() <= 1.0 + 1e-12);
  }
  CHECK(MelToHz(HzToMel(1234.5)) == doctest::Approx(1234.5).epsilon(1e-12));
}

TEST_CASE("mel spectrogram floor and gain shift") {
  Waveform zero;
  zero.samples.assign(22050, 0.0);
  const auto m0 = ComputeMelSpectrogram(zero);
  CHECK(m0.num_frames() == 165);
  CHECK(m0.num_bins() == 80);
  CHECK((m0.frames.array() == std::log(1e-5)).all());

  const auto w = HarmonicTone(150.0, 0.5);
  Waveform w2 = w;
  for (double& v : w2.samples) v *= 2.0;
  const auto a = ComputeMelSpectrogram(w);
  const auto b = ComputeMelSpectrogram(w2);
  const double floor = std::log(1e-5);
  int checked = 0;
  for (int t = 0; t < a.num_frames(); ++t) {
    for (int k = 0; k < 80; ++k) {
      if (a.frames(t, k) > floor + 1e-9) {
        CHECK(b.frames(t, k) - a.frames(t, k) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
  CHECK_THROWS_AS(ComputeMelSpectrogram(Tone(100.0, 0.01)), InvalidArgument);
}

TEST_CASE("griffin-lim recovers the pitch of a tone") {
  const auto w = Tone(220.0, 1.0, 0.3);
  const auto mel = ComputeMelSpectrogram(w);
  std::vector<double> inconsistency;
  const auto y = GriffinLim(mel, {}, {}, &inconsistency);
  const double f0 = MedianVoicedF0(EstimateF0(y));
  CHECK(std::abs(f0 - 220.0) / 220.0 < 0.02);
  REQUIRE(inconsistency.size() == 60);
  for (std::size_t i = 1; i < inconsistency.size(); ++i) {
    CHECK(inconsistency[i] <= inconsistency[i - 1] + 1e-9);
  }
}

TEST_CASE("griffin-lim error shrinks with iterations") {
  const auto w = HarmonicTone(180.0, 0.6);
  const auto mel = ComputeMelSpectrogram(w);
  auto l1 = [&](int iters) {
    GriffinLimOptions opt;
    opt.iterations = iters;
    const auto y = GriffinLim(mel, opt);
    const auto back = ComputeMelSpectrogram(y);
    const int t = std::min(back.num_frames(), mel.num_frames());
    return (back.frames.topRows(t) - mel.frames.topRows(t)).cwiseAbs().mean();
  };
  CHECK(l1(60) <= l1(1));
}

TEST_CASE("griffin-lim of an all-floor mel is near silent") {
  MelSpectrogram mel;
  mel.frames = MatrixD::Constant(100, 80, std::log(1e-5));
  const auto y = GriffinLim(mel);
  CHECK(Rms(y.samples) < 1e-3);
}

TEST_CASE("pitch shift law on harmonic tones") {
  const auto w = HarmonicTone(200.0, 1.0);
  const double f_in = MedianVoicedF0(EstimateF0(w));
  for (int i = 1; i <= 9; ++i) {
    const double tau = i / 10.0;
    const auto y = TransformPitch(w, tau);
    CHECK(y.samples.size() == w.samples.size());
    const double ratio = MedianVoicedF0(EstimateF0(y)) / f_in;
    const double expected = std::pow(2.0, 4.0 * (2.0 * tau - 1.0) / 12.0);
    CHECK(std::abs(ratio - expected) / expected < 0.02);
    const double db = 20.0 * std::log10(Median(FrameRms(y)) / Median(FrameRms(w)));
    CHECK(std::abs(db) < 1.0);
  }
}

TEST_CASE("tau one half is the identity") {
  const auto w = HarmonicTone(200.0, 0.3);
  CHECK(TransformPitch(w, 0.5).samples == w.samples);
  CHECK(TransformVolume(w, 0.5).samples == w.samples);
  const auto a = EstimateF0(Tone(440.0, 0.5));
  const auto b = EstimateF0(TransformPitch(Tone(440.0, 0.5), 0.5));
  CHECK(a.hz == b.hz);
}

TEST_CASE("volume gain law and clipping") {
  const auto w = HarmonicTone(150.0, 0.5, 0.05);
  for (double tau : {0.1, 0.3, 0.75, 0.9}) {
    const auto y = TransformVolume(w, tau);
    const double gain = std::pow(10.0, 12.0 * (2.0 * tau - 1.0) / 20.0);
    const auto a = FrameRms(w);
    const auto b = FrameRms(y);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(b[i] - a[i] * gain) <= 1e-6 * a[i] * gain);
    const auto fa = EstimateF0(w);
    const auto fb = EstimateF0(y);
    for (std::size_t i = 0; i < fa.size(); ++i) CHECK((fa.hz[i] > 0) == (fb.hz[i] > 0));
  }
  std::size_t clipped = 0;
  const auto loud = TransformVolume(Tone(100.0, 0.1, 0.9), 0.95, &clipped);
  CHECK(clipped > 0);
  CHECK(loud.samples.size() == 2205);
  for (double v : loud.samples) CHECK(std::abs(v) <= 1.0);
}

TEST_CASE("invalid intensity") {
  const auto w = Tone(100.0, 0.1);
  CHECK_THROWS_AS(TransformPitch(w, 1.0), InvalidArgument);
  CHECK_THROWS_AS(TransformVolume(w, 0.0), InvalidArgument);
  CHECK_THROWS_AS(TransformPitch(w, -0.2), InvalidArgument);
}

TEST_CASE("f0 estimates") {
  const auto track = EstimateF0(Tone(220.0, 1.0));
  REQUIRE(!track.Voiced().empty());
  for (double f : track.Voiced()) CHECK(std::abs(f - 220.0) / 220.0 < 0.02);
  const auto silent = EstimateF0(Waveform{std::vector<double>(22050, 0.0), kSampleRate});
  CHECK(silent.Voiced().empty());
  for (double c : track.confidence) {
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("frame rms") {
  Waveform c{std::vector<double>(5000, -0.25), kSampleRate};
  for (double r : FrameRms(c)) CHECK(r == doctest::Approx(0.25).epsilon(1e-12));
  Waveform z{std::vector<double>(5000, 0.0), kSampleRate};
  for (double r : FrameRms(z)) CHECK(r == 0.0);
  const auto w = HarmonicTone(130.0, 0.5, 0.05);
  const auto a = FrameRms(w);
  const auto b = FrameRms(TransformVolume(w, 0.75));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(b[i] - a[i] * std::pow(10.0, 0.3)) <= 1e-6 * b[i]);
  }
}

TEST_CASE("wav round trip and resampling on read") {
  const auto dir = pvc::testing::ScratchDir("wav");
  const auto w = HarmonicTone(200.0, 0.25);
  WriteWav(dir / "a.wav", w);
  const auto back = ReadWav(dir / "a.wav");
  REQUIRE(back.samples.size() == w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(back.samples[i] == static_cast<double>(static_cast<float>(w.samples[i])));
  }

  const auto hi = Tone(300.0, 0.5, 0.5, 48000);
  WriteFileBytes(dir / "b.wav", EncodeWav(hi));
  const auto r = ReadWav(dir / "b.wav");
  CHECK(r.sample_rate == 22050);
  CHECK(r.samples.size() == 11025);
  CHECK(std::abs(MedianVoicedF0(EstimateF0(r)) - 300.0) / 300.0 < 0.02);

  CHECK_THROWS_AS(DecodeWav("RIFF1234WAVEjunk"), IoError);
  CHECK_THROWS_AS(ReadWav(dir / "missing.wav"), IoError);
}

TEST_CASE("resampling at integer step one is exact") {
  std::vector<double> x{0.1, -0.2, 0.3, 0.4};
  CHECK(ResampleByStep(x, 0.0, 1.0, 4) == x);
}

}  // namespace pvc::signal
