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
#include <limits>
#include <random>

#include "doctest.h"
#include "pvc/base/error.h"
#include "pvc/base/rng.h"
#include "pvc/grad/ops.h"
#include "pvc/prosody/loss.h"
#include "pvc/train/adam.h"

namespace pvc::prosody {

namespace {

using M = RowMatrix<double>;

M RandomMel(int frames, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(-2.0, 1.0);
  M m(frames, 80);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

ProsodyConfig Small() {
  ProsodyConfig c;
  c.channels = 16;
  c.dim = 8;
  return c;
}

double BinaryEntropy(double tau) { return -tau * std::log(tau) - (1.0 - tau) * std::log(1.0 - tau); }

double MaxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("pair_probability closed forms") {
  CHECK(PairProbability(1.7, 1.7) == 0.5);
  CHECK(PairProbability(std::log(3.0), 0.0) == doctest::Approx(0.75).epsilon(1e-15));
  const double high = PairProbability(30.0, 0.0);
  CHECK(std::isfinite(high));
  CHECK(high >= 1.0 - 1e-13);
  CHECK(high < 1.0);
  const double low = PairProbability(-800.0, 0.0);
  CHECK(std::isfinite(low));
  CHECK(low >= 0.0);
}

TEST_CASE("pair_probability shift invariance and antisymmetry") {
  Rng rng(11);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const double a = normal(rng), b = normal(rng), c = normal(rng);
    CHECK(std::abs(PairProbability(a + c, b + c) - PairProbability(a, b)) <= 1e-12);
    CHECK(std::abs(PairProbability(a, b) - (1.0 - PairProbability(b, a))) <= 1e-12);
  }
}

TEST_CASE("rank_loss closed forms") {
  CHECK(RankLoss(0.5, 0.5) == doctest::Approx(0.693147180559945).epsilon(1e-14));
  CHECK(RankLoss(0.8, 0.8) == doctest::Approx(0.500402423538188).epsilon(1e-12));
  CHECK(RankLoss(0.8, 0.8) == doctest::Approx(BinaryEntropy(0.8)).epsilon(1e-14));
  // The difference form never passes through a saturated probability.
  CHECK(std::isfinite(RankLossFromDifference(800.0, 0.3)));
  CHECK(RankLossFromDifference(800.0, 0.3) == doctest::Approx(0.7 * 800.0).epsilon(1e-12));
  CHECK(RankLossFromDifference(-800.0, 0.3) == doctest::Approx(0.3 * 800.0).epsilon(1e-12));
}

TEST_CASE("rank_loss is stationary at p = tau") {
  for (double tau : {0.1, 0.3, 0.5, 0.8, 0.95}) {
    const double h = 1e-6;
    const double slope = (RankLoss(tau + h, tau) - RankLoss(tau - h, tau)) / (2.0 * h);
    CHECK(std::abs(slope) <= 1e-6);
  }
}

TEST_CASE("rank_loss floor is the binary entropy of tau") {
  Rng rng(5);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  for (int k = 0; k < 20; ++k) {
    const double tau = unit(rng);
    // Golden-section search over the score difference.
    double lo = -20.0, hi = 20.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
      const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
      if (RankLossFromDifference(a, tau) < RankLossFromDifference(b, tau)) {
        hi = b;
      } else {
        lo = a;
      }
    }
    const double d = 0.5 * (lo + hi);
    CHECK(RankLossFromDifference(d, tau) == doctest::Approx(BinaryEntropy(tau)).epsilon(1e-12));
    CHECK(PairProbability(d, 0.0) == doctest::Approx(tau).epsilon(1e-6));
    for (double off : {-1.0, -0.1, 0.1, 1.0}) CHECK(RankLossFromDifference(d + off, tau) > BinaryEntropy(tau));
  }
}

TEST_CASE("rank_loss gradient on an unaugmented head has the sign of p - 0.5") {
  for (double d : {-2.0, -0.3, 0.4, 3.0}) {
    const double h = 1e-6;
    const double slope = (RankLossFromDifference(d + h, 0.5) - RankLossFromDifference(d - h, 0.5)) / (2.0 * h);
    const double p = PairProbability(d, 0.0);
    CHECK(slope == doctest::Approx(p - 0.5).epsilon(1e-6));
    CHECK((slope > 0.0) == (p > 0.5));
  }
}

TEST_CASE("encode rejects inputs shorter than 16 frames") {
  ProsodyModel<double> model(Small(), 1);
  CHECK_THROWS_AS(EncodeProsody(model, RandomMel(15, 2)), InvalidArgument);
  CHECK_NOTHROW(EncodeProsody(model, RandomMel(16, 2)));
}

TEST_CASE("encode output shapes and full-size width") {
  ProsodyModel<double> model(Small(), 1);
  const auto out = EncodeProsody(model, RandomMel(40, 3));
  CHECK(out.psi_p.size() == 8);
  CHECK(out.psi_v.size() == 8);

  ProsodyConfig full_size;
  full_size.channels = 32;
  full_size.dim = 512;
  ProsodyModel<float> wide(full_size, 1);
  const auto w = EncodeProsody(wide, RandomMel(16, 3).cast<float>().eval());
  CHECK(w.psi_p.size() == 512);
  CHECK(w.psi_v.size() == 512);
}

TEST_CASE("encode is invariant to duplicating the input along time") {
  ProsodyModel<double> model(Small(), 4);
  for (int frames : {64, 128}) {
    const M mel = RandomMel(frames, 9);
    M twice(2 * frames, 80);
    twice << mel, mel;
    const auto a = EncodeProsody(model, mel);
    const auto b = EncodeProsody(model, twice);
    CHECK(MaxAbsDiff(a.psi_p, b.psi_p) <= 1e-4);
    CHECK(MaxAbsDiff(a.psi_v, b.psi_v) <= 1e-4);
  }
}

TEST_CASE("encode is deterministic") {
  ProsodyModel<float> a(Small(), 8);
  ProsodyModel<float> b(Small(), 8);
  const RowMatrix<float> mel = RandomMel(50, 1).cast<float>();
  const auto x = EncodeProsody(a, mel);
  const auto y = EncodeProsody(a, mel);
  const auto z = EncodeProsody(b, mel);
  CHECK(x.psi_p == y.psi_p);
  CHECK(x.psi_v == y.psi_v);
  CHECK(x.r_p == z.r_p);
  CHECK(x.r_v == z.r_v);
}

TEST_CASE("prosody_loss on an identity pair is 2 ln 2") {
  ProsodyModel<double> model(Small(), 2);
  const M a = RandomMel(32, 1), b = RandomMel(32, 2);
  M stacked(64, 80);
  stacked << a, b;
  grad::Tape<double> tape;
  const auto loss = ComputeProsodyLoss(tape, model, stacked, stacked, 2, {0.5, 0.5}, {0.5, 0.5});
  CHECK(loss.loss_p.value()(0, 0) == std::log(2.0));
  CHECK(loss.loss_v.value()(0, 0) == std::log(2.0));
  CHECK(loss.total.value()(0, 0) == 2.0 * std::log(2.0));
  // Stationary: no parameter moves.
  tape.Backward(loss.total);
  for (std::size_t i = 0; i < model.params().size(); ++i) CHECK(model.params()[i].grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("prosody_loss total is the sum of its parts") {
  ProsodyModel<double> model(Small(), 2);
  const M a = RandomMel(48, 1), b = RandomMel(48, 2);
  grad::Tape<double> tape;
  const auto loss = ComputeProsodyLoss(tape, model, a, b, 1, {0.3}, {0.5});
  CHECK(loss.total.value()(0, 0) ==
        doctest::Approx(loss.loss_p.value()(0, 0) + loss.loss_v.value()(0, 0)).epsilon(1e-15));
}

TEST_CASE("prosody_loss is unchanged by swapping members and replacing tau by 1 - tau") {
  ProsodyModel<double> model(Small(), 6);
  const M a = RandomMel(32, 3), b = RandomMel(32, 4);
  grad::Tape<double> t1, t2;
  const auto fwd = ComputeProsodyLoss(t1, model, a, b, 1, {0.3}, {0.8});
  const auto rev = ComputeProsodyLoss(t2, model, b, a, 1, {0.7}, {0.2});
  CHECK(std::abs(fwd.loss_p.value()(0, 0) - rev.loss_p.value()(0, 0)) <= 1e-6);
  CHECK(std::abs(fwd.loss_v.value()(0, 0) - rev.loss_v.value()(0, 0)) <= 1e-6);
}

TEST_CASE("prosody_loss matches the rank loss of the two scores") {
  ProsodyModel<double> model(Small(), 6);
  const M a = RandomMel(32, 3), b = RandomMel(32, 4);
  const auto ra = EncodeProsody(model, a), rb = EncodeProsody(model, b);
  grad::Tape<double> tape;
  const auto loss = ComputeProsodyLoss(tape, model, a, b, 1, {0.3}, {0.5});
  // The original ranks above an input lowered in pitch: target of p_ij is 1 - tau.
  CHECK(loss.loss_p.value()(0, 0) ==
        doctest::Approx(RankLoss(PairProbability(ra.r_p, rb.r_p), 0.7)).epsilon(1e-10));
  CHECK(loss.loss_v.value()(0, 0) ==
        doctest::Approx(RankLoss(PairProbability(ra.r_v, rb.r_v), 0.5)).epsilon(1e-10));
}

TEST_CASE("zero learning rate leaves parameters bit-identical") {
  ProsodyModel<float> model(Small(), 3);
  std::vector<RowMatrix<float>> before;
  for (std::size_t i = 0; i < model.params().size(); ++i) before.push_back(model.params()[i].value);
  train::AdamOptions opt;
  opt.lr = 0.0;
  train::Adam<float> adam(model.params(), opt);
  const RowMatrix<float> a = RandomMel(32, 1).cast<float>(), b = RandomMel(32, 2).cast<float>();
  for (int step = 0; step < 3; ++step) {
    grad::Tape<float> tape;
    const auto loss = ComputeProsodyLoss(tape, model, a, b, 1, {0.2}, {0.5});
    tape.Backward(loss.total);
    adam.Step();
  }
  for (std::size_t i = 0; i < model.params().size(); ++i) CHECK(model.params()[i].value == before[i]);
}

}  // namespace pvc::prosody
