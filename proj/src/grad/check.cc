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

#include "pvc/grad/check.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pvc/base/rng.h"

namespace pvc::grad {

namespace {

double Project(const CheckedGraph& f, const std::vector<Matrix<double>>& inputs,
               const Matrix<double>& w) {
  Tape<double> tape;
  std::vector<Var<double>> vars;
  for (const auto& m : inputs) vars.push_back(tape.Constant(m));
  return f(tape, vars).value().cwiseProduct(w).sum();
}

}  // namespace

double GradCheck(const CheckedGraph& f, const std::vector<Matrix<double>>& inputs,
                 const GradCheckOptions& options) {
  Rng rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Tape<double> tape;
  std::vector<Var<double>> vars;
  for (const auto& m : inputs) vars.push_back(tape.Input(m));
  const Var<double> out = f(tape, vars);
  Matrix<double> w(out.rows(), out.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = normal(rng);
  tape.Backward(out, w);

  std::vector<std::pair<std::size_t, Eigen::Index>> coords;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (Eigen::Index i = 0; i < inputs[k].size(); ++i) coords.emplace_back(k, i);
  }
  std::shuffle(coords.begin(), coords.end(), rng);
  if (static_cast<int>(coords.size()) > options.coordinates) coords.resize(options.coordinates);

  double worst = 0.0;
  std::vector<Matrix<double>> probe = inputs;
  for (const auto& [k, i] : coords) {
    const double x0 = probe[k].data()[i];
    probe[k].data()[i] = x0 + options.h;
    const double up = Project(f, probe, w);
    probe[k].data()[i] = x0 - options.h;
    const double down = Project(f, probe, w);
    probe[k].data()[i] = x0;
    const double numeric = (up - down) / (2.0 * options.h);
    const double analytic = vars[k].grad().data()[i];
    worst = std::max(worst, std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric)));
  }
  return worst;
}

}  // namespace pvc::grad
