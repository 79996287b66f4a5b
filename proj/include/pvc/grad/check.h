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

#ifndef PVC_GRAD_CHECK_H_
#define PVC_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "pvc/grad/tape.h"

namespace pvc::grad {

/// Builds the graph under test from its inputs (already on the tape).
using CheckedGraph =
    std::function<Var<double>(Tape<double>& tape, const std::vector<Var<double>>& inputs)>;

struct GradCheckOptions {
  double h = 1e-5;
  int coordinates = 50;  // sampled input coordinates; all when fewer exist
  std::uint64_t seed = 0;
};

/// Compares the tape gradient of <w, f(inputs)>, w a fixed random projection
/// of the output, with central differences (f(x+h) - f(x-h)) / 2h. Returns
/// the largest |analytic - numeric| / max(1, |numeric|) over the sampled
/// coordinates.
double GradCheck(const CheckedGraph& f, const std::vector<Matrix<double>>& inputs,
                 const GradCheckOptions& options = {});

}  // namespace pvc::grad

#endif  // PVC_GRAD_CHECK_H_
