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

#ifndef PVC_TRAIN_ADAM_H_
#define PVC_TRAIN_ADAM_H_

#include <cstdint>
#include <vector>

#include "pvc/grad/tape.h"

namespace pvc::train {

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  /// Global gradient-norm clip; 0 disables.
  double clip_norm = 0.0;
};

/// Bias-corrected Adam over a parameter set. Moments are stored in the
/// parameter precision and keyed by position in the set.
template <typename T>
class Adam {
 public:
  Adam(grad::ParameterSet<T>& params, const AdamOptions& options);

  /// One update from the accumulated gradients, which are then zeroed.
  /// Throws NumericError naming the parameter on a NaN/Inf gradient, before
  /// any value is modified.
  void Step();

  std::int64_t step() const { return step_; }
  void set_step(std::int64_t s) { step_ = s; }
  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }

  std::vector<grad::Matrix<T>>& m() { return m_; }
  std::vector<grad::Matrix<T>>& v() { return v_; }
  const std::vector<grad::Matrix<T>>& m() const { return m_; }
  const std::vector<grad::Matrix<T>>& v() const { return v_; }

 private:
  grad::ParameterSet<T>& params_;
  AdamOptions options_;
  std::int64_t step_ = 0;
  std::vector<grad::Matrix<T>> m_;
  std::vector<grad::Matrix<T>> v_;
};

}  // namespace pvc::train

#endif  // PVC_TRAIN_ADAM_H_
