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

#include "pvc/train/adam.h"

#include <cmath>

#include "pvc/base/error.h"

namespace pvc::train {

template <typename T>
Adam<T>::Adam(grad::ParameterSet<T>& params, const AdamOptions& options)
    : params_(params), options_(options) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_.push_back(grad::Matrix<T>::Zero(params[i].value.rows(), params[i].value.cols()));
    v_.push_back(grad::Matrix<T>::Zero(params[i].value.rows(), params[i].value.cols()));
  }
}

template <typename T>
void Adam<T>::Step() {
  double sq = 0.0;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto& g = params_[i].grad;
    if (!g.allFinite()) throw NumericError("non-finite gradient for parameter " + params_[i].name);
    sq += static_cast<double>(g.squaredNorm());
  }
  double scale = 1.0;
  if (options_.clip_norm > 0.0) {
    const double norm = std::sqrt(sq);
    if (norm > options_.clip_norm) scale = options_.clip_norm / norm;
  }
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    auto m = m_[i].array();
    auto v = v_[i].array();
    const auto g = (p.grad.array() * static_cast<T>(scale));
    m = static_cast<T>(b1) * m + static_cast<T>(1.0 - b1) * g;
    v = static_cast<T>(b2) * v + static_cast<T>(1.0 - b2) * g * g;
    const auto m_hat = m / static_cast<T>(c1);
    const auto v_hat = v / static_cast<T>(c2);
    p.value.array() -= static_cast<T>(options_.lr) * m_hat / (v_hat.sqrt() + static_cast<T>(options_.eps));
    p.grad.setZero();
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace pvc::train
