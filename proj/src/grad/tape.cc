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

#include "pvc/grad/tape.h"

#include <cmath>

#include "pvc/base/error.h"

namespace pvc::grad {

template <typename T>
Parameter<T>& ParameterSet<T>::Add(const std::string& name, Matrix<T> value) {
  if (index_.count(name)) throw InvalidArgument("duplicate parameter name '" + name + "'");
  auto p = std::make_unique<Parameter<T>>();
  p->name = name;
  p->grad = Matrix<T>::Zero(value.rows(), value.cols());
  p->value = std::move(value);
  index_[name] = params_.size();
  params_.push_back(std::move(p));
  return *params_.back();
}

template <typename T>
Parameter<T>& ParameterSet<T>::Get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw InvalidArgument("no parameter named '" + name + "'");
  return *params_[it->second];
}

template <typename T>
const Parameter<T>& ParameterSet<T>::Get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw InvalidArgument("no parameter named '" + name + "'");
  return *params_[it->second];
}

template <typename T>
void ParameterSet<T>::ZeroGrad() {
  for (auto& p : params_) p->grad.setZero();
}

template <typename T>
std::size_t ParameterSet<T>::NumValues() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

template <typename T>
Matrix<T> UniformFanIn(int rows, int cols, int fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix<T> m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(dist(rng));
  return m;
}

template <typename T>
Var<T> Tape<T>::Constant(Matrix<T> value) {
  return Record("constant", std::move(value), false, nullptr);
}

template <typename T>
Var<T> Tape<T>::Input(Matrix<T> value) {
  return Record("input", std::move(value), true, nullptr);
}

template <typename T>
Var<T> Tape<T>::Bind(Parameter<T>& p) {
  if (auto it = bound_.find(&p); it != bound_.end()) return {this, it->second};
  Var<T> v = Record(p.name, p.value, true, nullptr);
  nodes_[v.id].param = &p;
  bound_[&p] = v.id;
  return v;
}

template <typename T>
Var<T> Tape<T>::Record(std::string_view op, Matrix<T> value, bool needs_grad, BackwardFn backward) {
  if (!value.allFinite()) {
    throw NumericError("non-finite value produced by " + std::string(op));
  }
  Node node;
  node.value = std::move(value);
  node.needs_grad = needs_grad;
  if (needs_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
const Matrix<T>& Tape<T>::grad(int id) const {
  const Node& n = nodes_[id];
  if (n.has_grad) return n.grad;
  auto it = zero_grads_.find(id);
  if (it == zero_grads_.end()) {
    it = zero_grads_.emplace(id, Matrix<T>::Zero(n.value.rows(), n.value.cols())).first;
  }
  return it->second;
}

template <typename T>
void Tape<T>::Accumulate(int id, const Matrix<T>& g) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return;
  if (n.has_grad) {
    n.grad += g;
  } else {
    n.grad = g;
    n.has_grad = true;
  }
}

template <typename T>
void Tape<T>::Accumulate(int id, Matrix<T>&& g) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return;
  if (n.has_grad) {
    n.grad += g;
  } else {
    n.grad = std::move(g);
    n.has_grad = true;
  }
}

template <typename T>
void Tape<T>::Backward(Var<T> loss) {
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw InvalidArgument("backward: loss must be 1 x 1, got " + std::to_string(loss.rows()) +
                          " x " + std::to_string(loss.cols()));
  }
  Backward(loss, Matrix<T>::Ones(1, 1));
}

template <typename T>
void Tape<T>::Backward(Var<T> out, const Matrix<T>& seed) {
  if (seed.rows() != out.rows() || seed.cols() != out.cols()) {
    throw InvalidArgument("backward: seed shape does not match output");
  }
  Accumulate(out.id, seed);
  for (int i = out.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.has_grad) continue;
    if (n.backward) n.backward(n.grad);
    if (n.param) n.param->grad += n.grad;
  }
}

#define PVC_INSTANTIATE(T)                                              \
  template class ParameterSet<T>;                                       \
  template class Tape<T>;                                               \
  template Matrix<T> UniformFanIn<T>(int, int, int, Rng&);

PVC_INSTANTIATE(float)
PVC_INSTANTIATE(double)

}  // namespace pvc::grad
