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

#ifndef PVC_GRAD_TAPE_H_
#define PVC_GRAD_TAPE_H_

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pvc/base/matrix.h"
#include "pvc/base/rng.h"

namespace pvc::grad {

/// Every tensor is a row-major matrix. Sequences are stacked item-major:
/// a batch of B sequences of T frames with C channels is (B*T) x C.
template <typename T>
using Matrix = RowMatrix<T>;

template <typename T>
struct Parameter {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;  // same shape as value
};

/// Named parameters of a model, kept in insertion order.
template <typename T>
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet&) = delete;
  ParameterSet& operator=(const ParameterSet&) = delete;

  /// Throws InvalidArgument on a duplicate name.
  Parameter<T>& Add(const std::string& name, Matrix<T> value);
  Parameter<T>& Get(const std::string& name);
  const Parameter<T>& Get(const std::string& name) const;
  bool Has(const std::string& name) const { return index_.count(name) > 0; }

  std::size_t size() const { return params_.size(); }
  Parameter<T>& operator[](std::size_t i) { return *params_[i]; }
  const Parameter<T>& operator[](std::size_t i) const { return *params_[i]; }

  void ZeroGrad();
  std::size_t NumValues() const;

 private:
  std::vector<std::unique_ptr<Parameter<T>>> params_;
  std::map<std::string, std::size_t> index_;
};

/// U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
template <typename T>
Matrix<T> UniformFanIn(int rows, int cols, int fan_in, Rng& rng);

template <typename T>
class Tape;

/// Handle to a node on a tape.
template <typename T>
struct Var {
  Tape<T>* tape = nullptr;
  int id = -1;

  const Matrix<T>& value() const;
  const Matrix<T>& grad() const;
  int rows() const { return static_cast<int>(value().rows()); }
  int cols() const { return static_cast<int>(value().cols()); }
  bool valid() const { return tape != nullptr && id >= 0; }
};

/// Records one forward pass. Backward visits the nodes in reverse creation
/// order, which is a reverse topological order since every node only refers
/// to earlier ones.
template <typename T>
class Tape {
 public:
  /// Receives the gradient that reached the node's output.
  using BackwardFn = std::function<void(const Matrix<T>& grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf without gradient.
  Var<T> Constant(Matrix<T> value);
  /// Leaf that collects a gradient (read back with Var::grad()).
  Var<T> Input(Matrix<T> value);
  /// Leaf mirroring a parameter; Backward() adds its gradient into p.grad.
  /// Binding the same parameter twice returns the same node.
  Var<T> Bind(Parameter<T>& p);

  /// Appends the result of an op. Throws NumericError naming the op if the
  /// value holds a NaN or Inf. `backward` runs only if the node receives a
  /// gradient and needs_grad is set.
  Var<T> Record(std::string_view op, Matrix<T> value, bool needs_grad, BackwardFn backward);

  const Matrix<T>& value(int id) const { return nodes_[id].value; }
  /// Zero matrix when nothing reached the node.
  const Matrix<T>& grad(int id) const;
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  bool has_grad(int id) const { return nodes_[id].has_grad; }
  /// Adds g into the gradient of node id (no-op when the node is constant).
  void Accumulate(int id, const Matrix<T>& g);
  void Accumulate(int id, Matrix<T>&& g);

  /// Seeds d loss / d loss = 1 for a 1 x 1 node.
  void Backward(Var<T> loss);
  void Backward(Var<T> out, const Matrix<T>& seed);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix<T> value;
    Matrix<T> grad;
    bool needs_grad = false;
    bool has_grad = false;
    Parameter<T>* param = nullptr;
    BackwardFn backward;
  };
  std::deque<Node> nodes_;
  std::map<const Parameter<T>*, int> bound_;
  mutable std::map<int, Matrix<T>> zero_grads_;
};

template <typename T>
const Matrix<T>& Var<T>::value() const {
  return tape->value(id);
}

template <typename T>
const Matrix<T>& Var<T>::grad() const {
  return tape->grad(id);
}

}  // namespace pvc::grad

#endif  // PVC_GRAD_TAPE_H_
