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

#ifndef PVC_GRAD_OPS_H_
#define PVC_GRAD_OPS_H_

#include <vector>

#include "pvc/grad/tape.h"

namespace pvc::grad {

// Shape mismatches throw InvalidArgument naming the op and both shapes.
// Ops that take `batch` treat their input as `batch` stacked sequences of
// equal length.

/// x W + b for x: n x in, W: in x out, b: 1 x out.
template <typename T>
Var<T> Linear(Var<T> x, Var<T> w, Var<T> b);

enum class PadMode { kZeros, kReplicate, kCircular };

struct ConvSpec {
  int kernel = 5;
  int stride = 1;
  int pad = 2;
  PadMode mode = PadMode::kZeros;
};

/// Output frames per item: (T + 2 pad - kernel) / stride + 1.
int ConvOutputLength(int frames, const ConvSpec& spec);

/// 1-D convolution over time. x: (batch*T) x Cin, w: (kernel*Cin) x Cout
/// with row j*Cin + c holding tap j of input channel c, b: 1 x Cout.
template <typename T>
Var<T> Conv1d(Var<T> x, Var<T> w, Var<T> b, int batch, const ConvSpec& spec);

template <typename T>
Var<T> Relu(Var<T> x);
template <typename T>
Var<T> Sigmoid(Var<T> x);
template <typename T>
Var<T> Tanh(Var<T> x);

template <typename T>
Var<T> Add(Var<T> a, Var<T> b);
template <typename T>
Var<T> Sub(Var<T> a, Var<T> b);
template <typename T>
Var<T> Mul(Var<T> a, Var<T> b);
template <typename T>
Var<T> Scale(Var<T> x, double c);

/// Per-item mean over time: (batch*T) x C -> batch x C.
template <typename T>
Var<T> TimeMean(Var<T> x, int batch);
/// Repeats row b of x (batch x C) `frames` times: -> (batch*frames) x C.
template <typename T>
Var<T> TileRows(Var<T> x, int frames);

template <typename T>
Var<T> ConcatCols(const std::vector<Var<T>>& parts);
template <typename T>
Var<T> ConcatRows(const std::vector<Var<T>>& parts);
template <typename T>
Var<T> SliceRows(Var<T> x, int start, int count);

/// Mean over all elements of |x| and of x^2; 1 x 1.
template <typename T>
Var<T> MeanAbs(Var<T> x);
template <typename T>
Var<T> MeanSquare(Var<T> x);

/// Mean over rows of -log softmax(scores[r])[target[r]].
template <typename T>
Var<T> SoftmaxXent(Var<T> scores, const std::vector<int>& target);

/// Mean over elements of softplus(d) - tau d, the binary cross-entropy of
/// sigmoid(d) against soft label tau, evaluated without forming sigmoid(d).
/// d: n x 1.
template <typename T>
Var<T> LogisticXent(Var<T> d, const std::vector<double>& tau);

/// Per-item, per-channel standardization over time without affine:
/// (x - mean) / (std + eps), std the population standard deviation.
/// Throws InvalidArgument when an item has fewer than 2 frames.
template <typename T>
Var<T> InstanceNorm(Var<T> x, int batch, double eps = 1e-5);

/// Rows of table at the given indices.
template <typename T>
Var<T> GatherRows(Var<T> table, const std::vector<int>& indices);

/// Forward value of q, gradient passed to e unchanged; q receives nothing.
template <typename T>
Var<T> StraightThrough(Var<T> e, Var<T> q);

template <typename T>
Var<T> StopGradient(Var<T> x);

/// out(n, m) = <z.row(n), c.row(index[n * M + m])>, index of size N*M.
template <typename T>
Var<T> GatherDot(Var<T> z, Var<T> c, const std::vector<int>& index, int m);

/// LSTM over `batch` sequences, zero initial state, gate order (i, f, g, o).
/// x: (batch*T) x D, wx: D x 4H, wh: H x 4H, b: 1 x 4H -> (batch*T) x H.
template <typename T>
Var<T> Lstm(Var<T> x, Var<T> wx, Var<T> wh, Var<T> b, int batch);

}  // namespace pvc::grad

#endif  // PVC_GRAD_OPS_H_
