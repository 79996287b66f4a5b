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

#include "pvc/grad/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pvc/base/error.h"

namespace pvc::grad {

namespace {

std::string ShapeOf(Eigen::Index r, Eigen::Index c) {
  return "(" + std::to_string(r) + " x " + std::to_string(c) + ")";
}

template <typename T>
std::string ShapeOf(const Var<T>& v) {
  return ShapeOf(v.value().rows(), v.value().cols());
}

template <typename T>
[[noreturn]] void ShapeError(const char* op, const Var<T>& a, const Var<T>& b) {
  throw InvalidArgument(std::string(op) + ": shape mismatch " + ShapeOf(a) + " vs " + ShapeOf(b));
}

template <typename T>
void SameTape(const char* op, const Var<T>& a, const Var<T>& b) {
  if (!a.valid() || a.tape != b.tape) {
    throw InvalidArgument(std::string(op) + ": operands on different tapes");
  }
}

template <typename T>
int ItemFrames(const char* op, const Var<T>& x, int batch) {
  if (batch < 1 || x.rows() % batch != 0) {
    throw InvalidArgument(std::string(op) + ": " + std::to_string(x.rows()) +
                          " rows do not split into " + std::to_string(batch) + " items");
  }
  return x.rows() / batch;
}

template <typename T>
T StableSigmoid(T x) {
  if (x >= 0) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
T Softplus(T x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Input row (within the item) feeding tap j of output frame t, or -1 for a
// zero pad.
int SourceFrame(int t, int j, int frames, const ConvSpec& spec) {
  int s = t * spec.stride - spec.pad + j;
  if (s >= 0 && s < frames) return s;
  switch (spec.mode) {
    case PadMode::kZeros:
      return -1;
    case PadMode::kReplicate:
      return std::clamp(s, 0, frames - 1);
    case PadMode::kCircular:
      s %= frames;
      return s < 0 ? s + frames : s;
  }
  return -1;
}

}  // namespace

int ConvOutputLength(int frames, const ConvSpec& spec) {
  const int span = frames + 2 * spec.pad - spec.kernel;
  if (span < 0) return 0;
  return span / spec.stride + 1;
}

template <typename T>
Var<T> Linear(Var<T> x, Var<T> w, Var<T> b) {
  SameTape("linear", x, w);
  SameTape("linear", x, b);
  if (x.cols() != w.rows()) ShapeError("linear", x, w);
  if (b.rows() != 1 || b.cols() != w.cols()) ShapeError("linear", w, b);
  Tape<T>* tape = x.tape;
  Matrix<T> y = x.value() * w.value();
  y.rowwise() += b.value().row(0);
  const bool ng = tape->needs_grad(x.id) || tape->needs_grad(w.id) || tape->needs_grad(b.id);
  return tape->Record("linear", std::move(y), ng, [tape, x, w, b](const Matrix<T>& g) {
    if (tape->needs_grad(x.id)) tape->Accumulate(x.id, Matrix<T>(g * w.value().transpose()));
    if (tape->needs_grad(w.id)) tape->Accumulate(w.id, Matrix<T>(x.value().transpose() * g));
    if (tape->needs_grad(b.id)) tape->Accumulate(b.id, Matrix<T>(g.colwise().sum()));
  });
}

template <typename T>
Var<T> Conv1d(Var<T> x, Var<T> w, Var<T> b, int batch, const ConvSpec& spec) {
  SameTape("conv1d", x, w);
  SameTape("conv1d", x, b);
  if (spec.kernel < 1 || spec.stride < 1 || spec.pad < 0) {
    throw InvalidArgument("conv1d: invalid kernel/stride/pad");
  }
  const int frames = ItemFrames("conv1d", x, batch);
  const int cin = x.cols();
  if (w.rows() != spec.kernel * cin) ShapeError("conv1d", x, w);
  if (b.rows() != 1 || b.cols() != w.cols()) ShapeError("conv1d", w, b);
  const int out_frames = ConvOutputLength(frames, spec);
  if (out_frames < 1) {
    throw InvalidArgument("conv1d: input of " + std::to_string(frames) +
                          " frames too short for kernel " + std::to_string(spec.kernel));
  }
  // im2col: row (b, t) holds the kernel window of output frame t.
  const Matrix<T>& xv = x.value();
  Matrix<T> cols(static_cast<Eigen::Index>(batch) * out_frames, spec.kernel * cin);
  for (int item = 0; item < batch; ++item) {
    for (int t = 0; t < out_frames; ++t) {
      const Eigen::Index r = static_cast<Eigen::Index>(item) * out_frames + t;
      for (int j = 0; j < spec.kernel; ++j) {
        const int s = SourceFrame(t, j, frames, spec);
        if (s < 0) {
          cols.row(r).segment(j * cin, cin).setZero();
        } else {
          cols.row(r).segment(j * cin, cin) = xv.row(static_cast<Eigen::Index>(item) * frames + s);
        }
      }
    }
  }
  Matrix<T> y = cols * w.value();
  y.rowwise() += b.value().row(0);
  Tape<T>* tape = x.tape;
  const bool ng = tape->needs_grad(x.id) || tape->needs_grad(w.id) || tape->needs_grad(b.id);
  return tape->Record(
      "conv1d", std::move(y), ng,
      [tape, x, w, b, batch, spec, frames, out_frames, cin, cols = std::move(cols)](const Matrix<T>& g) {
        if (tape->needs_grad(w.id)) tape->Accumulate(w.id, Matrix<T>(cols.transpose() * g));
        if (tape->needs_grad(b.id)) tape->Accumulate(b.id, Matrix<T>(g.colwise().sum()));
        if (!tape->needs_grad(x.id)) return;
        const Matrix<T> gcols = g * w.value().transpose();
        Matrix<T> gx = Matrix<T>::Zero(static_cast<Eigen::Index>(batch) * frames, cin);
        for (int item = 0; item < batch; ++item) {
          for (int t = 0; t < out_frames; ++t) {
            const Eigen::Index r = static_cast<Eigen::Index>(item) * out_frames + t;
            for (int j = 0; j < spec.kernel; ++j) {
              const int s = SourceFrame(t, j, frames, spec);
              if (s < 0) continue;
              gx.row(static_cast<Eigen::Index>(item) * frames + s) += gcols.row(r).segment(j * cin, cin);
            }
          }
        }
        tape->Accumulate(x.id, std::move(gx));
      });
}

template <typename T>
Var<T> Relu(Var<T> x) {
  Tape<T>* tape = x.tape;
  Matrix<T> y = x.value().cwiseMax(T(0));
  return tape->Record("relu", std::move(y), tape->needs_grad(x.id), [tape, x](const Matrix<T>& g) {
    tape->Accumulate(x.id, Matrix<T>((x.value().array() > T(0)).select(g.array(), T(0)).matrix()));
  });
}

template <typename T>
Var<T> Sigmoid(Var<T> x) {
  Tape<T>* tape = x.tape;
  Matrix<T> y = x.value().unaryExpr([](T v) { return StableSigmoid(v); });
  const int out_id = static_cast<int>(tape->size());
  return tape->Record("sigmoid", std::move(y), tape->needs_grad(x.id),
                      [tape, x, out_id](const Matrix<T>& g) {
                        const auto& s = tape->value(out_id).array();
                        tape->Accumulate(x.id, Matrix<T>((g.array() * s * (T(1) - s)).matrix()));
                      });
}

template <typename T>
Var<T> Tanh(Var<T> x) {
  Tape<T>* tape = x.tape;
  Matrix<T> y = x.value().array().tanh().matrix();
  const int out_id = static_cast<int>(tape->size());
  return tape->Record("tanh", std::move(y), tape->needs_grad(x.id),
                      [tape, x, out_id](const Matrix<T>& g) {
                        const auto& t = tape->value(out_id).array();
                        tape->Accumulate(x.id, Matrix<T>((g.array() * (T(1) - t * t)).matrix()));
                      });
}

template <typename T>
Var<T> Add(Var<T> a, Var<T> b) {
  SameTape("add", a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) ShapeError("add", a, b);
  Tape<T>* tape = a.tape;
  return tape->Record("add", Matrix<T>(a.value() + b.value()),
                      tape->needs_grad(a.id) || tape->needs_grad(b.id),
                      [tape, a, b](const Matrix<T>& g) {
                        tape->Accumulate(a.id, g);
                        tape->Accumulate(b.id, g);
                      });
}

template <typename T>
Var<T> Sub(Var<T> a, Var<T> b) {
  SameTape("sub", a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) ShapeError("sub", a, b);
  Tape<T>* tape = a.tape;
  return tape->Record("sub", Matrix<T>(a.value() - b.value()),
                      tape->needs_grad(a.id) || tape->needs_grad(b.id),
                      [tape, a, b](const Matrix<T>& g) {
                        tape->Accumulate(a.id, g);
                        if (tape->needs_grad(b.id)) tape->Accumulate(b.id, Matrix<T>(-g));
                      });
}

template <typename T>
Var<T> Mul(Var<T> a, Var<T> b) {
  SameTape("mul", a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) ShapeError("mul", a, b);
  Tape<T>* tape = a.tape;
  return tape->Record("mul", Matrix<T>(a.value().cwiseProduct(b.value())),
                      tape->needs_grad(a.id) || tape->needs_grad(b.id),
                      [tape, a, b](const Matrix<T>& g) {
                        if (tape->needs_grad(a.id)) {
                          tape->Accumulate(a.id, Matrix<T>(g.cwiseProduct(b.value())));
                        }
                        if (tape->needs_grad(b.id)) {
                          tape->Accumulate(b.id, Matrix<T>(g.cwiseProduct(a.value())));
                        }
                      });
}

template <typename T>
Var<T> Scale(Var<T> x, double c) {
  Tape<T>* tape = x.tape;
  const T k = static_cast<T>(c);
  return tape->Record("scale", Matrix<T>(x.value() * k), tape->needs_grad(x.id),
                      [tape, x, k](const Matrix<T>& g) { tape->Accumulate(x.id, Matrix<T>(g * k)); });
}

template <typename T>
Var<T> TimeMean(Var<T> x, int batch) {
  const int frames = ItemFrames("time_mean", x, batch);
  Tape<T>* tape = x.tape;
  Matrix<T> y(batch, x.cols());
  for (int b = 0; b < batch; ++b) {
    y.row(b) = x.value().middleRows(static_cast<Eigen::Index>(b) * frames, frames).colwise().sum() /
               static_cast<T>(frames);
  }
  return tape->Record("time_mean", std::move(y), tape->needs_grad(x.id),
                      [tape, x, batch, frames](const Matrix<T>& g) {
                        Matrix<T> gx(static_cast<Eigen::Index>(batch) * frames, g.cols());
                        for (int b = 0; b < batch; ++b) {
                          gx.middleRows(static_cast<Eigen::Index>(b) * frames, frames).rowwise() =
                              g.row(b) / static_cast<T>(frames);
                        }
                        tape->Accumulate(x.id, std::move(gx));
                      });
}

template <typename T>
Var<T> TileRows(Var<T> x, int frames) {
  if (frames < 1) throw InvalidArgument("tile_rows: frames must be >= 1");
  Tape<T>* tape = x.tape;
  const int batch = x.rows();
  Matrix<T> y(static_cast<Eigen::Index>(batch) * frames, x.cols());
  for (int b = 0; b < batch; ++b) {
    y.middleRows(static_cast<Eigen::Index>(b) * frames, frames).rowwise() = x.value().row(b);
  }
  return tape->Record("tile_rows", std::move(y), tape->needs_grad(x.id),
                      [tape, x, batch, frames](const Matrix<T>& g) {
                        Matrix<T> gx(batch, g.cols());
                        for (int b = 0; b < batch; ++b) {
                          gx.row(b) = g.middleRows(static_cast<Eigen::Index>(b) * frames, frames)
                                          .colwise()
                                          .sum();
                        }
                        tape->Accumulate(x.id, std::move(gx));
                      });
}

template <typename T>
Var<T> ConcatCols(const std::vector<Var<T>>& parts) {
  if (parts.empty()) throw InvalidArgument("concat_cols: no inputs");
  Tape<T>* tape = parts[0].tape;
  Eigen::Index cols = 0;
  bool ng = false;
  for (const auto& p : parts) {
    SameTape("concat_cols", parts[0], p);
    if (p.rows() != parts[0].rows()) ShapeError("concat_cols", parts[0], p);
    cols += p.cols();
    ng = ng || tape->needs_grad(p.id);
  }
  Matrix<T> y(parts[0].rows(), cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    y.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  return tape->Record("concat_cols", std::move(y), ng, [tape, parts](const Matrix<T>& g) {
    Eigen::Index off = 0;
    for (const auto& p : parts) {
      if (tape->needs_grad(p.id)) tape->Accumulate(p.id, Matrix<T>(g.middleCols(off, p.cols())));
      off += p.cols();
    }
  });
}

template <typename T>
Var<T> ConcatRows(const std::vector<Var<T>>& parts) {
  if (parts.empty()) throw InvalidArgument("concat_rows: no inputs");
  Tape<T>* tape = parts[0].tape;
  Eigen::Index rows = 0;
  bool ng = false;
  for (const auto& p : parts) {
    SameTape("concat_rows", parts[0], p);
    if (p.cols() != parts[0].cols()) ShapeError("concat_rows", parts[0], p);
    rows += p.rows();
    ng = ng || tape->needs_grad(p.id);
  }
  Matrix<T> y(rows, parts[0].cols());
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    y.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  return tape->Record("concat_rows", std::move(y), ng, [tape, parts](const Matrix<T>& g) {
    Eigen::Index off = 0;
    for (const auto& p : parts) {
      if (tape->needs_grad(p.id)) tape->Accumulate(p.id, Matrix<T>(g.middleRows(off, p.rows())));
      off += p.rows();
    }
  });
}

template <typename T>
Var<T> SliceRows(Var<T> x, int start, int count) {
  if (start < 0 || count < 0 || start + count > x.rows()) {
    throw InvalidArgument("slice_rows: rows [" + std::to_string(start) + ", " +
                          std::to_string(start + count) + ") outside " + ShapeOf(x));
  }
  Tape<T>* tape = x.tape;
  return tape->Record("slice_rows", Matrix<T>(x.value().middleRows(start, count)),
                      tape->needs_grad(x.id), [tape, x, start, count](const Matrix<T>& g) {
                        Matrix<T> gx = Matrix<T>::Zero(x.rows(), x.cols());
                        gx.middleRows(start, count) = g;
                        tape->Accumulate(x.id, std::move(gx));
                      });
}

template <typename T>
Var<T> MeanAbs(Var<T> x) {
  Tape<T>* tape = x.tape;
  const T n = static_cast<T>(x.value().size());
  Matrix<T> y(1, 1);
  y(0, 0) = x.value().cwiseAbs().sum() / n;
  return tape->Record("mean_abs", std::move(y), tape->needs_grad(x.id), [tape, x, n](const Matrix<T>& g) {
    tape->Accumulate(x.id, Matrix<T>((x.value().array().sign() * (g(0, 0) / n)).matrix()));
  });
}

template <typename T>
Var<T> MeanSquare(Var<T> x) {
  Tape<T>* tape = x.tape;
  const T n = static_cast<T>(x.value().size());
  Matrix<T> y(1, 1);
  y(0, 0) = x.value().squaredNorm() / n;
  return tape->Record("mean_square", std::move(y), tape->needs_grad(x.id),
                      [tape, x, n](const Matrix<T>& g) {
                        tape->Accumulate(x.id, Matrix<T>(x.value() * (T(2) * g(0, 0) / n)));
                      });
}

template <typename T>
Var<T> SoftmaxXent(Var<T> scores, const std::vector<int>& target) {
  const Matrix<T>& s = scores.value();
  if (static_cast<Eigen::Index>(target.size()) != s.rows() || s.rows() == 0) {
    throw InvalidArgument("softmax_xent: " + std::to_string(target.size()) + " targets for " +
                          ShapeOf(scores));
  }
  Tape<T>* tape = scores.tape;
  Matrix<T> prob(s.rows(), s.cols());
  double total = 0.0;
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    if (target[r] < 0 || target[r] >= s.cols()) {
      throw InvalidArgument("softmax_xent: target index out of range");
    }
    const T mx = s.row(r).maxCoeff();
    prob.row(r) = (s.row(r).array() - mx).exp().matrix();
    const T z = prob.row(r).sum();
    prob.row(r) /= z;
    total += static_cast<double>(std::log(z) + mx - s(r, target[r]));
  }
  Matrix<T> y(1, 1);
  y(0, 0) = static_cast<T>(total / static_cast<double>(s.rows()));
  return tape->Record("softmax_xent", std::move(y), tape->needs_grad(scores.id),
                      [tape, scores, target, prob = std::move(prob)](const Matrix<T>& g) {
                        Matrix<T> gs = prob;
                        for (Eigen::Index r = 0; r < gs.rows(); ++r) gs(r, target[r]) -= T(1);
                        gs *= g(0, 0) / static_cast<T>(gs.rows());
                        tape->Accumulate(scores.id, std::move(gs));
                      });
}

template <typename T>
Var<T> LogisticXent(Var<T> d, const std::vector<double>& tau) {
  if (d.cols() != 1 || static_cast<int>(tau.size()) != d.rows() || tau.empty()) {
    throw InvalidArgument("logistic_xent: " + std::to_string(tau.size()) + " labels for " +
                          ShapeOf(d));
  }
  Tape<T>* tape = d.tape;
  const int n = d.rows();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const T v = d.value()(i, 0);
    total += static_cast<double>(Softplus(v)) - tau[i] * static_cast<double>(v);
  }
  Matrix<T> y(1, 1);
  y(0, 0) = static_cast<T>(total / n);
  return tape->Record("logistic_xent", std::move(y), tape->needs_grad(d.id),
                      [tape, d, tau, n](const Matrix<T>& g) {
                        Matrix<T> gd(n, 1);
                        for (int i = 0; i < n; ++i) {
                          gd(i, 0) = (StableSigmoid(d.value()(i, 0)) - static_cast<T>(tau[i])) *
                                     g(0, 0) / static_cast<T>(n);
                        }
                        tape->Accumulate(d.id, std::move(gd));
                      });
}

template <typename T>
Var<T> InstanceNorm(Var<T> x, int batch, double eps) {
  const int frames = ItemFrames("instance_norm", x, batch);
  if (frames < 2) throw InvalidArgument("instance_norm: needs at least 2 frames, got " + std::to_string(frames));
  Tape<T>* tape = x.tape;
  const int ch = x.cols();
  Matrix<T> y(x.rows(), ch);
  Matrix<T> sigma(batch, ch);  // population std per item and channel
  for (int b = 0; b < batch; ++b) {
    const auto xb = x.value().middleRows(static_cast<Eigen::Index>(b) * frames, frames);
    auto yb = y.middleRows(static_cast<Eigen::Index>(b) * frames, frames);
    const Eigen::Matrix<T, 1, Eigen::Dynamic> mu = xb.colwise().sum() / static_cast<T>(frames);
    yb = xb.rowwise() - mu;
    sigma.row(b) = (yb.colwise().squaredNorm() / static_cast<T>(frames)).cwiseSqrt();
    for (int c = 0; c < ch; ++c) {
      if (xb.col(c).maxCoeff() == xb.col(c).minCoeff()) {
        // Constant channel: the rounded mean can differ from the value.
        yb.col(c).setZero();
        sigma(b, c) = T(0);
      } else {
        yb.col(c) /= sigma(b, c) + static_cast<T>(eps);
      }
    }
  }
  return tape->Record(
      "instance_norm", std::move(y), tape->needs_grad(x.id),
      [tape, x, batch, frames, ch, eps, sigma = std::move(sigma)](const Matrix<T>& g) {
        Matrix<T> gx(x.rows(), ch);
        const T n = static_cast<T>(frames);
        for (int b = 0; b < batch; ++b) {
          const Eigen::Index off = static_cast<Eigen::Index>(b) * frames;
          for (int c = 0; c < ch; ++c) {
            const auto xc = x.value().col(c).segment(off, frames);
            const auto gc = g.col(c).segment(off, frames);
            const T mu = xc.sum() / n;
            const T sd = sigma(b, c);
            const T s = sd + static_cast<T>(eps);
            const T gmean = gc.sum() / n;
            auto out = gx.col(c).segment(off, frames);
            if (sd > T(0)) {
              T gxh = 0;
              for (int t = 0; t < frames; ++t) gxh += gc(t) * (xc(t) - mu);
              const T k = gxh / (s * s * n * sd);
              for (int t = 0; t < frames; ++t) out(t) = (gc(t) - gmean) / s - k * (xc(t) - mu);
            } else {
              for (int t = 0; t < frames; ++t) out(t) = (gc(t) - gmean) / s;
            }
          }
        }
        tape->Accumulate(x.id, std::move(gx));
      });
}

template <typename T>
Var<T> GatherRows(Var<T> table, const std::vector<int>& indices) {
  Tape<T>* tape = table.tape;
  Matrix<T> y(static_cast<Eigen::Index>(indices.size()), table.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= table.rows()) {
      throw InvalidArgument("gather_rows: index " + std::to_string(indices[i]) + " outside " +
                            ShapeOf(table));
    }
    y.row(static_cast<Eigen::Index>(i)) = table.value().row(indices[i]);
  }
  return tape->Record("gather_rows", std::move(y), tape->needs_grad(table.id),
                      [tape, table, indices](const Matrix<T>& g) {
                        Matrix<T> gt = Matrix<T>::Zero(table.rows(), table.cols());
                        for (std::size_t i = 0; i < indices.size(); ++i) {
                          gt.row(indices[i]) += g.row(static_cast<Eigen::Index>(i));
                        }
                        tape->Accumulate(table.id, std::move(gt));
                      });
}

template <typename T>
Var<T> StraightThrough(Var<T> e, Var<T> q) {
  SameTape("straight_through", e, q);
  if (e.rows() != q.rows() || e.cols() != q.cols()) ShapeError("straight_through", e, q);
  Tape<T>* tape = e.tape;
  return tape->Record("straight_through", q.value(), tape->needs_grad(e.id),
                      [tape, e](const Matrix<T>& g) { tape->Accumulate(e.id, g); });
}

template <typename T>
Var<T> StopGradient(Var<T> x) {
  return x.tape->Constant(x.value());
}

template <typename T>
Var<T> GatherDot(Var<T> z, Var<T> c, const std::vector<int>& index, int m) {
  SameTape("gather_dot", z, c);
  if (z.cols() != c.cols()) ShapeError("gather_dot", z, c);
  const int n = z.rows();
  if (m < 1 || static_cast<long long>(index.size()) != static_cast<long long>(n) * m) {
    throw InvalidArgument("gather_dot: index size does not match " + ShapeOf(z));
  }
  for (int k : index) {
    if (k < 0 || k >= c.rows()) throw InvalidArgument("gather_dot: index out of range");
  }
  Tape<T>* tape = z.tape;
  Matrix<T> y(n, m);
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < m; ++j) y(r, j) = z.value().row(r).dot(c.value().row(index[r * m + j]));
  }
  return tape->Record("gather_dot", std::move(y), tape->needs_grad(z.id) || tape->needs_grad(c.id),
                      [tape, z, c, index, n, m](const Matrix<T>& g) {
                        if (tape->needs_grad(z.id)) {
                          Matrix<T> gz = Matrix<T>::Zero(n, z.cols());
                          for (int r = 0; r < n; ++r) {
                            for (int j = 0; j < m; ++j) {
                              gz.row(r) += g(r, j) * c.value().row(index[r * m + j]);
                            }
                          }
                          tape->Accumulate(z.id, std::move(gz));
                        }
                        if (tape->needs_grad(c.id)) {
                          Matrix<T> gc = Matrix<T>::Zero(c.rows(), c.cols());
                          for (int r = 0; r < n; ++r) {
                            for (int j = 0; j < m; ++j) {
                              gc.row(index[r * m + j]) += g(r, j) * z.value().row(r);
                            }
                          }
                          tape->Accumulate(c.id, std::move(gc));
                        }
                      });
}

#define PVC_INSTANTIATE(T)                                                               \
  template Var<T> Linear<T>(Var<T>, Var<T>, Var<T>);                                     \
  template Var<T> Conv1d<T>(Var<T>, Var<T>, Var<T>, int, const ConvSpec&);               \
  template Var<T> Relu<T>(Var<T>);                                                       \
  template Var<T> Sigmoid<T>(Var<T>);                                                    \
  template Var<T> Tanh<T>(Var<T>);                                                       \
  template Var<T> Add<T>(Var<T>, Var<T>);                                                \
  template Var<T> Sub<T>(Var<T>, Var<T>);                                                \
  template Var<T> Mul<T>(Var<T>, Var<T>);                                                \
  template Var<T> Scale<T>(Var<T>, double);                                              \
  template Var<T> TimeMean<T>(Var<T>, int);                                              \
  template Var<T> TileRows<T>(Var<T>, int);                                              \
  template Var<T> ConcatCols<T>(const std::vector<Var<T>>&);                             \
  template Var<T> ConcatRows<T>(const std::vector<Var<T>>&);                             \
  template Var<T> SliceRows<T>(Var<T>, int, int);                                        \
  template Var<T> MeanAbs<T>(Var<T>);                                                    \
  template Var<T> MeanSquare<T>(Var<T>);                                                 \
  template Var<T> SoftmaxXent<T>(Var<T>, const std::vector<int>&);                       \
  template Var<T> LogisticXent<T>(Var<T>, const std::vector<double>&);                   \
  template Var<T> InstanceNorm<T>(Var<T>, int, double);                                  \
  template Var<T> GatherRows<T>(Var<T>, const std::vector<int>&);                        \
  template Var<T> StraightThrough<T>(Var<T>, Var<T>);                                    \
  template Var<T> StopGradient<T>(Var<T>);                                               \
  template Var<T> GatherDot<T>(Var<T>, Var<T>, const std::vector<int>&, int);

PVC_INSTANTIATE(float)
PVC_INSTANTIATE(double)

}  // namespace pvc::grad
