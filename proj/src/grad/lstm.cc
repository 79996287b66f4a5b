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

#include <string>

#include "pvc/base/error.h"
#include "pvc/grad/ops.h"

namespace pvc::grad {

namespace {

template <typename T>
Matrix<T> Logistic(const Matrix<T>& a) {
  return a.unaryExpr([](T v) {
    if (v >= 0) return T(1) / (T(1) + std::exp(-v));
    const T e = std::exp(v);
    return e / (T(1) + e);
  });
}

}  // namespace

template <typename T>
Var<T> Lstm(Var<T> x, Var<T> wx, Var<T> wh, Var<T> b, int batch) {
  if (x.tape != wx.tape || x.tape != wh.tape || x.tape != b.tape) {
    throw InvalidArgument("lstm: operands on different tapes");
  }
  const int hidden = wh.rows();
  if (wx.rows() != x.cols() || wx.cols() != 4 * hidden || wh.cols() != 4 * hidden ||
      b.rows() != 1 || b.cols() != 4 * hidden) {
    throw InvalidArgument("lstm: shape mismatch x (" + std::to_string(x.rows()) + " x " +
                          std::to_string(x.cols()) + "), wx (" + std::to_string(wx.rows()) + " x " +
                          std::to_string(wx.cols()) + "), wh (" + std::to_string(wh.rows()) +
                          " x " + std::to_string(wh.cols()) + ")");
  }
  if (batch < 1 || x.rows() % batch != 0) throw InvalidArgument("lstm: rows do not split into items");
  const int frames = x.rows() / batch;
  const int h4 = 4 * hidden;

  // Row b*frames + t of every buffer belongs to item b at step t.
  Matrix<T> ax = x.value() * wx.value();
  ax.rowwise() += b.value().row(0);
  Matrix<T> gates(x.rows(), h4);  // activated i, f, g, o
  Matrix<T> cell(x.rows(), hidden);
  Matrix<T> cell_tanh(x.rows(), hidden);
  Matrix<T> h(x.rows(), hidden);

  Matrix<T> h_prev = Matrix<T>::Zero(batch, hidden);
  Matrix<T> c_prev = Matrix<T>::Zero(batch, hidden);
  Matrix<T> a(batch, h4);
  for (int t = 0; t < frames; ++t) {
    for (int i = 0; i < batch; ++i) a.row(i) = ax.row(static_cast<Eigen::Index>(i) * frames + t);
    a.noalias() += h_prev * wh.value();
    const Matrix<T> ig = Logistic<T>(a.leftCols(hidden));
    const Matrix<T> fg = Logistic<T>(a.middleCols(hidden, hidden));
    const Matrix<T> gg = a.middleCols(2 * hidden, hidden).array().tanh().matrix();
    const Matrix<T> og = Logistic<T>(a.rightCols(hidden));
    const Matrix<T> c = (fg.array() * c_prev.array() + ig.array() * gg.array()).matrix();
    const Matrix<T> ct = c.array().tanh().matrix();
    const Matrix<T> ht = (og.array() * ct.array()).matrix();
    for (int i = 0; i < batch; ++i) {
      const Eigen::Index r = static_cast<Eigen::Index>(i) * frames + t;
      gates.row(r) << ig.row(i), fg.row(i), gg.row(i), og.row(i);
      cell.row(r) = c.row(i);
      cell_tanh.row(r) = ct.row(i);
      h.row(r) = ht.row(i);
    }
    h_prev = ht;
    c_prev = c;
  }

  Tape<T>* tape = x.tape;
  const bool ng = tape->needs_grad(x.id) || tape->needs_grad(wx.id) || tape->needs_grad(wh.id) ||
                  tape->needs_grad(b.id);
  Matrix<T> h_out = h;
  return tape->Record(
      "lstm", std::move(h_out), ng,
      [tape, x, wx, wh, b, batch, frames, hidden, h4, gates = std::move(gates),
       cell = std::move(cell), cell_tanh = std::move(cell_tanh), h = std::move(h)](const Matrix<T>& g) {
        Matrix<T> da(x.rows(), h4);        // gradient w.r.t. pre-activations
        Matrix<T> h_shift(x.rows(), hidden);  // h_{t-1} aligned with row t
        Matrix<T> dh_next = Matrix<T>::Zero(batch, hidden);
        Matrix<T> dc_next = Matrix<T>::Zero(batch, hidden);
        Matrix<T> dh(batch, hidden);
        Matrix<T> da_t(batch, h4);
        for (int t = frames - 1; t >= 0; --t) {
          for (int i = 0; i < batch; ++i) {
            dh.row(i) = g.row(static_cast<Eigen::Index>(i) * frames + t);
          }
          dh += dh_next;
          for (int i = 0; i < batch; ++i) {
            const Eigen::Index r = static_cast<Eigen::Index>(i) * frames + t;
            const auto ig = gates.row(r).segment(0, hidden).array();
            const auto fg = gates.row(r).segment(hidden, hidden).array();
            const auto gg = gates.row(r).segment(2 * hidden, hidden).array();
            const auto og = gates.row(r).segment(3 * hidden, hidden).array();
            const auto ct = cell_tanh.row(r).array();
            const auto dhi = dh.row(i).array();
            const Eigen::Array<T, 1, Eigen::Dynamic> dc =
                dhi * og * (T(1) - ct * ct) + dc_next.row(i).array();
            const Eigen::Array<T, 1, Eigen::Dynamic> c_prev =
                t > 0 ? Eigen::Array<T, 1, Eigen::Dynamic>(cell.row(r - 1).array())
                      : Eigen::Array<T, 1, Eigen::Dynamic>::Zero(hidden);
            da_t.row(i).segment(0, hidden) = (dc * gg * ig * (T(1) - ig)).matrix();
            da_t.row(i).segment(hidden, hidden) = (dc * c_prev * fg * (T(1) - fg)).matrix();
            da_t.row(i).segment(2 * hidden, hidden) = (dc * ig * (T(1) - gg * gg)).matrix();
            da_t.row(i).segment(3 * hidden, hidden) = (dhi * ct * og * (T(1) - og)).matrix();
            dc_next.row(i) = (dc * fg).matrix();
            da.row(r) = da_t.row(i);
            if (t > 0) {
              h_shift.row(r) = h.row(r - 1);
            } else {
              h_shift.row(r).setZero();
            }
          }
          dh_next.noalias() = da_t * wh.value().transpose();
        }
        if (tape->needs_grad(x.id)) tape->Accumulate(x.id, Matrix<T>(da * wx.value().transpose()));
        if (tape->needs_grad(wx.id)) tape->Accumulate(wx.id, Matrix<T>(x.value().transpose() * da));
        if (tape->needs_grad(wh.id)) tape->Accumulate(wh.id, Matrix<T>(h_shift.transpose() * da));
        if (tape->needs_grad(b.id)) tape->Accumulate(b.id, Matrix<T>(da.colwise().sum()));
      });
}

template Var<float> Lstm<float>(Var<float>, Var<float>, Var<float>, Var<float>, int);
template Var<double> Lstm<double>(Var<double>, Var<double>, Var<double>, Var<double>, int);

}  // namespace pvc::grad
