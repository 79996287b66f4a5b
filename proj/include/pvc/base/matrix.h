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

#ifndef PVC_BASE_MATRIX_H_
#define PVC_BASE_MATRIX_H_

#include <Eigen/Core>
#include <complex>

namespace pvc {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using MatrixD = RowMatrix<double>;
using MatrixF = RowMatrix<float>;
using ComplexMatrix = RowMatrix<std::complex<double>>;

}  // namespace pvc

#endif  // PVC_BASE_MATRIX_H_
