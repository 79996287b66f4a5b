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

#ifndef PVC_BASE_PARALLEL_H_
#define PVC_BASE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace pvc {

/// Worker count from PROSODY_SSL_THREADS (0 or unset = hardware concurrency).
int WorkerCount();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into per-index slots so the outcome never depends on
/// scheduling. The first exception thrown by any worker is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pvc

#endif  // PVC_BASE_PARALLEL_H_
