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

#ifndef PVC_BASE_RNG_H_
#define PVC_BASE_RNG_H_

#include <cstdint>
#include <random>
#include <string>

namespace pvc {

using Rng = std::mt19937_64;

/// Mixes a base seed with up to two stream indices (splitmix64 finalizer), so
/// that per-speaker / per-utterance streams are independent of traversal order.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

std::string SerializeRng(const Rng& rng);
void DeserializeRng(const std::string& state, Rng* rng);

}  // namespace pvc

#endif  // PVC_BASE_RNG_H_
