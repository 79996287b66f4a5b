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

#include "pvc/base/rng.h"

#include <sstream>

#include "pvc/base/error.h"

namespace pvc {

namespace {

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return SplitMix(SplitMix(SplitMix(seed) ^ (a + 0x632be59bd9b4e019ULL)) ^
                  (b + 0x2545f4914f6cdd1dULL));
}

std::string SerializeRng(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

void DeserializeRng(const std::string& state, Rng* rng) {
  std::istringstream is(state);
  is >> *rng;
  if (!is) throw IntegrityError("corrupt RNG state");
}

}  // namespace pvc
