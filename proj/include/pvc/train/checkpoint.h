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

#ifndef PVC_TRAIN_CHECKPOINT_H_
#define PVC_TRAIN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pvc/grad/tape.h"

namespace pvc::train {

inline constexpr std::string_view kCheckpointMagic{"PVCCKPT\0", 8};
inline constexpr std::string_view kMelMagic{"PVCMEL\0\0", 8};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Tensor {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<float> data;
};

/// Binary container:
///   8-byte magic | u32 version | u64 length + JSON header |
///   u32 tensor count | per tensor: u32 name length, name, u32 rank,
///   rank x u64 dims, float32 data | u32 CRC32 of everything before it.
/// All integers and floats little-endian.
struct Checkpoint {
  nlohmann::ordered_json header = nlohmann::ordered_json::object();
  std::vector<Tensor> tensors;

  const Tensor* Find(const std::string& name) const;
  const Tensor& Get(const std::string& name) const;  // IntegrityError if absent
  void Add(Tensor tensor);                           // InvalidArgument on a duplicate name
};

std::string SerializeCheckpoint(const Checkpoint& checkpoint, std::string_view magic = kCheckpointMagic);
/// Checks magic, then version (error names both), then size and CRC.
/// Every failure is an IntegrityError; nothing is returned on failure.
Checkpoint ParseCheckpoint(std::string_view bytes, std::string_view magic = kCheckpointMagic);

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint,
                    std::string_view magic = kCheckpointMagic);
Checkpoint LoadCheckpoint(const std::filesystem::path& path, std::string_view magic = kCheckpointMagic);

template <typename T>
Tensor MatrixTensor(const std::string& name, const RowMatrix<T>& m);
/// Rank-2 tensor to a matrix; IntegrityError on any other rank.
MatrixF TensorMatrix(const Tensor& tensor);

/// Stores every parameter value under its own name, prefixed.
template <typename T>
void AddParameters(Checkpoint& checkpoint, const grad::ParameterSet<T>& params,
                   const std::string& prefix = "");
/// Loads every parameter of the set; IntegrityError on a missing tensor or a
/// shape mismatch.
template <typename T>
void LoadParameters(const Checkpoint& checkpoint, grad::ParameterSet<T>& params,
                    const std::string& prefix = "");

}  // namespace pvc::train

#endif  // PVC_TRAIN_CHECKPOINT_H_
