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

#ifndef PVC_BASE_IO_H_
#define PVC_BASE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace pvc {

std::string ReadFileBytes(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames, so readers never observe a
/// partially written file.
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace pvc

#endif  // PVC_BASE_IO_H_
