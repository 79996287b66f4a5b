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

#ifndef PVC_SIGNAL_WAV_H_
#define PVC_SIGNAL_WAV_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "pvc/signal/waveform.h"

namespace pvc::signal {

/// Parses a mono RIFF/WAVE image: PCM 16-bit or IEEE float32, any rate.
/// Throws IoError on malformed or unsupported content.
Waveform DecodeWav(std::string_view bytes);

/// Mono float32 RIFF image at w.sample_rate.
std::string EncodeWav(const Waveform& w);

/// Reads a WAV file and resamples it to target_rate (windowed sinc).
Waveform ReadWav(const std::filesystem::path& path, int target_rate = kSampleRate);

/// Writes mono float32 at 22050 Hz, resampling first if necessary.
void WriteWav(const std::filesystem::path& path, const Waveform& w);

}  // namespace pvc::signal

#endif  // PVC_SIGNAL_WAV_H_
