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

#include "pvc/signal/wav.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "pvc/base/error.h"
#include "pvc/base/io.h"
#include "pvc/signal/resample.h"

namespace pvc::signal {

static_assert(std::endian::native == std::endian::little, "WAV codec assumes little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T Load(std::string_view bytes, std::size_t offset) {
  if (offset + sizeof(T) > bytes.size()) throw IoError("WAV: unexpected end of data");
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return v;
}

template <typename T>
void Append(std::string* out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out->append(buf, sizeof(T));
}

}  // namespace

Waveform DecodeWav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw IoError("WAV: missing RIFF/WAVE header");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const auto size = Load<std::uint32_t>(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw IoError("WAV: chunk overruns file");
    if (id == "fmt ") {
      if (size < 16) throw IoError("WAV: short fmt chunk");
      format = Load<std::uint16_t>(bytes, body);
      channels = Load<std::uint16_t>(bytes, body + 2);
      rate = Load<std::uint32_t>(bytes, body + 4);
      bits = Load<std::uint16_t>(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (size < 26) throw IoError("WAV: short extensible fmt chunk");
        format = Load<std::uint16_t>(bytes, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.substr(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || !have_data) throw IoError("WAV: missing fmt or data chunk");
  if (channels != 1) throw IoError("WAV: only mono audio is supported");
  if (rate == 0) throw IoError("WAV: zero sample rate");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    const std::size_t n = data.size() / 2;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      w.samples[i] = Load<std::int16_t>(data, 2 * i) / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const std::size_t n = data.size() / 4;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const float v = Load<float>(data, 4 * i);
      if (!std::isfinite(v)) throw IoError("WAV: non-finite sample");
      w.samples[i] = v;
    }
  } else {
    throw IoError("WAV: unsupported encoding (format " + std::to_string(format) + ", " +
                  std::to_string(bits) + " bits)");
  }
  return w;
}

std::string EncodeWav(const Waveform& w) {
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 4);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  Append<std::uint32_t>(&out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  Append<std::uint32_t>(&out, 16);
  Append<std::uint16_t>(&out, kFormatFloat);
  Append<std::uint16_t>(&out, 1);
  Append<std::uint32_t>(&out, static_cast<std::uint32_t>(w.sample_rate));
  Append<std::uint32_t>(&out, static_cast<std::uint32_t>(w.sample_rate) * 4);
  Append<std::uint16_t>(&out, 4);
  Append<std::uint16_t>(&out, 32);
  out += "data";
  Append<std::uint32_t>(&out, data_bytes);
  for (double s : w.samples) Append<float>(&out, static_cast<float>(s));
  return out;
}

Waveform ReadWav(const std::filesystem::path& path, int target_rate) {
  Waveform w;
  try {
    w = DecodeWav(ReadFileBytes(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return ResampleTo(w, target_rate);
}

void WriteWav(const std::filesystem::path& path, const Waveform& w) {
  WriteFileBytes(path, EncodeWav(ResampleTo(w, kSampleRate)));
}

}  // namespace pvc::signal
