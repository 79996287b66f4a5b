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

#include "pvc/train/checkpoint.h"

#include <bit>
#include <cstring>

#include "pvc/base/error.h"
#include "pvc/base/hash.h"
#include "pvc/base/io.h"

namespace pvc::train {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

template <typename V>
void Put(std::string& out, V v) {
  char buf[sizeof(V)];
  std::memcpy(buf, &v, sizeof(V));
  out.append(buf, sizeof(V));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename V>
  V Get() {
    Need(sizeof(V));
    V v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(V));
    pos_ += sizeof(V);
    return v;
  }

  std::string_view Take(std::size_t n) {
    Need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw IntegrityError("checkpoint is truncated");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint64_t Elements(const std::vector<std::uint64_t>& dims) {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

}  // namespace

const Tensor* Checkpoint::Find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const Tensor& Checkpoint::Get(const std::string& name) const {
  const Tensor* t = Find(name);
  if (!t) throw IntegrityError("checkpoint has no tensor '" + name + "'");
  return *t;
}

void Checkpoint::Add(Tensor tensor) {
  if (Find(tensor.name)) throw InvalidArgument("duplicate tensor name '" + tensor.name + "'");
  if (Elements(tensor.dims) != tensor.data.size()) {
    throw InvalidArgument("tensor '" + tensor.name + "' data does not match its dims");
  }
  tensors.push_back(std::move(tensor));
}

std::string SerializeCheckpoint(const Checkpoint& ck, std::string_view magic) {
  std::string out;
  out.append(magic);
  Put<std::uint32_t>(out, kCheckpointVersion);
  const std::string header = ck.header.dump();
  Put<std::uint64_t>(out, header.size());
  out.append(header);
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(ck.tensors.size()));
  for (const auto& t : ck.tensors) {
    Put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
    out.append(t.name);
    Put<std::uint32_t>(out, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) Put<std::uint64_t>(out, d);
    out.append(reinterpret_cast<const char*>(t.data.data()), t.data.size() * sizeof(float));
  }
  const auto* p = reinterpret_cast<const std::uint8_t*>(out.data());
  Put<std::uint32_t>(out, Crc32({p, out.size()}));
  return out;
}

Checkpoint ParseCheckpoint(std::string_view bytes, std::string_view magic) {
  if (bytes.size() < magic.size() || bytes.substr(0, magic.size()) != magic) {
    throw IntegrityError("not a checkpoint file (bad magic)");
  }
  Reader r(bytes.substr(magic.size()));
  const auto version = r.Get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw IntegrityError("unsupported version " + std::to_string(version) + " (this build reads version " +
                         std::to_string(kCheckpointVersion) + ")");
  }
  if (bytes.size() < magic.size() + 8) throw IntegrityError("checkpoint is truncated");
  const auto body = bytes.substr(0, bytes.size() - 4);
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + body.size(), 4);
  if (Crc32({reinterpret_cast<const std::uint8_t*>(body.data()), body.size()}) != stored) {
    throw IntegrityError("checkpoint checksum mismatch (file is corrupt or truncated)");
  }

  Reader b(body.substr(magic.size() + 4));
  Checkpoint ck;
  const auto header_len = b.Get<std::uint64_t>();
  if (header_len > b.remaining()) throw IntegrityError("checkpoint header length out of range");
  try {
    ck.header = nlohmann::ordered_json::parse(b.Take(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  const auto count = b.Get<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    Tensor t;
    const auto name_len = b.Get<std::uint32_t>();
    t.name = std::string(b.Take(name_len));
    const auto rank = b.Get<std::uint32_t>();
    if (rank > 8) throw IntegrityError("tensor '" + t.name + "' has implausible rank");
    for (std::uint32_t k = 0; k < rank; ++k) t.dims.push_back(b.Get<std::uint64_t>());
    const std::uint64_t n = Elements(t.dims);
    if (n > b.remaining() / sizeof(float)) throw IntegrityError("tensor '" + t.name + "' overruns the file");
    t.data.resize(n);
    const auto raw = b.Take(n * sizeof(float));
    std::memcpy(t.data.data(), raw.data(), raw.size());
    if (ck.Find(t.name)) throw IntegrityError("duplicate tensor '" + t.name + "'");
    ck.tensors.push_back(std::move(t));
  }
  if (b.remaining() != 0) throw IntegrityError("trailing bytes after the last tensor");
  return ck;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ck, std::string_view magic) {
  WriteFileBytes(path, SerializeCheckpoint(ck, magic));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path, std::string_view magic) {
  return ParseCheckpoint(ReadFileBytes(path), magic);
}

template <typename T>
Tensor MatrixTensor(const std::string& name, const RowMatrix<T>& m) {
  Tensor t;
  t.name = name;
  t.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  t.data.resize(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) t.data[i] = static_cast<float>(m.data()[i]);
  return t;
}

MatrixF TensorMatrix(const Tensor& t) {
  if (t.dims.size() != 2) throw IntegrityError("tensor '" + t.name + "' is not rank 2");
  MatrixF m(static_cast<Eigen::Index>(t.dims[0]), static_cast<Eigen::Index>(t.dims[1]));
  std::memcpy(m.data(), t.data.data(), t.data.size() * sizeof(float));
  return m;
}

template <typename T>
void AddParameters(Checkpoint& ck, const grad::ParameterSet<T>& params, const std::string& prefix) {
  for (std::size_t i = 0; i < params.size(); ++i) ck.Add(MatrixTensor(prefix + params[i].name, params[i].value));
}

template <typename T>
void LoadParameters(const Checkpoint& ck, grad::ParameterSet<T>& params, const std::string& prefix) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    const Tensor& t = ck.Get(prefix + p.name);
    if (t.dims.size() != 2 || t.dims[0] != static_cast<std::uint64_t>(p.value.rows()) ||
        t.dims[1] != static_cast<std::uint64_t>(p.value.cols())) {
      throw IntegrityError("tensor '" + t.name + "' does not match the model shape " +
                           std::to_string(p.value.rows()) + " x " + std::to_string(p.value.cols()));
    }
    p.value = TensorMatrix(t).template cast<T>();
  }
}

template Tensor MatrixTensor<float>(const std::string&, const RowMatrix<float>&);
template Tensor MatrixTensor<double>(const std::string&, const RowMatrix<double>&);
template void AddParameters<float>(Checkpoint&, const grad::ParameterSet<float>&, const std::string&);
template void AddParameters<double>(Checkpoint&, const grad::ParameterSet<double>&, const std::string&);
template void LoadParameters<float>(const Checkpoint&, grad::ParameterSet<float>&, const std::string&);
template void LoadParameters<double>(const Checkpoint&, grad::ParameterSet<double>&, const std::string&);

}  // namespace pvc::train
