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

#include "pvc/corpus/manifest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pvc/base/error.h"
#include "pvc/base/io.h"

namespace pvc::corpus {

using nlohmann::ordered_json;

const char* SplitName(Split split) { return split == Split::kSeen ? "seen" : "unseen"; }

Split ParseSplit(const std::string& name) {
  if (name == "seen") return Split::kSeen;
  if (name == "unseen") return Split::kUnseen;
  throw ConfigError("unknown split '" + name + "'");
}

std::filesystem::path Manifest::Resolve(const ManifestEntry& e) const {
  std::filesystem::path p(e.path);
  return p.is_absolute() ? p : root / p;
}

std::vector<std::string> Manifest::Speakers() const {
  std::set<std::string> ids;
  for (const auto& e : entries) ids.insert(e.speaker);
  return {ids.begin(), ids.end()};
}

std::vector<std::string> Manifest::Speakers(Split split) const {
  std::set<std::string> ids;
  for (const auto& e : entries) {
    if (e.split == split) ids.insert(e.speaker);
  }
  return {ids.begin(), ids.end()};
}

std::vector<std::size_t> Manifest::Indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].split == split) out.push_back(i);
  }
  return out;
}

PitchGroup Manifest::GroupOf(const std::string& speaker) const {
  for (const auto& e : entries) {
    if (e.speaker == speaker) return e.group;
  }
  throw InvalidArgument("speaker '" + speaker + "' not in manifest");
}

int UnseenCount(int n_speakers) { return (n_speakers + 4) / 5; }

std::string SerializeManifest(const Manifest& manifest) {
  std::string out;
  for (const auto& e : manifest.entries) {
    ordered_json j;
    j["path"] = e.path;
    j["speaker"] = e.speaker;
    j["split"] = SplitName(e.split);
    j["f0_mean_hz"] = e.f0_mean_hz;
    j["rms"] = e.rms;
    j["group"] = GroupName(e.group);
    if (!e.content.empty()) j["content"] = e.content;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  WriteFileBytes(path, SerializeManifest(manifest));
}

Manifest ReadManifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("manifest not found: " + path.string());
  }
  std::istringstream in(ReadFileBytes(path));
  Manifest m;
  m.root = path.parent_path();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestEntry e;
      e.path = j.at("path").get<std::string>();
      e.speaker = j.at("speaker").get<std::string>();
      e.split = ParseSplit(j.at("split").get<std::string>());
      e.f0_mean_hz = j.at("f0_mean_hz").get<double>();
      e.rms = j.at("rms").get<double>();
      e.group = ParseGroup(j.at("group").get<std::string>());
      if (j.contains("content")) e.content = j.at("content").get<std::vector<int>>();
      m.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    } catch (const InvalidArgument& ex) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (m.entries.empty()) throw ConfigError("manifest has no entries: " + path.string());
  std::set<std::string> seen, unseen;
  for (const auto& e : m.entries) (e.split == Split::kSeen ? seen : unseen).insert(e.speaker);
  for (const auto& s : seen) {
    if (unseen.count(s)) throw ConfigError("speaker '" + s + "' appears in both splits");
  }
  return m;
}

}  // namespace pvc::corpus
