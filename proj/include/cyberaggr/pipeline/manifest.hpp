/*
 * Copyright 2026 The cyberaggr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Every output file F is accompanied by F.manifest.json recording the tool
// version, the command, the hash of the configuration sections the command
// reads, the SHA-256 of each input file and of F itself. The manifest's own
// "run_hash" summarizes command + config hash + input hashes; outputs are
// written once per run hash and only replaced under --force.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "cyberaggr/errors.hpp"

namespace cyberaggr::pipeline {

inline constexpr std::string_view kToolName = "cyberaggr";
inline constexpr std::string_view kToolVersion = "1.0.0";

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw DataError("SHA-256 initialization failed");
    }
  }

  void update(std::string_view bytes) {
    if (EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size()) != 1) {
      throw DataError("SHA-256 update failed");
    }
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
      throw DataError("SHA-256 finalization failed");
    }
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
      std::snprintf(buf, sizeof buf, "%02x", md[i]);
      out += buf;
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

inline std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes);
  return h.hex();
}

inline std::string sha256_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
  if (in.bad()) throw DataError("read failure on " + p.string());
  return h.hex();
}

inline std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return output.string() + ".manifest.json";
}

/// Inputs and configuration of one command invocation.
struct RunIdentity {
  std::string command;
  std::string config_hash;
  std::map<std::string, std::string> inputs;  // path -> sha256

  std::string run_hash() const {
    nlohmann::json j = {{"command", command},
                        {"config_hash", config_hash},
                        {"tool_version", kToolVersion}};
    // Inputs are identified by content; their paths do not matter.
    std::vector<std::string> hashes;
    for (const auto& [path, h] : inputs) hashes.push_back(h);
    j["inputs"] = hashes;
    return sha256_hex(j.dump());
  }
};

inline RunIdentity make_identity(std::string command, const nlohmann::json& config_sections,
                                 const std::vector<std::filesystem::path>& inputs) {
  RunIdentity id;
  id.command = std::move(command);
  id.config_hash = sha256_hex(config_sections.dump());
  for (const auto& p : inputs) id.inputs[p.string()] = sha256_file(p);
  return id;
}

enum class WriteDecision { kWrite, kUpToDate };

/// Decides whether `output` may be (re)written for this run. An output whose
/// manifest carries the same run hash and whose bytes are unchanged is up to
/// date; any other existing output needs --force.
inline WriteDecision check_output(const std::filesystem::path& output,
                                  const RunIdentity& id, bool force) {
  const auto mp = manifest_path(output);
  if (force || (!std::filesystem::exists(output) && !std::filesystem::exists(mp))) {
    return WriteDecision::kWrite;
  }
  if (std::filesystem::exists(output) && std::filesystem::exists(mp)) {
    try {
      std::ifstream in(mp);
      const auto m = nlohmann::json::parse(in);
      if (m.at("run_hash").get<std::string>() == id.run_hash() &&
          m.at("output_sha256").get<std::string>() == sha256_file(output)) {
        return WriteDecision::kUpToDate;
      }
    } catch (const nlohmann::json::exception&) {
      // fall through: an unreadable manifest is treated as a foreign output
    }
  }
  throw ValidationError(output.string() +
                        " already exists from a different run; pass --force to overwrite");
}

/// Writes `bytes` to `output` via a temporary file and then its manifest.
inline void write_output(const std::filesystem::path& output, std::string_view bytes,
                         const RunIdentity& id) {
  std::filesystem::create_directories(output.parent_path().empty()
                                          ? std::filesystem::path(".")
                                          : output.parent_path());
  const auto tmp = std::filesystem::path(output.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, output);
  nlohmann::json m;
  m["tool"] = kToolName;
  m["tool_version"] = kToolVersion;
  m["command"] = id.command;
  m["config_hash"] = id.config_hash;
  m["inputs"] = id.inputs;
  m["run_hash"] = id.run_hash();
  m["output"] = output.filename().string();
  m["output_sha256"] = sha256_hex(bytes);
  std::ofstream mo(manifest_path(output), std::ios::trunc);
  mo << m.dump(2) << "\n";
  if (!mo) throw DataError("failed writing manifest for " + output.string());
}

}  // namespace cyberaggr::pipeline
