/* Copyright 2026 The mtlqa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tensor/tensor.hpp"

namespace mtlqa {

// Binary parameter container, little-endian:
//   "MTLQ" | u32 version | u64 config digest | u32 record count
//   per record: u32 name length | name bytes | u32 ndim | u32 dims[ndim] | f32 payload
//   u64 FNV-1a checksum of all preceding bytes
inline constexpr std::uint32_t kCheckpointVersion = 2;

struct CheckpointRecord {
  std::string name;
  Shape shape;
  std::vector<float> values;
};

struct CheckpointContents {
  std::uint32_t version = kCheckpointVersion;
  std::uint64_t config_digest = 0;
  std::vector<CheckpointRecord> records;
};

void save_checkpoint(const std::string& path, const ParameterSet& params, std::uint64_t config_digest);
CheckpointContents read_checkpoint(const std::string& path);

// Copies records into params by name. Throws IntegrityError when the digest,
// the set of names, or any shape differs.
void load_checkpoint(const std::string& path, ParameterSet& params, std::uint64_t expected_digest);

}  // namespace mtlqa
