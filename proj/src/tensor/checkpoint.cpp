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

#include "tensor/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "common/error.hpp"
#include "common/settings.hpp"

namespace mtlqa {

namespace {

constexpr char kMagic[4] = {'M', 'T', 'L', 'Q'};

template <class T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T take(std::istream& in, const std::string& path) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw IntegrityError("checkpoint '" + path + "' is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParameterSet& params, std::uint64_t config_digest) {
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, config_digest);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& e : params.entries()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.tensor.ndim()));
    for (auto d : e.tensor.shape()) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    for (double v : e.tensor.data()) put<float>(out, static_cast<float>(v));
  }
  // Trailer: checksum of everything before it, so flipped payload bits are caught.
  const std::string body = out.str();
  put<std::uint64_t>(out, fnv1a64(body));

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write checkpoint '" + path + "'");
  const std::string bytes = out.str();
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("failed writing checkpoint '" + path + "'");
}

CheckpointContents read_checkpoint(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open checkpoint '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw IntegrityError("'" + path + "' is not a checkpoint (bad magic)");
  }
  if (bytes.size() < 4 + 4 + 8 + 4 + 8) throw IntegrityError("checkpoint '" + path + "' is truncated");
  const std::string body = bytes.substr(0, bytes.size() - 8);
  std::istringstream trailer(bytes.substr(bytes.size() - 8), std::ios::binary);
  if (take<std::uint64_t>(trailer, path) != fnv1a64(body)) {
    throw IntegrityError("checkpoint '" + path + "' fails its checksum (corrupt or truncated)");
  }

  std::istringstream in(body, std::ios::binary);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw IntegrityError("'" + path + "' is not a checkpoint (bad magic)");
  }
  CheckpointContents c;
  c.version = take<std::uint32_t>(in, path);
  if (c.version != kCheckpointVersion) {
    throw IntegrityError("checkpoint '" + path + "' has format version " + std::to_string(c.version) +
                         ", expected " + std::to_string(kCheckpointVersion));
  }
  c.config_digest = take<std::uint64_t>(in, path);
  const auto count = take<std::uint32_t>(in, path);
  for (std::uint32_t r = 0; r < count; ++r) {
    CheckpointRecord rec;
    const auto name_len = take<std::uint32_t>(in, path);
    if (name_len > 4096) throw IntegrityError("checkpoint '" + path + "' has an implausible record name length");
    rec.name.resize(name_len);
    if (!in.read(rec.name.data(), name_len)) throw IntegrityError("checkpoint '" + path + "' is truncated");
    const auto ndim = take<std::uint32_t>(in, path);
    if (ndim > 8) throw IntegrityError("checkpoint record '" + rec.name + "' has " + std::to_string(ndim) + " dims");
    for (std::uint32_t d = 0; d < ndim; ++d) rec.shape.push_back(take<std::uint32_t>(in, path));
    rec.values.resize(shape_numel(rec.shape));
    for (auto& v : rec.values) v = take<float>(in, path);
    c.records.push_back(std::move(rec));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IntegrityError("checkpoint '" + path + "' has trailing bytes");
  }
  return c;
}

void load_checkpoint(const std::string& path, ParameterSet& params, std::uint64_t expected_digest) {
  auto c = read_checkpoint(path);
  if (c.config_digest != expected_digest) {
    throw IntegrityError("checkpoint '" + path + "' digest " + hex64(c.config_digest) +
                         " does not match configuration digest " + hex64(expected_digest));
  }
  if (c.records.size() != params.size()) {
    throw IntegrityError("checkpoint '" + path + "' holds " + std::to_string(c.records.size()) +
                         " parameters, model expects " + std::to_string(params.size()));
  }
  for (const auto& rec : c.records) {
    if (!params.contains(rec.name)) throw IntegrityError("checkpoint parameter '" + rec.name + "' is unknown");
    auto& t = params.get(rec.name);
    if (t.shape() != rec.shape) {
      throw IntegrityError("checkpoint parameter '" + rec.name + "' has shape " + shape_str(rec.shape) +
                           ", model expects " + shape_str(t.shape()));
    }
    auto dst = t.data();
    for (std::size_t i = 0; i < rec.values.size(); ++i) dst[i] = rec.values[i];
  }
}

}  // namespace mtlqa
