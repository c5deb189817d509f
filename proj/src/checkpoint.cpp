// Copyright 2026 the adgsyn authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adgsyn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "adgsyn/half.hpp"

namespace adgsyn {

namespace {

// All multi-byte fields are little-endian. The hosts this targets are
// little-endian; refuse to write garbage elsewhere.
static_assert(std::endian::native == std::endian::little,
              "checkpoint container assumes a little-endian host");

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void save_checkpoint(const std::string& bin_path, const std::string& manifest_path,
                     const std::vector<NamedParam>& params) {
  std::ofstream os(bin_path, std::ios::binary);
  if (!os) throw_error(ErrorCode::IoFailure, "cannot open for write: " + bin_path);

  nlohmann::json manifest;
  manifest["format"] = "adgsyn-checkpoint";
  manifest["version"] = kCheckpointVersion;
  auto& table = manifest["params"] = nlohmann::json::array();

  os.write(kCheckpointMagic, 4);
  write_u32(os, kCheckpointVersion);
  write_u32(os, static_cast<std::uint32_t>(params.size()));

  for (const NamedParam& p : params) {
    const std::int64_t offset = os.tellp();
    write_u32(os, static_cast<std::uint32_t>(p.name.size()));
    os.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    const std::uint8_t prec = static_cast<std::uint8_t>(p.tensor.precision());
    os.write(reinterpret_cast<const char*>(&prec), 1);
    write_u32(os, 2);
    write_u32(os, static_cast<std::uint32_t>(p.tensor.rows()));
    write_u32(os, static_cast<std::uint32_t>(p.tensor.cols()));
    const std::int64_t n = p.tensor.numel();
    if (p.tensor.precision() == Precision::Half16) {
      std::vector<std::uint16_t> bits(static_cast<std::size_t>(n));
      for (std::int64_t i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = half_encode(p.tensor.data()[i]);
      os.write(reinterpret_cast<const char*>(bits.data()),
               static_cast<std::streamsize>(n * 2));
    } else {
      os.write(reinterpret_cast<const char*>(p.tensor.data()),
               static_cast<std::streamsize>(n * 4));
    }
    table.push_back({{"name", p.name},
                     {"shape", {p.tensor.rows(), p.tensor.cols()}},
                     {"precision", precision_name(p.tensor.precision())},
                     {"offset", offset},
                     {"elements", n}});
  }
  if (!os) throw_error(ErrorCode::IoFailure, "write failed: " + bin_path);
  os.close();

  std::ofstream ms(manifest_path);
  if (!ms) throw_error(ErrorCode::IoFailure, "cannot open for write: " + manifest_path);
  ms << manifest.dump(2) << "\n";
}

std::vector<NamedParam> load_checkpoint(const std::string& bin_path) {
  std::ifstream is(bin_path, std::ios::binary);
  if (!is) throw_error(ErrorCode::IoFailure, "cannot open: " + bin_path);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw_error(ErrorCode::IoFailure, "bad checkpoint magic in " + bin_path);
  }
  const std::uint32_t version = read_u32(is);
  if (version != kCheckpointVersion) {
    throw_error(ErrorCode::IoFailure,
                "unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t count = read_u32(is);

  std::vector<NamedParam> params;
  params.reserve(count);
  for (std::uint32_t idx = 0; idx < count; ++idx) {
    const std::uint32_t name_len = read_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    std::uint8_t prec = 0;
    is.read(reinterpret_cast<char*>(&prec), 1);
    const std::uint32_t rank = read_u32(is);
    if (rank != 2) {
      throw_error(ErrorCode::IoFailure, "unsupported tensor rank " + std::to_string(rank));
    }
    const std::uint32_t rows = read_u32(is);
    const std::uint32_t cols = read_u32(is);
    const std::int64_t n = static_cast<std::int64_t>(rows) * cols;
    std::vector<float> data(static_cast<std::size_t>(n));
    if (static_cast<Precision>(prec) == Precision::Half16) {
      std::vector<std::uint16_t> bits(static_cast<std::size_t>(n));
      is.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(n * 2));
      for (std::int64_t i = 0; i < n; ++i) data[static_cast<std::size_t>(i)] = half_decode(bits[static_cast<std::size_t>(i)]);
    } else {
      is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(n * 4));
    }
    if (!is) throw_error(ErrorCode::IoFailure, "truncated checkpoint: " + bin_path);
    params.push_back({std::move(name),
                      Tensor::from_data(static_cast<int>(rows), static_cast<int>(cols),
                                        std::move(data), static_cast<Precision>(prec))});
  }
  return params;
}

}  // namespace adgsyn
