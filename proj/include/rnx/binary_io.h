// Copyright 2026 The rnx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNX_BINARY_IO_H_
#define RNX_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>

#include "rnx/common.h"

namespace rnx {

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

// Little-endian append-only buffer.
class ByteWriter {
 public:
  void Bytes(const void* data, std::size_t n) {
    buf_.append(static_cast<const char*>(data), n);
  }
  void U8(std::uint8_t v) { Bytes(&v, 1); }
  void U32(std::uint32_t v) { Bytes(&v, 4); }
  void U64(std::uint64_t v) { Bytes(&v, 8); }
  void F32(double v) {
    const float f = static_cast<float>(v);
    Bytes(&f, 4);
  }
  std::string Take() { return std::move(buf_); }

 private:
  std::string buf_;
};

// Bounds-checked reader; running off the end is reported as truncation.
class ByteReader {
 public:
  ByteReader(std::span<const char> bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  void Bytes(void* out, std::size_t n) {
    if (n > bytes_.size() - pos_) throw Error(what_ + ": truncated");
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t U8() { std::uint8_t v; Bytes(&v, 1); return v; }
  std::uint32_t U32() { std::uint32_t v; Bytes(&v, 4); return v; }
  std::uint64_t U64() { std::uint64_t v; Bytes(&v, 8); return v; }
  double F32() { float v; Bytes(&v, 4); return v; }
  bool AtEnd() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const char> bytes_;
  std::size_t pos_ = 0;
  std::string what_;
};

inline std::string ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline void WriteBytes(const std::filesystem::path& path,
                       const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace rnx

#endif  // RNX_BINARY_IO_H_
