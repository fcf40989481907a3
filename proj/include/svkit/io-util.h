// svkit/io-util.h

// Copyright 2026  svkit authors

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

#ifndef SVKIT_IO_UTIL_H_
#define SVKIT_IO_UTIL_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "svkit/base.h"

namespace svkit {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

/// Appends little-endian scalars to a byte buffer.
class ByteWriter {
 public:
  void Raw(const void *p, size_t n) {
    const char *c = static_cast<const char *>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  void U8(uint8_t v) { Raw(&v, 1); }
  void U16(uint16_t v) { Raw(&v, 2); }
  void I16(int16_t v) { Raw(&v, 2); }
  void U32(uint32_t v) { Raw(&v, 4); }
  void U64(uint64_t v) { Raw(&v, 8); }
  void F32(float v) { Raw(&v, 4); }
  void F64(double v) { Raw(&v, 8); }
  void Str(const std::string &s) {
    U32(static_cast<uint32_t>(s.size()));
    Raw(s.data(), s.size());
  }
  void F64Array(const double *p, size_t n) { Raw(p, n * sizeof(double)); }
  /// Writes a matrix row-major.
  void MatrixF64(const Matrix &m);
  void VectorF64(const Vector &v) { F64Array(v.data(), v.size()); }

  const std::vector<char> &Bytes() const { return buf_; }
  std::vector<char> Take() { return std::move(buf_); }

 private:
  std::vector<char> buf_;
};

/// Bounds-checked little-endian reader; every overrun is a DataError naming
/// the source.
class ByteReader {
 public:
  ByteReader(std::vector<char> bytes, std::string what)
      : buf_(std::move(bytes)), what_(std::move(what)) {}

  void Raw(void *p, size_t n) {
    if (pos_ + n > buf_.size())
      throw DataError("unexpected end of file: " + what_);
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  uint8_t U8() { uint8_t v; Raw(&v, 1); return v; }
  uint32_t U32() { uint32_t v; Raw(&v, 4); return v; }
  uint64_t U64() { uint64_t v; Raw(&v, 8); return v; }
  float F32() { float v; Raw(&v, 4); return v; }
  double F64() { double v; Raw(&v, 8); return v; }
  std::string Str();
  Matrix MatrixF64(size_t rows, size_t cols);
  Vector VectorF64(size_t n);
  void ExpectMagic(const char *magic);
  bool AtEnd() const { return pos_ == buf_.size(); }
  const std::string &What() const { return what_; }

 private:
  std::vector<char> buf_;
  std::string what_;
  size_t pos_ = 0;
};

std::vector<char> ReadFileBytes(const std::string &path);

/// Writes to "<path>.tmp.<pid>" and renames over path, so readers never see
/// a partially written file.
void WriteFileAtomic(const std::string &path, const std::vector<char> &bytes);
void WriteFileAtomic(const std::string &path, const std::string &text);

}  // namespace svkit

#endif  // SVKIT_IO_UTIL_H_
