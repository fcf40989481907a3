// svkit/src/io-util.cc

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

#include "svkit/io-util.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <unistd.h>

namespace svkit {

void ByteWriter::MatrixF64(const Matrix &m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) F64(m(r, c));
}

std::string ByteReader::Str() {
  uint32_t n = U32();
  if (pos_ + n > buf_.size()) throw DataError("bad string length: " + what_);
  std::string s(buf_.data() + pos_, n);
  pos_ += n;
  return s;
}

Matrix ByteReader::MatrixF64(size_t rows, size_t cols) {
  if (pos_ + rows * cols * 8 > buf_.size())
    throw DataError("unexpected end of file: " + what_);
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = F64();
  return m;
}

Vector ByteReader::VectorF64(size_t n) {
  Vector v(n);
  Raw(v.data(), n * sizeof(double));
  return v;
}

void ByteReader::ExpectMagic(const char *magic) {
  size_t n = std::strlen(magic);
  if (pos_ + n > buf_.size() ||
      std::memcmp(buf_.data() + pos_, magic, n) != 0)
    throw DataError(std::string("bad magic (expected ") + magic + "): " + what_);
  pos_ += n;
}

std::vector<char> ReadFileBytes(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open file: " + path);
  return std::vector<char>((std::istreambuf_iterator<char>(is)),
                           std::istreambuf_iterator<char>());
}

void WriteFileAtomic(const std::string &path, const std::vector<char> &bytes) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write file: " + path);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    os.flush();
    if (!os) {
      os.close();
      std::remove(tmp.c_str());
      throw DataError("write failed: " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw DataError("cannot rename into place: " + path + " (" + ec.message() +
                    ")");
  }
}

void WriteFileAtomic(const std::string &path, const std::string &text) {
  WriteFileAtomic(path, std::vector<char>(text.begin(), text.end()));
}

}  // namespace svkit
