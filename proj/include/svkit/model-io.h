// svkit/model-io.h

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

#ifndef SVKIT_MODEL_IO_H_
#define SVKIT_MODEL_IO_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "svkit/base.h"
#include "svkit/io-util.h"

namespace svkit {

/// Type tags of the "SVKM1" model container.
enum class ModelType : uint8_t {
  kAutoencoder = 1,
  kUbm = 2,
  kIvector = 3,
  kLda = 4,
  kXvector = 5,
  kPlda = 6,
};

constexpr uint8_t kModelVersion = 1;

std::string ModelTypeName(ModelType t);

/// Container layout: "SVKM1", version byte, type byte, payload.
std::vector<char> WrapModel(ModelType type, const ByteWriter &payload);
void SaveModelFile(const std::string &path, ModelType type, const ByteWriter &payload);

/// Checks magic, version and type tag; the returned reader is positioned at
/// the payload.
ByteReader OpenModel(std::vector<char> bytes, ModelType type, const std::string &what);
ByteReader LoadModelFile(const std::string &path, ModelType type);

/// Utterance embeddings keyed by id, in insertion order.
class EmbeddingArchive {
 public:
  EmbeddingArchive() = default;
  explicit EmbeddingArchive(int dim) : dim_(dim) {}

  void Add(const std::string &id, const Vector &v);
  bool Contains(const std::string &id) const { return index_.count(id) > 0; }
  const Vector &Get(const std::string &id) const;
  const std::vector<std::string> &Ids() const { return ids_; }
  const Vector &At(size_t i) const { return vectors_[i]; }
  size_t size() const { return ids_.size(); }
  int Dim() const { return dim_; }

 private:
  int dim_ = -1;
  std::vector<std::string> ids_;
  std::vector<Vector> vectors_;
  std::map<std::string, size_t> index_;
};

/// "SVKE1", u32 count, u32 dim, then per record a u32-length-prefixed id and
/// dim float32 values.  Values are rounded to float32 on write.
std::vector<char> EncodeEmbeddings(const EmbeddingArchive &a);
void WriteEmbeddings(const EmbeddingArchive &a, const std::string &path);
EmbeddingArchive ReadEmbeddings(const std::string &path);

}  // namespace svkit

#endif  // SVKIT_MODEL_IO_H_
