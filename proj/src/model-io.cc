// svkit/src/model-io.cc

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

#include "svkit/model-io.h"

#include <cmath>

namespace svkit {

std::string ModelTypeName(ModelType t) {
  switch (t) {
    case ModelType::kAutoencoder: return "autoencoder";
    case ModelType::kUbm: return "ubm";
    case ModelType::kIvector: return "ivector-extractor";
    case ModelType::kLda: return "lda";
    case ModelType::kXvector: return "xvector";
    case ModelType::kPlda: return "plda";
  }
  return "unknown";
}

std::vector<char> WrapModel(ModelType type, const ByteWriter &payload) {
  ByteWriter w;
  w.Raw("SVKM1", 5);
  w.U8(kModelVersion);
  w.U8(static_cast<uint8_t>(type));
  w.Raw(payload.Bytes().data(), payload.Bytes().size());
  return w.Take();
}

void SaveModelFile(const std::string &path, ModelType type, const ByteWriter &payload) {
  WriteFileAtomic(path, WrapModel(type, payload));
}

ByteReader OpenModel(std::vector<char> bytes, ModelType type, const std::string &what) {
  ByteReader r(std::move(bytes), what);
  r.ExpectMagic("SVKM1");
  uint8_t version = r.U8();
  if (version != kModelVersion)
    throw UnsupportedFormatError(what + ": model version " + std::to_string(version));
  uint8_t tag = r.U8();
  if (tag != static_cast<uint8_t>(type))
    throw DataError(what + ": expected a " + ModelTypeName(type) + " model, found type tag " +
                    std::to_string(tag));
  return r;
}

ByteReader LoadModelFile(const std::string &path, ModelType type) {
  return OpenModel(ReadFileBytes(path), type, path);
}

void EmbeddingArchive::Add(const std::string &id, const Vector &v) {
  if (dim_ < 0) dim_ = static_cast<int>(v.size());
  if (v.size() != dim_)
    throw DataError("embedding '" + id + "' has dim " + std::to_string(v.size()) +
                    ", archive dim " + std::to_string(dim_));
  if (!v.allFinite()) throw NumericError("non-finite embedding '" + id + "'");
  if (!index_.emplace(id, ids_.size()).second)
    throw DataError("duplicate embedding id '" + id + "'");
  ids_.push_back(id);
  vectors_.push_back(v);
}

const Vector &EmbeddingArchive::Get(const std::string &id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw DataError("no embedding for '" + id + "'");
  return vectors_[it->second];
}

std::vector<char> EncodeEmbeddings(const EmbeddingArchive &a) {
  ByteWriter w;
  w.Raw("SVKE1", 5);
  w.U32(static_cast<uint32_t>(a.size()));
  w.U32(static_cast<uint32_t>(std::max(a.Dim(), 0)));
  for (size_t i = 0; i < a.size(); ++i) {
    w.Str(a.Ids()[i]);
    for (double v : a.At(i)) w.F32(static_cast<float>(v));
  }
  return w.Take();
}

void WriteEmbeddings(const EmbeddingArchive &a, const std::string &path) {
  WriteFileAtomic(path, EncodeEmbeddings(a));
}

EmbeddingArchive ReadEmbeddings(const std::string &path) {
  ByteReader r(ReadFileBytes(path), path);
  r.ExpectMagic("SVKE1");
  uint32_t count = r.U32(), dim = r.U32();
  EmbeddingArchive a(static_cast<int>(dim));
  for (uint32_t i = 0; i < count; ++i) {
    std::string id = r.Str();
    Vector v(dim);
    for (uint32_t d = 0; d < dim; ++d) v(d) = r.F32();
    a.Add(id, v);
  }
  if (!r.AtEnd()) throw DataError(path + ": trailing bytes");
  return a;
}

}  // namespace svkit
