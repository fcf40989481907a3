// svkit/src/wave.cc

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

#include "svkit/wave.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "svkit/io-util.h"

namespace svkit {

double Waveform::Peak() const {
  double p = 0.0;
  for (double s : samples) p = std::max(p, std::abs(s));
  return p;
}

void Waveform::Validate() const {
  if (sample_rate <= 0)
    throw DataError("waveform has non-positive sample rate");
  if (samples.empty()) throw DataError("waveform is empty");
  for (double s : samples)
    if (!std::isfinite(s)) throw DataError("waveform has non-finite samples");
}

namespace {

uint32_t GetU32(const char *p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

uint16_t GetU16(const char *p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

}  // namespace

Waveform DecodeWav(const std::vector<char> &bytes, const std::string &what) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw DataError("malformed WAV header (no RIFF/WAVE): " + what);
  size_t pos = 12;
  bool have_fmt = false;
  int rate = 0;
  while (pos + 8 <= bytes.size()) {
    const char *chunk = bytes.data() + pos;
    uint32_t chunk_size = GetU32(chunk + 4);
    size_t body = pos + 8;
    if (body + chunk_size > bytes.size() && std::memcmp(chunk, "data", 4) != 0)
      throw DataError("truncated WAV chunk: " + what);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw DataError("malformed fmt chunk: " + what);
      uint16_t format = GetU16(bytes.data() + body);
      uint16_t channels = GetU16(bytes.data() + body + 2);
      rate = static_cast<int>(GetU32(bytes.data() + body + 4));
      uint16_t bits = GetU16(bytes.data() + body + 14);
      if (format != 1 || bits != 16)
        throw UnsupportedFormatError("unsupported WAV encoding (need PCM16): " +
                                     what);
      if (channels != 1)
        throw UnsupportedFormatError("unsupported WAV channel count " +
                                     std::to_string(channels) + ": " + what);
      if (rate <= 0) throw DataError("WAV sample rate is zero: " + what);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw DataError("WAV data chunk before fmt chunk: " + what);
      size_t n_bytes = std::min<size_t>(chunk_size, bytes.size() - body);
      size_t n = n_bytes / 2;
      std::vector<double> samples(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t v;
        std::memcpy(&v, bytes.data() + body + 2 * i, 2);
        samples[i] = v / 32768.0;
      }
      return Waveform(std::move(samples), rate);
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  throw DataError("WAV file has no data chunk: " + what);
}

Waveform ReadWav(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open WAV file: " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
  return DecodeWav(bytes, path);
}

std::vector<char> EncodeWav(const Waveform &w) {
  for (double s : w.samples)
    if (!std::isfinite(s)) throw DataError("cannot write non-finite samples");
  const uint32_t data_bytes = static_cast<uint32_t>(w.samples.size() * 2);
  ByteWriter out;
  out.Raw("RIFF", 4);
  out.U32(36 + data_bytes);
  out.Raw("WAVE", 4);
  out.Raw("fmt ", 4);
  out.U32(16);
  out.U16(1);  // PCM
  out.U16(1);  // mono
  out.U32(static_cast<uint32_t>(w.sample_rate));
  out.U32(static_cast<uint32_t>(w.sample_rate) * 2);
  out.U16(2);
  out.U16(16);
  out.Raw("data", 4);
  out.U32(data_bytes);
  const double hi = 1.0 - 1.0 / 32768.0;
  for (double s : w.samples) {
    double c = std::clamp(s, -1.0, hi);
    out.I16(static_cast<int16_t>(std::lrint(c * 32768.0)));
  }
  return out.Take();
}

void WriteWav(const Waveform &w, const std::string &path) {
  WriteFileAtomic(path, EncodeWav(w));
}

}  // namespace svkit
