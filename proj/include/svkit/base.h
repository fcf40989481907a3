// svkit/base.h

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

#ifndef SVKIT_BASE_H_
#define SVKIT_BASE_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace svkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Base of all toolkit errors.  The CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad invocation or configuration (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed, missing or inconsistent input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormatError : public DataError {
 public:
  using DataError::DataError;
};

/// Singular systems, non-finite values, failed factorizations (exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

inline void Require(bool cond, const std::string &msg) {
  if (!cond) throw DataError(msg);
}

inline double UniformReal(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double StdNormal(Rng &rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

/// Uniform integer in [lo, hi].
inline int64_t UniformInt(Rng &rng, int64_t lo, int64_t hi) {
  return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

/// Derives an independent stream seed from a base seed and a salt
/// (splitmix64 finalizer).
inline uint64_t MixSeed(uint64_t seed, uint64_t salt) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over a string, used to salt seeds with identifiers.
inline uint64_t HashString(const std::string &s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// v / |v|; norms below 1e-12 are a NumericError.
inline Vector LengthNormalize(const Vector &v) {
  double n = v.norm();
  if (!(n >= 1e-12)) throw NumericError("cannot length-normalize a (near) zero vector");
  return v / n;
}

}  // namespace svkit

#endif  // SVKIT_BASE_H_
