// svkit/dft.h

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

#ifndef SVKIT_DFT_H_
#define SVKIT_DFT_H_

#include <complex>
#include <vector>

namespace svkit {

/// Real-input DFT of a fixed size backed by an FFTW plan.  Plan creation is
/// serialized internally; Forward/Inverse on distinct objects may run
/// concurrently.
class RealDft {
 public:
  explicit RealDft(int size);
  ~RealDft();
  RealDft(const RealDft &) = delete;
  RealDft &operator=(const RealDft &) = delete;

  int Size() const { return size_; }
  int NumBins() const { return size_ / 2 + 1; }

  /// in has Size() reals (shorter input is zero-padded); out gets NumBins().
  void Forward(const double *in, size_t n, std::complex<double> *out);
  /// Unnormalized inverse: out has Size() reals equal to Size() * x.
  void Inverse(const std::complex<double> *in, double *out);

 private:
  int size_;
  double *real_ = nullptr;
  void *spec_ = nullptr;
  void *fwd_ = nullptr;
  void *inv_ = nullptr;
};

/// Smallest power of two >= n.
int NextPow2(size_t n);

/// Full linear convolution (length a + b - 1) through the FFT.
std::vector<double> FftConvolve(const std::vector<double> &a,
                                const std::vector<double> &b);

}  // namespace svkit

#endif  // SVKIT_DFT_H_
