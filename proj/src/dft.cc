// svkit/src/dft.cc

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

#include "svkit/dft.h"

#include <algorithm>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "svkit/base.h"

namespace svkit {

namespace {
std::mutex &PlanMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealDft::RealDft(int size) : size_(size) {
  if (size <= 0) throw DataError("DFT size must be positive");
  std::lock_guard<std::mutex> lock(PlanMutex());
  real_ = fftw_alloc_real(size);
  fftw_complex *spec = fftw_alloc_complex(size / 2 + 1);
  spec_ = spec;
  fwd_ = fftw_plan_dft_r2c_1d(size, real_, spec, FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r_1d(size, spec, real_, FFTW_ESTIMATE);
}

RealDft::~RealDft() {
  std::lock_guard<std::mutex> lock(PlanMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
  fftw_free(real_);
  fftw_free(spec_);
}

void RealDft::Forward(const double *in, size_t n, std::complex<double> *out) {
  size_t m = std::min<size_t>(n, size_);
  std::memcpy(real_, in, m * sizeof(double));
  std::fill(real_ + m, real_ + size_, 0.0);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(static_cast<void *>(out), spec_,
              NumBins() * sizeof(std::complex<double>));
}

void RealDft::Inverse(const std::complex<double> *in, double *out) {
  std::memcpy(spec_, static_cast<const void *>(in),
              NumBins() * sizeof(std::complex<double>));
  fftw_execute(static_cast<fftw_plan>(inv_));
  std::memcpy(out, real_, size_ * sizeof(double));
}

int NextPow2(size_t n) {
  int p = 1;
  while (static_cast<size_t>(p) < n) p <<= 1;
  return p;
}

std::vector<double> FftConvolve(const std::vector<double> &a,
                                const std::vector<double> &b) {
  if (a.empty() || b.empty()) return {};
  size_t out_len = a.size() + b.size() - 1;
  int n = NextPow2(out_len);
  RealDft dft(n);
  std::vector<std::complex<double>> fa(dft.NumBins()), fb(dft.NumBins());
  dft.Forward(a.data(), a.size(), fa.data());
  dft.Forward(b.data(), b.size(), fb.data());
  for (size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  std::vector<double> full(n);
  dft.Inverse(fa.data(), full.data());
  full.resize(out_len);
  const double scale = 1.0 / n;
  for (double &v : full) v *= scale;
  return full;
}

}  // namespace svkit
