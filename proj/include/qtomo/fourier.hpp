// Copyright 2026 The qtomo Authors
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

#pragma once

#include <complex>
#include <vector>

#include "qtomo/common.hpp"

namespace qtomo {

namespace detail {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2 Cooley-Tukey transform. `sign` is the exponent sign:
/// -1 forward, +1 inverse (inverse is not scaled here).
inline void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * kTwoPi / len;
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

/// O(n^2) reference transform for sizes that are not powers of two.
inline std::vector<std::complex<double>> dft_naive(const std::vector<std::complex<double>>& a,
                                                   int sign) {
  const int n = static_cast<int>(a.size());
  std::vector<std::complex<double>> out(a.size());
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      const double ang = sign * kTwoPi * k * j / n;
      acc += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace detail

/// In-place discrete Fourier transform; inverse applies the 1/n scaling.
inline void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const int n = static_cast<int>(a.size());
  if (n <= 1) return;
  const int sign = inverse ? +1 : -1;
  if (detail::is_power_of_two(n)) {
    detail::fft_radix2(a, sign);
  } else {
    a = detail::dft_naive(a, sign);
  }
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

/// Spectral inverse of d/dX on a uniform grid: divide by ik with the k = 0
/// mode projected out, then pin the integration constant so the result
/// vanishes at the left edge. For inputs with zero integral (the only place
/// the evolution equations apply it) this matches the decaying antiderivative.
inline std::vector<double> spectral_antiderivative(const double* f, int n, double dx) {
  require(n >= 4, "GridTooCoarse", "spectral antiderivative needs at least 4 points");
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = f[i];
  fft(a, false);
  const double period = dx * n;
  a[0] = 0.0;
  for (int j = 1; j < n; ++j) {
    const int freq = (j <= n / 2) ? j : j - n;
    if (n % 2 == 0 && j == n / 2) {
      // Unpaired Nyquist mode has no well-defined odd derivative; drop it.
      a[static_cast<std::size_t>(j)] = 0.0;
      continue;
    }
    const double k = kTwoPi * freq / period;
    a[static_cast<std::size_t>(j)] /= std::complex<double>(0.0, k);
  }
  fft(a, true);
  std::vector<double> out(static_cast<std::size_t>(n));
  const double left = a[0].real();
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)].real() - left;
  return out;
}

inline std::vector<double> spectral_antiderivative(const std::vector<double>& f, double dx) {
  return spectral_antiderivative(f.data(), static_cast<int>(f.size()), dx);
}

}  // namespace qtomo
