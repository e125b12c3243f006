// fft.hpp - unitary discrete Fourier transforms for arbitrary lengths.
//
// Convention: F[q,k] = n^{-1/2} exp(-i 2*pi*q*k/n), so both directions carry
// the 1/sqrt(n) factor and ||Fv||_2 = ||v||_2 exactly.
//
// Power-of-two lengths run on an iterative radix-2 kernel with precomputed
// twiddles. Every other length goes through Bluestein's chirp-z embedding
// into a power-of-two circular convolution of size >= 2n-1, which keeps the
// cost O(n log n) for all n (composite or prime).
//
// A plan is immutable after construction and may be shared across threads;
// each transform call owns its scratch buffers.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace moddecon {

using cxd = std::complex<double>;
using cvec = std::vector<cxd>;

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("FftPlan: length must be positive");
    pow2_ = (n & (n - 1)) == 0;
    if (pow2_) {
      n2_ = n;
      build_pow2_tables();
    } else {
      n2_ = 1;
      while (n2_ < 2 * n - 1) n2_ <<= 1;
      build_pow2_tables();
      build_bluestein_tables();
    }
  }

  std::size_t size() const { return n_; }

  // out = F in (unitary forward transform)
  void forward(const cvec& in, cvec& out) const { transform(in, out, false); }

  // out = F* in (unitary inverse transform)
  void inverse(const cvec& in, cvec& out) const { transform(in, out, true); }

  cvec forward(const cvec& in) const {
    cvec out;
    forward(in, out);
    return out;
  }

  cvec inverse(const cvec& in) const {
    cvec out;
    inverse(in, out);
    return out;
  }

 private:
  std::size_t n_;
  bool pow2_;
  std::size_t n2_;                 // radix-2 working size (= n_ when pow2)
  std::vector<std::size_t> rev_;   // bit-reversal permutation for n2_
  std::vector<cxd> tw_;            // tw_[j] = exp(-i 2 pi j / n2_), j < n2_/2
  std::vector<cxd> chirp_;         // a_q = exp(-i pi q^2 / n), q < n
  std::vector<cxd> kernel_fft_;    // raw FFT of the chirp kernel, 1/L folded in

  void build_pow2_tables() {
    rev_.assign(n2_, 0);
    for (std::size_t i = 1; i < n2_; ++i)
      rev_[i] = (rev_[i >> 1] >> 1) | ((i & 1) ? (n2_ >> 1) : 0);
    tw_.resize(n2_ / 2 + 1);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n2_);
    for (std::size_t j = 0; j <= n2_ / 2; ++j)
      tw_[j] = std::polar(1.0, step * static_cast<double>(j));
  }

  void build_bluestein_tables() {
    chirp_.resize(n_);
    for (std::size_t q = 0; q < n_; ++q) {
      // reduce q^2 mod 2n before the trig call to keep full precision
      const std::uint64_t r = (static_cast<std::uint64_t>(q) * q) % (2 * n_);
      chirp_[q] = std::polar(1.0, -std::numbers::pi * static_cast<double>(r) /
                                      static_cast<double>(n_));
    }
    cvec kern(n2_, cxd{0.0, 0.0});
    for (std::size_t j = 0; j < n_; ++j) {
      const cxd b = std::conj(chirp_[j]);
      kern[j] = b;
      if (j > 0) kern[n2_ - j] = b;  // the chirp kernel is even
    }
    fft_pow2(kern.data(), false);
    const double inv_len = 1.0 / static_cast<double>(n2_);
    for (auto& c : kern) c *= inv_len;
    kernel_fft_ = std::move(kern);
  }

  // In-place raw radix-2 FFT of length n2_ (no normalization).
  void fft_pow2(cxd* a, bool inverse) const {
    const std::size_t n = n2_;
    for (std::size_t i = 0; i < n; ++i)
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t step = n / len;
      for (std::size_t base = 0; base < n; base += len) {
        for (std::size_t j = 0; j < half; ++j) {
          cxd w = tw_[j * step];
          if (inverse) w = std::conj(w);
          const cxd t = a[base + j + half] * w;
          a[base + j + half] = a[base + j] - t;
          a[base + j] += t;
        }
      }
    }
  }

  // Raw (unnormalized) forward DFT of length n_ via Bluestein.
  void bluestein_raw(const cvec& in, cvec& out) const {
    cvec u(n2_, cxd{0.0, 0.0});
    for (std::size_t q = 0; q < n_; ++q) u[q] = in[q] * chirp_[q];
    fft_pow2(u.data(), false);
    for (std::size_t i = 0; i < n2_; ++i) u[i] *= kernel_fft_[i];
    fft_pow2(u.data(), true);
    out.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = u[k] * chirp_[k];
  }

  void transform(const cvec& in, cvec& out, bool inverse) const {
    if (in.size() != n_)
      throw std::invalid_argument("FftPlan: input length does not match plan");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    if (pow2_) {
      out = in;
      fft_pow2(out.data(), inverse);
      for (auto& c : out) c *= scale;
      return;
    }
    if (!inverse) {
      bluestein_raw(in, out);
      for (auto& c : out) c *= scale;
    } else {
      cvec tmp(n_);
      for (std::size_t q = 0; q < n_; ++q) tmp[q] = std::conj(in[q]);
      bluestein_raw(tmp, out);
      for (auto& c : out) c = std::conj(c) * scale;
    }
  }
};

// One-shot unitary transforms. Hot paths should hold a plan instead.
inline cvec dft(const cvec& v) { return FftPlan(v.size()).forward(v); }
inline cvec idft(const cvec& v) { return FftPlan(v.size()).inverse(v); }

}  // namespace moddecon
