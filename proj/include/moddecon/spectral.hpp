// spectral.hpp - problem geometry, partial Fourier operators, circular
// convolution, sign sequences, and coherence measures.
//
// The K-dimensional signal subspace is spanned by the first K columns of
// F* and the M-tap channel lives on the first M grid points, so
//
//   synthesize(x)   = F*_K x   (time samples of the bandlimited signal)
//   analyze_taps(h) = F_M  h   (spectrum of the zero-padded channel)
//
// Both are isometries: the columns of F* and F are orthonormal. Coherences
// are the Q-normalized peak-to-energy ratios of those images,
//
//   mu_h^2 = Q ||F_M h||_inf^2 / ||h||_2^2,
//   nu_x^2 = Q ||F*_K x||_inf^2 / ||x||_2^2,
//
// and always lie in [1, Q].

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fft.hpp"
#include "rng.hpp"

namespace moddecon {

// ---- small vector helpers --------------------------------------------------

inline double norm2_sq(const cvec& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

inline double norm2(const cvec& v) { return std::sqrt(norm2_sq(v)); }

inline double max_abs(const cvec& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

// <a, b> = sum conj(a_i) b_i
inline cxd inner(const cvec& a, const cvec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("inner: length mismatch");
  cxd s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline cvec conj_vec(const cvec& v) {
  cvec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
  return out;
}

inline cvec zero_pad(const cvec& v, std::size_t n) {
  if (v.size() > n) throw std::invalid_argument("zero_pad: target too short");
  cvec out(n, cxd{0.0, 0.0});
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

inline cvec restrict_to(const cvec& v, std::size_t n) {
  if (v.size() < n)
    throw std::invalid_argument("restrict_to: source too short");
  return cvec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
}

inline bool all_finite(const cvec& v) {
  for (const auto& c : v)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// ---- domain types ------------------------------------------------------------

// Integer geometry of one deconvolution instance: Q samples per period,
// K Fourier coefficients, M channel taps. Requires K <= Q and M <= Q.
struct ProblemDims {
  std::size_t Q{};
  std::size_t K{};
  std::size_t M{};

  ProblemDims(std::size_t q, std::size_t k, std::size_t m) : Q(q), K(k), M(m) {
    if (Q == 0 || K == 0 || M == 0)
      throw std::invalid_argument("ProblemDims: Q, K, M must be positive");
    if (K > Q)
      throw std::invalid_argument("ProblemDims: K = " + std::to_string(K) +
                                  " exceeds Q = " + std::to_string(Q));
    if (M > Q)
      throw std::invalid_argument("ProblemDims: M = " + std::to_string(M) +
                                  " exceeds Q = " + std::to_string(Q));
  }

  // K = 2B + 1 coefficients for a signal bandlimited to B
  static ProblemDims from_bandlimit(std::size_t q, std::size_t b,
                                    std::size_t m) {
    return ProblemDims(q, 2 * b + 1, m);
  }

  // exact when K is odd (K = 2B + 1); floor((K-1)/2) otherwise
  std::size_t bandlimit() const { return (K - 1) / 2; }
};

// Length-Q vector of +/-1 samples of the modulating waveform,
// reproducible from its seed.
struct SignSequence {
  std::vector<double> signs;
  std::uint64_t seed = 0;
};

inline SignSequence rademacher(std::size_t q, std::uint64_t seed) {
  if (q == 0) throw std::invalid_argument("rademacher: Q must be positive");
  SignSequence out;
  out.seed = seed;
  out.signs.resize(q);
  Xoshiro256ss rng(seed);
  for (auto& s : out.signs) s = rng.rademacher();
  return out;
}

struct CoherencePair {
  double mu_sq = 0.0;  // channel coherence mu^2
  double nu_sq = 0.0;  // signal coherence nu^2
};

// ---- operations --------------------------------------------------------------

// F*_K x: zero-pad the K coefficients to length Q and apply the inverse DFT.
inline cvec synthesize(const cvec& x, const ProblemDims& dims,
                       const FftPlan& plan) {
  if (x.size() != dims.K)
    throw std::invalid_argument("synthesize: expected length K input");
  return plan.inverse(zero_pad(x, dims.Q));
}

inline cvec synthesize(const cvec& x, const ProblemDims& dims) {
  return synthesize(x, dims, FftPlan(dims.Q));
}

// F_M h: zero-pad the M taps to length Q and apply the forward DFT.
inline cvec analyze_taps(const cvec& h, const ProblemDims& dims,
                         const FftPlan& plan) {
  if (h.size() != dims.M)
    throw std::invalid_argument("analyze_taps: expected length M input");
  return plan.forward(zero_pad(h, dims.Q));
}

inline cvec analyze_taps(const cvec& h, const ProblemDims& dims) {
  return analyze_taps(h, dims, FftPlan(dims.Q));
}

// Q-point circular convolution of a with b zero-padded to length Q:
// sqrt(Q) * idft(dft(a) .* dft(pad(b))) under the unitary convention.
inline cvec circular_convolve(const cvec& a, const cvec& b,
                              const FftPlan& plan) {
  const std::size_t q = a.size();
  if (b.size() > q)
    throw std::invalid_argument(
        "circular_convolve: second factor longer than first");
  if (plan.size() != q)
    throw std::invalid_argument("circular_convolve: plan size mismatch");
  cvec fa = plan.forward(a);
  const cvec fb = plan.forward(zero_pad(b, q));
  const double root_q = std::sqrt(static_cast<double>(q));
  for (std::size_t i = 0; i < q; ++i) fa[i] *= fb[i] * root_q;
  return plan.inverse(fa);
}

inline cvec circular_convolve(const cvec& a, const cvec& b) {
  return circular_convolve(a, b, FftPlan(a.size()));
}

// Coherences of a channel/signal pair; each lies in [1, Q].
inline CoherencePair coherences(const cvec& h, const cvec& x,
                                const ProblemDims& dims) {
  const double h_energy = norm2_sq(h);
  const double x_energy = norm2_sq(x);
  if (h_energy <= 0.0 || x_energy <= 0.0)
    throw std::invalid_argument("coherences: inputs must be nonzero");
  const FftPlan plan(dims.Q);
  const double peak_h = max_abs(analyze_taps(h, dims, plan));
  const double peak_x = max_abs(synthesize(x, dims, plan));
  CoherencePair out;
  out.mu_sq = static_cast<double>(dims.Q) * peak_h * peak_h / h_energy;
  out.nu_sq = static_cast<double>(dims.Q) * peak_x * peak_x / x_energy;
  return out;
}

}  // namespace moddecon
