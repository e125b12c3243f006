// measurement.hpp - the modulated-convolution forward model and its lifted
// linear map.
//
// Time domain:    y = (r .* F*_K x) (*) h            ((*) = Q-point circular)
// Fourier domain: yhat = sqrt(Q) * (F R F*_K x) .* (F_M h) + e
//
// The measurements are bilinear in (h, x) and linear in the rank-one matrix
// X = h x^T. With the factor maps
//
//   G   = sqrt(Q) F R F*_K    (K -> Q)
//   F_M                        (M -> Q)
//
// the lifted map is A(X)[q] = sum_{m,k} F_M[q,m] G[q,k] X[m,k], so that
// A(h x^T) = (F_M h) .* (G x) reproduces the Fourier-domain model entrywise.
// The adjoint A*(z)[m,k] = sum_q conj(F_M[q,m] G[q,k]) z[q] is never
// materialized on the hot path; its two matrix-vector products each cost
// O(Q log Q).
//
// Useful identities, both exact: F_M^H F_M = I_M and G^H G = Q I_K.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "spectral.hpp"

namespace moddecon {

// Dense row-major complex matrix. Desk-scale reference paths only.
struct CMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  cvec data;

  CMat() = default;
  CMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  cxd& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const cxd& at(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  double frobenius() const { return norm2(data); }
};

// outer(u, v) = u v^T (plain transpose, no conjugation)
inline CMat outer(const cvec& u, const cvec& v) {
  CMat out(u.size(), v.size());
  for (std::size_t r = 0; r < u.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out.at(r, c) = u[r] * v[c];
  return out;
}

// Immutable realization of the lifted map: dimension data plus the sign
// sequence r. Shareable across threads; every application is pure.
class ModulatedConvOperator {
 public:
  ModulatedConvOperator(const ProblemDims& dims, SignSequence signs)
      : dims_(dims), signs_(std::move(signs)), plan_(dims.Q) {
    if (signs_.signs.size() != dims_.Q)
      throw std::invalid_argument(
          "ModulatedConvOperator: sign sequence length must equal Q");
    root_q_ = std::sqrt(static_cast<double>(dims_.Q));
  }

  const ProblemDims& dims() const { return dims_; }
  const SignSequence& signs() const { return signs_; }
  const FftPlan& plan() const { return plan_; }

  // G x = sqrt(Q) F (r .* F*_K x),  K -> Q
  cvec apply_g(const cvec& x) const {
    check_len(x, dims_.K, "apply_g");
    cvec s = plan_.inverse(zero_pad(x, dims_.Q));
    modulate(s);
    cvec out = plan_.forward(s);
    for (auto& c : out) c *= root_q_;
    return out;
  }

  // G^H z = sqrt(Q) [F (r .* F* z)]_K,  Q -> K
  cvec apply_g_adj(const cvec& z) const {
    check_len(z, dims_.Q, "apply_g_adj");
    cvec t = plan_.inverse(z);
    modulate(t);
    cvec full = plan_.forward(t);
    cvec out = restrict_to(full, dims_.K);
    for (auto& c : out) c *= root_q_;
    return out;
  }

  // F_M h,  M -> Q
  cvec apply_taps(const cvec& h) const {
    check_len(h, dims_.M, "apply_taps");
    return plan_.forward(zero_pad(h, dims_.Q));
  }

  // F_M^H z = [F* z]_M,  Q -> M
  cvec apply_taps_adj(const cvec& z) const {
    check_len(z, dims_.Q, "apply_taps_adj");
    return restrict_to(plan_.inverse(z), dims_.M);
  }

  // F*_K x,  K -> Q (synthesis without modulation; used by the regularizer)
  cvec apply_synth(const cvec& x) const {
    check_len(x, dims_.K, "apply_synth");
    return plan_.inverse(zero_pad(x, dims_.Q));
  }

  // (F*_K)^H z = [F z]_K,  Q -> K
  cvec apply_synth_adj(const cvec& z) const {
    check_len(z, dims_.Q, "apply_synth_adj");
    return restrict_to(plan_.forward(z), dims_.K);
  }

 private:
  void modulate(cvec& v) const {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= signs_.signs[i];
  }

  static void check_len(const cvec& v, std::size_t expect, const char* who) {
    if (v.size() != expect)
      throw std::invalid_argument(std::string(who) + ": length mismatch");
  }

  ProblemDims dims_;
  SignSequence signs_;
  FftPlan plan_;
  double root_q_ = 1.0;
};

// y = (r .* F*_K x) (*) h, the noise-free time-domain observation.
inline cvec forward_time(const ModulatedConvOperator& op, const cvec& x,
                         const cvec& h) {
  const auto& d = op.dims();
  if (x.size() != d.K || h.size() != d.M)
    throw std::invalid_argument("forward_time: dimension mismatch");
  cvec s = op.apply_synth(x);
  for (std::size_t i = 0; i < d.Q; ++i) s[i] *= op.signs().signs[i];
  return circular_convolve(s, h, op.plan());
}

// yhat = (G x) .* (F_M h) = sqrt(Q) (F R F*_K x .* F_M h); equals
// dft(forward_time(x, h)).
inline cvec forward_fourier(const ModulatedConvOperator& op, const cvec& x,
                            const cvec& h) {
  const auto& d = op.dims();
  if (x.size() != d.K || h.size() != d.M)
    throw std::invalid_argument("forward_fourier: dimension mismatch");
  cvec gx = op.apply_g(x);
  const cvec fh = op.apply_taps(h);
  for (std::size_t i = 0; i < d.Q; ++i) gx[i] *= fh[i];
  return gx;
}

// A(X) for a general (not necessarily rank-one) M x K matrix, by expanding
// over the M rows. O(M Q log Q); reference path for tests and self-checks.
inline cvec apply_lifted_dense(const ModulatedConvOperator& op,
                               const CMat& X) {
  const auto& d = op.dims();
  if (X.rows != d.M || X.cols != d.K)
    throw std::invalid_argument("apply_lifted_dense: shape mismatch");
  cvec out(d.Q, cxd{0.0, 0.0});
  const double inv_root_q = 1.0 / std::sqrt(static_cast<double>(d.Q));
  const double phase_step = -2.0 * std::numbers::pi / static_cast<double>(d.Q);
  for (std::size_t m = 0; m < d.M; ++m) {
    cvec row(d.K);
    for (std::size_t k = 0; k < d.K; ++k) row[k] = X.at(m, k);
    const cvec g_row = op.apply_g(row);
    for (std::size_t q = 0; q < d.Q; ++q) {
      // F_M[q, m] in closed form
      const cxd f_qm =
          inv_root_q *
          std::polar(1.0, phase_step * static_cast<double>(q * m % d.Q));
      out[q] += f_qm * g_row[q];
    }
  }
  return out;
}

// Implicit N = A*(z), an M x K matrix exposed through its two
// matrix-vector products. Each product costs two or three length-Q FFTs.
class LiftedAdjoint {
 public:
  LiftedAdjoint(const ModulatedConvOperator& op, cvec z)
      : op_(&op), z_(std::move(z)) {
    if (z_.size() != op.dims().Q)
      throw std::invalid_argument("LiftedAdjoint: expected length Q vector");
  }

  // N w,  K -> M
  cvec mul(const cvec& w) const {
    const cvec gw = op_->apply_g(conj_vec(w));
    cvec t(z_.size());
    for (std::size_t q = 0; q < z_.size(); ++q)
      t[q] = z_[q] * std::conj(gw[q]);
    return op_->apply_taps_adj(t);
  }

  // N^H u,  M -> K
  cvec mulh(const cvec& u) const {
    const cvec fu = op_->apply_taps(u);
    cvec t(z_.size());
    for (std::size_t q = 0; q < z_.size(); ++q)
      t[q] = z_[q] * std::conj(fu[q]);
    return conj_vec(op_->apply_g_adj(t));
  }

  const cvec& z() const { return z_; }

 private:
  const ModulatedConvOperator* op_;
  cvec z_;
};

inline LiftedAdjoint adjoint_apply(const ModulatedConvOperator& op,
                                   const cvec& z) {
  return LiftedAdjoint(op, z);
}

// ---- noise --------------------------------------------------------------------

// Additive noise in the Fourier domain: each component of each entry is
// N(0, sigma^2 d0^2 / 2Q), so E ||e||_2^2 = sigma^2 d0^2.
struct NoiseSpec {
  double sigma = 0.0;  // noise scale
  double d0 = 1.0;     // ground-truth scale ||h0|| ||x0||
};

inline std::pair<cvec, cvec> add_noise(const cvec& yhat, const NoiseSpec& spec,
                                       std::uint64_t seed) {
  if (spec.sigma < 0.0)
    throw std::invalid_argument("add_noise: sigma must be nonnegative");
  const std::size_t q = yhat.size();
  cvec e(q, cxd{0.0, 0.0});
  if (spec.sigma > 0.0) {
    Xoshiro256ss rng(seed);
    const double comp =
        spec.sigma * spec.d0 / std::sqrt(2.0 * static_cast<double>(q));
    e = complex_gaussian_vec(q, rng, comp);
  }
  cvec noisy = yhat;
  for (std::size_t i = 0; i < q; ++i) noisy[i] += e[i];
  return {std::move(noisy), std::move(e)};
}

// SNR = 10 log10(||h0 x0^T||_F^2 / ||e||_2^2) with ||h0 x0^T||_F = d0.
inline double snr_db(double d0, const cvec& e) {
  const double noise_energy = norm2_sq(e);
  if (noise_energy == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(d0 * d0 / noise_energy);
}

inline double snr_db(const cvec& h0, const cvec& x0, const cvec& e) {
  return snr_db(norm2(h0) * norm2(x0), e);
}

}  // namespace moddecon
