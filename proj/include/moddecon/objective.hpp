// objective.hpp - the regularized loss and its Wirtinger gradients.
//
// Total loss: Ftilde(u, v) = F(u, v) + G(u, v) with
//
//   F(u, v) = || A(u v^T) - yhat ||_2^2
//   G(u, v) = rho [ G0(||u||^2 / 2d) + G0(||v||^2 / 2d)
//                 + sum_q G0( Q |(F_M u)[q]|^2 / (8 d mu^2) )
//                 + sum_q G0( Q |(F*_K v)[q]|^2 / (8 d nu^2) ) ],
//
// where G0(z) = max{z - 1, 0}^2 and G0'(z) = 2 max{z - 1, 0}. The penalty
// vanishes on a ball around the truth and activates smoothly outside it.
//
// Wirtinger convention: gradients are taken with respect to the conjugated
// variables, so for any real step t and complex direction delta,
//
//   Ftilde(u + t delta, v) - Ftilde(u, v) = 2 t Re<grad_h, delta> + O(t^2).
//
// With residual rho_q = A(u v^T)[q] - yhat[q]:
//
//   grad_h = F_M^H ( rho .* conj(G v) )
//   grad_x = G^H   ( rho .* conj(F_M u) )
//
// and the penalty gradients reuse the same partial Fourier images.

#pragma once

#include <optional>

#include "measurement.hpp"

namespace moddecon {

// G0 and its derivative
inline double g0(double z) {
  const double t = std::max(z - 1.0, 0.0);
  return t * t;
}

inline double g0_prime(double z) { return 2.0 * std::max(z - 1.0, 0.0); }

// Weight rho, scale estimate d, and coherence caps (mu, nu) for the penalty.
// Valid instances keep d within 10% of d0 and rho >= d^2 + ||e||^2.
struct RegularizerParams {
  double rho = 1.0;
  double d = 1.0;
  double mu = 1.0;
  double nu = 1.0;

  void validate() const {
    if (!(rho > 0.0) || !(d > 0.0) || !(mu > 0.0) || !(nu > 0.0))
      throw std::invalid_argument(
          "RegularizerParams: rho, d, mu, nu must be positive");
  }
};

// Current estimate pair with the cached scale d_t = ||u|| ||v||.
struct Iterate {
  cvec u;  // channel estimate, length M
  cvec v;  // signal coefficients estimate, length K
  double d_t = 0.0;
};

inline Iterate make_iterate(cvec u, cvec v) {
  Iterate it;
  it.d_t = norm2(u) * norm2(v);
  it.u = std::move(u);
  it.v = std::move(v);
  return it;
}

// ---- measurement loss and gradient -----------------------------------------

struct MeasurementEval {
  double loss = 0.0;
  cvec grad_h;
  cvec grad_x;
};

inline MeasurementEval eval_measurement(const ModulatedConvOperator& op,
                                        const Iterate& it, const cvec& yhat) {
  const auto& d = op.dims();
  if (it.u.size() != d.M || it.v.size() != d.K || yhat.size() != d.Q)
    throw std::invalid_argument("eval_measurement: dimension mismatch");
  const cvec gv = op.apply_g(it.v);
  const cvec fu = op.apply_taps(it.u);
  cvec resid(d.Q);
  double loss = 0.0;
  for (std::size_t q = 0; q < d.Q; ++q) {
    resid[q] = gv[q] * fu[q] - yhat[q];
    loss += std::norm(resid[q]);
  }
  cvec wh(d.Q), wx(d.Q);
  for (std::size_t q = 0; q < d.Q; ++q) {
    wh[q] = resid[q] * std::conj(gv[q]);
    wx[q] = resid[q] * std::conj(fu[q]);
  }
  MeasurementEval out;
  out.loss = loss;
  out.grad_h = op.apply_taps_adj(wh);
  out.grad_x = op.apply_g_adj(wx);
  return out;
}

inline double loss_measurement(const ModulatedConvOperator& op,
                               const Iterate& it, const cvec& yhat) {
  const auto& d = op.dims();
  if (it.u.size() != d.M || it.v.size() != d.K || yhat.size() != d.Q)
    throw std::invalid_argument("loss_measurement: dimension mismatch");
  const cvec gv = op.apply_g(it.v);
  const cvec fu = op.apply_taps(it.u);
  double loss = 0.0;
  for (std::size_t q = 0; q < d.Q; ++q)
    loss += std::norm(gv[q] * fu[q] - yhat[q]);
  return loss;
}

inline std::pair<cvec, cvec> grad_measurement(const ModulatedConvOperator& op,
                                              const Iterate& it,
                                              const cvec& yhat) {
  auto eval = eval_measurement(op, it, yhat);
  return {std::move(eval.grad_h), std::move(eval.grad_x)};
}

// ---- regularizer ------------------------------------------------------------

struct RegularizerEval {
  double value = 0.0;
  cvec grad_h;
  cvec grad_x;
};

inline RegularizerEval eval_regularizer(const Iterate& it,
                                        const RegularizerParams& params,
                                        const ModulatedConvOperator& op) {
  params.validate();
  const auto& dm = op.dims();
  if (it.u.size() != dm.M || it.v.size() != dm.K)
    throw std::invalid_argument("eval_regularizer: dimension mismatch");
  const double q_real = static_cast<double>(dm.Q);
  const double d = params.d;
  const double mu_cap = 8.0 * d * params.mu * params.mu;
  const double nu_cap = 8.0 * d * params.nu * params.nu;

  const double zu = norm2_sq(it.u) / (2.0 * d);
  const double zv = norm2_sq(it.v) / (2.0 * d);

  const cvec fu = op.apply_taps(it.u);
  const cvec sv = op.apply_synth(it.v);

  double value = g0(zu) + g0(zv);
  cvec wu(dm.Q), wv(dm.Q);
  for (std::size_t q = 0; q < dm.Q; ++q) {
    const double arg_u = q_real * std::norm(fu[q]) / mu_cap;
    const double arg_v = q_real * std::norm(sv[q]) / nu_cap;
    value += g0(arg_u) + g0(arg_v);
    wu[q] = g0_prime(arg_u) * fu[q];
    wv[q] = g0_prime(arg_v) * sv[q];
  }

  RegularizerEval out;
  out.value = params.rho * value;

  out.grad_h = op.apply_taps_adj(wu);
  const double scale_u = params.rho * q_real / mu_cap;
  for (auto& c : out.grad_h) c *= scale_u;
  const double norm_coef_u = params.rho * g0_prime(zu) / (2.0 * d);
  for (std::size_t m = 0; m < dm.M; ++m) out.grad_h[m] += norm_coef_u * it.u[m];

  out.grad_x = op.apply_synth_adj(wv);
  const double scale_v = params.rho * q_real / nu_cap;
  for (auto& c : out.grad_x) c *= scale_v;
  const double norm_coef_v = params.rho * g0_prime(zv) / (2.0 * d);
  for (std::size_t k = 0; k < dm.K; ++k) out.grad_x[k] += norm_coef_v * it.v[k];

  return out;
}

inline double loss_regularizer(const Iterate& it,
                               const RegularizerParams& params,
                               const ModulatedConvOperator& op) {
  return eval_regularizer(it, params, op).value;
}

inline std::pair<cvec, cvec> grad_regularizer(const Iterate& it,
                                              const RegularizerParams& params,
                                              const ModulatedConvOperator& op) {
  auto eval = eval_regularizer(it, params, op);
  return {std::move(eval.grad_h), std::move(eval.grad_x)};
}

// ---- combined objective ------------------------------------------------------

struct ObjectiveEval {
  double loss_meas = 0.0;
  double loss_reg = 0.0;
  cvec grad_h;
  cvec grad_x;

  double total() const { return loss_meas + loss_reg; }
};

inline ObjectiveEval eval_objective(const ModulatedConvOperator& op,
                                    const Iterate& it, const cvec& yhat,
                                    const RegularizerParams& params) {
  auto meas = eval_measurement(op, it, yhat);
  auto reg = eval_regularizer(it, params, op);
  ObjectiveEval out;
  out.loss_meas = meas.loss;
  out.loss_reg = reg.value;
  out.grad_h = std::move(meas.grad_h);
  out.grad_x = std::move(meas.grad_x);
  for (std::size_t m = 0; m < out.grad_h.size(); ++m)
    out.grad_h[m] += reg.grad_h[m];
  for (std::size_t k = 0; k < out.grad_x.size(); ++k)
    out.grad_x[k] += reg.grad_x[k];
  return out;
}

inline std::pair<cvec, cvec> grad_total(const ModulatedConvOperator& op,
                                        const Iterate& it, const cvec& yhat,
                                        const RegularizerParams& params) {
  auto eval = eval_objective(op, it, yhat, params);
  return {std::move(eval.grad_h), std::move(eval.grad_x)};
}

// ---- neighborhood sets ---------------------------------------------------------

// Thresholds around the truth: norm ball, two coherence balls, and the
// rank-one distance ball. eps is restricted to (0, 1/15].
struct NeighborhoodSpec {
  double d0 = 1.0;
  double mu = 1.0;
  double nu = 1.0;
  double eps = 1.0 / 15.0;

  void validate() const {
    if (!(d0 > 0.0) || !(mu > 0.0) || !(nu > 0.0))
      throw std::invalid_argument(
          "NeighborhoodSpec: d0, mu, nu must be positive");
    if (!(eps > 0.0) || eps > 1.0 / 15.0 + 1e-15)
      throw std::invalid_argument("NeighborhoodSpec: eps must be in (0, 1/15]");
  }
};

struct NeighborhoodFlags {
  bool in_d0 = false;
  bool in_mu = false;
  bool in_nu = false;
  std::optional<bool> in_eps;  // set only when the truth is supplied
};

// || u v^T - h0 x0^T ||_F without materializing the matrices
inline double rank_one_distance(const cvec& u, const cvec& v, const cvec& h0,
                                const cvec& x0) {
  const double a = norm2_sq(u) * norm2_sq(v);
  const double b = norm2_sq(h0) * norm2_sq(x0);
  const double cross = (inner(u, h0) * inner(v, x0)).real();
  return std::sqrt(std::max(a + b - 2.0 * cross, 0.0));
}

// Membership flags for the neighborhood sets; `scale` shrinks the norm and
// coherence thresholds (scale = 1/sqrt(3) checks the initialization sets).
inline NeighborhoodFlags in_neighborhoods(const Iterate& it,
                                          const NeighborhoodSpec& spec,
                                          const ModulatedConvOperator& op,
                                          const cvec* h0 = nullptr,
                                          const cvec* x0 = nullptr,
                                          double scale = 1.0) {
  spec.validate();
  const auto& dm = op.dims();
  const double root_q = std::sqrt(static_cast<double>(dm.Q));
  const double root_d0 = std::sqrt(spec.d0);

  NeighborhoodFlags flags;
  flags.in_d0 = norm2(it.u) <= scale * 2.0 * root_d0 &&
                norm2(it.v) <= scale * 2.0 * root_d0;
  flags.in_mu =
      root_q * max_abs(op.apply_taps(it.u)) <= scale * 4.0 * spec.mu * root_d0;
  flags.in_nu =
      root_q * max_abs(op.apply_synth(it.v)) <= scale * 4.0 * spec.nu * root_d0;
  if (h0 != nullptr && x0 != nullptr)
    flags.in_eps =
        rank_one_distance(it.u, it.v, *h0, *x0) <= spec.eps * spec.d0;
  return flags;
}

}  // namespace moddecon
