#pragma once

// Generalised q-binomials r and R, the difference equation R satisfies, the
// partial-fraction expansion of the weight-type product ratio, and the
// q -> 1 differential equation check.

#include <cmath>
#include <complex>

#include "qbmf/qseries.hpp"
#include "qbmf/types.hpp"

namespace qbmf {

template <typename Real>
struct RParams {
  Complex<Real> a;
  Complex<Real> b;
  Complex<Real> gamma;
  /// Exponents of the specialisation a = eps q^{2 alpha}, b = eps q^{2 beta}
  /// (only meaningful when built through from_exponents).
  Real alpha = 0;
  Real beta = 0;
  int epsilon = 1;

  static RParams from_exponents(Real alpha, Real beta, Complex<Real> gamma, int eps, const QBase<Real>& base) {
    if (eps != 1 && eps != -1) throw domain_error("RParams: epsilon must be +1 or -1");
    RParams r;
    r.a = Real(eps) * std::pow(base.q(), Real(2) * alpha);
    r.b = Real(eps) * std::pow(base.q(), Real(2) * beta);
    r.gamma = gamma;
    r.alpha = alpha;
    r.beta = beta;
    r.epsilon = eps;
    return r;
  }
};

namespace detail {

template <typename Real>
EvalResult<Real> product_ratio(Complex<Real> num_arg, Complex<Real> den_arg, Real base, const char* name) {
  const auto num = infinite_product(num_arg, base);
  const auto den = infinite_product(den_arg, base);
  if (den.min_factor < zero_factor_tol<Real>()) {
    throw pole_error(std::string(name) + ": denominator product vanishes");
  }
  EvalResult<Real> out;
  out.value = num.value / den.value;
  out.abs_err = std::abs(out.value) * (num.abs_err / std::max(std::abs(num.value), std::numeric_limits<Real>::min()) +
                                       den.abs_err / std::abs(den.value));
  out.terms_or_nodes = num.factors + den.factors;
  if (den.min_factor < Real(1e-6)) out.warn(Warning::pole_proximity);
  return out;
}

}  // namespace detail

/// r(a, b, z, q) = (az; q)_inf / (bz; q)_inf.
template <typename Real>
EvalResult<Real> r_binomial(Complex<Real> a, Complex<Real> b, Complex<Real> z, Real base) {
  return detail::product_ratio(a * z, b * z, base, "r_binomial");
}

/// R(a, b, gamma, z, q^2) = (a z^2; q^2)_inf / (b z^2; q^2)_inf z^gamma,
/// principal branch of z^gamma (cut along the negative real axis).
template <typename Real>
EvalResult<Real> big_r(const RParams<Real>& params, Complex<Real> z, const QBase<Real>& base) {
  const Complex<Real> z2 = z * z;
  auto out = detail::product_ratio(params.a * z2, params.b * z2, base.p(), "big_r");
  Complex<Real> zg;
  if (z == Complex<Real>(0)) {
    if (params.gamma == Complex<Real>(0)) {
      zg = 1;
    } else if (params.gamma.real() > Real(0)) {
      zg = 0;
    } else {
      throw domain_error("big_r: z = 0 with Re(gamma) <= 0");
    }
  } else {
    zg = std::pow(z, params.gamma);
  }
  out.value *= zg;
  out.abs_err *= std::abs(zg);
  return out;
}

/// Residual z^2 [b q^gamma R(z) - a R(qz)] - [q^gamma R(z) - R(qz)] of the
/// first-order difference equation satisfied by R.
template <typename Real>
Complex<Real> big_r_residual(const RParams<Real>& params, Complex<Real> z, const QBase<Real>& base) {
  const Real q = base.q();
  const Complex<Real> r0 = big_r(params, z, base).value;
  const Complex<Real> r1 = big_r(params, q * z, base).value;
  const Complex<Real> qg = detail::real_pow(q, params.gamma);
  return z * z * (params.b * qg * r0 - params.a * r1) - (qg * r0 - r1);
}

/// (-q^{2 alpha} z^2; q^2)_inf / (-q^{2 beta} z^2; q^2)_inf computed directly.
template <typename Real>
EvalResult<Real> weight_ratio_direct(Real alpha, Real beta, Complex<Real> z, const QBase<Real>& base) {
  const Real q = base.q();
  const Complex<Real> z2 = z * z;
  return detail::product_ratio(-std::pow(q, Real(2) * alpha) * z2, -std::pow(q, Real(2) * beta) * z2, base.p(),
                               "weight_ratio_direct");
}

/// Partial-fraction (Mittag-Leffler) expansion of the product ratio
/// (-q^{2a} z^2; q^2)_inf / (-q^{2b} z^2; q^2)_inf for alpha > beta:
///   (q^{2(a-b)}; q^2)_inf / (q^2; q^2)_inf
///     * sum_k (q^{2(b-a+1)}; q^2)_k q^{2(a-b)k} / ((q^2; q^2)_k (1 + z^2 q^{2b+2k})).
/// The coefficient q^{2(a-b)k} is the residue of the ratio at its k-th pole;
/// it makes the series converge for every alpha > beta.
template <typename Real>
EvalResult<Real> partial_fraction_ratio(Real alpha, Real beta, Complex<Real> z, const QBase<Real>& base,
                               const SeriesPolicy& policy = {}) {
  if (!(alpha > beta)) throw domain_error("partial_fraction_ratio: requires alpha > beta");
  policy.validate();
  const Real q = base.q();
  const Real p = base.p();
  const Real gap = alpha - beta;
  const Complex<Real> z2 = z * z;

  const Complex<Real> pref =
      detail::infinite_product_ratio(Complex<Real>(std::pow(q, Real(2) * gap)), Complex<Real>(p), p).value;
  const Real a = std::pow(q, Real(2) * (beta - alpha + Real(1)));  // (a; p)_k numerator parameter
  const Real geometric = std::pow(q, Real(2) * gap);

  EvalResult<Real> out;
  Real coeff = 1;  // (a;p)_k q^{2 gap k} / (p;p)_k
  Real p_k = 1;    // p^k
  Complex<Real> sum(0);
  Real abs_sum = 0;
  Real min_denominator = std::numeric_limits<Real>::infinity();
  int small = 0;
  long k = 0;
  for (; k < policy.max_terms; ++k) {
    const Complex<Real> den = Real(1) + z2 * std::pow(q, Real(2) * beta) * p_k;
    min_denominator = std::min(min_denominator, std::abs(den));
    if (std::abs(den) < detail::zero_factor_tol<Real>()) {
      throw pole_error("partial_fraction_ratio: z^2 on the pole lattice -q^{-2 beta - 2k}");
    }
    const Complex<Real> term = coeff / den;
    sum += term;
    abs_sum += std::abs(term);
    if (std::abs(term) <= Real(policy.rel_tol) * std::abs(sum)) {
      if (++small >= policy.consecutive_small) break;
    } else {
      small = 0;
    }
    coeff *= (Real(1) - a * p_k) / (Real(1) - p_k * p) * geometric;
    p_k *= p;
  }
  if (k >= policy.max_terms) {
    throw convergence_error("partial_fraction_ratio: series did not converge", std::complex<double>(pref * sum), 0.0);
  }
  out.value = pref * sum;
  const Real tail = std::abs(coeff) / (Real(1) - geometric);
  out.abs_err = std::abs(pref) * (tail + Real(4) * epsilon<Real>() * abs_sum);
  out.terms_or_nodes = k + 1;
  if (min_denominator < Real(1e-6)) {
    out.warn(Warning::pole_proximity);
    out.abs_err += std::abs(out.value) * epsilon<Real>() / min_denominator;
  }
  return out;
}

/// Left side z(1 - eps z^2) R'(z) - [gamma + eps(2 alpha - 2 beta - gamma) z^2] R(z)
/// of the limiting differential equation, with R' replaced by the Jackson
/// q-derivative, divided by |R(z)|. Tends to zero as q -> 1.
template <typename Real>
Complex<Real> ode_limit_residual(const RParams<Real>& params, Complex<Real> z, const QBase<Real>& base) {
  const Real q = base.q();
  const Real eps = Real(params.epsilon);
  auto r = [&](Complex<Real> x) { return big_r(params, x, base).value; };
  const Complex<Real> rz = r(z);
  const Complex<Real> dr = q_derivative<Real>(r, z, q);
  const Complex<Real> lhs = z * (Real(1) - eps * z * z) * dr -
                            (params.gamma + eps * (Real(2) * params.alpha - Real(2) * params.beta - params.gamma) * z * z) * rz;
  return lhs / std::abs(rz);
}

}  // namespace qbmf
