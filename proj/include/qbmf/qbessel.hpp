#pragma once

// q-Bessel functions J^(j), modified q-Bessel functions I^(j), the
// normalising constant A_nu and the q-Bessel-Macdonald functions K^(j),
// together with the second-order difference equation they solve and the
// q-Wronskian.
//
// Two argument conventions are used:
//  * bessel_j takes the raw argument: J_nu^(j)(z; q) with base q.
//  * bessel_i, bessel_j_scaled and bessel_k take the scaled argument and
//    evaluate F((1 - q^2) z; q^2).

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "qbmf/qseries.hpp"
#include "qbmf/types.hpp"

namespace qbmf {

/// Kind j in {1, 2, 3} of the q-Bessel family and its exponent delta:
/// j = 1 -> delta = 2, j = 2 -> delta = 0, j = 3 -> delta = 1.
class FunctionKind {
 public:
  explicit constexpr FunctionKind(int j) : j_(j) {
    if (j < 1 || j > 3) throw domain_error("function kind must be 1, 2 or 3");
  }

  static constexpr FunctionKind from_delta(int delta) {
    switch (delta) {
      case 2: return FunctionKind(1);
      case 0: return FunctionKind(2);
      case 1: return FunctionKind(3);
      default: throw domain_error("delta must be 0, 1 or 2");
    }
  }

  constexpr int index() const { return j_; }
  constexpr int delta() const { return j_ == 1 ? 2 : (j_ == 2 ? 0 : 1); }
  /// |1 - delta|: the power of A_nu entering K.
  constexpr int a_exponent() const { return delta() == 1 ? 0 : 1; }

  friend constexpr bool operator==(FunctionKind a, FunctionKind b) { return a.j_ == b.j_; }

 private:
  int j_;
};

inline constexpr std::array<FunctionKind, 3> kAllKinds{FunctionKind(1), FunctionKind(2),
                                                       FunctionKind(3)};

template <typename Real>
struct BesselArgs {
  Complex<Real> nu;
  Complex<Real> z;
  QBase<Real> base;
  /// Kind 1 only: permit the meromorphic continuation through the kind-2
  /// function outside (or near the edge of) the disc of convergence.
  bool allow_continuation = false;
};

namespace detail {

/// |z|(1-q^2)/2 above which a continuation-enabled kind-1 evaluation switches
/// from the series to the product identity.
inline constexpr double kContinuationSwitch = 0.5;

/// sum_k sign^k q^{(2-delta) k (k+nu)} (1-p)^k (z/2)^{nu+2k} / ((p;p)_k Gamma_p(nu+k+1)),
/// p = q^2. sign = +1 gives I_nu^(j)((1-p)z; p), sign = -1 gives J_nu^(j)((1-p)z; p).
template <typename Real>
SeriesSum<Real> scaled_bessel_series(int delta, Complex<Real> nu, Complex<Real> z,
                                     const QBase<Real>& b, int sign, const SeriesPolicy& policy) {
  const Real q = b.q();
  const Real p = b.p();
  const Real damp = Real(2 - delta);  // exponent multiplier of the q^{k^2} damping

  // For nu = -n the first n coefficients vanish (1/Gamma_p has zeros there).
  long k0 = 0;
  if (std::abs(nu.imag()) < Real(1e-14) && nu.real() < Real(0.5)) {
    const Real n = std::round(-nu.real());
    if (n >= 1 && std::abs(nu.real() + n) < Real(1e-13) * std::max(Real(1), n)) k0 = long(n);
  }
  const Complex<Real> w = z / Real(2);
  const Complex<Real> power = nu + Real(2 * k0);

  Complex<Real> w_pow;
  if (z == Complex<Real>(0)) {
    if (power == Complex<Real>(0)) {
      w_pow = 1;
    } else if (power.real() > Real(0)) {
      SeriesSum<Real> zero;
      zero.terms = 1;
      return zero;
    } else {
      throw pole_error("modified q-Bessel series: z = 0 with Re(nu) < 0");
    }
  } else {
    w_pow = std::pow(w, power);
  }

  const Real k0r = Real(k0);
  Complex<Real> first = w_pow * q_rgamma(nu + k0r + Real(1), b) /
                        qpochhammer(Complex<Real>(p), p, k0) *
                        std::pow(Real(1) - p, k0r) *
                        real_pow(q, damp * k0r * (k0r + nu));
  if (sign < 0 && (k0 % 2 == 1)) first = -first;

  const Complex<Real> q_damp_nu = real_pow(q, damp * nu);
  const Complex<Real> p_nu = real_pow(p, nu);
  const Complex<Real> w2 = w * w;
  const Real one_minus_p_sq = (Real(1) - p) * (Real(1) - p);
  const Real q_step = std::pow(q, Real(2) * damp);
  Real q_odd = std::pow(q, damp * Real(2 * k0 + 1));  // q^{(2-delta)(2k+1)}
  Real p_k1 = std::pow(p, Real(k0 + 1));               // p^{k+1}
  auto ratio = [&](long) {
    const Complex<Real> r = Real(sign) * q_odd * q_damp_nu * one_minus_p_sq * w2 /
                            ((Real(1) - p_k1) * (Real(1) - p_nu * p_k1));
    q_odd *= q_step;
    p_k1 *= p;
    return r;
  };
  return sum_ratio_series<Real>(first, ratio, policy, "modified q-Bessel series");
}

template <typename Real>
EvalResult<Real> to_result(const SeriesSum<Real>& s) {
  EvalResult<Real> out;
  const Real scale = std::exp(s.log_scale);
  out.value = s.sum * scale;
  out.abs_err = s.abs_err() * scale;
  out.terms_or_nodes = s.terms;
  return out;
}

/// Scaled series with the kind-1 radius guard and continuation
/// F^(1) = F^(2) / (sign c z^2; p)_inf, c = (1-p)^2/4.
template <typename Real>
EvalResult<Real> scaled_bessel(FunctionKind kind, const BesselArgs<Real>& args, int sign,
                               const SeriesPolicy& policy, const char* name) {
  const Real p = args.base.p();
  if (kind.delta() == 2) {
    const Real rho = std::abs(args.z) * (Real(1) - p) / Real(2);
    const bool use_product = rho >= Real(1) || (args.allow_continuation && rho > Real(kContinuationSwitch));
    if (use_product) {
      if (!args.allow_continuation) {
        throw domain_error(std::string(name) + " kind 1: |z| >= 2/(1-q^2) is outside the radius of the series (" +
                           std::to_string(double(2 / (1 - p))) + ")");
      }
      const auto second = to_result(scaled_bessel_series(0, args.nu, args.z, args.base, sign, policy));
      const Complex<Real> c = (Real(1) - p) * (Real(1) - p) / Real(4) * args.z * args.z;
      const auto prod = infinite_product(Real(sign) * c, p);
      if (prod.min_factor < zero_factor_tol<Real>()) {
        throw pole_error(std::string(name) + " kind 1: z is a pole of the continued function");
      }
      EvalResult<Real> out;
      out.value = second.value / prod.value;
      out.abs_err = second.abs_err / std::abs(prod.value) +
                    std::abs(out.value) * prod.abs_err / std::abs(prod.value);
      out.terms_or_nodes = second.terms_or_nodes + prod.factors;
      out.warn(Warning::continuation);
      if (prod.min_factor < Real(1e-6)) out.warn(Warning::pole_proximity);
      return out;
    }
    auto out = to_result(scaled_bessel_series(2, args.nu, args.z, args.base, sign, policy));
    if (rho > Real(0.9)) out.warn(Warning::near_radius);
    return out;
  }
  return to_result(scaled_bessel_series(kind.delta(), args.nu, args.z, args.base, sign, policy));
}

}  // namespace detail

/// Modified q-Bessel function I_nu^(j)((1-q^2) z; q^2) summed from its power
/// series (all coefficients positive for real nu, z).
template <typename Real>
EvalResult<Real> bessel_i(FunctionKind kind, const BesselArgs<Real>& args, const SeriesPolicy& policy = {}) {
  return detail::scaled_bessel(kind, args, +1, policy, "bessel_i");
}

/// J_nu^(j)((1-q^2) z; q^2): the q-Bessel function at the scaled argument,
/// the form in which the integral representations use it.
template <typename Real>
EvalResult<Real> bessel_j_scaled(FunctionKind kind, const BesselArgs<Real>& args,
                                 const SeriesPolicy& policy = {}) {
  return detail::scaled_bessel(kind, args, -1, policy, "bessel_j_scaled");
}

/// q-Bessel function J_nu^(j)(z; q) at the raw argument, from its defining
/// basic hypergeometric series:
///   j=1: 2Phi1(0,0; q^{nu+1}; q, -z^2/4)          (|z| < 2)
///   j=2: 0Phi1(-; q^{nu+1}; q, -z^2 q^{nu+1}/4)
///   j=3: 1Phi1(0; q^{nu+1}; q, z^2 q^{(nu+1)/2}/4)
/// times (q^{nu+1};q)_inf/(q;q)_inf (z/2)^nu. Kind 3 carries the sign that
/// makes it alternate like the other two kinds.
template <typename Real>
EvalResult<Real> bessel_j(FunctionKind kind, const BesselArgs<Real>& args, const SeriesPolicy& policy = {}) {
  const Real q = args.base.q();
  const Complex<Real> nu = args.nu;
  const Complex<Real> z = args.z;
  const Complex<Real> b1 = detail::real_pow(q, nu + Real(1));
  const Complex<Real> x = z * z / Real(4);

  if (kind.delta() == 2 && std::abs(z) / Real(2) >= Real(detail::kContinuationSwitch) &&
      (args.allow_continuation || std::abs(z) >= Real(2))) {
    if (!args.allow_continuation) {
      throw domain_error("bessel_j kind 1: |z| >= 2 is outside the radius of the 2Phi1 series");
    }
    auto second_args = args;
    auto second = bessel_j(FunctionKind(2), second_args, policy);
    const auto prod = detail::infinite_product(-x, q);
    if (prod.min_factor < detail::zero_factor_tol<Real>()) {
      throw pole_error("bessel_j kind 1: pole of the continuation");
    }
    EvalResult<Real> out;
    out.value = second.value / prod.value;
    out.abs_err = second.abs_err / std::abs(prod.value) +
                  std::abs(out.value) * prod.abs_err / std::abs(prod.value);
    out.terms_or_nodes = second.terms_or_nodes + prod.factors;
    out.warn(Warning::continuation);
    return out;
  }

  EvalResult<Real> phi;
  switch (kind.index()) {
    case 1:
      phi = basic_hypergeometric<Real>({Complex<Real>(0), Complex<Real>(0)}, {b1}, q, -x, policy);
      break;
    case 2:
      phi = basic_hypergeometric<Real>({}, {b1}, q, -x * b1, policy);
      break;
    default:
      phi = basic_hypergeometric<Real>({Complex<Real>(0)}, {b1}, q,
                                       x * detail::real_pow(q, (nu + Real(1)) / Real(2)), policy);
      break;
  }
  Complex<Real> zpow;
  if (z == Complex<Real>(0)) {
    if (nu == Complex<Real>(0)) {
      zpow = 1;
    } else if (nu.real() > Real(0)) {
      zpow = 0;
    } else {
      throw pole_error("bessel_j: z = 0 with Re(nu) <= 0, nu != 0");
    }
  } else {
    zpow = std::pow(z / Real(2), nu);
  }
  const auto pre = detail::infinite_product_ratio(b1, Complex<Real>(q), q).value * zpow;
  EvalResult<Real> out = phi;
  out.value = pre * phi.value;
  out.abs_err = std::abs(pre) * phi.abs_err + Real(8) * epsilon<Real>() * std::abs(out.value);
  return out;
}

/// A_nu = sqrt(I_nu^(2)(2; q^2) / I_{-nu}^(2)(2; q^2)), principal root. The
/// raw argument 2 is the scaled argument 2/(1-q^2). Both series are summed
/// with a shared exponent so q close to 1 does not overflow.
template <typename Real>
Complex<Real> a_nu(Complex<Real> nu, const QBase<Real>& b, const SeriesPolicy& policy = {}) {
  const Complex<Real> z = Real(2) / (Real(1) - b.p());
  const auto plus = detail::scaled_bessel_series(0, nu, z, b, +1, policy);
  const auto minus = detail::scaled_bessel_series(0, -nu, z, b, +1, policy);
  if (std::abs(minus.sum) <= minus.abs_err()) {
    throw degenerate_error("a_nu: I_{-nu}^(2)(2; q^2) vanishes");
  }
  const Complex<Real> ratio = plus.sum / minus.sum * std::exp(plus.log_scale - minus.log_scale);
  return std::sqrt(ratio);
}

namespace detail {

/// Orders closer than this to an integer use interpolation in nu.
inline constexpr double kIntegerGuard = 1e-3;

/// K from its defining combination of I_{+-nu}; nu must not be an integer.
template <typename Real>
EvalResult<Real> bessel_k_direct(FunctionKind kind, const BesselArgs<Real>& args, const SeriesPolicy& policy) {
  const auto& b = args.base;
  const Real p = b.p();
  const Real q = b.q();
  const Complex<Real> nu = args.nu;

  // Gamma_p(nu) Gamma_p(1-nu) = (p;p)^2 (1-p) / ((p^nu;p)(p^{1-nu};p)).
  // Each (p;p)/(p^x;p) is formed factor by factor: the products alone
  // underflow for q close to 1.
  const auto r1 = infinite_product_ratio(Complex<Real>(p), real_pow(p, nu), p);
  const auto r2 = infinite_product_ratio(Complex<Real>(p), real_pow(p, Real(1) - nu), p);
  if (r1.min_factor < zero_factor_tol<Real>() || r2.min_factor < zero_factor_tol<Real>()) {
    throw pole_error("bessel_k: integer order reached the direct formula");
  }
  const Complex<Real> gamma_pair = r1.value * r2.value * (Real(1) - p);
  const Complex<Real> pref = Real(0.5) * real_pow(q, -nu * nu + nu) * gamma_pair;

  Complex<Real> a_plus(1), a_minus(1);
  if (kind.a_exponent() == 1) {
    a_plus = a_nu(nu, b, policy);
    a_minus = a_nu(-nu, b, policy);
  }
  auto minus_args = args;
  minus_args.nu = -nu;
  const auto i_minus = bessel_i(kind, minus_args, policy);
  const auto i_plus = bessel_i(kind, args, policy);
  const Complex<Real> t1 = a_plus * i_minus.value;
  const Complex<Real> t2 = a_minus * i_plus.value;

  EvalResult<Real> out;
  out.value = pref * (t1 - t2);
  out.abs_err = std::abs(pref) * (std::abs(a_plus) * i_minus.abs_err + std::abs(a_minus) * i_plus.abs_err +
                                  Real(8) * epsilon<Real>() * (std::abs(t1) + std::abs(t2)));
  out.terms_or_nodes = i_minus.terms_or_nodes + i_plus.terms_or_nodes;
  out.merge_warnings(i_minus);
  out.merge_warnings(i_plus);
  if (std::abs(t1 - t2) < Real(1e-6) * (std::abs(t1) + std::abs(t2))) out.warn(Warning::cancellation);
  return out;
}

template <typename Real>
Complex<Real> lagrange4(const std::array<Real, 4>& x, const std::array<Complex<Real>, 4>& y, Complex<Real> t) {
  Complex<Real> sum(0);
  for (int i = 0; i < 4; ++i) {
    Complex<Real> l(1);
    for (int j = 0; j < 4; ++j) {
      if (j != i) l *= (t - x[j]) / (x[i] - x[j]);
    }
    sum += l * y[i];
  }
  return sum;
}

}  // namespace detail

/// q-Bessel-Macdonald function
///   K_nu^(j)((1-q^2)z; q^2) = 1/2 q^{-nu^2+nu} Gamma_{q^2}(nu) Gamma_{q^2}(1-nu)
///       [A_nu^{|1-delta|} I_{-nu}^(j) - A_{-nu}^{|1-delta|} I_nu^(j)].
/// Within 1e-3 of an integer order (where the bracket cancels) the value is
/// the cubic interpolant in nu through n +- H, n +- 2H, H = 2e-3, which is the
/// limit at integer nu; its error estimate compares against the stencil 1.5H.
template <typename Real>
EvalResult<Real> bessel_k(FunctionKind kind, const BesselArgs<Real>& args, const SeriesPolicy& policy = {}) {
  const Complex<Real> nu = args.nu;
  const Real n = std::round(nu.real());
  const Complex<Real> offset = nu - Complex<Real>(n);
  if (std::abs(offset) >= Real(detail::kIntegerGuard)) {
    return detail::bessel_k_direct(kind, args, policy);
  }

  auto stencil = [&](Real h, EvalResult<Real>& acc) {
    const std::array<Real, 4> xs{n - 2 * h, n - h, n + h, n + 2 * h};
    std::array<Complex<Real>, 4> ys;
    for (int i = 0; i < 4; ++i) {
      auto a = args;
      a.nu = Complex<Real>(xs[i], nu.imag());
      const auto r = detail::bessel_k_direct(kind, a, policy);
      ys[i] = r.value;
      acc.abs_err = std::max(acc.abs_err, r.abs_err);
      acc.terms_or_nodes += r.terms_or_nodes;
      acc.merge_warnings(r);
    }
    return detail::lagrange4<Real>(xs, ys, Complex<Real>(nu.real()));
  };

  EvalResult<Real> out;
  const Real h = Real(2e-3);
  const Complex<Real> fine = stencil(h, out);
  const Complex<Real> coarse = stencil(Real(1.5) * h, out);
  out.value = fine;
  // Interpolation error scales like h^4: (1.5^4 - 1) ~ 4.06.
  out.abs_err += std::abs(coarse - fine) / Real(4.0625);
  out.warn(Warning::near_integer_order);
  return out;
}

/// Residual of the second-order difference equation
///   f(z/q) - (q^-nu + q^nu) f(z) + f(qz) - q^-delta (1-q^2)^2/4 z^2 f(q^{1-delta} z),
/// zero when f solves it.
template <typename Real, typename F>
Complex<Real> difference_residual(FunctionKind kind, F&& f, Complex<Real> nu, Complex<Real> z,
                                  const QBase<Real>& b) {
  const Real q = b.q();
  const int delta = kind.delta();
  const Complex<Real> qnu = detail::real_pow(q, nu);
  const Real c = (Real(1) - b.p()) * (Real(1) - b.p()) / Real(4);
  const Real shift = std::pow(q, Real(1 - delta));
  return f(z / q) - (Real(1) / qnu + qnu) * f(z) + f(q * z) -
         std::pow(q, Real(-delta)) * c * z * z * f(shift * z);
}

/// q-Wronskian W(f1, f2)(z) = f1(z) f2(qz) - f1(qz) f2(z).
template <typename Real, typename F1, typename F2>
Complex<Real> q_wronskian(F1&& f1, F2&& f2, Complex<Real> z, const QBase<Real>& b) {
  const Real q = b.q();
  return f1(z) * f2(q * z) - f1(q * z) * f2(z);
}

enum class WronskianConstant {
  /// q^{-nu}(1-q^2)/2, the constant of the commonly quoted closed form.
  tabulated,
  /// q^{-nu^2}(1-q^2)/2, the constant implied by the normalisation of bessel_k.
  exact,
};

/// Closed form of W(I_nu^(j), K_nu^(j))(z):
///   delta = 2: C A_nu e_{q^2}((1-q^2)^2 z^2 / 4)
///   delta = 1: C
///   delta = 0: C A_nu E_{q^2}(-(1-q^2)^2 q^2 z^2 / 4)
template <typename Real>
Complex<Real> wronskian_ik_closed_form(FunctionKind kind, Complex<Real> nu, Complex<Real> z,
                                       const QBase<Real>& b, WronskianConstant which,
                                       const SeriesPolicy& policy = {}) {
  const Real q = b.q();
  const Real p = b.p();
  const Complex<Real> exponent = which == WronskianConstant::tabulated ? -nu : -nu * nu;
  const Complex<Real> c = detail::real_pow(q, exponent) * (Real(1) - p) / Real(2);
  const Real cc = (Real(1) - p) * (Real(1) - p) / Real(4);
  switch (kind.delta()) {
    case 2:
      return c * a_nu(nu, b, policy) * q_exp_small(cc * z * z, p, policy).value;
    case 1:
      return c;
    default:
      return c * a_nu(nu, b, policy) * q_exp_big(-cc * p * z * z, p, policy).value;
  }
}

}  // namespace qbmf
