#pragma once

// q-Pochhammer symbols, the q^2-gamma function, basic hypergeometric series,
// the two q-exponentials and the Jackson q-derivative.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qbmf/types.hpp"

namespace qbmf {

namespace detail {

/// Infinite products are truncated once |a * base^k| drops below this.
inline constexpr double kProductCutoff = 1e-18;

/// Factors closer than this (relative) to zero are treated as exact zeros.
template <typename Real>
constexpr Real zero_factor_tol() {
  return Real(64) * epsilon<Real>();
}

template <typename Real>
struct ProductResult {
  Complex<Real> value{1};
  Real abs_err = 0;
  /// Smallest |1 - a base^k| encountered; zero means an exact zero factor.
  Real min_factor = std::numeric_limits<Real>::infinity();
  long factors = 0;
};

/// (a; base)_infinity with truncation bookkeeping.
template <typename Real>
ProductResult<Real> infinite_product(Complex<Real> a, Real base) {
  if (!(base > Real(0) && base < Real(1))) {
    throw domain_error("infinite q-Pochhammer product needs a base in (0, 1)");
  }
  ProductResult<Real> r;
  if (a == Complex<Real>(0)) {
    r.min_factor = 1;
    return r;
  }
  Complex<Real> x = a;
  Complex<Real> prod(1);
  long k = 0;
  constexpr long kMaxFactors = 50'000'000;
  while (std::abs(x) >= Real(kProductCutoff)) {
    const Complex<Real> factor = Real(1) - x;
    const Real m = std::abs(factor);
    if (m < r.min_factor) r.min_factor = m;
    prod *= factor;
    x *= base;
    if (++k > kMaxFactors) {
      throw convergence_error("infinite product did not reach its truncation point",
                              std::complex<double>(prod), 0.0);
    }
  }
  if (r.min_factor == std::numeric_limits<Real>::infinity()) r.min_factor = 1;
  const Real tail = std::abs(x) / (Real(1) - base);
  r.value = prod;
  r.factors = k;
  r.abs_err = std::abs(prod) * (tail + Real(2) * std::sqrt(Real(k + 1)) * epsilon<Real>());
  return r;
}

template <typename Real>
struct SeriesSum {
  Complex<Real> sum{};
  /// Sum of |term|; drives the rounding part of the error estimate.
  Real abs_sum = 0;
  Real tail_bound = 0;
  /// The true value is sum * exp(log_scale); nonzero only for huge series.
  Real log_scale = 0;
  long terms = 0;
  Real last_ratio = 0;

  Real abs_err() const { return tail_bound + Real(4) * epsilon<Real>() * abs_sum; }
  Complex<Real> value() const {
    return log_scale == Real(0) ? sum : sum * std::exp(log_scale);
  }
};

/// Sums first + first*ratio(0) + first*ratio(0)*ratio(1) + ... under `policy`.
/// ratio(n) returns t_{n+1} / t_n. A term that becomes exactly zero ends the
/// series (terminating case).
template <typename Real, typename Ratio>
SeriesSum<Real> sum_ratio_series(Complex<Real> first, Ratio&& ratio, const SeriesPolicy& policy,
                                 const char* what) {
  policy.validate();
  SeriesSum<Real> out;
  Complex<Real> term = first;
  out.sum = term;
  out.abs_sum = std::abs(term);
  out.terms = 1;
  if (term == Complex<Real>(0)) return out;

  constexpr Real kRescaleAt = Real(1e150);
  int small = 0;
  for (long n = 0; n < policy.max_terms; ++n) {
    const Complex<Real> r = ratio(n);
    term *= r;
    out.last_ratio = std::abs(r);
    ++out.terms;
    if (term == Complex<Real>(0)) {
      out.tail_bound = 0;
      return out;
    }
    out.sum += term;
    out.abs_sum += std::abs(term);
    if (std::abs(term) > kRescaleAt) {
      term /= kRescaleAt;
      out.sum /= kRescaleAt;
      out.abs_sum /= kRescaleAt;
      out.log_scale += std::log(kRescaleAt);
    }
    const Real mag = std::abs(term);
    if (mag <= Real(policy.rel_tol) * std::abs(out.sum) && out.last_ratio < Real(1)) {
      if (++small >= policy.consecutive_small) {
        const Real rho = out.last_ratio;
        out.tail_bound = rho < Real(1) ? mag * rho / (Real(1) - rho) : mag;
        return out;
      }
    } else {
      small = 0;
    }
  }
  const Complex<Real> partial = out.value();
  throw convergence_error(std::string(what) + ": series did not converge within max_terms",
                          std::complex<double>(partial),
                          static_cast<double>(std::abs(term) * std::exp(out.log_scale)));
}

/// base^x for complex x and positive real base.
template <typename Real>
Complex<Real> real_pow(Real base, Complex<Real> x) {
  return std::exp(x * std::log(base));
}

}  // namespace detail

/// Finite q-Pochhammer symbol (a; base)_n = prod_{k<n} (1 - a base^k).
template <typename Real>
Complex<Real> qpochhammer(Complex<Real> a, Real base, long n) {
  if (n < 0) throw domain_error("qpochhammer: negative length");
  Complex<Real> prod(1);
  Complex<Real> x = a;
  for (long k = 0; k < n; ++k) {
    prod *= Real(1) - x;
    x *= base;
  }
  return prod;
}

/// Infinite q-Pochhammer symbol (a; base)_infinity with an error estimate.
/// Requires 0 < base < 1.
template <typename Real>
EvalResult<Real> qpochhammer(Complex<Real> a, Real base) {
  auto p = detail::infinite_product(a, base);
  EvalResult<Real> r;
  r.value = p.value;
  r.abs_err = p.abs_err;
  r.terms_or_nodes = p.factors;
  return r;
}

/// Value-only shorthand for the infinite product.
template <typename Real>
Complex<Real> qpoch_inf(Complex<Real> a, Real base) {
  return detail::infinite_product(a, base).value;
}

namespace detail {

/// (a; base)_inf / (b; base)_inf as a product of factor ratios, so that
/// products which individually underflow (base near 1) still give a finite
/// ratio. min_factor tracks the denominator factors.
template <typename Real>
ProductResult<Real> infinite_product_ratio(Complex<Real> a, Complex<Real> b, Real base) {
  if (!(base > Real(0) && base < Real(1))) {
    throw domain_error("infinite q-Pochhammer product needs a base in (0, 1)");
  }
  ProductResult<Real> r;
  Complex<Real> x = a, y = b;
  Complex<Real> prod(1);
  long k = 0;
  constexpr long kMaxFactors = 50'000'000;
  while (std::abs(x) >= Real(kProductCutoff) || std::abs(y) >= Real(kProductCutoff)) {
    const Complex<Real> den = Real(1) - y;
    r.min_factor = std::min(r.min_factor, std::abs(den));
    prod *= (Real(1) - x) / den;
    x *= base;
    y *= base;
    if (++k > kMaxFactors) {
      throw convergence_error("infinite product ratio did not reach its truncation point",
                              std::complex<double>(prod), 0.0);
    }
  }
  if (r.min_factor == std::numeric_limits<Real>::infinity()) r.min_factor = 1;
  const Real tail = (std::abs(x) + std::abs(y)) / (Real(1) - base);
  r.value = prod;
  r.factors = k;
  r.abs_err = std::abs(prod) * (tail + Real(4) * std::sqrt(Real(k + 1)) * epsilon<Real>());
  return r;
}

}  // namespace detail

/// Reciprocal of the q^2-gamma function; entire in nu, zero at the poles of
/// q_gamma.
template <typename Real>
Complex<Real> q_rgamma(Complex<Real> nu, const QBase<Real>& b) {
  const Real p = b.p();
  const auto ratio = detail::infinite_product_ratio(detail::real_pow(p, nu), Complex<Real>(p), p);
  return ratio.value * detail::real_pow(Real(1) - p, nu - Real(1));
}

/// Gamma_{q^2}(nu) = (q^2;q^2)_inf / (q^{2 nu};q^2)_inf * (1-q^2)^{1-nu}.
/// Since 1 - q^2 > 0 the power uses the real logarithm; no branch choice
/// arises. Throws pole_error at the poles nu = -m (+ 2 pi i k / ln q^2).
template <typename Real>
Complex<Real> q_gamma(Complex<Real> nu, const QBase<Real>& b) {
  const Real p = b.p();
  const auto ratio = detail::infinite_product_ratio(Complex<Real>(p), detail::real_pow(p, nu), p);
  if (ratio.min_factor < detail::zero_factor_tol<Real>()) {
    throw pole_error("q_gamma: pole at nu = " + std::to_string(double(nu.real())));
  }
  return ratio.value * detail::real_pow(Real(1) - p, Real(1) - nu);
}

/// Basic hypergeometric series
///   r_Phi_s(a; b; base, z) = sum_n (a_1..a_r; base)_n / ((base; base)_n (b_1..b_s; base)_n)
///                            * [(-1)^n base^{n(n-1)/2}]^{1+s-r} z^n.
/// Without the convergence-forcing factor (r = s+1) the series needs |z| < 1.
template <typename Real>
EvalResult<Real> basic_hypergeometric(const std::vector<Complex<Real>>& numerators,
                                      const std::vector<Complex<Real>>& denominators, Real base,
                                      Complex<Real> z, const SeriesPolicy& policy) {
  if (!(base > Real(0) && base < Real(1))) {
    throw domain_error("basic_hypergeometric: base must lie in (0, 1)");
  }
  const long r = static_cast<long>(numerators.size());
  const long s = static_cast<long>(denominators.size());
  const long forcing = 1 + s - r;

  // A numerator of the form base^{-m} terminates the series after m+1 terms.
  bool terminating = false;
  for (const auto& a : numerators) {
    if (a == Complex<Real>(0)) continue;
    const Complex<Real> m = -std::log(a) / std::log(base);
    const Real mr = std::round(m.real());
    if (mr >= 0 && std::abs(m - Complex<Real>(mr)) < Real(1e-12) * std::max(Real(1), mr)) terminating = true;
  }
  if (!terminating) {
    if (forcing < 0) {
      throw domain_error("basic_hypergeometric: r > s + 1 gives a divergent series");
    }
    if (forcing == 0 && std::abs(z) >= Real(1)) {
      throw domain_error("basic_hypergeometric: |z| >= 1 outside the radius of convergence");
    }
  }

  Real base_n = 1;  // base^n
  auto ratio = [&](long n) -> Complex<Real> {
    Complex<Real> num(1);
    for (const auto& a : numerators) {
      Complex<Real> f = Real(1) - a * base_n;
      if (std::abs(f) < detail::zero_factor_tol<Real>() * std::max(Real(1), std::abs(a * base_n))) {
        f = 0;
      }
      num *= f;
    }
    Complex<Real> den(Real(1) - base_n * base);
    for (const auto& bj : denominators) {
      const Complex<Real> f = Real(1) - bj * base_n;
      if (std::abs(f) < detail::zero_factor_tol<Real>() * std::max(Real(1), std::abs(bj * base_n))) {
        throw domain_error("basic_hypergeometric: denominator parameter of the form base^-m (n = " +
                           std::to_string(n) + ")");
      }
      den *= f;
    }
    Real force = 1;
    for (long i = 0; i < forcing; ++i) force *= -base_n;
    base_n *= base;
    return num / den * force * z;
  };
  const auto sum = detail::sum_ratio_series<Real>(Complex<Real>(1), ratio, policy, "basic_hypergeometric");
  EvalResult<Real> out;
  out.value = sum.value();
  out.abs_err = sum.abs_err() * std::exp(sum.log_scale);
  out.terms_or_nodes = sum.terms;
  if (forcing == 0 && std::abs(z) > Real(0.9)) out.warn(Warning::near_radius);
  if (sum.terms > policy.max_terms / 2) out.warn(Warning::slow_convergence);
  return out;
}

/// Small q-exponential e_q(z) = sum z^n/(q;q)_n = 1/(z;q)_inf.
/// Series for |z| <= 1/2. On 1/2 < |z| < 1 the product gives the same
/// function without the slow geometric tail; for |z| >= 1 it is the
/// meromorphic continuation.
template <typename Real>
EvalResult<Real> q_exp_small(Complex<Real> z, Real base, const SeriesPolicy& policy) {
  if (!(base > Real(0) && base < Real(1))) throw domain_error("q_exp_small: base must lie in (0, 1)");
  EvalResult<Real> out;
  if (std::abs(z) <= Real(0.5)) {
    Real base_n = base;
    auto ratio = [&](long) {
      const Complex<Real> r = z / (Real(1) - base_n);
      base_n *= base;
      return r;
    };
    const auto sum = detail::sum_ratio_series<Real>(Complex<Real>(1), ratio, policy, "q_exp_small");
    out.value = sum.value();
    out.abs_err = sum.abs_err();
    out.terms_or_nodes = sum.terms;
    return out;
  }
  const auto prod = detail::infinite_product(z, base);
  if (prod.min_factor < detail::zero_factor_tol<Real>()) {
    throw pole_error("q_exp_small: pole at z = base^-m");
  }
  out.value = Real(1) / prod.value;
  out.abs_err = prod.abs_err / (std::abs(prod.value) * std::abs(prod.value));
  out.terms_or_nodes = prod.factors;
  if (std::abs(z) >= Real(1)) {
    out.warn(Warning::continuation);
  } else if (std::abs(z) > Real(0.9)) {
    out.warn(Warning::near_radius);
  }
  if (prod.min_factor < Real(1e-6)) out.warn(Warning::pole_proximity);
  return out;
}

/// Big q-exponential E_q(z) = sum q^{n(n-1)/2} z^n/(q;q)_n = (-z;q)_inf (entire).
/// The series is used for |z| <= 1, the product beyond (no cancellation).
template <typename Real>
EvalResult<Real> q_exp_big(Complex<Real> z, Real base, const SeriesPolicy& policy) {
  if (!(base > Real(0) && base < Real(1))) throw domain_error("q_exp_big: base must lie in (0, 1)");
  EvalResult<Real> out;
  if (std::abs(z) <= Real(1)) {
    Real base_n = 1;
    auto ratio = [&](long) {
      const Complex<Real> r = base_n * z / (Real(1) - base_n * base);
      base_n *= base;
      return r;
    };
    const auto sum = detail::sum_ratio_series<Real>(Complex<Real>(1), ratio, policy, "q_exp_big");
    out.value = sum.value();
    out.abs_err = sum.abs_err();
    out.terms_or_nodes = sum.terms;
    return out;
  }
  const auto prod = detail::infinite_product(-z, base);
  out.value = prod.value;
  out.abs_err = prod.abs_err;
  out.terms_or_nodes = prod.factors;
  return out;
}

/// Jackson q-derivative (f(x) - f(base x)) / ((1 - base) x). No limit is taken,
/// so x = 0 is rejected.
template <typename Real, typename F>
auto q_derivative(F&& f, Complex<Real> x, Real base) {
  if (x == Complex<Real>(0)) throw domain_error("q_derivative: x = 0 needs the series at the origin");
  return (f(x) - f(base * x)) / ((Real(1) - base) * x);
}

}  // namespace qbmf
