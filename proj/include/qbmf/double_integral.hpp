#pragma once

// The xi kernels, the angular integral that rebuilds J_0 from a pair of
// them, and the double-integral form of K over the complex plane in polar
// coordinates.

#include <cmath>
#include <complex>
#include <numbers>

#include "qbmf/qbessel.hpp"
#include "qbmf/quadrature.hpp"
#include "qbmf/qseries.hpp"
#include "qbmf/types.hpp"

namespace qbmf {

template <typename Real>
struct XiParams {
  Real eta;
  int delta;
  QBase<Real> base;

  void validate() const {
    if (!(eta >= Real(0))) throw domain_error("XiParams: eta must be non-negative");
    if (delta < 0 || delta > 2) throw domain_error("XiParams: delta must be 0, 1 or 2");
  }
  /// True when the damping q^{(2-delta) eta n^2} is absent and the series
  /// only converges for |s| < 1/(1-q^2).
  bool radius_limited() const { return Real(2 - delta) * eta == Real(0); }
};

/// xi_eta^(delta)(s) = sum_n q^{(2-delta) eta n^2} (1-q^2)^n s^n / (q^2;q^2)_n.
/// In the radius-limited case the series is e_{q^2}((1-q^2)s); beyond
/// |s| = 1/(1-q^2) it is continued by the product 1/((1-q^2)s; q^2)_inf when
/// allowed, otherwise domain_error.
template <typename Real>
EvalResult<Real> xi(const XiParams<Real>& params, Complex<Real> s, const SeriesPolicy& policy = {},
                    bool allow_continuation = false) {
  params.validate();
  const Real q = params.base.q();
  const Real p = params.base.p();
  if (params.radius_limited()) {
    const Complex<Real> x = (Real(1) - p) * s;
    if (std::abs(x) >= Real(1) && !allow_continuation) {
      throw domain_error("xi: |s| >= 1/(1-q^2) is outside the radius of the series");
    }
    return q_exp_small(x, p, policy);
  }
  const Real damp = Real(2 - params.delta) * params.eta;
  Real q_odd = std::pow(q, damp);  // q^{damp (2n+1)}
  const Real q_step = std::pow(q, Real(2) * damp);
  Real p_n1 = p;                    // p^{n+1}
  auto ratio = [&](long) {
    const Complex<Real> r = q_odd * (Real(1) - p) * s / (Real(1) - p_n1);
    q_odd *= q_step;
    p_n1 *= p;
    return r;
  };
  return detail::to_result(detail::sum_ratio_series<Real>(Complex<Real>(1), ratio, policy, "xi series"));
}

/// s = rho e^{i phi}, z = r e^{i psi}.
template <typename Real>
struct PolarPoint {
  Real rho = 0;
  Real phi = 0;
  Real r = 0;
  Real psi = 0;

  Complex<Real> s() const { return std::polar(rho, phi); }
  Complex<Real> z() const { return std::polar(r, psi); }
};

enum class EtaMode {
  half_half,  // xi_{1/2} xi_{1/2}
  zero_one,   // xi_0 xi_1 = e_{q^2} xi_1
};

/// (1/2pi) int_{-pi}^{pi} xi_eta(i r rho e^{-i(psi+phi)}) xi_{1-eta}(i r rho e^{i(psi+phi)}) dphi
/// by the N-point periodic trapezoid rule, which should equal
/// J_0^(j)((1-q^2) 2 r rho; q^2). Error: |T_N - T_{N/2}| plus rounding.
template <typename Real>
EvalResult<Real> angular_j0(FunctionKind kind, Real r_rho, Real psi, EtaMode mode, const QBase<Real>& base,
                            int nodes, const SeriesPolicy& policy = {}, bool allow_continuation = false) {
  if (nodes < 8 || nodes % 2 != 0) throw domain_error("angular_j0: nodes must be even and at least 8");
  if (!(r_rho >= Real(0))) throw domain_error("angular_j0: r rho must be non-negative");
  const int delta = kind.delta();
  const Real eta1 = mode == EtaMode::half_half ? Real(0.5) : Real(0);
  const XiParams<Real> left{eta1, delta, base};
  const XiParams<Real> right{Real(1) - eta1, delta, base};

  const Complex<Real> i(0, 1);
  EvalResult<Real> out;
  Complex<Real> sum_all(0), sum_even(0);
  Real max_abs = 0;
  const Real pi = std::numbers::pi_v<Real>;
  for (int k = 0; k < nodes; ++k) {
    const Real theta = psi - pi + Real(2) * pi * Real(k) / Real(nodes);
    const auto a = xi(left, i * r_rho * std::polar(Real(1), -theta), policy, allow_continuation);
    const auto b = xi(right, i * r_rho * std::polar(Real(1), theta), policy, allow_continuation);
    const Complex<Real> v = a.value * b.value;
    sum_all += v;
    if (k % 2 == 0) sum_even += v;
    max_abs = std::max(max_abs, std::abs(v));
    out.terms_or_nodes += a.terms_or_nodes + b.terms_or_nodes;
    out.merge_warnings(a);
    out.merge_warnings(b);
  }
  const Complex<Real> full = sum_all / Real(nodes);
  const Complex<Real> half = sum_even / Real(nodes / 2);
  out.value = full;
  out.abs_err = std::abs(full - half) + Real(4) * epsilon<Real>() * max_abs;
  return out;
}

/// angular_j0 with the node count doubled (reusing earlier nodes) until
/// |T_N - T_{N/2}| <= rel_tol * max(1, |T_N|) or N reaches max_nodes.
template <typename Real>
EvalResult<Real> angular_j0_adaptive(FunctionKind kind, Real r_rho, Real psi, EtaMode mode, const QBase<Real>& base,
                                     int start_nodes, Real rel_tol, int max_nodes,
                                     const SeriesPolicy& policy = {}) {
  if (start_nodes < 8 || start_nodes % 2 != 0) throw domain_error("angular_j0: nodes must be even and at least 8");
  const int delta = kind.delta();
  const Real eta1 = mode == EtaMode::half_half ? Real(0.5) : Real(0);
  const XiParams<Real> left{eta1, delta, base};
  const XiParams<Real> right{Real(1) - eta1, delta, base};
  const Complex<Real> i(0, 1);
  const Real pi = std::numbers::pi_v<Real>;

  EvalResult<Real> out;
  Real max_abs = 0;
  auto node = [&](int k, int n) {
    const Real theta = psi - pi + Real(2) * pi * Real(k) / Real(n);
    const auto a = xi(left, i * r_rho * std::polar(Real(1), -theta), policy, false);
    const auto b = xi(right, i * r_rho * std::polar(Real(1), theta), policy, false);
    out.terms_or_nodes += a.terms_or_nodes + b.terms_or_nodes;
    out.merge_warnings(a);
    out.merge_warnings(b);
    const Complex<Real> v = a.value * b.value;
    max_abs = std::max(max_abs, std::abs(v));
    return v;
  };
  int n = start_nodes / 2;
  Complex<Real> sum(0);
  for (int k = 0; k < n; ++k) sum += node(k, n);
  Complex<Real> previous = sum / Real(n);
  for (;;) {
    for (int k = 1; k < 2 * n; k += 2) sum += node(k, 2 * n);
    n *= 2;
    const Complex<Real> current = sum / Real(n);
    const Real err = std::abs(current - previous);
    if (err <= rel_tol * std::max(Real(1), std::abs(current)) || 2 * n > max_nodes) {
      out.value = current;
      out.abs_err = err + Real(4) * epsilon<Real>() * max_abs;
      if (err > rel_tol * std::max(Real(1), std::abs(current))) out.warn(Warning::slow_convergence);
      return out;
    }
    previous = current;
  }
}

enum class DoubleForm {
  exp_xi1,    // e_{q^2} xi_1 pair
  half_half,  // xi_{1/2} xi_{1/2} pair
};

/// K_nu^(j)(2(1-q^2)|z|; q^2) from the double integral over s = rho e^{i phi}
/// with measure 2 rho drho dphi:
///   -q^{-nu^2+nu(1-delta)} (1-q^2) / (8 pi ln q) Gamma_{q^2}(nu+1) A_nu^{|1-delta|} |z|^{-nu}
///     * int_0^inf int_{-pi}^{pi} f(rho) [xi pair] 2 rho dphi drho.
/// The result equals bessel_k at argument 2|z|. Where a xi factor of the
/// pair is radius-limited and r rho >= 0.9/(1-q^2), the angular integral is
/// replaced by J_0^(j)((1-q^2) 2 r rho; q^2), its value inside the radius and
/// its analytic continuation beyond (warning: continuation). Closer to the
/// radius the e_{q^2} pole approaches the contour and the trapezoid rule
/// needs ~ln(tol)/ln(r rho (1-q^2)) nodes. In that case the radial bands are
/// anchored at the switch so no band straddles it. The angular rule starts at
/// nodes_angular and doubles up to 64 times that while its refinement error
/// exceeds 1e-13. Throws convergence_error when the radial tail does not decay.
template <typename Real>
EvalResult<Real> k_integral_double(FunctionKind kind, Complex<Real> nu, Complex<Real> z, const QBase<Real>& b,
                                   const QuadraturePolicy& qpolicy = {}, int nodes_angular = 128,
                                   DoubleForm form = DoubleForm::half_half, const SeriesPolicy& spolicy = {}) {
  if (!(nu.real() > Real(0))) throw domain_error("k_integral_double: requires Re nu > 0");
  const Real r = std::abs(z);
  if (!(r > Real(0))) throw domain_error("k_integral_double: requires z != 0");
  const Real pi = std::numbers::pi_v<Real>;
  const Complex<Real> pref = k_integral_prefactor(kind, nu, Complex<Real>(r), b, spolicy) / (Real(4) * pi);

  const EtaMode mode = form == DoubleForm::exp_xi1 ? EtaMode::zero_one : EtaMode::half_half;
  const bool limited = mode == EtaMode::zero_one || kind.delta() == 2;
  const Real switch_radius = Real(0.9) / (Real(1) - b.p());
  const Real psi = std::arg(z);
  const WeightParams<Real> w{nu, kind, b};

  EvalResult<Real> notes;
  Real max_angular_err = 0;
  auto integrand = [&](Real rho) {
    const Real rr = r * rho;
    Complex<Real> ang;
    if (limited && rr >= switch_radius) {
      BesselArgs<Real> args{Complex<Real>(0), Complex<Real>(Real(2) * rr), b, true};
      const auto j0 = bessel_j_scaled(kind, args, spolicy);
      ang = j0.value;
      max_angular_err = std::max(max_angular_err, j0.abs_err);
      notes.warn(Warning::continuation);
    } else {
      const auto a = angular_j0_adaptive(kind, rr, psi, mode, b, nodes_angular, Real(1e-13), 64 * nodes_angular, spolicy);
      ang = a.value;
      max_angular_err = std::max(max_angular_err, a.abs_err);
      notes.merge_warnings(a);
    }
    return weight_f(w, rho) * Real(2) * rho * (Real(2) * pi) * ang;
  };
  QuadraturePolicy radial = qpolicy;
  if (limited) radial.anchor = double(switch_radius / r);
  EvalResult<Real> res;
  try {
    res = integrate_semi_infinite<Real>(integrand, radial, b.q());
  } catch (const convergence_error& e) {
    throw convergence_error(std::string("k_integral_double: radial tail did not decay: ") + e.what(),
                            std::complex<double>(e.partial_value() * std::complex<double>(pref)),
                            e.partial_abs_err() * std::abs(std::complex<double>(pref)));
  }
  // The angular error enters the radial integral weighted by f(rho) 2 rho 2 pi,
  // whose integral is 4 pi times the weight moment.
  const Real moment = std::abs(moment_closed_form(kind, nu, b));
  res.value *= pref;
  res.abs_err = std::abs(pref) * (res.abs_err + Real(4) * pi * moment * max_angular_err);
  res.merge_warnings(notes);
  return res;
}

}  // namespace qbmf
