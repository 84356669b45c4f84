#pragma once

// Banded Gauss-Legendre quadrature on (0, inf) for integrands with
// q-geometric structure, and the integrals built on it: the weight moment,
// the single-integral form of K, and the lemmas on small intervals and
// q-integration by parts.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "qbmf/qbessel.hpp"
#include "qbmf/qseries.hpp"
#include "qbmf/types.hpp"

namespace qbmf {

template <typename Real>
struct GaussRule {
  std::vector<Real> nodes;    // on [-1, 1], ascending
  std::vector<Real> weights;
};

namespace detail {

template <typename Real>
void legendre_eval(int n, Real x, Real& pn, Real& dpn) {
  Real p0 = 1, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  pn = n == 0 ? Real(1) : p1;
  dpn = n * (x * pn - p0) / (x * x - Real(1));
}

template <typename Real>
GaussRule<Real> build_gauss_legendre(int n) {
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const Real b = Real(k) / std::sqrt(Real(4) * k * k - Real(1));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
  GaussRule<Real> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // One Newton step on P_n sharpens the eigenvalue to full precision.
    Real x = solver.eigenvalues()(i);
    Real pn, dpn;
    for (int it = 0; it < 2; ++it) {
      legendre_eval(n, x, pn, dpn);
      x -= pn / dpn;
    }
    legendre_eval(n, x, pn, dpn);
    rule.nodes[i] = x;
    rule.weights[i] = Real(2) / ((Real(1) - x * x) * dpn * dpn);
  }
  return rule;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch, Newton-polished).
/// Rules are cached per n.
template <typename Real>
const GaussRule<Real>& gauss_legendre(int n) {
  if (n < 1) throw domain_error("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<int, GaussRule<Real>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::build_gauss_legendre<Real>(n)).first;
  return it->second;
}

/// Integral of f over [a, b] with a Gauss-Legendre rule.
template <typename Real, typename F>
auto gauss_integrate(F&& f, Real a, Real b, const GaussRule<Real>& rule) {
  const Real half = (b - a) / 2;
  const Real mid = (a + b) / 2;
  using Value = decltype(f(mid));
  Value sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return Value(sum * half);
}

struct QuadraturePolicy {
  /// Gauss-Legendre nodes per band; the band error compares against
  /// nodes_per_band / 2.
  int nodes_per_band = 32;
  /// Ratio of band end points. Unset means: q for the q-integrals in this
  /// module, 0.5 for integrate_semi_infinite called directly.
  std::optional<double> band_ratio;
  /// Bands are [r^{m+1} S0, r^m S0] downward and [S0 r^{-m}, S0 r^{-m-1}] upward.
  double anchor = 1.0;
  /// A band is negligible when |band| < tail_rel_cutoff * |total so far|.
  double tail_rel_cutoff = 1e-15;
  /// Per direction.
  int max_bands = 400;
  /// Negligible bands required in a row before a direction stops.
  int consecutive_small = 2;
  /// Bands are bisected while their refinement error exceeds
  /// band_rel_tol * max(|band|, |total|), up to max_bisections levels.
  double band_rel_tol = 1e-14;
  int max_bisections = 6;
  /// Sum the upward tail by Wynn's epsilon algorithm once band magnitudes
  /// decrease geometrically (slowly decaying power-law tails).
  bool extrapolate_tail = true;

  void validate() const {
    if (nodes_per_band < 2) throw domain_error("QuadraturePolicy.nodes_per_band must be at least 2");
    if (band_ratio && !(*band_ratio > 0.0 && *band_ratio < 1.0)) {
      throw domain_error("QuadraturePolicy.band_ratio must lie in (0, 1)");
    }
    if (!(anchor > 0.0)) throw domain_error("QuadraturePolicy.anchor must be positive");
    if (!(tail_rel_cutoff > 0.0)) throw domain_error("QuadraturePolicy.tail_rel_cutoff must be positive");
    if (max_bands < 1 || consecutive_small < 1) throw domain_error("QuadraturePolicy: band counts must be positive");
    if (!(band_rel_tol > 0.0) || max_bisections < 0) throw domain_error("QuadraturePolicy: bad bisection settings");
  }

  double ratio_or(double fallback) const { return band_ratio ? *band_ratio : fallback; }
};

namespace detail {

template <typename Real>
struct BandValue {
  Complex<Real> value;
  Real abs_err;
  long nodes;
};

/// Integral over one band with the n- and n/2-point rules; bisects while
/// the two disagree by more than the tolerance.
template <typename Real, typename F>
BandValue<Real> integrate_band(F& f, Real a, Real b, const QuadraturePolicy& pol, Real scale, int depth) {
  const auto& fine_rule = gauss_legendre<Real>(pol.nodes_per_band);
  const auto& coarse_rule = gauss_legendre<Real>(std::max(1, pol.nodes_per_band / 2));
  auto g = [&](Real x) { return Complex<Real>(f(x)); };
  const Complex<Real> fine = gauss_integrate<Real>(g, a, b, fine_rule);
  const Complex<Real> coarse = gauss_integrate<Real>(g, a, b, coarse_rule);
  const Real err = std::abs(fine - coarse);
  const long nodes = static_cast<long>(fine_rule.nodes.size() + coarse_rule.nodes.size());
  if (!std::isfinite(err)) throw convergence_error("quadrature: integrand not finite on a band", {NAN, NAN}, INFINITY);
  if (depth >= pol.max_bisections || err <= Real(pol.band_rel_tol) * std::max(std::abs(fine), scale)) {
    return {fine, err, nodes};
  }
  const Real mid = std::sqrt(a * b);  // geometric split keeps the q-structure
  const auto left = integrate_band(f, a, mid, pol, scale, depth + 1);
  const auto right = integrate_band(f, mid, b, pol, scale, depth + 1);
  return {left.value + right.value, left.abs_err + right.abs_err, nodes + left.nodes + right.nodes};
}

/// Wynn epsilon table on partial sums; returns the last even-column
/// estimate and the difference with the previous one as its error.
template <typename Real>
std::pair<Complex<Real>, Real> wynn_epsilon(const std::vector<Complex<Real>>& partial) {
  const std::size_t n = partial.size();
  std::vector<Complex<Real>> prev(n + 1, Complex<Real>(0)), cur(partial.begin(), partial.end());
  Complex<Real> best = partial.back();
  Complex<Real> previous_best = partial.size() > 1 ? partial[n - 2] : best;
  for (std::size_t col = 1; col < n; ++col) {
    std::vector<Complex<Real>> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const Complex<Real> d = cur[i + 1] - cur[i];
      if (d == Complex<Real>(0)) return {best, std::abs(best - previous_best)};
      next[i] = prev[i + 1] + Real(1) / d;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (col % 2 == 0 && cur.size() >= 2) {
      previous_best = cur[cur.size() - 2];
      best = cur.back();
    }
  }
  return {best, std::abs(best - previous_best)};
}

}  // namespace detail

/// Integral of f over (0, inf) by geometric bands around the anchor, summed
/// downward and upward until the band contributions become negligible.
/// The error estimate is the sum over bands of |G_n - G_{n/2}| plus the tail
/// estimate. Bands are summed in a fixed order.
template <typename Real, typename F>
EvalResult<Real> integrate_semi_infinite(F&& f, const QuadraturePolicy& policy, Real default_ratio = Real(0.5)) {
  policy.validate();
  const Real r = Real(policy.ratio_or(double(default_ratio)));
  const Real s0 = Real(policy.anchor);

  EvalResult<Real> out;
  Complex<Real> total(0);
  Real err = 0;

  auto run = [&](bool upward) {
    int small = 0;
    int growing = 0;
    Real prev_mag = -1;
    std::vector<Complex<Real>> partial;
    Complex<Real> local(0);
    for (int m = 0; m < policy.max_bands; ++m) {
      const Real lo = upward ? s0 * std::pow(r, -Real(m)) : s0 * std::pow(r, Real(m + 1));
      const Real hi = upward ? s0 * std::pow(r, -Real(m + 1)) : s0 * std::pow(r, Real(m));
      const auto band = detail::integrate_band<Real>(f, lo, hi, policy, std::abs(total + local), 0);
      local += band.value;
      err += band.abs_err;
      out.terms_or_nodes += band.nodes;
      partial.push_back(total + local);

      const Real mag = std::abs(band.value);
      const Real scale = std::abs(total + local);
      if (mag <= Real(policy.tail_rel_cutoff) * scale) {
        if (++small >= policy.consecutive_small) {
          total += local;
          return;
        }
      } else {
        small = 0;
      }
      growing = (prev_mag >= 0 && mag > prev_mag && m > 8) ? growing + 1 : 0;
      if (growing >= 12) {
        throw convergence_error("quadrature: integrand does not decay (band contributions growing)",
                                std::complex<double>(total + local), double(err));
      }
      // Geometric tail: extrapolate once at least 12 bands shrink at a
      // stable ratio and the extrapolated tail sits below the cutoff scale.
      if (upward && policy.extrapolate_tail && partial.size() >= 16) {
        bool monotone = true;
        const std::size_t k = partial.size();
        Real ratio_min = 1, ratio_max = 0;
        for (std::size_t i = k - 12; i < k; ++i) {
          const Real a = std::abs(partial[i] - partial[i - 1]);
          const Real b = std::abs(partial[i - 1] - partial[i - 2]);
          if (!(a < b)) { monotone = false; break; }
          ratio_min = std::min(ratio_min, a / b);
          ratio_max = std::max(ratio_max, a / b);
        }
        if (monotone && ratio_max - ratio_min < Real(0.05)) {
          // Extrapolate from the last 12 partial sums and from the three
          // windows ending one to three bands earlier; the spread of the four
          // limits measures the rounding noise the extrapolation amplifies.
          const auto [limit, werr_last] =
              detail::wynn_epsilon<Real>(std::vector<Complex<Real>>(partial.end() - 12, partial.end()));
          Real werr = werr_last;
          for (std::size_t back = 1; back <= 3; ++back) {
            const auto [other, other_err] = detail::wynn_epsilon<Real>(
                std::vector<Complex<Real>>(partial.end() - 12 - back, partial.end() - back));
            werr = std::max({werr, other_err, std::abs(limit - other)});
          }
          const Real tol = Real(policy.tail_rel_cutoff) * std::abs(limit);
          if (werr <= std::max(tol, Real(64) * epsilon<Real>() * std::abs(limit))) {
            err += werr + Real(16) * epsilon<Real>() * std::abs(limit);
            local = limit - total;
            total = limit;
            out.warn(Warning::tail_extrapolated);
            return;
          }
        }
      }
      prev_mag = mag;
    }
    throw convergence_error(std::string("quadrature: max_bands exhausted ") + (upward ? "upward" : "downward"),
                            std::complex<double>(total + local), double(err));
  };

  run(false);
  run(true);
  out.value = total;
  out.abs_err = err + Real(4) * epsilon<Real>() * std::abs(total);
  return out;
}

template <typename Real>
struct WeightParams {
  Complex<Real> nu;
  FunctionKind kind;
  QBase<Real> base;
};

/// f(s) = (-q^{2nu+2-delta nu} s^2; q^2)_inf / (-q^{-delta nu} s^2; q^2)_inf,
/// evaluated as a product of factor ratios so large s does not overflow.
template <typename Real>
Complex<Real> weight_f(const WeightParams<Real>& w, Real s) {
  if (!(s >= Real(0))) throw domain_error("weight_f: s must be non-negative");
  const Real q = w.base.q();
  const Real p = w.base.p();
  const Real d = Real(w.kind.delta());
  const Complex<Real> a = detail::real_pow(q, Real(2) * w.nu + Real(2) - d * w.nu) * s * s;
  const Complex<Real> b = detail::real_pow(q, -d * w.nu) * s * s;
  Complex<Real> value(1);
  Complex<Real> ak = a, bk = b;
  for (int k = 0; k < 100000; ++k) {
    if (std::abs(ak) < Real(detail::kProductCutoff) && std::abs(bk) < Real(detail::kProductCutoff)) break;
    value *= (Real(1) + ak) / (Real(1) + bk);
    ak *= p;
    bk *= p;
  }
  return value;
}

/// -q^{-nu^2+nu(1-delta)} (1-q^2) / (2 ln q) Gamma_{q^2}(nu+1) A_nu^{|1-delta|} (z/2)^{-nu}.
template <typename Real>
Complex<Real> k_integral_prefactor(FunctionKind kind, Complex<Real> nu, Complex<Real> z_half_power_base,
                                   const QBase<Real>& b, const SeriesPolicy& spolicy) {
  const Real d = Real(kind.delta());
  Complex<Real> pref = -detail::real_pow(b.q(), -nu * nu + nu * (Real(1) - d)) * (Real(1) - b.p()) /
                       (Real(2) * b.log_q()) * q_gamma(nu + Real(1), b);
  if (kind.a_exponent() == 1) pref *= a_nu(nu, b, spolicy);
  return pref * std::pow(z_half_power_base, -nu);
}

/// K_nu^(j)((1-q^2) z; q^2) from the single integral
///   prefactor * int_0^inf f(s) s J_0^(j)((1-q^2) z s; q^2) ds.
/// Kind 1 uses the continued J_0^(1). Throws convergence_error when the
/// band contributions do not die out.
template <typename Real>
EvalResult<Real> k_integral_single(FunctionKind kind, Complex<Real> nu, Complex<Real> z, const QBase<Real>& b,
                                   const QuadraturePolicy& qpolicy = {}, const SeriesPolicy& spolicy = {}) {
  if (!(nu.real() > Real(0))) throw domain_error("k_integral_single: requires Re nu > 0");
  if (kind.index() == 1 && !(z.real() > Real(0))) throw domain_error("k_integral_single: kind 1 requires Re z > 0");
  const Complex<Real> pref = k_integral_prefactor(kind, nu, z / Real(2), b, spolicy);
  if (nu.imag() == Real(0) && z.imag() == Real(0) && !(pref.real() > Real(0))) {
    throw error("k_integral_single: prefactor is not positive for real nu, z");
  }
  const WeightParams<Real> w{nu, kind, b};
  EvalResult<Real> warnings;
  auto integrand = [&](Real s) {
    BesselArgs<Real> args{Complex<Real>(0), z * s, b, kind.index() == 1};
    const auto j0 = bessel_j_scaled(kind, args, spolicy);
    warnings.merge_warnings(j0);
    return weight_f(w, s) * s * j0.value;
  };
  auto res = integrate_semi_infinite<Real>(integrand, qpolicy, b.q());
  res.value *= pref;
  res.abs_err *= std::abs(pref);
  res.merge_warnings(warnings);
  return res;
}

/// int_0^inf f(s) s ds by banded quadrature.
template <typename Real>
EvalResult<Real> moment_identity(FunctionKind kind, Complex<Real> nu, const QBase<Real>& b,
                                 const QuadraturePolicy& qpolicy = {}) {
  if (!(nu.real() > Real(0))) throw domain_error("moment_identity: requires Re nu > 0");
  const WeightParams<Real> w{nu, kind, b};
  return integrate_semi_infinite<Real>([&](Real s) { return weight_f(w, s) * s; }, qpolicy, b.q());
}

/// -q^{delta nu} ln q / (1 - q^{2nu}).
template <typename Real>
Complex<Real> moment_closed_form(FunctionKind kind, Complex<Real> nu, const QBase<Real>& b) {
  const Real q = b.q();
  return -detail::real_pow(q, Real(kind.delta()) * nu) * b.log_q() / (Real(1) - detail::real_pow(q, Real(2) * nu));
}

/// int_{q eps}^{eps} F(x)/x dx for each eps, 64-point Gauss-Legendre in log x.
template <typename Real, typename F>
std::vector<Real> shrink_limit(F&& fn, const QBase<Real>& b, const std::vector<Real>& eps_sequence) {
  for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
    if (!(eps_sequence[i] > 0) || (i > 0 && !(eps_sequence[i] < eps_sequence[i - 1]))) {
      throw domain_error("shrink_limit: eps_sequence must be positive and decreasing");
    }
  }
  const auto& rule = gauss_legendre<Real>(64);
  std::vector<Real> out;
  out.reserve(eps_sequence.size());
  for (Real eps : eps_sequence) {
    // x = eps e^t, t in [ln q, 0]: dx/x = dt.
    auto g = [&](Real t) { return Real(fn(eps * std::exp(t))); };
    out.push_back(gauss_integrate<Real>(g, b.log_q(), Real(0), rule));
  }
  return out;
}

/// int d_x f g dx - f(0) g(0) ln q / (1-q) + int f(qx) d_x g dx, with d_x the
/// Jackson derivative; zero when q-integration by parts applies.
template <typename Real, typename F, typename G>
Complex<Real> q_parts_residual(F&& f, G&& g, const QBase<Real>& b, const QuadraturePolicy& qpolicy = {}) {
  const Real q = b.q();
  auto dq = [q](auto& h, Real x) { return Complex<Real>((h(x) - h(q * x)) / ((Real(1) - q) * x)); };
  const auto first = integrate_semi_infinite<Real>([&](Real x) { return dq(f, x) * Complex<Real>(g(x)); }, qpolicy, q);
  const auto third =
      integrate_semi_infinite<Real>([&](Real x) { return Complex<Real>(f(q * x)) * dq(g, x); }, qpolicy, q);
  const Complex<Real> boundary = Complex<Real>(f(Real(0))) * Complex<Real>(g(Real(0))) * b.log_q() / (Real(1) - q);
  return first.value - boundary + third.value;
}

}  // namespace qbmf
