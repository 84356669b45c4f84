#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracle.hpp"
#include "qbmf/qbinomial.hpp"

using namespace qbmf;
using C = std::complex<double>;
using oracle::F;

namespace {

double rel(C a, C b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

/// The expansion with coefficient q^{2(alpha-beta-1)k} in place of the
/// residue q^{2(alpha-beta)k}.
double shifted_coefficient_sum(double alpha, double beta, double z, double q) {
  const double p = q * q, gap = alpha - beta;
  const F pf(p), qf(q);
  const F pref = oracle::qpoch_inf(pow(qf, F(2 * gap)), pf) / oracle::qpoch_inf(pf, pf);
  F sum = 0;
  for (int k = 0; k < 400; ++k) {
    sum += oracle::qpoch(pow(qf, F(2 * (beta - alpha + 1))), pf, k) * pow(qf, F(2 * (gap - 1) * k)) /
           (oracle::qpoch(pf, pf, k) * (1 + F(z * z) * pow(qf, F(2 * beta + 2 * k))));
  }
  return double(pref * sum);
}

}  // namespace

TEST_CASE("r binomial") {
  CHECK(std::abs(r_binomial(C(0.3), C(0.3), C(1.7), 0.5).value - C(1)) < 1e-15);
  CHECK(std::abs(r_binomial(C(0.3), C(0.7), C(0), 0.5).value - C(1)) < 1e-15);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5), uq(0.1, 0.9);
  for (int i = 0; i < 40; ++i) {
    const double a = u(rng), b = u(rng), z = u(rng), q = uq(rng);
    if (std::abs(detail::infinite_product(C(b * z), q).min_factor) < 1e-3) continue;
    const double ref = double(oracle::qpoch_inf(F(a * z), F(q)) / oracle::qpoch_inf(F(b * z), F(q)));
    CHECK(std::abs(r_binomial(C(a), C(b), C(z), q).value.real() - ref) < 1e-13 * std::max(1.0, std::abs(ref)));
  }
  CHECK_THROWS_AS(r_binomial(C(0.1), C(2.0), C(1.0), 0.5), pole_error);
}

TEST_CASE("big R") {
  const QBase<double> b(0.6);
  RParams<double> r{C(0.4), C(-0.3), C(0), 0, 0, 1};
  // gamma = 0 reduces R to r at base q^2 and argument z^2.
  CHECK(rel(big_r(r, C(1.3), b).value, r_binomial(C(0.4), C(-0.3), C(1.69), 0.36).value) < 1e-15);
  r.gamma = 0.5;
  CHECK(rel(big_r(r, C(1.3), b).value, std::sqrt(1.3) * r_binomial(C(0.4), C(-0.3), C(1.69), 0.36).value) < 1e-15);
  CHECK(big_r(r, C(0), b).value == C(0));
  r.gamma = -0.5;
  CHECK_THROWS_AS(big_r(r, C(0), b), domain_error);

  const auto spec = RParams<double>::from_exponents(1.5, 0.25, C(0.3), -1, b);
  CHECK(std::abs(spec.a - C(-std::pow(0.6, 3.0))) < 1e-16);
  CHECK(std::abs(spec.b - C(-std::pow(0.6, 0.5))) < 1e-16);
  CHECK_THROWS_AS(RParams<double>::from_exponents(1, 0, C(0), 2, b), domain_error);
}

TEST_CASE("difference equation of R") {
  for (double q : {0.3, 0.6, 0.85}) {
    const QBase<double> b(q);
    for (double g : {-0.7, 0.0, 0.4}) {
      RParams<double> r{C(0.5), C(-0.8), C(g), 0, 0, 1};
      for (double z : {0.3, 1.1, 1.9}) {
        CHECK(std::abs(big_r_residual(r, C(z), b)) < 1e-13 * std::abs(big_r(r, C(z), b).value));
      }
    }
  }
}

TEST_CASE("partial-fraction expansion of the product ratio") {
  const QBase<double> b(0.5);
  const auto pf = partial_fraction_ratio(2.0, 0.5, C(1.7), b);
  const auto direct = weight_ratio_direct(2.0, 0.5, C(1.7), b);
  CHECK(rel(pf.value, direct.value) < 1e-12);
  CHECK(pf.abs_err < 1e-13);

  CHECK(std::abs(partial_fraction_ratio(1.3, 0.2, C(0), b).value - C(1)) < 1e-14);
  // The ratio decays like z^{-2(alpha-beta)} for large z.
  const double big = 1e3;
  const double decay = std::abs(partial_fraction_ratio(1.3, 0.2, C(big), b).value);
  CHECK(decay < 10 * std::pow(big, -2 * 1.1));

  for (double q : {0.3, 0.7}) {
    for (double gap : {0.35, 1.0, 2.6}) {
      for (double z : {0.2, 1.0, 5.0}) {
        const QBase<double> bq(q);
        CHECK(rel(partial_fraction_ratio(0.4 + gap, 0.4, C(z), bq).value,
                  weight_ratio_direct(0.4 + gap, 0.4, C(z), bq).value) < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(partial_fraction_ratio(0.5, 0.5, C(1.0), b), domain_error);
  CHECK_THROWS_AS(partial_fraction_ratio(0.2, 0.5, C(1.0), b), domain_error);
}

TEST_CASE("coefficient shifted by one power does not reproduce the ratio") {
  const double direct = weight_ratio_direct(2.0, 0.5, C(1.7), QBase<double>(0.5)).value.real();
  const double shifted = shifted_coefficient_sum(2.0, 0.5, 1.7, 0.5);
  CHECK(std::abs(shifted / direct - 1) > 0.1);
}

TEST_CASE("double-precision expansion stays within its error estimate") {
  // Integer gap: the expansion terminates with large alternating terms.
  const QBase<double> b(0.9);
  const auto pf = partial_fraction_ratio(3.25, 0.25, C(10.0), b);
  const auto pl = weight_ratio_direct<long double>(3.25L, 0.25L, Complex<long double>(10.0L),
                                                   QBase<long double>(0.9L));
  CHECK(std::abs(pf.value - C(double(pl.value.real()))) <= pf.abs_err + 1e-15 * std::abs(pf.value));
}

TEST_CASE("limiting differential equation") {
  const auto residual = [](double q) {
    const QBase<double> b(q);
    const auto p = RParams<double>::from_exponents(1.5, 0.25, C(0.3), -1, b);
    return std::abs(ode_limit_residual(p, C(0.6), b));
  };
  CHECK(residual(0.999) < residual(0.99));
  CHECK(residual(0.999) < 1e-2);
}
