#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracle.hpp"
#include "qbmf/qbessel.hpp"

using namespace qbmf;
using C = std::complex<double>;
using oracle::F;

namespace {

double rel(C a, C b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

BesselArgs<double> args(double nu, double z, double q, bool cont = false) {
  return BesselArgs<double>{C(nu), C(z), QBase<double>(q), cont};
}

}  // namespace

TEST_CASE("function kinds map to their delta") {
  CHECK(FunctionKind(1).delta() == 2);
  CHECK(FunctionKind(2).delta() == 0);
  CHECK(FunctionKind(3).delta() == 1);
  CHECK(FunctionKind::from_delta(1) == FunctionKind(3));
  CHECK(FunctionKind(3).a_exponent() == 0);
  CHECK(FunctionKind(2).a_exponent() == 1);
  CHECK_THROWS_AS(FunctionKind(4), domain_error);
}

TEST_CASE("raw-argument J") {
  for (const auto kind : kAllKinds) {
    CHECK(std::abs(bessel_j(kind, args(0, 0, 0.5)).value - C(1)) < 1e-15);
    CHECK(std::abs(bessel_j(kind, args(1.5, 0, 0.5)).value) == 0.0);
  }
  CHECK_THROWS_AS(bessel_j(FunctionKind(2), args(-0.5, 0, 0.5)), pole_error);
  for (double nu : {0.0, 0.5, 2.25}) {
    for (double z : {0.3, 1.0, 4.0}) {
      const double ref = double(oracle::bessel_j2_raw(F(nu), F(z), F(0.5)));
      CHECK(rel(bessel_j(FunctionKind(2), args(nu, z, 0.5)).value, C(ref)) < 1e-13);
    }
  }
  // Inside |z| < 2 the kind-1 series equals the kind-2 function over (-z^2/4; q)_inf.
  for (double z : {0.4, 0.9, 1.6}) {
    const double q = 0.6;
    const C j1 = bessel_j(FunctionKind(1), args(0.7, z, q)).value;
    const C j2 = bessel_j(FunctionKind(2), args(0.7, z, q)).value;
    CHECK(rel(j1 * qpoch_inf(C(-z * z / 4), q), j2) < 1e-13);
  }
  CHECK_THROWS_AS(bessel_j(FunctionKind(1), args(0, 3, 0.5)), domain_error);
}

TEST_CASE("continued kind-1 J_0 at q = 0.5") {
  // J_0^(1)((1-q^2) X; q^2) far outside the radius of its series.
  const std::pair<double, double> table[] = {
      {3, 1.363e-01}, {10, -2.215e-02}, {30, 2.862e-04}, {100, -2.236e-07}, {1000, 4.966e-15}};
  const F q(0.5), p = q * q, c = (1 - p) * (1 - p) / 4;
  for (const auto& [x, expected] : table) {
    const auto r = bessel_j_scaled(FunctionKind(1), args(0, x, 0.5, true));
    CHECK(r.has(Warning::continuation));
    CHECK(std::abs(r.value.real() / expected - 1) < 5e-4);
    const F ref = oracle::scaled_bessel(0, F(0), F(x), q, -1) / oracle::qpoch_inf(-c * F(x) * F(x), p);
    CHECK(std::abs(r.value.real() / double(ref) - 1) < 1e-9);
  }
}

TEST_CASE("scaled modified I against the 50-digit oracle") {
  CHECK(std::abs(bessel_i(FunctionKind(2), args(0.5, 0, 0.5)).value) == 0.0);
  for (const auto kind : kAllKinds) {
    for (double q : {0.3, 0.5, 0.8}) {
      for (double nu : {-0.7, 0.5, 1.25}) {
        for (double z : {0.2, 1.0, 2.5}) {
          // The oracle sums the kind-1 series, so stay inside its radius.
          if (kind.index() == 1 && z * (1 - q * q) / 2 >= 0.9) continue;
          const double ref = double(oracle::bessel_i(kind.index(), F(nu), F(z), F(q)));
          const auto r = bessel_i(kind, args(nu, z, q));
          INFO("j=" << kind.index() << " q=" << q << " nu=" << nu << " z=" << z << " ref=" << ref);
          CHECK(rel(r.value, C(ref)) < 1e-12);
          CHECK(r.abs_err >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("kind-1 radius guard and continuation") {
  // Radius of the kind-1 series: |z| < 2/(1-q^2).
  const double q = 0.8, radius = 2 / (1 - q * q);
  CHECK_THROWS_AS(bessel_i(FunctionKind(1), args(0.5, 1.01 * radius, q)), domain_error);
  const auto far = bessel_i(FunctionKind(1), args(0.5, 1.5 * radius, q, true));
  CHECK(far.has(Warning::continuation));
  // Between half the radius and the edge both routes are available and agree.
  for (double frac : {0.55, 0.7, 0.85}) {
    const auto series = bessel_i(FunctionKind(1), args(0.5, frac * radius, q, false));
    const auto cont = bessel_i(FunctionKind(1), args(0.5, frac * radius, q, true));
    CHECK(cont.has(Warning::continuation));
    CHECK(rel(series.value, cont.value) < 1e-12);
  }
  CHECK(bessel_i(FunctionKind(1), args(0.5, 0.95 * radius, q)).has(Warning::near_radius));
}

TEST_CASE("A_nu") {
  for (double q : {0.2, 0.5, 0.9}) {
    const QBase<double> b(q);
    CHECK(std::abs(a_nu(C(0), b) - C(1)) < 1e-15);
    for (double nu : {0.3, 1.5, 2.7}) {
      CHECK(std::abs(a_nu(C(nu), b) * a_nu(C(-nu), b) - C(1)) < 1e-13);
      const double ref = double(oracle::a_nu(F(nu), F(q)));
      CHECK(std::abs(a_nu(C(nu), b).real() - ref) < 1e-13);
      // The two series at 2/(1-q^2) coincide: A_nu is identically one.
      CHECK(std::abs(a_nu(C(nu), b) - C(1)) < 1e-12);
    }
  }
}

TEST_CASE("K against the 50-digit oracle") {
  for (const auto kind : kAllKinds) {
    for (double q : {0.3, 0.6, 0.85}) {
      for (double nu : {0.25, 0.7, 2.5}) {
        for (double z : {0.3, 1.0, 2.0}) {
          const double ref = double(oracle::bessel_k(kind.index(), F(nu), F(z), F(q)));
          CHECK(rel(bessel_k(kind, args(nu, z, q, true)).value, C(ref)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("K near and at integer order") {
  for (const auto kind : kAllKinds) {
    const double q = 0.6, z = 1.2;
    const auto k1 = bessel_k(kind, args(1.0, z, q, true));
    CHECK(k1.has(Warning::near_integer_order));
    CHECK(std::isfinite(k1.value.real()));
    CHECK(k1.abs_err < 1e-8 * std::abs(k1.value));
    // Interpolated value inside the guard band against the direct formula.
    const auto inside = bessel_k(kind, args(1.0009, z, q, true));
    const auto direct = detail::bessel_k_direct(kind, args(1.0009, z, q, true), SeriesPolicy{});
    CHECK(rel(inside.value, direct.value) < 1e-8);
    // The integer-order value is the limit of the direct formula.
    const auto below = bessel_k(kind, args(0.99, z, q, true));
    const auto above = bessel_k(kind, args(1.01, z, q, true));
    CHECK(rel(k1.value, 0.5 * (below.value + above.value)) < 1e-3);
    // K is even in nu.
    CHECK(rel(bessel_k(kind, args(-0.7, z, q, true)).value, bessel_k(kind, args(0.7, z, q, true)).value) < 1e-12);
  }
}

TEST_CASE("difference equation residuals") {
  for (const auto kind : kAllKinds) {
    const QBase<double> b(0.55);
    for (double nu : {0.3, 1.7}) {
      auto fi = [&](C x) { return bessel_i(kind, BesselArgs<double>{C(nu), x, b, true}).value; };
      auto fk = [&](C x) { return bessel_k(kind, BesselArgs<double>{C(nu), x, b, true}).value; };
      for (double z : {0.5, 1.5}) {
        CHECK(std::abs(difference_residual<double>(kind, fi, C(nu), C(z), b)) < 1e-12 * std::abs(fi(C(z / 0.55))));
        CHECK(std::abs(difference_residual<double>(kind, fk, C(nu), C(z), b)) < 1e-11 * std::abs(fk(C(z * 0.55))));
      }
    }
  }
}

TEST_CASE("q-Wronskian of I and K") {
  const QBase<double> b(0.5);
  for (const auto kind : kAllKinds) {
    const double nu = 0.7;
    auto fi = [&](C x) { return bessel_i(kind, BesselArgs<double>{C(nu), x, b, true}).value; };
    auto fk = [&](C x) { return bessel_k(kind, BesselArgs<double>{C(nu), x, b, true}).value; };
    CHECK(std::abs(q_wronskian<double>(fi, fi, C(1.3), b)) == 0.0);
    for (double z : {0.4, 1.0, 1.8}) {
      const C w = q_wronskian<double>(fi, fk, C(z), b);
      const C exact = wronskian_ik_closed_form<double>(kind, C(nu), C(z), b, WronskianConstant::exact);
      CHECK(rel(w, exact) < 1e-10);
      // The commonly quoted constant q^{-nu}(1-q^2)/2 differs by q^{nu - nu^2}.
      const C tab = wronskian_ik_closed_form<double>(kind, C(nu), C(z), b, WronskianConstant::tabulated);
      CHECK(std::abs(std::real(w / tab) - std::pow(0.5, nu - nu * nu)) < 1e-10);
    }
  }
  auto fi3 = [&](C x) { return bessel_i(FunctionKind(3), BesselArgs<double>{C(1.5), x, b}).value; };
  auto fk3 = [&](C x) { return bessel_k(FunctionKind(3), BesselArgs<double>{C(1.5), x, b}).value; };
  CHECK(rel(q_wronskian<double>(fi3, fk3, C(0.4), b), q_wronskian<double>(fi3, fk3, C(2.2), b)) < 1e-11);
}
