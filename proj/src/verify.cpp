#include "qbmf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

#include "qbmf/double_integral.hpp"
#include "qbmf/format.hpp"
#include "qbmf/qbessel.hpp"
#include "qbmf/qbinomial.hpp"
#include "qbmf/qseries.hpp"
#include "qbmf/quadrature.hpp"
#include "qbmf/types.hpp"

namespace qbmf::verify {
namespace {

using C = std::complex<double>;
using Base = QBase<double>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Params {
 public:
  Params& add(const char* key, double v) {
    if (!text_.empty()) text_ += ' ';
    text_ += key;
    text_ += '=';
    text_ += format_significant(v, 6);
    return *this;
  }
  Params& add(const char* key, const std::string& v) {
    if (!text_.empty()) text_ += ' ';
    text_ += key;
    text_ += '=';
    text_ += v;
    return *this;
  }
  operator std::string() const { return text_; }

 private:
  std::string text_;
};

double rel_diff(C a, C b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

class Suite {
 public:
  Suite(VerifyReport& report, const VerifyOptions& options, std::string name)
      : report_(report), options_(options), name_(std::move(name)) {}

  /// Runs `measure`, which returns the residual and may fill the note.
  /// Exceptions become failed records carrying the error text.
  template <typename Measure>
  void check(const std::string& check_name, const std::string& tag, const std::string& params, int criterion,
             double tol, Measure&& measure) {
    CheckRecord r;
    r.suite = name_;
    r.name = check_name;
    r.tag = tag;
    r.params = params;
    r.criterion = criterion;
    r.tol = options_.tol.value_or(tol);
    r.residual = kNaN;
    try {
      r.residual = measure(r.note);
    } catch (const std::exception& e) {
      r.note = e.what();
    }
    r.pass = r.residual <= r.tol;
    report_.records.push_back(std::move(r));
  }

  std::vector<double> q_grid(std::vector<double> fallback) const {
    if (options_.q) return {*options_.q};
    return fallback;
  }
  double q_or(double fallback) const { return options_.q.value_or(fallback); }
  std::uint32_t seed() const { return options_.seed; }

 private:
  VerifyReport& report_;
  const VerifyOptions& options_;
  std::string name_;
};

BesselArgs<double> args(C nu, C z, double q, bool continuation = true) {
  return BesselArgs<double>{nu, z, Base(q), continuation};
}

// ---------------------------------------------------------------------------

void difference_equations(VerifyReport& report, const VerifyOptions& options) {
  Suite suite(report, options, "difference-equations");
  const double tol = 1e-10;
  for (const auto kind : kAllKinds) {
    for (double q : suite.q_grid({0.3, 0.5, 0.7, 0.9})) {
      const Base b(q);
      for (double nu : {0.25, 0.7, 1.5, 2.5}) {
        for (double z : {0.4, 1.0, 1.8}) {
          const std::string params = Params().add("j", kind.index()).add("q", q).add("nu", nu).add("z", z);
          struct Fn {
            const char* name;
            std::function<C(C)> f;
            double order;
          };
          const std::vector<Fn> fns{
              {"I_nu", [&](C x) { return bessel_i(kind, args(nu, x, q)).value; }, nu},
              {"I_-nu", [&](C x) { return bessel_i(kind, args(-nu, x, q)).value; }, nu},
              {"K_nu", [&](C x) { return bessel_k(kind, args(nu, x, q)).value; }, nu},
          };
          for (const auto& fn : fns) {
            suite.check(std::string("residual ") + fn.name, "difference-equation", params, 1, tol,
                        [&](std::string&) {
                          const C zc(z);
                          const double scale = std::max({std::abs(fn.f(zc / q)), std::abs(fn.f(zc)),
                                                         std::abs(fn.f(q * zc))});
                          const C res = difference_residual<double>(kind, fn.f, C(fn.order), zc, b);
                          return std::abs(res) / scale;
                        });
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------

void wronskian(VerifyReport& report, const VerifyOptions& options) {
  Suite suite(report, options, "wronskian");
  for (const auto kind : kAllKinds) {
    for (double q : suite.q_grid({0.3, 0.5, 0.7, 0.9})) {
      const Base b(q);
      for (double nu : {0.25, 0.7, 1.5, 2.5}) {
        auto fi = [&](C x) { return bessel_i(kind, args(nu, x, q)).value; };
        auto fk = [&](C x) { return bessel_k(kind, args(nu, x, q)).value; };
        std::vector<C> values;
        for (double z : {0.4, 1.0, 1.8}) {
          const std::string params = Params().add("j", kind.index()).add("q", q).add("nu", nu).add("z", z);
          C w = kNaN;
          suite.check("W(I,K) vs closed form", "wronskian-table", params, 2, 1e-9, [&](std::string& note) {
            w = q_wronskian<double>(fi, fk, C(z), b);
            const C table = wronskian_ik_closed_form<double>(kind, nu, C(z), b, WronskianConstant::tabulated);
            note = "W/table = " + format_significant(std::real(w / table), 10);
            return rel_diff(w, table);
          });
          values.push_back(w);
          suite.check("W(I,K) vs closed form, constant q^{-nu^2}(1-q^2)/2", "wronskian-exact-constant", params, 0,
                      1e-9, [&](std::string&) {
                        return rel_diff(w, wronskian_ik_closed_form<double>(kind, nu, C(z), b,
                                                                            WronskianConstant::exact));
                      });
        }
        if (kind.delta() == 1) {
          const std::string params = Params().add("j", kind.index()).add("q", q).add("nu", nu).add("z", "{0.4,1,1.8}");
          suite.check("W(I,K) independent of z", "wronskian-constant", params, 2, 1e-10, [&](std::string&) {
            double worst = 0;
            for (const C v : values) worst = std::max(worst, rel_diff(v, values.front()));
            return worst;
          });
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------

/// Fraction of points where halving the quadrature resolution moved the
/// result by more than its reported error. Points without a converged
/// result count as failures.
struct HonestyTally {
  int total = 0;
  int failed = 0;
  int unconverged = 0;

  void record(bool converged, double shift, double reported) {
    ++total;
    if (!converged) {
      ++failed;
      ++unconverged;
    } else if (!(shift <= reported)) {
      ++failed;
    }
  }
  void emit(Suite& suite, const std::string& what, const std::string& params) const {
    suite.check("halving resolution stays within error estimate: " + what, "error-estimate-honesty", params, 10, 0.05,
                [&](std::string& note) {
                  note = std::to_string(total - failed) + "/" + std::to_string(total) + " points honest";
                  if (unconverged > 0) note += ", " + std::to_string(unconverged) + " without a converged value";
                  return total == 0 ? kNaN : double(failed) / double(total);
                });
  }
};

QuadraturePolicy halved_policy() {
  QuadraturePolicy p;
  p.nodes_per_band = 16;
  return p;
}

void moments(VerifyReport& report, const VerifyOptions& options) {
  Suite suite(report, options, "moments");
  HonestyTally honesty;
  for (const auto kind : kAllKinds) {
    for (double q : suite.q_grid({0.3, 0.5, 0.7, 0.9})) {
      const Base b(q);
      for (double nu : {0.25, 0.7, 1.5, 2.5}) {
        const std::string params = Params().add("j", kind.index()).add("q", q).add("nu", nu);
        bool converged = false;
        EvalResult<double> full;
        suite.check("moment integral vs closed form", "moment-identity", params, 3, 1e-10, [&](std::string& note) {
          full = moment_identity<double>(kind, C(nu), b);
          converged = true;
          note = "abs_err " + format_significant(full.abs_err, 3);
          return rel_diff(full.value, moment_closed_form<double>(kind, C(nu), b));
        });
        double shift = kNaN;
        if (converged) {
          try {
            shift = std::abs(moment_identity<double>(kind, C(nu), b, halved_policy()).value - full.value);
          } catch (const std::exception&) {
          }
        }
        honesty.record(converged, shift, full.abs_err);
      }
    }
  }
  honesty.emit(suite, "moment integral", Params().add("nodes_per_band", "32 vs 16"));
}

// ---------------------------------------------------------------------------

void representations(VerifyReport& report, const VerifyOptions& options) {
  Suite suite(report, options, "representations");

  // Single integral against the series K.
  HonestyTally single_honesty;
  for (const auto kind : kAllKinds) {
    const double tol = kind.index() == 1 ? 1e-6 : 1e-8;
    for (double q : suite.q_grid({0.3, 0.5, 0.7})) {
      const Base b(q);
      for (double nu : {0.25, 0.5, 1.5, 2.5}) {
        for (double z : {0.5, 1.0, 2.0}) {
          const std::string params = Params().add("j", kind.index()).add("q", q).add("nu", nu).add("z", z);
          bool converged = false;
          EvalResult<double> full;
          suite.check("single integral vs series K", "single-integral", params, 4, tol, [&](std::string& note) {
            const C series = bessel_k(kind, args(nu, z, q)).value;
            try {
              full = k_integral_single<double>(kind, C(nu), C(z), b);
            } catch (const convergence_error& e) {
              note = std::string(e.what()) + " (partial value " + format_significant(e.partial_value().real(), 8) +
                     ", series " + format_significant(series.real(), 8) + ")";
              return kNaN;
            }
            converged = true;
            note = "abs_err " + format_significant(full.abs_err, 3);
            return rel_diff(full.value, series);
          });
          double shift = kNaN;
          if (converged) {
            try {
              shift = std::abs(k_integral_single<double>(kind, C(nu), C(z), b, halved_policy()).value - full.value);
            } catch (const std::exception&) {
            }
          }
          single_honesty.record(converged, shift, full.abs_err);
        }
      }
    }
  }
  single_honesty.emit(suite, "single integral", Params().add("nodes_per_band", "32 vs 16"));

  // Angular integral of a xi pair against J_0. Radius-limited pairs are
  // checked where their series converge; beyond that J_0 is their
  // continuation by definition.
  for (const auto kind : kAllKinds) {
    const double tol = kind.index() == 1 ? 1e-8 : 1e-9;
    for (double q : suite.q_grid({0.3, 0.5, 0.8})) {
      const Base b(q);
      for (double rr : {0.1, 0.5, 1.0, 2.0}) {
        for (const EtaMode mode : {EtaMode::half_half, EtaMode::zero_one}) {
          const bool limited = mode == EtaMode::zero_one || kind.delta() == 2;
          const double edge = kind.index() == 1 ? 0.9 : 1.0;
          if (limited && rr * (1 - b.p()) >= edge) continue;
          const std::string params = Params()
                                         .add("j", kind.index())
                                         .add("q", q)
                                         .add("r_rho", rr)
                                         .add("mode", mode == EtaMode::half_half ? "half-half" : "zero-one");
          C at_zero = kNaN;
          suite.check("angular integral vs J_0 series", "angular-j0", params, 5, tol, [&](std::string& note) {
            const auto a = angular_j0_adaptive<double>(kind, rr, 0.0, mode, b, 64, 1e-15, 1 << 17);
            at_zero = a.value;
            note = std::to_string(a.terms_or_nodes) + " xi terms";
            const C j0 = bessel_j_scaled(kind, args(0.0, 2 * rr, q, false)).value;
            return std::abs(a.value - j0) / std::max(1.0, std::abs(j0));
          });
          suite.check("angular integral independent of psi", "angular-psi", params + " psi=0,1.1", 5, 1e-13,
                      [&](std::string&) {
                        const auto a = angular_j0_adaptive<double>(kind, rr, 1.1, mode, b, 64, 1e-15, 1 << 17);
                        return std::abs(a.value - at_zero) / std::max(1.0, std::abs(at_zero));
                      });
        }
      }
    }
  }

  // Double integral against the series K at argument 2|z|.
  HonestyTally double_honesty;
  for (const auto kind : {FunctionKind(2), FunctionKind(3), FunctionKind(1)}) {
    const int criterion = kind.index() == 1 ? 0 : 6;
    for (double q : suite.q_grid({0.5, 0.7})) {
      const Base b(q);
      for (double nu : {0.5, 1.5}) {
        for (double r : {0.4, 0.8}) {
          const C series = [&] {
            try {
              return bessel_k(kind, args(nu, 2 * r, q)).value;
            } catch (const std::exception&) {
              return C(kNaN);
            }
          }();
          std::map<DoubleForm, C> values;
          const std::vector<DoubleForm> forms =
              kind.index() == 1 ? std::vector{DoubleForm::half_half}
                                : std::vector{DoubleForm::exp_xi1, DoubleForm::half_half};
          for (const DoubleForm form : forms) {
            const char* form_name = form == DoubleForm::exp_xi1 ? "e-xi1" : "half-half";
            const std::string params =
                Params().add("j", kind.index()).add("q", q).add("nu", nu).add("|z|", r).add("form", form_name);
            bool converged = false;
            EvalResult<double> full;
            suite.check("double integral vs series K(2|z|)", "double-integral", params, criterion, 1e-6,
                        [&](std::string& note) {
                          try {
                            full = k_integral_double<double>(kind, C(nu), C(r), b, {}, 128, form);
                          } catch (const convergence_error& e) {
                            note = std::string(e.what()) + " (partial value " +
                                   format_significant(e.partial_value().real(), 8) + ", series " +
                                   format_significant(series.real(), 8) + ")";
                            return kNaN;
                          }
                          converged = true;
                          values[form] = full.value;
                          note = "abs_err " + format_significant(full.abs_err, 3);
                          return rel_diff(full.value, series);
                        });
            if (criterion == 6) {
              double shift = kNaN;
              if (converged) {
                try {
                  shift = std::abs(k_integral_double<double>(kind, C(nu), C(r), b, halved_policy(), 128, form).value -
                                   full.value);
                } catch (const std::exception&) {
                }
              }
              double_honesty.record(converged, shift, full.abs_err);
            }
          }
          if (forms.size() == 2) {
            const std::string params = Params().add("j", kind.index()).add("q", q).add("nu", nu).add("|z|", r);
            suite.check("double integral forms agree", "double-integral-forms", params, 6, 1e-6, [&](std::string& note) {
              if (values.size() < 2) {
                note = "a form did not converge";
                return kNaN;
              }
              return rel_diff(values[DoubleForm::exp_xi1], values[DoubleForm::half_half]);
            });
          }
        }
      }
    }
  }
  double_honesty.emit(suite, "double integral", Params().add("nodes_per_band", "32 vs 16"));
}

// ---------------------------------------------------------------------------

void limits(VerifyReport& report, const VerifyOptions& options) {
  Suite suite(report, options, "limits");
  const double q_near = 0.99;
  const double q_nearer = 0.999;
  for (const auto& [nu, z] : {std::pair{0.5, 1.3}, std::pair{1.5, 0.8}}) {
    for (const auto kind : kAllKinds) {
      const std::string params = Params().add("j", kind.index()).add("nu", nu).add("z", z).add("q", "0.99,0.999");
      suite.check("I approaches classical I (deviation ratio)", "classical-limit-i", params, 7, 0.2,
                  [&](std::string& note) {
                    const double classical = std::cyl_bessel_i(nu, z);
                    const double d1 = std::abs(bessel_i(kind, args(nu, z, q_near)).value - classical);
                    const double d2 = std::abs(bessel_i(kind, args(nu, z, q_nearer)).value - classical);
                    note = "deviations " + format_significant(d1, 3) + ", " + format_significant(d2, 3);
                    return d2 / d1;
                  });
      suite.check("K approaches classical K (deviation ratio)", "classical-limit-k", params, 7, 0.2,
                  [&](std::string& note) {
                    const double classical = std::cyl_bessel_k(nu, z);
                    const double d1 = std::abs(bessel_k(kind, args(nu, z, q_near)).value - classical);
                    const double d2 = std::abs(bessel_k(kind, args(nu, z, q_nearer)).value - classical);
                    note = "deviations " + format_significant(d1, 3) + ", " + format_significant(d2, 3);
                    return d2 / d1;
                  });
    }
    // A_nu is identically 1, so its deviation is rounding at both q.
    const std::string params = Params().add("nu", nu).add("q", "0.99,0.999");
    suite.check("A_nu equals 1 at both q", "classical-limit-a", params, 7, 1e-12, [&](std::string& note) {
      const double d1 = std::abs(a_nu<double>(C(nu), Base(q_near)) - 1.0);
      const double d2 = std::abs(a_nu<double>(C(nu), Base(q_nearer)) - 1.0);
      note = "deviations " + format_significant(d1, 3) + ", " + format_significant(d2, 3);
      return std::max(d1, d2);
    });
  }
}

// ---------------------------------------------------------------------------

void lemmas(VerifyReport& report, const VerifyOptions& options) {
  Suite suite(report, options, "lemmas");
  const double q = suite.q_or(0.5);
  const Base b(q);
  const std::vector<double> eps{1e-2, 1e-3, 1e-4};

  // Shrinking-interval limit. Constant F is exact; otherwise the error must
  // fall by at least 10^1.8 per decade of eps (second order).
  suite.check("shrink limit of F = 1", "shrink-limit", Params().add("q", q).add("F", "1"), 8, 1e-13,
              [&](std::string&) {
                double worst = 0;
                for (double v : shrink_limit<double>([](double) { return 1.0; }, b, eps)) {
                  worst = std::max(worst, std::abs(v + b.log_q()));
                }
                return worst;
              });
  const double order_tol = std::pow(10.0, -1.8);
  for (const auto& [name, fn] : std::vector<std::pair<std::string, std::function<double(double)>>>{
           {"cos", [](double x) { return std::cos(x); }}, {"exp", [](double x) { return std::exp(x); }}}) {
    suite.check("shrink limit of F = " + name + " is second order", "shrink-limit",
                Params().add("q", q).add("F", name).add("eps", "1e-2,1e-3,1e-4"), 8, order_tol,
                [&](std::string& note) {
                  const auto v = shrink_limit<double>(fn, b, eps);
                  std::vector<double> err;
                  for (double x : v) err.push_back(std::abs(x + fn(0.0) * b.log_q()));
                  note = "errors " + format_significant(err[0], 3) + ", " + format_significant(err[1], 3) + ", " +
                         format_significant(err[2], 3) + "; observed order " +
                         format_significant(std::log10(err[1] / err[2]), 3);
                  return std::max(err[1] / err[0], err[2] / err[1]);
                });
  }

  // q-integration by parts.
  struct Pair {
    const char* name;
    std::function<double(double)> f, g;
  };
  const std::vector<Pair> pairs{
      {"f=exp(-x) g=exp(-x)", [](double x) { return std::exp(-x); }, [](double x) { return std::exp(-x); }},
      {"f=x exp(-x) g=exp(-x)", [](double x) { return x * std::exp(-x); }, [](double x) { return std::exp(-x); }},
      {"f=1 g=exp(-x)", [](double) { return 1.0; }, [](double x) { return std::exp(-x); }},
  };
  for (const auto& pair : pairs) {
    suite.check("q-integration by parts residual", "q-parts", Params().add("q", q).add("pair", pair.name), 8, 1e-10,
                [&](std::string&) { return std::abs(q_parts_residual<double>(pair.f, pair.g, b)); });
  }

  // q-derivative relations between J_0 and J_1 on random draws, with the
  // operator 2 d/(1+q) and d the base-q Jackson derivative.
  std::mt19937 rng(suite.seed());
  std::uniform_real_distribution<double> uq(0.2, 0.9), ux(0.2, 1.2);
  std::uniform_int_distribution<int> uj(1, 3);
  struct Draw {
    FunctionKind kind;
    double q, z, s;
  };
  std::vector<Draw> draws;
  for (int i = 0; i < 20; ++i) draws.push_back({FunctionKind(uj(rng)), uq(rng), ux(rng), ux(rng)});

  auto j = [](FunctionKind kind, double order, double x, double q) {
    return bessel_j_scaled(kind, args(order, x, q)).value;
  };
  auto jackson = [](const std::function<C(double)>& f, double x, double q) {
    return (f(x) - f(q * x)) / ((1 - q) * x);
  };
  using Relation = std::function<std::pair<C, C>(const Draw&)>;
  auto relation_check = [&](const std::string& name, const std::string& tag, int criterion, const Relation& rel) {
    suite.check(name, tag, Params().add("draws", 20.0).add("seed", double(suite.seed())), criterion, 1e-11,
                [&](std::string& note) {
                  double worst = 0;
                  C ratio = 1;
                  for (const auto& d : draws) {
                    const auto [lhs, rhs] = rel(d);
                    const double r = rel_diff(lhs, rhs);
                    if (r >= worst) {
                      worst = r;
                      ratio = lhs / rhs;
                    }
                  }
                  note = "worst lhs/rhs " + format_significant(ratio.real(), 8);
                  return worst;
                });
  };
  auto half = [](const Draw& d) { return 0.5 * d.kind.delta(); };

  relation_check("d_z J0(q^-1 z s) = -q^{1-delta/2} s J1(q^{-delta/2} z s)", "q-derivative-first", 8,
                 [&](const Draw& d) {
                   const double q = d.q;
                   const C lhs = 2 / (1 + q) * jackson([&](double x) { return j(d.kind, 0, x * d.s / q, q); }, d.z, q);
                   const C rhs = -std::pow(q, 1 - half(d)) * d.s * j(d.kind, 1, std::pow(q, -half(d)) * d.z * d.s, q);
                   return std::pair{lhs, rhs};
                 });
  relation_check("d_z J0(z s) = -q^{1-delta/2} s J1(q^{1-delta/2} z s)", "q-derivative-second", 8,
                 [&](const Draw& d) {
                   const double q = d.q;
                   const C lhs = 2 / (1 + q) * jackson([&](double x) { return j(d.kind, 0, x * d.s, q); }, d.z, q);
                   const C rhs =
                       -std::pow(q, 1 - half(d)) * d.s * j(d.kind, 1, std::pow(q, 1 - half(d)) * d.z * d.s, q);
                   return std::pair{lhs, rhs};
                 });
  relation_check("d_s[s J1(q^{1-delta/2} z s)] = q^{-delta/2} z s J0(q^{1-delta} z s)", "q-derivative-third", 8,
                 [&](const Draw& d) {
                   const double q = d.q;
                   const double a = std::pow(q, 1 - half(d));
                   const C lhs =
                       2 / (1 + q) * jackson([&](double x) { return x * j(d.kind, 1, a * d.z * x, q); }, d.s, q);
                   const C rhs = std::pow(q, -half(d)) * d.z * d.s *
                                 j(d.kind, 0, std::pow(q, 1 - d.kind.delta()) * d.z * d.s, q);
                   return std::pair{lhs, rhs};
                 });
  relation_check("corrected: d_z J0(q^-1 z s) = -q^{-delta/2} s J1(q^{-delta/2} z s)", "q-derivative-first-corrected",
                 0, [&](const Draw& d) {
                   const double q = d.q;
                   const C lhs = 2 / (1 + q) * jackson([&](double x) { return j(d.kind, 0, x * d.s / q, q); }, d.z, q);
                   const C rhs = -std::pow(q, -half(d)) * d.s * j(d.kind, 1, std::pow(q, -half(d)) * d.z * d.s, q);
                   return std::pair{lhs, rhs};
                 });
  relation_check("corrected: d_s[s J1(q^{1-delta/2} z s)] = q^{1-delta/2} z s J0(q^{2-delta} z s)",
                 "q-derivative-third-corrected", 0, [&](const Draw& d) {
                   const double q = d.q;
                   const double a = std::pow(q, 1 - half(d));
                   const C lhs =
                       2 / (1 + q) * jackson([&](double x) { return x * j(d.kind, 1, a * d.z * x, q); }, d.s, q);
                   const C rhs = a * d.z * d.s * j(d.kind, 0, std::pow(q, 2 - d.kind.delta()) * d.z * d.s, q);
                   return std::pair{lhs, rhs};
                 });
}

// ---------------------------------------------------------------------------

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  return v;
}

void binomial(VerifyReport& report, const VerifyOptions& options) {
  Suite suite(report, options, "binomial");
  const double beta = 0.25;
  for (double gap : linspace(0.2, 3.0, 5)) {
    for (double q : suite.q_grid(linspace(0.2, 0.9, 5))) {
      const Base b(q);
      for (double z : geomspace(0.1, 10.0, 5)) {
        const std::string params = Params().add("alpha-beta", gap).add("beta", beta).add("q", q).add("z", z);
        // Both sides in extended precision: for integer alpha - beta the
        // expansion terminates with terms up to 1e5 times the result.
        suite.check("partial fractions vs product ratio", "partial-fraction-ratio", params, 9, 1e-11,
                    [&](std::string&) {
                      using L = long double;
                      const QBase<L> bl(q);
                      const auto lhs = partial_fraction_ratio<L>(L(beta + gap), L(beta), Complex<L>(z), bl).value;
                      const auto rhs = weight_ratio_direct<L>(L(beta + gap), L(beta), Complex<L>(z), bl).value;
                      return double(std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
                    });
      }
    }
  }

  std::mt19937 rng(suite.seed() + 1);
  std::uniform_real_distribution<double> uq(0.2, 0.9), uab(-0.9, 0.9), ug(-1.0, 1.0), uz(0.2, 2.0);
  suite.check("R difference-equation residual / |R(z)|", "big-r-difference-equation",
              Params().add("draws", 50.0).add("seed", double(suite.seed() + 1)), 9, 1e-12, [&](std::string& note) {
                double worst = 0;
                int drawn = 0;
                while (drawn < 50) {
                  const double q = uq(rng);
                  const Base b(q);
                  RParams<double> r;
                  r.a = uab(rng);
                  r.b = uab(rng);
                  r.gamma = ug(rng);
                  const double z = uz(rng);
                  // Keep the denominator away from its zeros b z^2 = q^{-2m}.
                  const auto den = detail::infinite_product<double>(r.b * z * z, b.p());
                  const auto den_q = detail::infinite_product<double>(r.b * q * q * z * z, b.p());
                  if (den.min_factor < 1e-3 || den_q.min_factor < 1e-3) continue;
                  ++drawn;
                  const C res = big_r_residual<double>(r, C(z), b);
                  worst = std::max(worst, std::abs(res) / std::abs(big_r<double>(r, C(z), b).value));
                }
                note = "max over draws";
                return worst;
              });

  suite.check("limit ODE residual falls as q -> 1 (ratio 0.999 / 0.99)", "limit-ode",
              Params().add("eps", -1.0).add("alpha", 1.5).add("beta", 0.25).add("gamma", 0.3).add("z", 0.6), 0, 0.2,
              [&](std::string& note) {
                auto residual = [&](double q) {
                  const auto p = RParams<double>::from_exponents(1.5, 0.25, C(0.3), -1, Base(q));
                  return std::abs(ode_limit_residual<double>(p, C(0.6), Base(q)));
                };
                const double r1 = residual(0.99);
                const double r2 = residual(0.999);
                note = "residuals " + format_significant(r1, 3) + ", " + format_significant(r2, 3);
                return r2 / r1;
              });
}

using SuiteFn = void (*)(VerifyReport&, const VerifyOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"difference-equations", difference_equations},
      {"wronskian", wronskian},
      {"moments", moments},
      {"lemmas", lemmas},
      {"representations", representations},
      {"limits", limits},
      {"binomial", binomial},
  };
  return suites;
}

}  // namespace

std::size_t VerifyReport::passed() const {
  return std::size_t(std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; }));
}

std::size_t VerifyReport::failed() const { return records.size() - passed(); }

std::vector<std::string> VerifyReport::suites() const {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (std::find(out.begin(), out.end(), r.suite) == out.end()) out.push_back(r.suite);
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

VerifyReport run_suite(const std::string& name, const VerifyOptions& options) {
  VerifyReport report;
  bool found = false;
  for (const auto& [suite, fn] : registry()) {
    if (name == "all" || name == suite) {
      fn(report, options);
      found = true;
    }
  }
  if (!found) throw domain_error("unknown verification suite: " + name);
  return report;
}

void print_report(const VerifyReport& report, std::ostream& out) {
  for (const auto& r : report.records) {
    out << (r.pass ? "PASS" : "FAIL") << "  [" << r.suite << "] " << r.name << " {" << r.tag << "} " << r.params
        << "  residual=" << format_significant(r.residual, 3) << " tol=" << format_significant(r.tol, 3);
    if (r.criterion > 0) out << " criterion=" << r.criterion;
    if (!r.note.empty()) out << "  (" << r.note << ")";
    out << '\n';
  }
  out << '\n';
  for (const auto& suite : report.suites()) {
    std::size_t total = 0, pass = 0;
    for (const auto& r : report.records) {
      if (r.suite != suite) continue;
      ++total;
      pass += r.pass ? 1 : 0;
    }
    out << "suite " << suite << ": " << pass << "/" << total << " passed\n";
  }
  out << "total: " << report.passed() << " passed, " << report.failed() << " failed\n";
}

}  // namespace qbmf::verify
