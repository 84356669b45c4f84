#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qbmf {

template <typename Real>
using Complex = std::complex<Real>;

/// Base class of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of the requested representation
/// (convergence radius, hypothesis of an identity, invalid policy).
class domain_error : public error {
 public:
  using error::error;
};

/// Evaluation hit a pole of a meromorphic function.
class pole_error : public error {
 public:
  using error::error;
};

/// A normalising quantity vanished (e.g. the denominator of A_nu).
class degenerate_error : public error {
 public:
  using error::error;
};

/// A series or quadrature did not meet its stopping rule within budget.
/// Carries the partial value reached so callers can inspect it.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, std::complex<double> partial, double abs_err)
      : error(what), partial_(partial), abs_err_(abs_err) {}

  std::complex<double> partial_value() const { return partial_; }
  double partial_abs_err() const { return abs_err_; }

 private:
  std::complex<double> partial_;
  double abs_err_;
};

/// The deformation parameter q in (0, 1) together with the base p = q^2
/// used by the modified functions.
template <typename Real>
class QBase {
 public:
  explicit QBase(Real q) : q_(q), p_(q * q), log_q_(std::log(q)) {
    if (!(q > Real(0) && q < Real(1))) {
      throw domain_error("q must lie strictly inside (0, 1)");
    }
  }

  Real q() const { return q_; }
  Real p() const { return p_; }
  Real log_q() const { return log_q_; }

 private:
  Real q_;
  Real p_;
  Real log_q_;
};

/// Stopping rule shared by every series in the library.
struct SeriesPolicy {
  /// A term is "small" when |term| <= rel_tol * |partial sum|.
  double rel_tol = 1e-14;
  /// Number of successive small terms required before stopping.
  int consecutive_small = 3;
  int max_terms = 10000;

  void validate() const {
    if (!(rel_tol > 0.0)) throw domain_error("SeriesPolicy.rel_tol must be positive");
    if (max_terms < 1) throw domain_error("SeriesPolicy.max_terms must be at least 1");
    if (consecutive_small < 1) throw domain_error("SeriesPolicy.consecutive_small must be at least 1");
  }
};

enum class Warning {
  near_radius,
  slow_convergence,
  continuation,
  near_integer_order,
  pole_proximity,
  tail_extrapolated,
  cancellation,
};

inline std::string_view to_string(Warning w) {
  switch (w) {
    case Warning::near_radius: return "near-radius";
    case Warning::slow_convergence: return "slow-convergence";
    case Warning::continuation: return "continuation";
    case Warning::near_integer_order: return "near-integer-order";
    case Warning::pole_proximity: return "pole-proximity";
    case Warning::tail_extrapolated: return "tail-extrapolated";
    case Warning::cancellation: return "cancellation";
  }
  return "unknown";
}

template <typename Real>
struct EvalResult {
  Complex<Real> value{};
  Real abs_err = 0;
  /// Series terms or quadrature nodes consumed.
  long terms_or_nodes = 0;
  std::vector<Warning> warnings;

  bool has(Warning w) const {
    for (auto x : warnings) {
      if (x == w) return true;
    }
    return false;
  }

  void warn(Warning w) {
    if (!has(w)) warnings.push_back(w);
  }

  void merge_warnings(const EvalResult& other) {
    for (auto w : other.warnings) warn(w);
  }
};

template <typename Real>
constexpr Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

}  // namespace qbmf
