#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zlog {

using cplx = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Bad input: violated precondition, malformed config, unknown family.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not meet its accuracy or clearance contract.
/// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by residue probing when the singularity is not a simple pole.
class OrderMismatch : public NumericError {
 public:
  OrderMismatch(int order, const std::string& what) : NumericError(what), order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

// log|x| for arbitrarily large integers and rationals. x must be nonzero.
double log_abs(const BigInt& x);
double log_abs(const BigRational& x);

double to_double(const BigRational& x);

/// Nearest fraction n/d with 1 <= d <= max_den, by exhaustive denominator scan.
struct RationalFit {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double error = 0.0;
};
RationalFit nearest_rational(double x, std::int64_t max_den);

/// "a+bi" style formatting and parsing used by the CLI and the reports.
std::string format_complex(cplx z);
cplx parse_complex(const std::string& text);

/// Fixed 17-significant-digit rendering, locale independent.
std::string format_double(double x);

}  // namespace zlog
