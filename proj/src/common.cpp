#include "zlog/common.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <regex>

namespace zlog {

namespace mp = boost::multiprecision;

double log_abs(const BigInt& x) {
  if (x == 0) throw ValidationError("log_abs: zero argument");
  BigInt a = mp::abs(x);
  const std::size_t bits = mp::msb(a) + 1;
  if (bits <= 1000) return std::log(a.convert_to<double>());
  const std::size_t shift = bits - 64;
  BigInt top = a >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double log_abs(const BigRational& x) {
  return log_abs(mp::numerator(x)) - log_abs(mp::denominator(x));
}

double to_double(const BigRational& x) {
  if (x == 0) return 0.0;
  const double mag = std::exp(log_abs(x));
  return x < 0 ? -mag : mag;
}

RationalFit nearest_rational(double x, std::int64_t max_den) {
  RationalFit best{static_cast<std::int64_t>(std::llround(x)), 1, 0.0};
  best.error = std::abs(x - static_cast<double>(best.num));
  for (std::int64_t d = 2; d <= max_den; ++d) {
    const auto n = static_cast<std::int64_t>(std::llround(x * static_cast<double>(d)));
    const double err = std::abs(x - static_cast<double>(n) / static_cast<double>(d));
    if (err < best.error - 1e-15) best = {n, d, err};
  }
  return best;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(cplx z) {
  std::string out = format_double(z.real());
  const double im = z.imag();
  if (std::signbit(im)) {
    out += "-" + format_double(-im) + "i";
  } else {
    out += "+" + format_double(im) + "i";
  }
  return out;
}

cplx parse_complex(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) throw ValidationError("empty complex literal");

  static const std::string num = R"(([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))";
  static const std::regex full("^([-+]?" + num + ")([-+])(" + num + ")?[ij]$");
  static const std::regex pure_im("^([-+]?)" + num + "?[ij]$");
  static const std::regex pure_re("^[-+]?" + num + "$");
  std::smatch m;
  if (std::regex_match(text, m, full)) {
    const double re = std::stod(m[1].str());
    const double mag = m[4].matched ? std::stod(m[4].str()) : 1.0;
    return {re, m[3].str() == "-" ? -mag : mag};
  }
  if (std::regex_match(text, m, pure_im)) {
    const double mag = m[2].matched ? std::stod(m[2].str()) : 1.0;
    return {0.0, m[1].str() == "-" ? -mag : mag};
  }
  if (std::regex_match(text, pure_re)) return {std::stod(text), 0.0};
  throw ValidationError("cannot parse complex number '" + raw + "'");
}

}  // namespace zlog
