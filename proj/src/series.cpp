#include "zlog/series.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <ostream>

namespace zlog {

double RealPowerSeries::evaluate(double t) const {
  double v = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
  return v;
}

std::complex<double> RealPowerSeries::evaluate(std::complex<double> t) const {
  std::complex<double> v = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
  return v;
}

RealPowerSeries log_count_series(const CountSequence& counts, int R) {
  if (R < 0) throw ValidationError("series order must be >= 0");
  if (static_cast<int>(counts.size()) < R)
    throw ValidationError("need " + std::to_string(R) + " counts, have " + std::to_string(counts.size()));
  RealPowerSeries s;
  s.coeffs.assign(static_cast<std::size_t>(R) + 1, 0.0);
  for (int r = 1; r <= R; ++r) {
    const BigRational& n = counts.at(r);
    if (n < 1)
      throw ValidationError("N_" + std::to_string(r) + " < 1: Z_log is undefined for this sequence");
    s.coeffs[static_cast<std::size_t>(r)] = log_abs(n) / r;
  }
  return s;
}

RealPowerSeries zlog_series(const CountSequence& counts, int R) {
  return series_exp(log_count_series(counts, R));
}

RealPowerSeries series_exp(const RealPowerSeries& s) {
  if (s.coeffs.empty()) return {{1.0}};
  if (s.coeffs[0] != 0.0) throw ValidationError("series_exp: constant term must be 0");
  const std::size_t R = s.coeffs.size() - 1;
  RealPowerSeries b;
  b.coeffs.assign(R + 1, 0.0);
  b.coeffs[0] = 1.0;
  for (std::size_t n = 1; n <= R; ++n) {
    long double acc = 0;
    for (std::size_t k = 1; k <= n; ++k)
      acc += static_cast<long double>(k) * s.coeffs[k] * b.coeffs[n - k];
    b.coeffs[n] = static_cast<double>(acc / static_cast<long double>(n));
  }
  return b;
}

RealPowerSeries series_log(const RealPowerSeries& s) {
  if (s.coeffs.empty() || !(s.coeffs[0] > 0.0)) throw ValidationError("series_log: constant term must be positive");
  const std::size_t R = s.coeffs.size() - 1;
  const double s0 = s.coeffs[0];
  RealPowerSeries a;
  a.coeffs.assign(R + 1, 0.0);
  a.coeffs[0] = std::log(s0);
  for (std::size_t n = 1; n <= R; ++n) {
    long double acc = 0;
    for (std::size_t k = 1; k < n; ++k)
      acc += static_cast<long double>(k) * a.coeffs[k] * s.coeffs[n - k];
    a.coeffs[n] = static_cast<double>((s.coeffs[n] - acc / static_cast<long double>(n)) / s0);
  }
  return a;
}

RealPowerSeries series_mul(const RealPowerSeries& a, const RealPowerSeries& b) {
  const std::size_t R = std::min(a.coeffs.size(), b.coeffs.size());
  RealPowerSeries c;
  c.coeffs.assign(R, 0.0);
  for (std::size_t n = 0; n < R; ++n) {
    long double acc = 0;
    for (std::size_t k = 0; k <= n; ++k) acc += static_cast<long double>(a.coeffs[k]) * b.coeffs[n - k];
    c.coeffs[n] = static_cast<double>(acc);
  }
  return c;
}

namespace {

// exp(-B) from the least-squares fit on r in [lo, hi]; NaN if too few nonzero points
double fitted_radius(const RealPowerSeries& s, int lo, int hi) {
  std::vector<int> rs;
  for (int r = lo; r <= hi; ++r)
    if (s.coeffs[static_cast<std::size_t>(r)] != 0.0) rs.push_back(r);
  if (rs.size() < 8) return NAN;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rs.size()), 4);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rs.size()));
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double r = rs[i];
    const auto row = static_cast<Eigen::Index>(i);
    A(row, 0) = 1.0;
    A(row, 1) = r;
    A(row, 2) = std::sqrt(r);
    A(row, 3) = std::log(r);
    y(row) = std::log(std::abs(s.coeffs[static_cast<std::size_t>(rs[i])]));
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(y);
  return std::exp(-x(1));
}

}  // namespace

RadiusEstimate radius_estimate(const RealPowerSeries& s) {
  const int R = s.order();
  if (R < 32) throw ValidationError("radius_estimate: need R >= 32");
  RadiusEstimate est;
  bool any = false;
  for (int r = R / 2; r <= R; ++r) any = any || s.coeffs[static_cast<std::size_t>(r)] != 0.0;
  if (!any) {
    est.infinite = true;
    est.radius = INFINITY;
    return est;
  }
  est.radius = fitted_radius(s, R / 2, R);
  const double a = fitted_radius(s, R / 2, (3 * R) / 4);
  const double b = fitted_radius(s, (3 * R) / 4, R);
  est.band = 0;
  for (double v : {a, b})
    if (std::isfinite(v)) est.band = std::max(est.band, std::abs(v - est.radius));
  return est;
}

void write_series_csv(std::ostream& out, const RealPowerSeries& s) {
  out << "index,coefficient\n";
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) out << i << ',' << format_double(s.coeffs[i]) << '\n';
}

}  // namespace zlog
