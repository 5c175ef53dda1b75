#pragma once

#include <iosfwd>
#include <vector>

#include "zlog/common.hpp"
#include "zlog/point_counts.hpp"

namespace zlog {

/// Coefficients c_0..c_R of a truncated real power series.
struct RealPowerSeries {
  std::vector<double> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator[](std::size_t i) const { return coeffs[i]; }
  double evaluate(double t) const;
  std::complex<double> evaluate(std::complex<double> t) const;
};

/// sum_{r>=1} log|N_r| t^r / r, the exponent of Z_log.
RealPowerSeries log_count_series(const CountSequence& counts, int R);
RealPowerSeries zlog_series(const CountSequence& counts, int R);

RealPowerSeries series_exp(const RealPowerSeries& s);
RealPowerSeries series_log(const RealPowerSeries& s);
RealPowerSeries series_mul(const RealPowerSeries& a, const RealPowerSeries& b);

struct RadiusEstimate {
  double radius = 0.0;
  double band = 0.0;      // half-width of the uncertainty band
  bool infinite = false;  // all-zero tail
};

/// Fits log|c_r| = A + B r + C sqrt(r) + D log r over the tail half and reports exp(-B);
/// the band is the spread of that estimate over the two quarter windows.
RadiusEstimate radius_estimate(const RealPowerSeries& s);

void write_series_csv(std::ostream& out, const RealPowerSeries& s);

}  // namespace zlog
