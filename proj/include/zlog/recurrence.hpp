#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "zlog/common.hpp"
#include "zlog/point_counts.hpp"

namespace zlog {

using HighFloat = boost::multiprecision::cpp_bin_float_100;

/// Normalized residual below which a recurrence counts as found. Double precision
/// cannot separate true recurrences from slowly converging ones, so fits run in
/// 100 decimal digits.
constexpr double kRecurrenceThreshold = 1e-100;

struct RecurrenceFit {
  int order = 0;
  std::vector<double> coeffs;  // a_{r+d} = sum_i coeffs[i-1] a_{r+d-i}
  double residual = 0.0;       // sum of squared errors / sum a_r^2
  bool exact = false;          // solved over the rationals
};

/// Least squares on the Hankel system of a_1..a_R.
RecurrenceFit fit_recurrence(const std::vector<HighFloat>& seq, int d, int R);
RecurrenceFit fit_recurrence(const std::vector<double>& seq, int d, int R);
/// Integer sequences take the exact rational path.
RecurrenceFit fit_recurrence(const std::vector<BigInt>& seq, int d, int R);

struct RecurrenceReport {
  std::string sequence_id;
  int R = 0;
  int d_max = 0;
  std::vector<RecurrenceFit> fits;
  bool found = false;
  int found_order = 0;
};

/// log N_r for r = 1..R in 100-digit precision.
std::vector<HighFloat> log_counts(const CountSequence& counts, int R);

RecurrenceReport falsify_report(const CountSequence& counts, int d_max, int R, const std::string& id = "");

std::string verdict_text(const RecurrenceReport& rep);

}  // namespace zlog
