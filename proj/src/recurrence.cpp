#include "zlog/recurrence.hpp"

#include <cmath>

namespace zlog {

namespace {

void check_shape(std::size_t n, int d, int R) {
  if (d < 1) throw ValidationError("recurrence order must be >= 1");
  if (R < 2 * d + 8) throw ValidationError("fit_recurrence needs R >= 2d + 8");
  if (n < static_cast<std::size_t>(R))
    throw ValidationError("sequence has " + std::to_string(n) + " terms, horizon is " + std::to_string(R));
}

// Householder QR least squares; returns the coefficient vector and sum of squared residuals
std::vector<HighFloat> householder_ls(std::vector<std::vector<HighFloat>> A, std::vector<HighFloat> y,
                                      HighFloat* ssr) {
  const std::size_t m = A.size(), n = A[0].size();
  std::vector<HighFloat> diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    HighFloat norm = 0;
    for (std::size_t i = k; i < m; ++i) norm += A[i][k] * A[i][k];
    norm = sqrt(norm);
    if (norm == 0) throw NumericError("rank-deficient recurrence system");
    const HighFloat alpha = A[k][k] > 0 ? HighFloat(-norm) : norm;
    std::vector<HighFloat> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = A[i][k];
    v[0] -= alpha;
    HighFloat vn = 0;
    for (const auto& x : v) vn += x * x;
    if (vn == 0) {
      diag[k] = alpha;
      continue;
    }
    for (std::size_t j = k; j < n; ++j) {
      HighFloat dot = 0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * A[i][j];
      const HighFloat f = 2 * dot / vn;
      for (std::size_t i = k; i < m; ++i) A[i][j] -= f * v[i - k];
    }
    HighFloat dot = 0;
    for (std::size_t i = k; i < m; ++i) dot += v[i - k] * y[i];
    const HighFloat f = 2 * dot / vn;
    for (std::size_t i = k; i < m; ++i) y[i] -= f * v[i - k];
    diag[k] = A[k][k];
  }
  std::vector<HighFloat> x(n);
  for (std::size_t k = n; k-- > 0;) {
    HighFloat s = y[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
    if (abs(A[k][k]) < HighFloat("1e-90") * abs(A[0][0])) throw NumericError("rank-deficient recurrence system");
    x[k] = s / A[k][k];
  }
  HighFloat r = 0;
  for (std::size_t i = n; i < m; ++i) r += y[i] * y[i];
  *ssr = r;
  return x;
}

// exact normal equations; false when singular
bool exact_ls(const std::vector<BigInt>& seq, int d, int R, std::vector<BigRational>* coeffs, BigRational* ssr) {
  const int m = R - d;
  std::vector<std::vector<BigRational>> G(d, std::vector<BigRational>(d + 1, BigRational(0)));
  for (int r = 0; r < m; ++r)
    for (int i = 0; i < d; ++i) {
      const BigInt& ai = seq[static_cast<std::size_t>(r + d - 1 - i)];
      for (int j = 0; j < d; ++j) G[i][j] += BigRational(ai * seq[static_cast<std::size_t>(r + d - 1 - j)]);
      G[i][d] += BigRational(ai * seq[static_cast<std::size_t>(r + d)]);
    }
  for (int c = 0; c < d; ++c) {
    int piv = -1;
    for (int r = c; r < d; ++r)
      if (G[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return false;
    std::swap(G[c], G[piv]);
    for (int r = 0; r < d; ++r) {
      if (r == c || G[r][c] == 0) continue;
      const BigRational f = G[r][c] / G[c][c];
      for (int k = c; k <= d; ++k) G[r][k] -= f * G[c][k];
    }
  }
  coeffs->assign(static_cast<std::size_t>(d), BigRational(0));
  for (int i = 0; i < d; ++i) (*coeffs)[static_cast<std::size_t>(i)] = G[i][d] / G[i][i];
  *ssr = 0;
  for (int r = 0; r < m; ++r) {
    BigRational e = seq[static_cast<std::size_t>(r + d)];
    for (int i = 0; i < d; ++i) e -= (*coeffs)[static_cast<std::size_t>(i)] * seq[static_cast<std::size_t>(r + d - 1 - i)];
    *ssr += e * e;
  }
  return true;
}

}  // namespace

RecurrenceFit fit_recurrence(const std::vector<HighFloat>& seq, int d, int R) {
  check_shape(seq.size(), d, R);
  HighFloat norm = 0;
  for (int r = 0; r < R; ++r) norm += seq[static_cast<std::size_t>(r)] * seq[static_cast<std::size_t>(r)];
  if (norm == 0) throw ValidationError("degenerate (all-zero) sequence");
  const int m = R - d;
  std::vector<std::vector<HighFloat>> A(static_cast<std::size_t>(m), std::vector<HighFloat>(static_cast<std::size_t>(d)));
  std::vector<HighFloat> y(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < d; ++i) A[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = seq[static_cast<std::size_t>(r + d - 1 - i)];
    y[static_cast<std::size_t>(r)] = seq[static_cast<std::size_t>(r + d)];
  }
  RecurrenceFit fit;
  fit.order = d;
  HighFloat ssr = 0;
  std::vector<HighFloat> x;
  try {
    x = householder_ls(A, y, &ssr);
  } catch (const NumericError&) {
    // a lower-order recurrence makes the columns dependent: that is an exact fit
    fit.coeffs.assign(static_cast<std::size_t>(d), NAN);
    fit.residual = 0.0;
    return fit;
  }
  for (const auto& c : x) fit.coeffs.push_back(static_cast<double>(c));
  fit.residual = static_cast<double>(ssr / norm);
  return fit;
}

RecurrenceFit fit_recurrence(const std::vector<double>& seq, int d, int R) {
  bool integral = true;
  for (int r = 0; r < R && r < static_cast<int>(seq.size()); ++r) {
    const double v = seq[static_cast<std::size_t>(r)];
    integral = integral && std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15;
  }
  if (integral && static_cast<int>(seq.size()) >= R) {
    std::vector<BigInt> ints;
    for (double v : seq) ints.emplace_back(static_cast<long long>(v));
    return fit_recurrence(ints, d, R);
  }
  std::vector<HighFloat> hp(seq.begin(), seq.end());
  return fit_recurrence(hp, d, R);
}

RecurrenceFit fit_recurrence(const std::vector<BigInt>& seq, int d, int R) {
  check_shape(seq.size(), d, R);
  BigRational norm = 0;
  for (int r = 0; r < R; ++r) norm += BigRational(seq[static_cast<std::size_t>(r)] * seq[static_cast<std::size_t>(r)]);
  if (norm == 0) throw ValidationError("degenerate (all-zero) sequence");
  std::vector<BigRational> c;
  BigRational ssr;
  if (!exact_ls(seq, d, R, &c, &ssr)) {
    std::vector<HighFloat> hp;
    for (const auto& v : seq) hp.emplace_back(v);
    return fit_recurrence(hp, d, R);
  }
  RecurrenceFit fit;
  fit.order = d;
  fit.exact = true;
  for (const auto& x : c) fit.coeffs.push_back(to_double(x));
  fit.residual = to_double(ssr / norm);
  return fit;
}

std::vector<HighFloat> log_counts(const CountSequence& counts, int R) {
  if (static_cast<int>(counts.size()) < R) throw ValidationError("not enough counts for horizon R");
  std::vector<HighFloat> out;
  for (int r = 1; r <= R; ++r) {
    const BigRational& n = counts.at(r);
    if (n < 1) throw ValidationError("N_" + std::to_string(r) + " < 1: log counts undefined");
    const HighFloat num(boost::multiprecision::numerator(n)), den(boost::multiprecision::denominator(n));
    out.push_back(log(num) - log(den));
  }
  return out;
}

RecurrenceReport falsify_report(const CountSequence& counts, int d_max, int R, const std::string& id) {
  if (d_max < 1) throw ValidationError("d_max must be >= 1");
  if (R < 2 * d_max + 8) throw ValidationError("falsify_report needs R >= 2 d_max + 8");
  const auto seq = log_counts(counts, R);
  RecurrenceReport rep;
  rep.sequence_id = id.empty() ? counts.family : id;
  rep.R = R;
  rep.d_max = d_max;
  for (int d = 1; d <= d_max; ++d) {
    RecurrenceFit f = fit_recurrence(seq, d, R);
    const bool hit = f.residual < kRecurrenceThreshold;
    if (!hit) f.coeffs.clear();
    rep.fits.push_back(f);
    if (hit && !rep.found) {
      rep.found = true;
      rep.found_order = d;
    }
  }
  return rep;
}

std::string verdict_text(const RecurrenceReport& rep) {
  if (rep.found) return "recurrence_found(" + std::to_string(rep.found_order) + ")";
  return "falsified_up_to(" + std::to_string(rep.d_max) + ")";
}

}  // namespace zlog
