#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zlog/motive_data.hpp"
#include "zlog/series.hpp"

using namespace zlog;

TEST_CASE("first coefficients") {
  FamilyParams a{Family::affine, 1, 0, 0, 1}, p{Family::projective, 1, 0, 0, 1};
  CHECK(zlog_series(closed_form_counts(a, 2, 1), 1)[1] == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(zlog_series(closed_form_counts(p, 2, 1), 1)[1] == doctest::Approx(1.098612).epsilon(1e-6));
}

TEST_CASE("affine line is q^{t/(1-t)}") {
  // exp(c t/(1-t)) has coefficients sum_k c^k/k! binom(n-1, k-1)
  FamilyParams a{Family::affine, 1, 0, 0, 1};
  const auto s = zlog_series(closed_form_counts(a, 3, 12), 12);
  const double c = std::log(3.0);
  for (int n = 1; n <= 12; ++n) {
    double want = 0, fact = 1, binom = 1;
    for (int k = 1; k <= n; ++k) {
      fact *= k;
      if (k > 1) binom = binom * (n - k + 1) / (k - 1);
      want += std::pow(c, k) / fact * binom;
    }
    CHECK(s[static_cast<std::size_t>(n)] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("exp and log are inverse") {
  RealPowerSeries s;
  s.coeffs = {0, 0.5, -0.25, 1.0, 0.125, 2.0};
  const auto back = series_log(series_exp(s));
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) CHECK(back[i] == doctest::Approx(s[i]).epsilon(1e-14));
  const auto e = series_exp(s);
  const auto sq = series_mul(e, e);
  RealPowerSeries twice = s;
  for (auto& c : twice.coeffs) c *= 2;
  const auto e2 = series_exp(twice);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) CHECK(sq[i] == doctest::Approx(e2[i]).epsilon(1e-13));
}

TEST_CASE("evaluation matches the partial sum of logs") {
  const auto w = WeilNumberSet::from_charpoly(11, {11, -1, 1});
  const auto cs = weil_counts(w, 60);
  const auto s = zlog_series(cs, 60);
  double ls = 0;
  for (int r = 1; r <= 60; ++r) ls += log_abs(cs.at(r)) * std::pow(0.1, r) / r;
  CHECK(s.evaluate(0.1) == doctest::Approx(std::exp(ls)).epsilon(1e-12));
}

TEST_CASE("radius of convergence") {
  const auto w = WeilNumberSet::from_charpoly(11, {11, -1, 1});
  const auto re = radius_estimate(zlog_series(weil_counts(w, 256), 256));
  CHECK(re.radius >= 0.9);
  CHECK(re.radius <= 1.1);
  // a geometric series has radius 1/2
  RealPowerSeries g;
  for (int r = 0; r <= 128; ++r) g.coeffs.push_back(std::pow(2.0, r));
  CHECK(radius_estimate(g).radius == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("zero counts are rejected") {
  const auto h1 = WeilNumberSet::from_charpoly(5, {-5, 0, 1}, 1, false);
  CHECK_THROWS_AS(zlog_series(weil_counts(h1, 4), 4), ValidationError);
}
