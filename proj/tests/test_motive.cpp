#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "zlog/motive_data.hpp"
#include "zlog/point_counts.hpp"

using namespace zlog;

namespace {

bool same_data(std::vector<SpectralDatum> got, std::vector<SpectralDatum> want) {
  auto key = [](const SpectralDatum& d) { return std::make_tuple(d.lambda.real(), d.lambda.imag(), d.eps); };
  auto less = [&](const SpectralDatum& a, const SpectralDatum& b) { return key(a) < key(b); };
  std::sort(got.begin(), got.end(), less);
  std::sort(want.begin(), want.end(), less);
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (std::abs(got[i].eps - want[i].eps) > 1e-12 || std::abs(got[i].lambda - want[i].lambda) > 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("supersingular curve over F_4") {
  const auto ss = WeilNumberSet::curve_motive(4, {-4, 0, 1});
  const auto dec = spectral_from_weil(ss, 1);
  REQUIRE(dec.factors.size() == 1);
  CHECK(same_data(dec.factors[0].data.items, {{1, 0.5}, {1, -0.5}, {-1, 0.25}}));
  // certified r0 for this datum (regression constant)
  CHECK(select_truncation(dec.factors[0].data).r0 == 16);
}

TEST_CASE("E/F_11 datum") {
  const cplx a1(0.5, std::sqrt(43.0) / 2), a2 = std::conj(a1);
  CHECK(std::abs(a1 * a1 - a1 + 11.0) < 1e-12);
  const auto dec = spectral_from_weil(WeilNumberSet::curve_motive(11, {11, -1, 1}), 1);
  REQUIRE(dec.factors.size() == 1);
  CHECK(same_data(dec.factors[0].data.items, {{1, a1 / 11.0}, {1, a2 / 11.0}, {-1, 1.0 / 11}}));
  CHECK(dec.prefix_rate == doctest::Approx(std::log(11.0)));
  // the abelian variety splits into one factor per root; their product is the curve datum
  const auto ab = spectral_from_weil(WeilNumberSet::from_charpoly(11, {11, -1, 1}), -1);
  REQUIRE(ab.factors.size() == 2);
  CHECK(same_data(product_data(ab.factors[0].data, ab.factors[1].data).items, dec.factors[0].data.items));
}

TEST_CASE("h1 + h2 of a supersingular curve acts in t^2") {
  auto W = WeilNumberSet::from_charpoly(5, {-5, 0, 1}, 1, false);
  W.add_tate(1);
  const auto dec = spectral_from_weil(W, -1);
  REQUIRE(dec.factors.size() == 1);
  CHECK(dec.factors[0].power == 2);
  CHECK(same_data(dec.factors[0].data.items, {{2, 0.2}}));
  // the t^2 folding reproduces 1 - 2 p^{-r} on even r: N_{2k} = p^{2k} - 2 p^k
  const auto vc = virtual_counts(W, 4);
  CHECK(vc.values[3] == 625 - 2 * 25);
}

TEST_CASE("truncation for {(1, 1/2)}") {
  SpectralData d;
  d.items = {{1, 0.5}};
  const auto tp = select_truncation(d, kPi);
  // (1/2)^r0 < 1/2 needs r0 >= 2
  CHECK(tp.r0 == 2);
  CHECK(tp.L_max >= 8);
  CHECK(tp.J_max >= 8);
  for (int r = tp.r0; r <= tp.r0 + 5; ++r)
    for (double y : {-kPi, 0.0, kPi}) CHECK(std::abs(d.S(cplx(r, y))) < 0.5);
}

TEST_CASE("virtual counts") {
  const auto h1 = WeilNumberSet::from_charpoly(5, {-5, 0, 1}, 1, false);
  const auto vc = virtual_counts(h1, 2);
  CHECK(vc.values[0] == 0);
  CHECK(vc.values[1] == -10);
  const auto c = virtual_counts(WeilNumberSet::curve_motive(11, {11, -1, 1}), 2);
  CHECK(c.values[0] == 11);
  CHECK(c.values[1] == 143);
}

TEST_CASE("unique top weight") {
  CHECK(check_unique_top_weight(WeilNumberSet::curve_motive(11, {11, -1, 1})).unique);
  auto Y = WeilNumberSet::from_charpoly(5, {-1, 1}, 0, false);
  Y.add_block(1, {-5, 0, 1});
  CHECK_FALSE(check_unique_top_weight(Y).unique);
  CHECK_THROWS_AS(spectral_from_weil(Y, -1), ValidationError);
}

TEST_CASE("product construction") {
  SpectralData a, b;
  a.items = {{1, 0.5}};
  b.items = {{1, 0.5}};
  const auto p = product_data(a, b);
  CHECK(same_data(p.items, {{1, 0.5}, {1, 0.5}, {-1, 0.25}}));
  for (int r = 1; r <= 10; ++r) {
    const double x = std::pow(2.0, -r);
    CHECK(std::abs(1.0 - p.S(r) - (1 - x) * (1 - x)) < 1e-15);
  }
  SpectralData c, d;
  c.items = {{2, cplx(0, 0.3)}};
  d.items = {{-1, 0.2}};
  CHECK(same_data(product_data(c, d).items, {{2, cplx(0, 0.3)}, {-1, 0.2}, {2, cplx(0, 0.06)}}));
}

TEST_CASE("Weil set validation") {
  CHECK_THROWS_AS(WeilNumberSet::from_charpoly(11, {11, -100, 1}), ValidationError);
  SpectralData bad;
  bad.items = {{1, 1.5}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  const auto e = WeilNumberSet::from_entries(2, {{cplx(0, std::sqrt(2.0)), 1, 1, 0}, {cplx(0, -std::sqrt(2.0)), 1, 1, 0}});
  // weight-1 entries alone: N_r = -sum alpha^r
  CHECK(weil_counts(e, 2).at(1) == 0);
  CHECK(weil_counts(e, 2).at(2) == 4);
}

TEST_CASE("h0 + h1 of a supersingular curve: even counts carry 1 - p^{-s}/2") {
  auto Y = WeilNumberSet::from_charpoly(5, {-1, 1}, 0, false);
  Y.add_block(1, {-5, 0, 1});
  const auto vc = virtual_counts(Y, 16);
  for (int s = 1; s <= 8; ++s) {
    // N_{2s} = 1 - 2 p^s by direct expansion of (+-sqrt p)^{2s}
    const BigRational n = vc.values[static_cast<std::size_t>(2 * s - 1)];
    CHECK(n == 1 - 2 * BigRational(pow(BigInt(5), s)));
    const double rest = log_abs(n) - std::log(2.0) - s * std::log(5.0);
    CHECK(rest == doctest::Approx(std::log(std::abs(1 - 0.5 * std::pow(5.0, -s)))).epsilon(1e-13));
    if (s <= 2) CHECK(std::abs(rest - std::log(std::abs(1 - 2 * std::pow(5.0, -s)))) > 1e-3);
  }
}
