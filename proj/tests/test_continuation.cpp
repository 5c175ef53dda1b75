#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zlog/continuation.hpp"

using namespace zlog;

namespace {

SpectralData half() {
  SpectralData d;
  d.items = {{1, 0.5}};
  return d;
}

SpectralData ss4() {
  SpectralData d;
  d.items = {{1, 0.5}, {1, -0.5}, {-1, 0.25}};
  d.q = 4;
  return d;
}

const cplx kAlpha1(0.5, 3.278719262151000);  // (1 + sqrt(-43)) / 2

// sum_{r=r0}^{R} log(1 - S_r) e^{-w r}
cplx partial_T(const SpectralData& d, int r0, cplx w, int R = 400) {
  cplx s = 0;
  for (int r = r0; r <= R; ++r) s += std::log(1.0 - d.S(r)) * std::exp(-w * double(r));
  return s;
}

}  // namespace

TEST_CASE("T against the partial sum") {
  const auto d = ss4();
  const auto tp = select_truncation(d);
  for (cplx w : {cplx(1), cplx(1, 0.3), cplx(2, -1)})
    CHECK(std::abs(eval_T(w, d, tp) - partial_T(d, tp.r0, w)) < 1e-8);
}

TEST_CASE("T deep in the right half-plane is its first term") {
  const auto d = half();
  const auto tp = select_truncation(d);
  const cplx first = std::log(1.0 - std::pow(0.5, tp.r0)) * std::exp(-5.0 * tp.r0);
  const cplx t = eval_T(5.0, d, tp);
  CHECK(std::abs(t - partial_T(d, tp.r0, 5.0)) < 1e-15);
  CHECK(std::abs(t - first) < 1e-2 * std::abs(first));
}

TEST_CASE("J~ inside the disc and between poles") {
  const auto d = half();
  const auto tp = select_truncation(d);
  REQUIRE(tp.r0 == 2);
  double want = 0;
  for (int r = 2; r < 200; ++r) want += std::log(1 - std::pow(0.5, r)) * std::pow(0.3, r);
  CHECK(std::abs(eval_J_tilde(0.3, std::log(0.3), d, tp) - want) < 1e-10);
  const cplx a = eval_J_tilde(3.0, std::log(3.0), d, tp);
  const cplx b = eval_J_tilde(3.0, std::log(3.0) + cplx(0, kTwoPi), d, tp);
  CHECK(std::isfinite(a.real()));
  CHECK(std::abs(a - b) < 1e-10);
  CHECK_THROWS_AS(eval_J_tilde(2.0, std::log(2.0), d, tp), NumericError);
}

TEST_CASE("I, F and f near the origin") {
  const auto d = half();
  const auto tp = select_truncation(d);
  double series = 0;
  for (int r = 2; r < 200; ++r) series += std::log(1 - std::pow(0.5, r)) * std::pow(0.3, r) / r;
  const auto path = PathSpec::straight(0.3);
  CHECK(std::abs(integrate_I(path, d, tp).value - series) < 1e-9);
  CHECK(std::abs(eval_F(path, d, tp).value - std::exp(0.5 * series)) < 1e-9);
  CHECK(std::abs(eval_f(path, d, tp).value - std::exp(series)) < 1e-9);
}

TEST_CASE("f for real data is real on (0, 1)") {
  const auto d = ss4();
  const auto tp = select_truncation(d);
  for (double z : {0.2, 0.6, 0.9}) {
    double s = 0;
    for (int r = tp.r0; r < 4000; ++r) s += std::log(std::abs(1.0 - d.S(r).real())) * std::pow(z, r) / r;
    const cplx f = eval_f(PathSpec::straight(z), d, tp).value;
    CHECK(std::abs(f.imag()) < 1e-12);
    CHECK(std::abs(f.real() - std::exp(s)) < 1e-9);
  }
}

TEST_CASE("f has no zeros along a path to -5") {
  const auto d = half();
  const auto tp = select_truncation(d);
  for (double x : {-1.0, -2.0, -3.5, -5.0}) CHECK(std::abs(eval_f(PathSpec::straight(x), d, tp).value) > 0);
  const auto around = PathSpec::through({cplx(3, 1), cplx(-5)});
  CHECK(std::abs(eval_f(around, d, tp).value) > 0);
}

TEST_CASE("branches differ by a root of unity") {
  const auto d = half();
  const auto tp = select_truncation(d);
  const auto loop = PathSpec::through({cplx(1, 2), cplx(12, 2), cplx(12, -2), cplx(-3)});
  const auto direct = PathSpec::straight(-3);
  const cplx ratio = eval_f(loop, d, tp).value / eval_f(direct, d, tp).value;
  CHECK(std::abs(std::abs(ratio) - 1) < 1e-8);
  const auto fit = nearest_rational(std::arg(ratio) / kTwoPi, 64);
  CHECK(fit.error < 1e-6);
  // the loop encircles the poles at 2, 4, 8 once, clockwise: -(1 + 1/2 + 1/3)
  const cplx dI = integrate_I(loop, d, tp).value - integrate_I(direct, d, tp).value;
  CHECK(std::abs(dI / cplx(0, kTwoPi) + 11.0 / 6) < 1e-6);
}

TEST_CASE("paths that touch a pole are rejected") {
  const auto d = half();
  const auto tp = select_truncation(d);
  CHECK_THROWS_AS(eval_f(PathSpec::straight(4.0), d, tp), NumericError);
  CHECK_THROWS_AS(parse_path("1;banana"), ValidationError);
  CHECK(parse_path("1+i;-2").vertices.size() == 3);
}

TEST_CASE("Z_log of affine space") {
  for (int n : {1, 2}) {
    const auto m = ZlogModel::raw({{PrefixTerm::Kind::geometric, n * std::log(3.0), 1}}, {}, std::nullopt);
    CHECK(eval_zlog(PathSpec::straight(0.5), m).value.real() == doctest::Approx(std::pow(3.0, n)).epsilon(1e-12));
  }
}

TEST_CASE("E/F_11 against the counts") {
  const auto w = WeilNumberSet::from_charpoly(11, {11, -1, 1});
  const auto m = ZlogModel::abelian(w);
  const auto cs = weil_counts(w, 400);
  for (cplx z : {cplx(0.4), cplx(-0.25, 0.2)}) {
    cplx s = 0;
    for (int r = 1; r <= 400; ++r) s += log_abs(cs.at(r)) * std::pow(z, r) / double(r);
    CHECK(std::abs(eval_zlog(PathSpec::straight(z), m).value / std::exp(s) - 1.0) < 1e-8);
  }
}

TEST_CASE("projective line as a quotient of lambda models") {
  const auto l1 = ZlogModel::lambda_n(1, 2), l2 = ZlogModel::lambda_n(2, 2);
  const auto p1 = ZlogModel::family({Family::projective, 1, 0, 0, 1}, 2);
  const auto path = PathSpec::through({cplx(0.3, 0.4), cplx(-0.7, 0.2)});
  const cplx q = eval_zlog(path, l2).value / eval_zlog(path, l1).value;
  CHECK(std::abs(eval_zlog(path, p1).value - q) < 1e-9 * std::abs(q));
}

TEST_CASE("order-2 pole at z = 1") {
  const auto m = ZlogModel::abelian(WeilNumberSet::from_charpoly(11, {11, -1, 1}));
  for (int k = 0; k < 4; ++k) {
    const cplx z = 1.0 + 1e-3 * std::polar(1.0, kTwoPi * k / 4 + 0.3);
    const cplx scaled = log_derivative(z, m) * (1.0 - z) * (1.0 - z);
    CHECK(std::abs(scaled - std::log(11.0)) < 1e-2);
  }
  try {
    residue_estimate(1.0, m);
    FAIL("expected an order mismatch");
  } catch (const OrderMismatch& e) {
    CHECK(e.order() == 2);
  }
}

TEST_CASE("residues at alpha and alpha^2") {
  const auto m = ZlogModel::abelian(WeilNumberSet::from_charpoly(11, {11, -1, 1}));
  const auto r1 = residue_estimate(kAlpha1, m);
  CHECK(std::abs(r1.residue - 1.0) < 1e-4);
  CHECK(r1.fit.num == 1);
  CHECK(r1.fit.den == 1);
  const auto r2 = residue_estimate(kAlpha1 * kAlpha1, m);
  CHECK(std::abs(r2.residue - 0.5) < 1e-4);
  CHECK(r2.fit.den == 2);
}

TEST_CASE("Weil poles") {
  const auto m = ZlogModel::abelian(WeilNumberSet::from_charpoly(11, {11, -1, 1}));
  const auto poles = locate_weil_poles(m);
  REQUIRE(poles.size() == 2);
  CHECK(std::abs(poles[0] - std::conj(kAlpha1)) < 1e-8);
  CHECK(std::abs(poles[1] - kAlpha1) < 1e-8);
  const auto ss = ZlogModel::motive(WeilNumberSet::curve_motive(4, {-4, 0, 1}));
  const auto sp = locate_weil_poles(ss);
  REQUIRE(sp.size() == 2);
  CHECK(std::abs(sp[0] + 2.0) < 1e-8);
  CHECK(std::abs(sp[1] - 2.0) < 1e-8);
}

TEST_CASE("monodromy") {
  const auto d = half();
  const auto tp = select_truncation(d);
  const auto m2 = monodromy_loop(2.0, 0.5, d, tp);
  CHECK(std::abs(m2.value) / kTwoPi == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m2.rational);
  const auto m4 = monodromy_loop(4.0, 0.5, d, tp);
  CHECK(std::abs(m4.value) / kTwoPi == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m4.fit.den == 2);
  CHECK(std::abs(monodromy_loop(3.0, 0.5, d, tp).value) < 1e-10);
  CHECK_THROWS_AS(monodromy_loop(3.0, 1.0, d, tp), NumericError);
}
