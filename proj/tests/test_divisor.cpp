#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "zlog/pseudo_divisor.hpp"

using namespace zlog;

namespace {

SpectralData single(double eps, cplx lambda) {
  SpectralData d;
  d.items = {{eps, lambda}};
  return d;
}

const SupportPoint* find(const PseudoDivisor& d, cplx z, double tol = 1e-9) {
  for (const auto& p : d.points)
    if (std::abs(p.location - z) < tol * std::max(1.0, std::abs(z))) return &p;
  return nullptr;
}

}  // namespace

TEST_CASE("level support of {(1, 1/2)} and {(2, 1/2)}") {
  const Window win = parse_window("-3:0:-1:1");
  for (double eps : {1.0, 2.0}) {
    const auto P3 = build_support_P(single(eps, 0.5), 3, win);
    CHECK(P3.size() == 3);
    for (int l = 1; l <= 3; ++l) {
      // (l-1)!/l! * eps^l = eps^l / l; the paper's multiplicity rescales by l
      const auto* p = find(P3, -l * std::log(2.0));
      REQUIRE(p != nullptr);
      CHECK(p->level == l);
      CHECK(p->multiplicity * l == doctest::Approx(std::pow(eps, l)));
    }
  }
}

TEST_CASE("periodification") {
  const auto P = build_support_P(single(1, 0.5), 2, Window{-2, 0, -20, 20});
  const auto plus = periodify(P, 2, PeriodVariant::plus);
  for (const auto& p : plus.points) CHECK(p.location.imag() > 1.0);
  CHECK(plus.size() == 4);
  const auto minus = periodify(P, 2, PeriodVariant::minus);
  for (const auto& p : minus.points) CHECK(p.location.imag() < -1.0);
  const auto full = periodify(P, 2, PeriodVariant::full);
  CHECK(full.size() == 10);
  CHECK_THROWS_AS(periodify(full, 2, PeriodVariant::plus), ValidationError);
}

TEST_CASE("pullback of {(1, 1/2)} lands on powers of 2") {
  const auto D = divisor_D(single(1, 0.5), 4, Window{-20, 20, -20, 20});
  REQUIRE(D.size() == 4);
  for (int k = 1; k <= 4; ++k) {
    const auto* p = find(D, std::pow(2.0, k));
    REQUIRE(p != nullptr);
    CHECK(p->multiplicity == doctest::Approx(1.0 / k));
  }
}

TEST_CASE("pullback of an E/F_11 factor lands on powers of alpha") {
  const cplx a1(0.5, std::sqrt(43.0) / 2);
  const auto D = divisor_D(single(1, 1.0 / a1), 3, Window{-40, 40, -40, 40});
  for (int k = 1; k <= 3; ++k) CHECK(find(D, std::pow(a1, k), 1e-8) != nullptr);
  CHECK(D.size() == 3);
}

TEST_CASE("mirror sum is conjugation symmetric") {
  const cplx a1(0.5, std::sqrt(43.0) / 2);
  const auto E = mirror_sum(divisor_D(single(1, 1.0 / a1), 3, Window{-40, 40, -40, 40}));
  CHECK(E.kind == DivisorKind::E);
  for (const auto& p : E.points) CHECK(find(E, std::conj(p.location), 1e-8) != nullptr);
}

TEST_CASE("finiteness verdicts") {
  const auto v1 = classify_finiteness(single(1, 0.5));
  CHECK(v1.status == FinitenessStatus::LocallyFinite);
  CHECK(v1.rule == FinitenessRule::N_le_1_periodic);

  SpectralData ss;
  ss.items = {{1, 0.5}, {1, -0.5}, {-1, 0.25}};
  ss.q = 4;
  const auto v2 = classify_finiteness(ss);
  CHECK(v2.status == FinitenessStatus::LocallyFinite);
  CHECK(v2.rule == FinitenessRule::lattice);
  CHECK(v2.lattice_M == 2);
}

TEST_CASE("csv export") {
  std::ostringstream os;
  write_divisor_csv(os, divisor_D(single(1, 0.5), 1, Window{-3, 3, -3, 3}));
  CHECK(os.str() == "re,im,multiplicity,level\n2,-0,1,1\n");
}

TEST_CASE("window parsing") {
  const auto w = parse_window("-1.5:2:-3:4e0");
  CHECK(w.re_min == -1.5);
  CHECK(w.im_max == 4.0);
  CHECK_THROWS_AS(parse_window("1:2:3"), ValidationError);
  CHECK_THROWS_AS(parse_window("2:1:0:1"), ValidationError);
}
