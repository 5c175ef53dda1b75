#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "zlog/motive_data.hpp"
#include "zlog/point_counts.hpp"

using namespace zlog;

namespace {

// F_4 = {0, 1, w, w+1} as 2-bit vectors, w^2 = w + 1
int f4_mul(int a, int b) {
  int r = 0;
  for (int i = 0; i < 2; ++i)
    if (b >> i & 1) r ^= a << i;
  if (r & 4) r ^= 0b111;
  return r;
}

// y^2 z + y z^2 - x^3 on normalized projective points, written against the tables above
int curve_points_f4(bool only_f2) {
  const int n = only_f2 ? 2 : 4;
  int count = 0;
  auto eval = [&](int x, int y, int z) {
    const int y2z = f4_mul(f4_mul(y, y), z), yz2 = f4_mul(y, f4_mul(z, z)), x3 = f4_mul(x, f4_mul(x, x));
    return y2z ^ yz2 ^ x3;  // characteristic 2
  };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) count += eval(x, y, 1) == 0;
  for (int x = 0; x < n; ++x) count += eval(x, 1, 0) == 0;
  count += eval(1, 0, 0) == 0;
  return count;
}

bool has_root_mod3(int b, int c) {
  for (int x = 0; x < 3; ++x)
    if ((x * x + b * x + c) % 3 == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("F_9 modulus is the first irreducible quadratic in lexicographic order") {
  std::array<int, 2> first{-1, -1};
  for (int b = 0; b < 3 && first[0] < 0; ++b)
    for (int c = 0; c < 3; ++c)
      if (!has_root_mod3(b, c)) {
        first = {b, c};
        break;
      }
  const auto f = make_field(3, 2);
  REQUIRE(f.q() == 9);
  CHECK(f.modulus() == std::vector<std::uint32_t>{static_cast<std::uint32_t>(first[1]),
                                                  static_cast<std::uint32_t>(first[0]), 1});
}

TEST_CASE("field arithmetic") {
  const auto f = make_field(2, 3);
  for (std::uint32_t a = 1; a < f.q(); ++a) CHECK(f.pow(a, f.q() - 1) == 1);
  CHECK_THROWS_AS(make_field(6, 1), ValidationError);
}

TEST_CASE("cubic curve over F_2 and F_4") {
  VarietySpec v;
  v.ambient = VarietySpec::Ambient::projective;
  v.n = 2;
  v.equations = {{{1, {0, 2, 1}}, {1, {0, 1, 2}}, {-1, {3, 0, 0}}}};
  CHECK(count_naive(v, make_field(2, 1)) == static_cast<std::uint64_t>(curve_points_f4(true)));
  CHECK(count_naive(v, make_field(2, 2)) == static_cast<std::uint64_t>(curve_points_f4(false)));
  CHECK(curve_points_f4(true) == 3);
  CHECK(curve_points_f4(false) == 9);
  const auto w = WeilNumberSet::from_charpoly(2, {2, 0, 1});
  CHECK(counts_from_weil(w, 1) == 3);
  CHECK(counts_from_weil(w, 2) == 9);
}

TEST_CASE("closed forms") {
  FamilyParams p;
  p.family = Family::projective;
  p.n = 2;
  CHECK(count_closed_form(p, 2, 1) == 7);

  int invertible = 0;
  for (int m = 0; m < 16; ++m) invertible += ((m & 1) * (m >> 3 & 1) + (m >> 1 & 1) * (m >> 2 & 1)) % 2 == 1;
  p.family = Family::gl;
  p.k = 2;
  CHECK(count_closed_form(p, 2, 1) == invertible);

  p.family = Family::grassmann;
  p.k = 1;
  p.n = 2;
  CHECK(count_closed_form(p, 3, 1) == (9 - 1) / (3 - 1));

  p.family = Family::full_grassmann;
  p.n = 2;
  CHECK(count_closed_form(p, 3, 1) == 1 + 4 + 1);

  p.family = Family::grassmann;
  p.k = 3;
  p.n = 2;
  CHECK_THROWS_AS(count_closed_form(p, 2, 1), ValidationError);
  CHECK_THROWS_AS(parse_family("banana"), ValidationError);
}

TEST_CASE("naive counts agree with closed forms within budget") {
  std::vector<FamilyParams> fams;
  for (int n = 1; n <= 3; ++n) {
    fams.push_back({Family::affine, n, 0, 0, 1});
    fams.push_back({Family::projective, n, 0, 0, 1});
  }
  fams.push_back({Family::torus, 1, 0, 0, 1});
  fams.push_back({Family::quadric_type1, 2, 0, 1, 1});
  fams.push_back({Family::quadric_type1, 3, 0, 3, 2});
  fams.push_back({Family::quadric_type1, 4, 0, 3, 1});
  for (const auto& fp : fams) {
    const auto spec = family_spec(fp);
    for (std::uint32_t p : {2u, 3u, 5u})
      for (int k = 1; k <= 3; ++k) {
        if (fp.family == Family::quadric_type1 && fp.alpha % p == 0) continue;
        const double ambient = std::pow(double(p), k * spec.num_vars());
        if (ambient > double(kEnumerationBudget)) continue;
        CAPTURE(family_name(fp.family));
        CAPTURE(p);
        CAPTURE(k);
        CHECK(BigInt(count_naive(spec, make_field(p, k))) == count_closed_form(fp, p, k));
      }
  }
}

TEST_CASE("counts are multiplicative under products") {
  FamilyParams a{Family::affine, 2, 0, 0, 1}, b{Family::affine, 3, 0, 0, 1}, ab{Family::affine, 5, 0, 0, 1};
  for (int r = 1; r <= 4; ++r) CHECK(count_closed_form(ab, 3, r) == count_closed_form(a, 3, r) * count_closed_form(b, 3, r));
  CHECK(count_naive(family_spec(ab), make_field(2, 1)) ==
        count_naive(family_spec(a), make_field(2, 1)) * count_naive(family_spec(b), make_field(2, 1)));
}

TEST_CASE("Weil counts by power sums") {
  const auto w = WeilNumberSet::from_charpoly(11, {11, -1, 1});
  // p_1 = 1, p_2 = p_1^2 - 2*11
  const BigInt p1 = 1, p2 = p1 * p1 - 2 * 11;
  CHECK(counts_from_weil(w, 1) == 1 - p1 + 11);
  CHECK(counts_from_weil(w, 2) == 1 - p2 + 121);
  CHECK(counts_from_weil(w, 1) == 11);
  CHECK(counts_from_weil(w, 2) == 143);

  // h^1 of a supersingular curve over F_p with Frobenius eigenvalues +-sqrt(p)
  const auto h1 = WeilNumberSet::from_charpoly(5, {-5, 0, 1}, 1, false);
  for (int r = 1; r <= 6; ++r) {
    const BigInt expect = -(1 + (r % 2 ? -1 : 1)) * BigInt(pow(BigInt(5), r / 2));
    CHECK(counts_from_weil(h1, r) == BigRational(r % 2 ? BigInt(0) : expect));
  }
}

TEST_CASE("enumeration budget") {
  FamilyParams a{Family::affine, 7, 0, 0, 1};
  CHECK_THROWS_AS(count_naive(family_spec(a), make_field(2, 3)), ValidationError);
}
