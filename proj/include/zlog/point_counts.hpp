#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "zlog/common.hpp"

namespace zlog {

class WeilNumberSet;

/// F_{p^k} with elements encoded as base-p digit strings of the residue
/// polynomial (digit i = coefficient of x^i). Multiplication goes through
/// discrete log tables built from a primitive element.
class FiniteField {
 public:
  std::uint32_t p() const { return p_; }
  int k() const { return k_; }
  std::uint32_t q() const { return q_; }
  // monic modulus, low degree first (size k+1)
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t from_int(std::int64_t c) const;  // image of an integer in F_p

  friend FiniteField make_field(std::uint32_t p, int k);

 private:
  std::uint32_t p_ = 2;
  int k_ = 1;
  std::uint32_t q_ = 2;
  std::vector<std::uint32_t> modulus_;
  std::shared_ptr<const std::vector<std::uint32_t>> log_;
  std::shared_ptr<const std::vector<std::uint32_t>> exp_;
};

inline constexpr std::uint64_t kEnumerationBudget = 1u << 20;

bool is_prime(std::uint64_t n);
FiniteField make_field(std::uint32_t p, int k);

struct Monomial {
  std::int64_t coeff = 0;
  std::vector<int> exponents;
};
using Polynomial = std::vector<Monomial>;

struct VarietySpec {
  enum class Ambient { affine, projective };
  Ambient ambient = Ambient::affine;
  int n = 0;
  std::vector<Polynomial> equations;

  int num_vars() const { return ambient == Ambient::affine ? n : n + 1; }
  void validate() const;
};

std::uint64_t count_naive(const VarietySpec& spec, const FiniteField& field);

enum class Family { affine, torus, projective, gl, grassmann, full_grassmann, quadric_type1 };

struct FamilyParams {
  Family family = Family::affine;
  int n = 0;
  int k = 0;
  int m = 0;
  std::int64_t alpha = 1;
};

Family parse_family(const std::string& name);
std::string family_name(Family f);

BigInt count_closed_form(const FamilyParams& params, std::uint64_t q, int r);

/// The naive-enumeration spec of a family member, where one exists.
/// quadric_type1(n, m, alpha) is realized as x0*x1 + ... + x_{m-1}*x_m = alpha in A^{n+1}.
VarietySpec family_spec(const FamilyParams& params);

struct CountSequence {
  enum class Source { naive, closed_form, weil };
  std::uint64_t q = 0;
  std::vector<BigRational> values;  // values[r-1] = N_r
  Source source = Source::naive;
  std::string family;

  std::size_t size() const { return values.size(); }
  const BigRational& at(int r) const { return values.at(static_cast<std::size_t>(r - 1)); }
  void require_positive() const;
};

CountSequence closed_form_counts(const FamilyParams& params, std::uint64_t q, int R);

/// Abelian sets: |prod_j (1 - alpha_j^r)|. Motive sets: sum (-1)^v alpha^r.
BigRational counts_from_weil(const WeilNumberSet& weil, int r);
CountSequence weil_counts(const WeilNumberSet& weil, int R);

}  // namespace zlog
