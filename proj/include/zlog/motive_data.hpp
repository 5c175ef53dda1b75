#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "zlog/common.hpp"

namespace zlog {

/// One distinct Frobenius eigenvalue.
struct WeilEntry {
  cplx alpha;
  int weight = 0;
  int multiplicity = 1;
  int root_order = 0;  // order of alpha / q^{w/2} as a root of unity, 0 if not one (or unknown)
};

/// All eigenvalues of a single weight, carried by their exact characteristic polynomial.
struct WeilBlock {
  int weight = 0;
  std::vector<BigInt> charpoly;  // monic, low degree first
  std::vector<WeilEntry> roots;  // distinct roots with multiplicities

  int degree() const { return static_cast<int>(charpoly.size()) - 1; }
  // sum of alpha^k over all roots counted with multiplicity; exact by Newton's identities
  BigInt power_sum(int k) const;
  std::vector<BigInt> power_sums(int kmax) const;  // index 0..kmax
};

class WeilNumberSet {
 public:
  WeilNumberSet() = default;

  /// Eigenvalues of one weight given by an integer polynomial (low degree first).
  /// abelian = true marks the H^1 of an abelian variety (counts |prod(1 - alpha^r)|).
  static WeilNumberSet from_charpoly(std::uint64_t q, const std::vector<BigInt>& coeffs, int weight = 1,
                                     bool abelian = true);
  /// Explicit conjugate-closed eigenvalue list; rebuilt into integer charpolys per weight.
  static WeilNumberSet from_entries(std::uint64_t q, const std::vector<WeilEntry>& entries);
  /// h^0 + h^1 + h^2 of a curve whose H^1 has the given charpoly.
  static WeilNumberSet curve_motive(std::uint64_t q, const std::vector<BigInt>& h1_charpoly);

  void add_block(int weight, const std::vector<BigInt>& coeffs);
  void add_tate(int m);  // eigenvalue q^m in weight 2m

  std::uint64_t q() const { return q_; }
  bool abelian() const { return abelian_; }
  bool empty() const { return blocks_.empty(); }
  const std::vector<WeilBlock>& blocks() const { return blocks_; }
  const WeilBlock& block(int weight) const;
  std::vector<WeilEntry> entries() const;

 private:
  std::uint64_t q_ = 0;
  bool abelian_ = false;
  std::vector<WeilBlock> blocks_;
};

struct SpectralDatum {
  double eps = 0.0;
  cplx lambda;
};

struct SpectralData {
  std::vector<SpectralDatum> items;
  std::optional<std::uint64_t> q;  // field size, used by the lattice finiteness rule
  // set by product_data: the certified factors this datum was assembled from
  std::vector<std::shared_ptr<const SpectralData>> factors;

  std::size_t size() const { return items.size(); }
  SpectralData conjugate() const;
  double M() const;  // max |eps|
  void validate() const;
  cplx S(cplx r) const;  // sum eps_i exp(r log lambda_i), principal log
};

struct TruncationParams {
  double K = kPi;
  int r0 = 1;
  int L_max = 8;
  int J_max = 8;
  int R_oracle = 400;
  double M = 0.0;
  double eval_radius = 16.0;  // |z| up to which the l-truncation is certified
};

/// Smallest r0 for which the majorant M max|lambda|^x sum e^{-y arg lambda} (and its
/// per-slot version) stays < 1/2 for x >= r0, |y| <= K; level cap from the geometric tail.
TruncationParams select_truncation(const SpectralData& data, double K = kPi, double eval_radius = 16.0);
/// Same caps for a caller-imposed r0 (e.g. a common r0 across several factors).
TruncationParams truncation_for_r0(const SpectralData& data, int r0, double K = kPi, double eval_radius = 16.0);

/// Upper bound for the terms of level > L of the l-series at |z| = radius.
double level_tail_bound(const SpectralData& data, int r0, int L, double radius);

struct SpectralFactor {
  SpectralData data;
  int power = 1;       // acts in the variable t^power
  double weight = 1.0; // log Z gets weight * sum log|1 - S_r| t^{power r} / r
};

struct SpectralDecomposition {
  std::vector<SpectralFactor> factors;
  double prefix_rate = 0.0;  // coefficient of t/(1-t) in log Z
  int m = 0;
};

SpectralDecomposition spectral_from_weil(const WeilNumberSet& weil, int top_weight_m);

struct VirtualCounts {
  std::vector<BigRational> values;  // N_1..N_L
  int vanish_bound = -1;            // -1 when no unique top weight
  bool exact = true;
};

VirtualCounts virtual_counts(const WeilNumberSet& weil, int L);

struct TopWeightVerdict {
  bool unique = false;
  int m = 0;
  int vanish_bound = -1;
};

TopWeightVerdict check_unique_top_weight(const WeilNumberSet& weil);

SpectralData product_data(const SpectralData& a, const SpectralData& b);

/// If the multiset {(eps, lambda)} is invariant under lambda -> lambda e^{2 pi i/s}, fold
/// every orbit into (s eps, lambda^s) acting in t^s. Returns the largest such s (1 if none).
int fold_orbits(const SpectralData& in, SpectralData& out);

}  // namespace zlog
