#pragma once

#include <iosfwd>
#include <vector>

#include "zlog/common.hpp"
#include "zlog/motive_data.hpp"

namespace zlog {

constexpr double kMergeRadius = 1e-9;

/// One merged point k.log(lambda) of the level expansion, with the summed coefficient
/// (l-1)!/prod k_i! * prod eps_i^k_i over the contributing compositions.
struct LevelTerm {
  cplx kappa;
  double coeff = 0.0;
  double abs_coeff = 0.0;  // sum of |coefficient| before cancellation
  int level = 0;           // smallest contributing l
  int contributors = 0;
  bool infinite = false;
};

/// All compositions k_1 + ... + k_N = l for 1 <= l <= L_max, merged within kMergeRadius.
/// With reduce_periodic the imaginary part is taken modulo 2 pi first. Fully cancelled
/// clusters are dropped.
std::vector<LevelTerm> enumerate_level_terms(const SpectralData& data, int L_max, bool reduce_periodic);

struct Window {
  double re_min = -10, re_max = 10, im_min = -10, im_max = 10;
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

/// Parses "remin:remax:immin:immax".
Window parse_window(const std::string& s);

struct SupportPoint {
  cplx location;
  double multiplicity = 0.0;
  bool infinite = false;
  int level = 0;
  int contributors = 1;
};

enum class DivisorKind { P, Pper_plus, Pper_minus, Pper, D, E };
enum class FinitenessStatus { LocallyFinite, Undetermined, NotLocallyFiniteWitness };
enum class FinitenessRule { none, N_le_2, N_le_1_periodic, lattice, product_construction };

struct FinitenessVerdict {
  FinitenessStatus status = FinitenessStatus::Undetermined;
  FinitenessRule rule = FinitenessRule::none;
  int lattice_M = 0;
  double min_gap = 0.0;
};

struct PseudoDivisor {
  DivisorKind kind = DivisorKind::P;
  Window window;
  int L_max = 0;
  int J_max = 0;
  std::vector<SupportPoint> points;  // sorted by (re, im)
  FinitenessVerdict verdict;
  bool coverage_warning = false;  // higher levels than L_max may reach the window

  std::size_t size() const { return points.size(); }
  double min_gap() const;
};

enum class PeriodVariant { plus, minus, full };

PseudoDivisor build_support_P(const SpectralData& data, int L_max, const Window& window);
PseudoDivisor periodify(const PseudoDivisor& p, int J_max, PeriodVariant variant);
PseudoDivisor pullback_exp(const PseudoDivisor& pper, const Window& window);
PseudoDivisor mirror_sum(const PseudoDivisor& d);
FinitenessVerdict classify_finiteness(const SpectralData& data);

/// D and E of the data within a z-window: builds P, P^per over the strips the window needs.
PseudoDivisor divisor_D(const SpectralData& data, int L_max, const Window& z_window);

const char* kind_name(DivisorKind k);
const char* rule_name(FinitenessRule r);
const char* status_name(FinitenessStatus s);

void write_divisor_csv(std::ostream& out, const PseudoDivisor& d);

}  // namespace zlog
