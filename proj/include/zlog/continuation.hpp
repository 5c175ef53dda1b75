#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zlog/common.hpp"
#include "zlog/motive_data.hpp"
#include "zlog/point_counts.hpp"
#include "zlog/spectral_kernel.hpp"

namespace zlog {

constexpr double kQuadTol = 1e-11;
constexpr double kSeriesDisc = 0.5;  // |z| below which the power series is used directly

/// Polyline starting at 0.
struct PathSpec {
  std::vector<cplx> vertices{cplx(0)};
  double clearance = 1e-3;

  static PathSpec straight(cplx z, double clearance = 1e-3);
  static PathSpec through(std::vector<cplx> pts, double clearance = 1e-3);  // prepends 0 if missing
  cplx end() const { return vertices.back(); }
  double length() const;
  void validate() const;
};

/// "a;b;c" vertex list; 0 is prepended when absent.
PathSpec parse_path(const std::string& text, double clearance = 1e-3);

struct ContinuationResult {
  cplx value;
  cplx branch_offset;  // the accumulated log (integral) whose exponential is value, when applicable
  double error_estimate = 0.0;
};

/// log Z contributions that are elementary in z.
struct PrefixTerm {
  enum class Kind { geometric, logarithmic };
  Kind kind = Kind::geometric;
  double coeff = 0.0;  // geometric: coeff z^s/(1-z^s); logarithmic: coeff log(1-z^s)
  int power = 1;
};

struct ModelOptions {
  double K = kPi;
  double eval_radius = 16.0;
  int r0 = 0;  // 0: the largest per-factor minimum
};

/// Z_log(t) = exp(prefix + poly(t) + sum_f w_f sum_{r>=r0} log|1-S_{f,r}| t^{s_f r}/r)
class ZlogModel {
 public:
  struct Factor {
    SpectralData data;
    int power = 1;
    double weight = 1.0;
    std::shared_ptr<const SpectralKernel> kernel;
  };

  static ZlogModel abelian(const WeilNumberSet& weil, const ModelOptions& opt = {});
  static ZlogModel motive(const WeilNumberSet& weil, int m = -1, const ModelOptions& opt = {});
  static ZlogModel lambda_n(int n, std::uint64_t q, const ModelOptions& opt = {});
  static ZlogModel family(const FamilyParams& params, std::uint64_t q, const ModelOptions& opt = {});
  /// Explicit decomposition checked against counts (when given) up to r = 64.
  static ZlogModel raw(const std::vector<PrefixTerm>& prefix, const std::vector<SpectralFactor>& factors,
                       const std::optional<CountSequence>& counts, const ModelOptions& opt = {},
                       std::optional<std::uint64_t> q = std::nullopt);

  const std::string& kind() const { return kind_; }
  std::optional<std::uint64_t> q() const { return q_; }
  const std::vector<PrefixTerm>& prefix() const { return prefix_; }
  const std::vector<double>& poly() const { return poly_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::optional<CountSequence>& counts() const { return counts_; }
  int r0() const { return r0_; }
  int L_max() const;

  /// coefficient of z^r in log Z implied by the decomposition
  double log_coefficient(int r) const;
  /// singular points of the log-derivative within |z| <= radius (prefix roots of unity, poles of J~)
  std::vector<SupportPoint> singularities(double radius) const;
  double tail_bound(double radius) const;

 private:
  std::string kind_ = "raw";
  std::optional<std::uint64_t> q_;
  std::vector<PrefixTerm> prefix_;
  std::vector<double> poly_;  // poly_[r], r >= 1
  std::vector<Factor> factors_;
  std::optional<CountSequence> counts_;
  int r0_ = 1;

  void build(const std::vector<SpectralFactor>& factors, const ModelOptions& opt);
  void fit_poly_and_check();
};

cplx eval_T(cplx w, const SpectralData& data, const TruncationParams& trunc);
cplx eval_J_tilde(cplx z, cplx branch_log, const SpectralData& data, const TruncationParams& trunc);

ContinuationResult integrate_I(const PathSpec& path, const SpectralData& data, const TruncationParams& trunc);
ContinuationResult eval_F(const PathSpec& path, const SpectralData& data, const TruncationParams& trunc);
ContinuationResult eval_f(const PathSpec& path, const SpectralData& data, const TruncationParams& trunc);
/// branch_offset carries log Z along the path
ContinuationResult eval_zlog(const PathSpec& path, const ZlogModel& model);
cplx log_derivative(cplx z, const ZlogModel& model);

struct MonodromyResult {
  cplx value;
  RationalFit fit;  // of value / (2 pi i)
  bool rational = false;
  int enclosed = 0;
  double error = 0.0;
};
MonodromyResult monodromy_loop(cplx center, double radius, const SpectralData& data, const TruncationParams& trunc);

struct ResidueResult {
  cplx residue;
  RationalFit fit;
  int order = 1;
  double radius = 0.0;
};
ResidueResult residue_estimate(cplx pole, const ZlogModel& model);

std::vector<cplx> locate_weil_poles(const ZlogModel& model);

}  // namespace zlog
