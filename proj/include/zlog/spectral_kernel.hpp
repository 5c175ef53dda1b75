#pragma once

#include <vector>

#include "zlog/common.hpp"
#include "zlog/motive_data.hpp"
#include "zlog/pseudo_divisor.hpp"

namespace zlog {

/// One pole term of J~: coefficient c at E = exp(kappa), kappa reduced mod 2 pi i.
struct KernelTerm {
  cplx kappa;
  cplx E;
  double c = 0.0;
  cplx A;  // c E^{r0}
  int level = 0;
};

/// Precomputed level expansion of a spectral datum at fixed truncation.
///   T(w)  = 1/2 L0 e^{-w r0} + sum c e^{r0(kappa-w)} 1/2 coth((kappa-w)/2)
///   J~(z) = T(-Log z), single valued, simple poles at z = 1/E with J~/z residue c.
class SpectralKernel {
 public:
  SpectralKernel() = default;
  SpectralKernel(const SpectralData& data, const TruncationParams& tp);

  const SpectralData& data() const { return data_; }
  const TruncationParams& trunc() const { return tp_; }
  const std::vector<KernelTerm>& terms() const { return terms_; }
  int r0() const { return tp_.r0; }
  cplx L0() const { return L0_; }
  bool empty() const { return terms_.empty() && data_.items.empty(); }

  cplx T(cplx w) const;
  cplx J_tilde(cplx z) const;
  // 1/2 (J~(z) + conj J~(conj z)): the kernel of the conjugate datum added in
  cplx J_sym(cplx z) const;

  // sum_{r>=r0} log(1 - S_r) z^r (/ r); valid for |z| < 1
  cplx series_J(cplx z) const;
  cplx series_I(cplx z) const;
  // sum_{r>=r0} log|1 - S_r| z^r / r
  cplx series_I_sym(cplx z) const;

  double tail_bound(double radius) const;
  // distance from w to the truncated support of P^per
  double distance_w(cplx w) const;
  // the poles z = 1/E of J~ with |z| <= radius
  std::vector<SupportPoint> poles(double radius) const;
  // poles of J_sym: the above plus their conjugates
  std::vector<SupportPoint> sym_poles(double radius) const;

 private:
  SpectralData data_;
  TruncationParams tp_;
  std::vector<KernelTerm> terms_;
  cplx L0_;
  double M1_ = 0.0, mu_ = 0.0;
  std::vector<cplx> log_terms_;  // log(1 - S_r), zero below r0
  int series_len(double radius) const;
  cplx log_term(int r) const;
};

}  // namespace zlog
