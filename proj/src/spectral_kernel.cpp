#include "zlog/spectral_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace zlog {

namespace {

// 1/2 coth(x/2) = 1/2 (1 + e^{-x}) / (1 - e^{-x}), stable for large |Re x|
cplx half_coth_half(cplx x) {
  if (x.real() >= 0) {
    const cplx e = std::exp(-x);
    return 0.5 * (1.0 + e) / (1.0 - e);
  }
  const cplx e = std::exp(x);
  return -0.5 * (1.0 + e) / (1.0 - e);
}

}  // namespace

SpectralKernel::SpectralKernel(const SpectralData& data, const TruncationParams& tp) : data_(data), tp_(tp) {
  data_.validate();
  for (const auto& it : data_.items) {
    M1_ += std::abs(it.eps);
    mu_ = std::max(mu_, std::abs(it.lambda));
  }
  L0_ = std::log(1.0 - data_.S(static_cast<double>(tp_.r0)));
  if (data_.items.empty()) return;
  const int n = series_len(0.6);
  for (int r = 0; r <= n; ++r) log_terms_.push_back(r < tp_.r0 ? cplx(0) : std::log(1.0 - data_.S(double(r))));
  for (const auto& t : enumerate_level_terms(data_, tp_.L_max, true)) {
    if (t.infinite) throw NumericError("level expansion does not stabilize at a support point");
    KernelTerm k;
    k.kappa = t.kappa;
    k.E = std::exp(t.kappa);
    k.c = t.coeff;
    k.A = k.c * std::exp(static_cast<double>(tp_.r0) * t.kappa);
    k.level = t.level;
    terms_.push_back(k);
  }
}

cplx SpectralKernel::T(cplx w) const {
  if (data_.items.empty()) return 0.0;
  const double r0 = tp_.r0;
  cplx s = 0.5 * L0_ * std::exp(-w * r0);
  for (const auto& t : terms_) s += t.c * std::exp(r0 * (t.kappa - w)) * half_coth_half(t.kappa - w);
  return s;
}

cplx SpectralKernel::J_tilde(cplx z) const {
  if (data_.items.empty() || z == 0.0) return 0.0;
  const cplx zr = std::pow(z, tp_.r0);
  cplx s = 0.5 * L0_;
  for (const auto& t : terms_) {
    const cplx Ez = t.E * z;
    s += 0.5 * t.A * (1.0 + Ez) / (Ez - 1.0);
  }
  return zr * s;
}

cplx SpectralKernel::J_sym(cplx z) const { return 0.5 * (J_tilde(z) + std::conj(J_tilde(std::conj(z)))); }

int SpectralKernel::series_len(double radius) const {
  // |log(1 - S_r)| <= 2 M1 mu^r once |S_r| < 1/2
  if (data_.items.empty() || radius == 0.0) return tp_.r0;
  const double x = mu_ * radius;
  if (!(x < 1.0)) throw NumericError("power series evaluated outside its disc of convergence");
  int r = tp_.r0;
  while (2.0 * M1_ * std::pow(x, r) > 1e-18 && r < 100000) ++r;
  return r;
}

cplx SpectralKernel::log_term(int r) const {
  if (static_cast<std::size_t>(r) < log_terms_.size()) return log_terms_[static_cast<std::size_t>(r)];
  return std::log(1.0 - data_.S(static_cast<double>(r)));
}

cplx SpectralKernel::series_J(cplx z) const {
  if (data_.items.empty()) return 0.0;
  const int R = series_len(std::abs(z));
  cplx s = 0;
  for (int r = R; r >= tp_.r0; --r) s = s * z + log_term(r);
  return s * std::pow(z, tp_.r0);
}

cplx SpectralKernel::series_I(cplx z) const {
  if (data_.items.empty()) return 0.0;
  const int R = series_len(std::abs(z));
  cplx s = 0;
  for (int r = R; r >= tp_.r0; --r) s = s * z + log_term(r) / double(r);
  return s * std::pow(z, tp_.r0);
}

cplx SpectralKernel::series_I_sym(cplx z) const {
  if (data_.items.empty()) return 0.0;
  const int R = series_len(std::abs(z));
  cplx s = 0;
  for (int r = R; r >= tp_.r0; --r) s = s * z + log_term(r).real() / double(r);
  return s * std::pow(z, tp_.r0);
}

double SpectralKernel::tail_bound(double radius) const {
  return level_tail_bound(data_, tp_.r0, tp_.L_max, radius);
}

double SpectralKernel::distance_w(cplx w) const {
  double best = INFINITY;
  for (const auto& t : terms_) {
    const cplx d = t.kappa - w;
    best = std::min(best, std::abs(cplx(d.real(), std::remainder(d.imag(), kTwoPi))));
  }
  return best;
}

std::vector<SupportPoint> SpectralKernel::poles(double radius) const {
  std::vector<SupportPoint> out;
  for (const auto& t : terms_) {
    const cplx z = 1.0 / t.E;
    if (std::abs(z) <= radius) out.push_back({z, t.c, false, t.level, 1});
  }
  return out;
}

std::vector<SupportPoint> SpectralKernel::sym_poles(double radius) const {
  std::vector<SupportPoint> out = poles(radius);
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    SupportPoint p = out[i];
    p.location = std::conj(p.location);
    out.push_back(p);
  }
  return out;
}

}  // namespace zlog
