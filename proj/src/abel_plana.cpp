#include "zlog/abel_plana.hpp"

#include <cmath>

#include "zlog/pseudo_divisor.hpp"
#include "zlog/quadrature.hpp"

namespace zlog {

namespace {

constexpr double kLogTwo = 0.69314718055994530942;  // sup |log(1 - S)| for |S| < 1/2

// level count so the geometric tail (rate rho) is below 1e-15
int levels_for(const SpectralData& data, double a, double K) {
  double rho = 0;
  for (const auto& it : data.items)
    rho += std::abs(it.eps) * std::pow(std::abs(it.lambda), a) * std::exp(K * std::abs(std::arg(it.lambda)));
  if (!(rho < 1.0)) throw NumericError("level series does not converge at a = " + format_double(a));
  int L = 1;
  while (std::pow(rho, L + 1) / (1 - rho) > 1e-15 && L < 400) ++L;
  return L;
}

int j_terms(double y_min) { return std::max(1, static_cast<int>(std::ceil(40.0 / (kTwoPi * y_min)))); }

cplx exp_over(cplx s, cplx beta) {
  if (std::abs(beta) < 1e-6) throw NumericError("w is within 1e-6 of a support point");
  return std::exp(s * beta) / beta;
}

double infinite_cut(double a, cplx w, double K, double scale, double tol) {
  if (!(w.real() > 0)) throw ValidationError("integrals to infinity need Re w > 0");
  const double bound = kLogTwo * std::exp(K * std::abs(w.imag())) * scale / w.real();
  return std::max(a + 1.0, a + std::log(bound / (tol * 1e-2)) / w.real());
}

}  // namespace

cplx BoxFunction::operator()(cplx r) const { return std::log(1.0 - data.S(r)) * std::exp(-w * r); }

cplx quad_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, double tol) {
  const QuadResult q = integrate_segment(f, a, b, tol, 20000);
  if (!q.converged)
    throw NumericError("quadrature did not reach tolerance " + format_double(tol) + " (estimate " +
                       format_double(q.error) + ")");
  return q.value;
}

VerifyReport verify_box_identity(const BoxFunction& h, int a, int b, double tol) {
  if (a < h.trunc.r0 || a < 1 || b <= a) throw ValidationError("box identity needs max(1, r0) <= a < b");
  const double K = h.trunc.K;
  VerifyReport rep;
  rep.kind = "box";
  cplx lhs = 0;
  for (int r = a; r <= b; ++r) lhs += h(static_cast<double>(r));
  auto vertical = [&](double u) {
    return integrate_real(
               [&](double y) { return (h(cplx(u, y)) - h(cplx(u, -y))) / std::expm1(kTwoPi * y); }, 0.0, K, tol,
               20000)
        .value;
  };
  const cplx iK(0, K);
  cplx rhs = 0.5 * h(double(a)) + 0.5 * h(double(b));
  rhs += quad_segment([&](cplx s) { return h(s); }, double(a), double(b), tol);
  rhs += cplx(0, 1) * vertical(a) - cplx(0, 1) * vertical(b);
  rhs -= quad_segment([&](cplx s) { return h(s) / (1.0 - std::exp(cplx(0, -kTwoPi) * s)); }, double(a) + iK, double(b) + iK, tol);
  rhs += quad_segment([&](cplx s) { return h(s) / (std::exp(cplx(0, kTwoPi) * s) - 1.0); }, double(a) - iK, double(b) - iK, tol);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.discrepancy = std::abs(lhs - rhs);
  return rep;
}

StepKind parse_step_kind(const std::string& s) {
  if (s == "V_plus") return StepKind::V_plus;
  if (s == "V_minus") return StepKind::V_minus;
  if (s == "real_axis") return StepKind::real_axis;
  if (s == "H_plus") return StepKind::H_plus;
  if (s == "H_minus") return StepKind::H_minus;
  throw ValidationError("unknown step integral kind '" + s + "'");
}

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::V_plus: return "V_plus";
    case StepKind::V_minus: return "V_minus";
    case StepKind::real_axis: return "real_axis";
    case StepKind::H_plus: return "H_plus";
    case StepKind::H_minus: return "H_minus";
  }
  return "?";
}

VerifyReport verify_step_integrals(StepKind kind, const SpectralData& data, cplx w, const TruncationParams& trunc,
                                   const StepParams& p) {
  const int a = p.a > 0 ? p.a : trunc.r0;
  if (a < trunc.r0) throw ValidationError("step integrals need a >= r0");
  if (p.b && *p.b <= a) throw ValidationError("step integrals need b > a");
  const double K = trunc.K;
  const BoxFunction h{data, w, trunc};
  VerifyReport rep;
  rep.kind = step_kind_name(kind);
  const cplx I(0, 1);
  const bool finite = p.b.has_value();
  const double b = finite ? double(*p.b) : 0.0;

  if (kind == StepKind::H_plus || kind == StepKind::H_minus) {
    if (!(p.eps > 0 && p.eps < K)) throw ValidationError("H integrals need 0 < eps < K");
    const double sg = kind == StepKind::H_plus ? 1.0 : -1.0;
    const double u = a;
    rep.lhs = sg * I *
              integrate_real([&](double y) { return h(cplx(u, sg * y)) / std::expm1(kTwoPi * y); }, p.eps, K, p.tol,
                             20000)
                  .value;
    const int L = levels_for(data, u, K);
    const int J = j_terms(p.eps);
    cplx s = 0;
    for (const auto& t : enumerate_level_terms(data, L, false)) {
      const cplx d = t.kappa - w;
      cplx inner = 0;
      for (int j = 1; j <= J; ++j) {
        const cplx gamma = sg * I * d - kTwoPi * j;
        const cplx den = d + sg * cplx(0, kTwoPi * j);
        if (std::abs(den) < 1e-6) throw NumericError("w is within 1e-6 of a support point");
        inner += (std::exp(K * gamma) - std::exp(p.eps * gamma)) / den;
      }
      s -= t.coeff * std::exp(u * d) * inner;
    }
    rep.rhs = s;
    rep.discrepancy = std::abs(rep.lhs - rep.rhs);
    return rep;
  }

  if (kind == StepKind::real_axis) {
    const double end = finite ? b : infinite_cut(a, w, 0.0, 1.0, p.tol);
    rep.truncation_points.push_back(end);
    rep.lhs = quad_segment([&](cplx s) { return h(s); }, double(a), end, p.tol);
    const int L = levels_for(data, a, 0.0);
    cplx s = 0;
    for (const auto& t : enumerate_level_terms(data, L, false)) {
      const cplx beta = t.kappa - w;
      s += t.coeff * (exp_over(double(a), beta) - (finite ? exp_over(b, beta) : cplx(0)));
    }
    rep.rhs = s;
    rep.discrepancy = std::abs(rep.lhs - rep.rhs);
    return rep;
  }

  // V_plus / V_minus
  const double sg = kind == StepKind::V_plus ? 1.0 : -1.0;
  const cplx shift(0, sg * K);
  auto integrand = [&](cplx s) {
    return kind == StepKind::V_plus ? h(s) / (1.0 - std::exp(cplx(0, -kTwoPi) * s))
                                    : h(s) / (std::exp(cplx(0, kTwoPi) * s) - 1.0);
  };
  const double end = finite ? b : infinite_cut(a, w, K, 1.0 / (1.0 - std::exp(-kTwoPi * K)), p.tol);
  rep.truncation_points.push_back(end);
  rep.lhs = quad_segment(integrand, double(a) + shift, end + shift, p.tol);
  const int L = levels_for(data, a, K);
  const int J = j_terms(K);
  cplx s = 0;
  for (const auto& t : enumerate_level_terms(data, L, false))
    for (int j = 1; j <= J; ++j) {
      const cplx beta = t.kappa - w + cplx(0, sg * kTwoPi * j);
      const cplx upper = finite ? exp_over(b + shift, beta) : cplx(0);
      s += sg * t.coeff * (upper - exp_over(double(a) + shift, beta));
    }
  rep.rhs = s;
  rep.discrepancy = std::abs(rep.lhs - rep.rhs);
  return rep;
}

VerifyReport verify_classical(ClassicalTest test, cplx w) {
  VerifyReport rep;
  const cplx I(0, 1);
  std::function<cplx(cplx)> h;
  double b_max = 0;
  if (test == ClassicalTest::exp_decay) {
    if (!(w.real() > 0)) throw ValidationError("exp_decay needs Re w > 0");
    if (!(std::abs(w.imag()) < kTwoPi)) throw ValidationError("exp_decay needs |Im w| < 2 pi");
    rep.kind = "exp_decay";
    h = [w](cplx s) { return std::exp(-w * s); };
    rep.lhs = 1.0 / (1.0 - std::exp(-w));
    b_max = 45.0 / (kTwoPi - std::abs(w.imag()));
    const double x_max = 45.0 / w.real();
    rep.truncation_points = {x_max, b_max};
    rep.rhs = quad_segment(h, 0.0, x_max, 1e-14);
  } else {
    rep.kind = "inverse_square";
    h = [](cplx s) { return 1.0 / ((s + 1.0) * (s + 1.0)); };
    rep.lhs = kPi * kPi / 6.0;
    b_max = 45.0 / kTwoPi;
    rep.truncation_points = {INFINITY, b_max};
    rep.rhs = 1.0;  // int_0^inf (s+1)^{-2} ds
  }
  rep.rhs += 0.5 * h(0.0);
  rep.rhs += I * integrate_real([&](double b) { return (h(cplx(0, b)) - h(cplx(0, -b))) / std::expm1(kTwoPi * b); },
                                0.0, b_max, 1e-14, 20000)
                     .value;
  rep.discrepancy = std::abs(rep.lhs - rep.rhs);
  return rep;
}

}  // namespace zlog
