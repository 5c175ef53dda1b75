#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zlog/common.hpp"
#include "zlog/motive_data.hpp"

namespace zlog {

/// h(r) = log(1 - sum eps_i lambda_i^r) e^{-w r} on the box [r0, inf) x i[-K, K].
struct BoxFunction {
  SpectralData data;
  cplx w;
  TruncationParams trunc;

  cplx operator()(cplx r) const;
};

/// Adaptive quadrature along a straight segment; throws NumericError when tol is not met.
cplx quad_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, double tol);

struct VerifyReport {
  std::string kind;
  cplx lhs;  // sum side, or the quadrature value for step integrals
  cplx rhs;  // integral side, or the closed series
  double discrepancy = 0.0;
  std::vector<double> truncation_points;
};

/// |sum_{r=a}^b h(r) - (boundary terms + four side integrals)|.
VerifyReport verify_box_identity(const BoxFunction& h, int a, int b, double tol = 1e-12);

enum class StepKind { V_plus, V_minus, real_axis, H_plus, H_minus };
StepKind parse_step_kind(const std::string& s);
const char* step_kind_name(StepKind k);

struct StepParams {
  int a = 0;               // 0: use r0; for H kinds this is u
  std::optional<int> b;    // unset: b = infinity (needs Re w > 0)
  double eps = 0.25;       // lower y limit of the H integrals
  double tol = 1e-12;
};

VerifyReport verify_step_integrals(StepKind kind, const SpectralData& data, cplx w, const TruncationParams& trunc,
                                   const StepParams& p = {});

enum class ClassicalTest { exp_decay, inverse_square };
/// Classical Abel-Plana: sum_{n>=0} h(n) against int_0^inf h + h(0)/2 + i int_0^inf (h(ib)-h(-ib))/(e^{2 pi b}-1).
VerifyReport verify_classical(ClassicalTest test, cplx w = 1.0);

}  // namespace zlog
