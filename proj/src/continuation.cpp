#include "zlog/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "zlog/quadrature.hpp"

namespace zlog {

// ---------------------------------------------------------------- paths

PathSpec PathSpec::straight(cplx z, double clearance) {
  PathSpec p;
  p.clearance = clearance;
  if (z != 0.0) p.vertices.push_back(z);
  return p;
}

PathSpec PathSpec::through(std::vector<cplx> pts, double clearance) {
  PathSpec p;
  p.clearance = clearance;
  p.vertices.clear();
  if (pts.empty() || pts.front() != 0.0) p.vertices.push_back(0.0);
  for (cplx z : pts) p.vertices.push_back(z);
  return p;
}

double PathSpec::length() const {
  double s = 0;
  for (std::size_t i = 1; i < vertices.size(); ++i) s += std::abs(vertices[i] - vertices[i - 1]);
  return s;
}

void PathSpec::validate() const {
  if (vertices.empty() || vertices.front() != 0.0) throw ValidationError("path must start at 0");
  for (std::size_t i = 1; i < vertices.size(); ++i)
    if (vertices[i] == vertices[i - 1]) throw ValidationError("path has repeated consecutive vertices");
  if (!(clearance > 0)) throw ValidationError("path clearance must be positive");
}

PathSpec parse_path(const std::string& text, double clearance) {
  std::vector<cplx> pts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';'))
    if (!part.empty()) pts.push_back(parse_complex(part));
  if (pts.empty()) throw ValidationError("empty path");
  return PathSpec::through(pts, clearance);
}

namespace {

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double t = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double max_abs(const PathSpec& path) {
  double m = 0;
  for (cplx v : path.vertices) m = std::max(m, std::abs(v));
  return m;
}

void check_clearance(const PathSpec& path, const std::vector<SupportPoint>& sing) {
  for (std::size_t i = 1; i < path.vertices.size(); ++i)
    for (const auto& s : sing) {
      const double d = segment_distance(s.location, path.vertices[i - 1], path.vertices[i]);
      if (d < path.clearance)
        throw NumericError("path passes within " + format_double(d) + " of the singular point " +
                           format_complex(s.location) + " (clearance " + format_double(path.clearance) + ")");
    }
}

struct PathIntegral {
  cplx value;
  double error = 0.0;
  double tail_length = 0.0;  // length travelled outside the series disc
};

// series_at(P): antiderivative inside the disc, 0 at 0; integrand used beyond it
PathIntegral path_integral(const PathSpec& path, const std::function<cplx(cplx)>& series_at,
                           const std::function<cplx(cplx)>& integrand) {
  PathIntegral out;
  const auto& v = path.vertices;
  std::size_t i = 1;
  cplx exit = 0;
  bool left = false;
  for (; i < v.size(); ++i) {
    if (std::abs(v[i]) <= kSeriesDisc) {
      exit = v[i];
      continue;
    }
    const cplx a = v[i - 1], d = v[i] - v[i - 1];
    const double A = std::norm(d), B = 2 * (std::conj(a) * d).real(), C = std::norm(a) - kSeriesDisc * kSeriesDisc;
    const double t = (-B + std::sqrt(std::max(0.0, B * B - 4 * A * C))) / (2 * A);
    exit = a + std::clamp(t, 0.0, 1.0) * d;
    left = true;
    break;
  }
  out.value = series_at(exit);
  if (!left) return out;
  std::vector<cplx> rest{exit};
  for (; i < v.size(); ++i)
    if (v[i] != rest.back()) rest.push_back(v[i]);
  for (std::size_t k = 1; k < rest.size(); ++k) {
    const QuadResult q = integrate_segment(integrand, rest[k - 1], rest[k], kQuadTol, 20000);
    if (!q.converged)
      throw NumericError("quadrature did not converge on segment " + format_complex(rest[k - 1]) + " -> " +
                         format_complex(rest[k]) + " (error " + format_double(q.error) + ")");
    out.value += q.value;
    out.error += q.error;
    out.tail_length += std::abs(rest[k] - rest[k - 1]);
  }
  return out;
}

std::vector<cplx> roots_of(cplx u, int s) {
  std::vector<cplx> out;
  const double r = std::pow(std::abs(u), 1.0 / s);
  const double th = std::arg(u) / s;
  for (int k = 0; k < s; ++k) out.push_back(std::polar(r, th + kTwoPi * k / s));
  return out;
}

// exact polynomial through the closed-form counts, coefficients in Q = q^r (low first)
std::vector<BigRational> count_polynomial(const FamilyParams& params) {
  auto value = [&](int x) { return BigRational(count_closed_form(params, static_cast<std::uint64_t>(x), 1)); };
  for (int npts = 1; npts <= 64; ++npts) {
    std::vector<BigRational> xs, coef;
    for (int i = 0; i < npts; ++i) {
      xs.emplace_back(i + 2);
      coef.push_back(value(i + 2));
    }
    for (int j = 1; j < npts; ++j)
      for (int i = npts - 1; i >= j; --i) coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
    // Newton form -> monomial basis
    std::vector<BigRational> poly(1, coef[npts - 1]);
    for (int k = npts - 2; k >= 0; --k) {
      std::vector<BigRational> next(poly.size() + 1, BigRational(0));
      for (std::size_t t = 0; t < poly.size(); ++t) {
        next[t + 1] += poly[t];
        next[t] -= poly[t] * xs[k];
      }
      next[0] += coef[k];
      poly = std::move(next);
    }
    while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
    bool ok = true;
    for (int x = npts + 2; x < npts + 5 && ok; ++x) {
      BigRational acc = 0;
      for (std::size_t t = poly.size(); t-- > 0;) acc = acc * x + poly[t];
      ok = acc == value(x);
    }
    if (ok) return poly;
  }
  throw ValidationError("closed form is not a polynomial in q of degree < 64");
}

}  // namespace

// ---------------------------------------------------------------- models

void ZlogModel::build(const std::vector<SpectralFactor>& factors, const ModelOptions& opt) {
  int r0 = 1;
  for (const auto& f : factors) {
    if (f.data.items.empty()) continue;
    r0 = std::max(r0, select_truncation(f.data, opt.K, std::pow(opt.eval_radius, f.power)).r0);
  }
  if (opt.r0 > 0) {
    if (opt.r0 < r0) throw ValidationError("requested r0 " + std::to_string(opt.r0) + " is below the certified " + std::to_string(r0));
    r0 = opt.r0;
  }
  r0_ = r0;
  factors_.clear();
  for (const auto& f : factors) {
    if (f.data.items.empty()) continue;
    if (f.power < 1) throw ValidationError("factor power must be >= 1");
    Factor g;
    g.data = f.data;
    g.power = f.power;
    g.weight = f.weight;
    const auto tp = truncation_for_r0(f.data, r0, opt.K, std::pow(opt.eval_radius, f.power));
    g.kernel = std::make_shared<const SpectralKernel>(f.data, tp);
    factors_.push_back(std::move(g));
  }
}

double ZlogModel::log_coefficient(int r) const {
  double c = 0;
  if (r >= 1 && static_cast<std::size_t>(r) < poly_.size()) c += poly_[static_cast<std::size_t>(r)];
  for (const auto& p : prefix_) {
    if (r % p.power != 0) continue;
    if (p.kind == PrefixTerm::Kind::geometric)
      c += p.coeff;
    else
      c -= p.coeff / (r / p.power);
  }
  for (const auto& f : factors_) {
    if (r % f.power != 0) continue;
    const int k = r / f.power;
    if (k < r0_) continue;
    c += f.weight * std::log(std::abs(1.0 - f.data.S(static_cast<double>(k)))) / k;
  }
  return c;
}

void ZlogModel::fit_poly_and_check() {
  if (!counts_) return;
  int Rp = 1;
  for (const auto& f : factors_) Rp = std::max(Rp, f.power * r0_);
  const int avail = static_cast<int>(counts_->size());
  if (avail < Rp) throw ValidationError("model needs at least " + std::to_string(Rp) + " counts");
  auto target = [&](int r) {
    const BigRational& n = counts_->at(r);
    if (n == 0) throw ValidationError("N_" + std::to_string(r) + " = 0: Z_log is undefined for this model");
    return log_abs(n) / r;
  };
  poly_.assign(static_cast<std::size_t>(Rp), 0.0);
  for (int r = 1; r < Rp; ++r) poly_[static_cast<std::size_t>(r)] = target(r) - log_coefficient(r);
  for (int r = Rp; r <= std::min(64, avail); ++r) {
    const double t = target(r);
    if (std::abs(t - log_coefficient(r)) > 1e-9 * std::max(1.0, std::abs(t)))
      throw ValidationError("model does not reproduce log N_" + std::to_string(r) + ": " + format_double(t) +
                            " vs " + format_double(log_coefficient(r)));
  }
}

ZlogModel ZlogModel::raw(const std::vector<PrefixTerm>& prefix, const std::vector<SpectralFactor>& factors,
                         const std::optional<CountSequence>& counts, const ModelOptions& opt,
                         std::optional<std::uint64_t> q) {
  ZlogModel m;
  m.kind_ = "raw";
  m.q_ = q;
  for (const auto& p : prefix)
    if (p.power < 1) throw ValidationError("prefix power must be >= 1");
  m.prefix_ = prefix;
  m.counts_ = counts;
  m.build(factors, opt);
  m.fit_poly_and_check();
  return m;
}

ZlogModel ZlogModel::abelian(const WeilNumberSet& weil, const ModelOptions& opt) {
  if (!weil.abelian()) throw ValidationError("abelian model needs an abelian Weil set");
  const auto dec = spectral_from_weil(weil, -1);
  ZlogModel m = raw({{PrefixTerm::Kind::geometric, dec.prefix_rate, 1}}, dec.factors, weil_counts(weil, 64), opt,
                    weil.q());
  m.kind_ = "abelian";
  return m;
}

ZlogModel ZlogModel::motive(const WeilNumberSet& weil, int top_m, const ModelOptions& opt) {
  const auto dec = spectral_from_weil(weil, top_m);
  ZlogModel m = raw({{PrefixTerm::Kind::geometric, dec.prefix_rate, 1}}, dec.factors, weil_counts(weil, 64), opt,
                    weil.q());
  m.kind_ = "motive";
  return m;
}

ZlogModel ZlogModel::lambda_n(int n, std::uint64_t q, const ModelOptions& opt) {
  if (n < 1 || q < 2) throw ValidationError("lambda_n needs n >= 1 and q >= 2");
  CountSequence cs;
  cs.q = q;
  cs.source = CountSequence::Source::closed_form;
  cs.family = "lambda";
  const BigInt Q = q;
  for (int r = 1; r <= 64; ++r) cs.values.emplace_back(BigInt(pow(Q, n * r)) - 1);
  SpectralFactor f;
  f.data.items.push_back({1.0, std::pow(static_cast<double>(q), -n)});
  f.data.q = q;
  ZlogModel m = raw({{PrefixTerm::Kind::geometric, n * std::log(static_cast<double>(q)), 1}}, {f}, cs, opt, q);
  m.kind_ = "lambda";
  return m;
}

ZlogModel ZlogModel::family(const FamilyParams& params, std::uint64_t q, const ModelOptions& opt) {
  const auto poly = count_polynomial(params);
  const std::size_t d = poly.size() - 1;
  const BigRational lead = poly[d];
  if (lead <= 0) throw ValidationError("family count polynomial has non-positive leading coefficient");
  const double logq = std::log(static_cast<double>(q));
  std::vector<PrefixTerm> prefix;
  if (d > 0) prefix.push_back({PrefixTerm::Kind::geometric, static_cast<double>(d) * logq, 1});
  if (lead != 1) prefix.push_back({PrefixTerm::Kind::logarithmic, -log_abs(lead), 1});
  SpectralFactor f;
  f.data.q = q;
  for (std::size_t i = 0; i < d; ++i)
    if (poly[i] != 0)
      f.data.items.push_back({-to_double(poly[i] / lead), std::pow(static_cast<double>(q), static_cast<double>(i) - d)});
  ZlogModel m = raw(prefix, {f}, closed_form_counts(params, q, 64), opt, q);
  m.kind_ = "family";
  return m;
}

int ZlogModel::L_max() const {
  int L = 8;
  for (const auto& f : factors_) L = std::max(L, f.kernel->trunc().L_max);
  return L;
}

std::vector<SupportPoint> ZlogModel::singularities(double radius) const {
  std::vector<SupportPoint> out;
  std::vector<int> powers;
  for (const auto& p : prefix_) powers.push_back(p.power);
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
  for (int s : powers)
    if (radius >= 1.0)
      for (cplx z : roots_of(1.0, s)) out.push_back({z, 0.0, false, 0, 1});
  for (const auto& f : factors_)
    for (const auto& p : f.kernel->sym_poles(std::pow(radius, f.power)))
      for (cplx z : roots_of(p.location, f.power)) out.push_back({z, p.multiplicity, false, p.level, 1});
  return out;
}

double ZlogModel::tail_bound(double radius) const {
  double b = 0;
  for (const auto& f : factors_) b += std::abs(f.weight) * f.power * f.kernel->tail_bound(std::pow(radius, f.power));
  return b;
}

// ---------------------------------------------------------------- evaluators

cplx eval_T(cplx w, const SpectralData& data, const TruncationParams& trunc) {
  SpectralKernel k(data, trunc);
  if (data.items.empty()) return 0.0;
  const double d = k.distance_w(w);
  if (d < 1e-6) throw NumericError("w = " + format_complex(w) + " is within 1e-6 of the support of P^per");
  if (!std::isfinite(k.tail_bound(std::exp(-w.real()))))
    throw NumericError("level caps too small for the tail bound at w = " + format_complex(w));
  return k.T(w);
}

cplx eval_J_tilde(cplx z, cplx branch_log, const SpectralData& data, const TruncationParams& trunc) {
  if (z == 0.0) return 0.0;
  if (std::abs(std::exp(branch_log) - z) > 1e-9 * std::max(1.0, std::abs(z)))
    throw ValidationError("branch_log is not a logarithm of z");
  SpectralKernel k(data, trunc);
  if (data.items.empty()) return 0.0;
  for (const auto& p : k.poles(std::abs(z) + 1.0))
    if (std::abs(p.location - z) < 1e-6) throw NumericError("z is within 1e-6 of a pole " + format_complex(p.location));
  return k.T(-branch_log);
}

ContinuationResult integrate_I(const PathSpec& path, const SpectralData& data, const TruncationParams& trunc) {
  path.validate();
  SpectralKernel k(data, trunc);
  ContinuationResult res;
  if (data.items.empty() || path.vertices.size() == 1) return res;
  check_clearance(path, k.poles(max_abs(path) + path.clearance));
  const auto pi = path_integral(
      path, [&](cplx z) { return k.series_I(z); }, [&](cplx z) { return k.J_tilde(z) / z; });
  res.value = pi.value;
  res.branch_offset = pi.value;
  res.error_estimate = pi.error + k.tail_bound(max_abs(path)) * pi.tail_length / kSeriesDisc;
  return res;
}

ContinuationResult eval_F(const PathSpec& path, const SpectralData& data, const TruncationParams& trunc) {
  const auto I = integrate_I(path, data, trunc);
  ContinuationResult res;
  res.branch_offset = 0.5 * I.value;
  res.value = std::exp(res.branch_offset);
  res.error_estimate = std::abs(res.value) * 0.5 * I.error_estimate;
  return res;
}

ContinuationResult eval_f(const PathSpec& path, const SpectralData& data, const TruncationParams& trunc) {
  path.validate();
  SpectralKernel k(data, trunc);
  ContinuationResult res;
  res.value = 1.0;
  if (data.items.empty() || path.vertices.size() == 1) return res;
  check_clearance(path, k.sym_poles(max_abs(path) + path.clearance));
  const auto pi = path_integral(
      path, [&](cplx z) { return k.series_I_sym(z); }, [&](cplx z) { return k.J_sym(z) / z; });
  res.branch_offset = pi.value;
  res.value = std::exp(pi.value);
  res.error_estimate = std::abs(res.value) * (pi.error + k.tail_bound(max_abs(path)) * pi.tail_length / kSeriesDisc);
  return res;
}

ContinuationResult eval_zlog(const PathSpec& path, const ZlogModel& model) {
  path.validate();
  ContinuationResult res;
  const cplx z = path.end();
  check_clearance(path, model.singularities(max_abs(path) + path.clearance));

  cplx log_z = 0;
  for (const auto& p : model.prefix())
    if (p.kind == PrefixTerm::Kind::geometric) {
      const cplx u = std::pow(z, p.power);
      log_z += p.coeff * u / (1.0 - u);
    }
  const auto& poly = model.poly();
  for (std::size_t r = poly.size(); r-- > 1;) log_z += poly[r] * std::pow(z, static_cast<int>(r));

  auto series_at = [&](cplx w) {
    cplx s = 0;
    for (const auto& p : model.prefix())
      if (p.kind == PrefixTerm::Kind::logarithmic) s += p.coeff * std::log(1.0 - std::pow(w, p.power));
    for (const auto& f : model.factors()) s += f.weight * f.kernel->series_I_sym(std::pow(w, f.power));
    return s;
  };
  auto integrand = [&](cplx w) {
    cplx s = 0;
    for (const auto& p : model.prefix())
      if (p.kind == PrefixTerm::Kind::logarithmic) {
        const cplx u = std::pow(w, p.power);
        s -= p.coeff * static_cast<double>(p.power) * u / (w * (1.0 - u));
      }
    for (const auto& f : model.factors())
      s += f.weight * static_cast<double>(f.power) * f.kernel->J_sym(std::pow(w, f.power)) / w;
    return s;
  };
  double err = 0;
  if (path.vertices.size() > 1) {
    const auto pi = path_integral(path, series_at, integrand);
    log_z += pi.value;
    err = pi.error + model.tail_bound(max_abs(path)) * pi.tail_length / kSeriesDisc;
  }
  res.branch_offset = log_z;
  res.value = std::exp(log_z);
  res.error_estimate = std::abs(res.value) * err;
  return res;
}

cplx log_derivative(cplx z, const ZlogModel& model) {
  for (const auto& s : model.singularities(std::abs(z) + 1.0))
    if (std::abs(s.location - z) < 1e-12 * std::max(1.0, std::abs(z)))
      throw NumericError("log_derivative evaluated exactly at the singular point " + format_complex(s.location));
  cplx d = 0;
  for (const auto& p : model.prefix()) {
    const double s = p.power;
    const cplx zs1 = std::pow(z, p.power - 1), u = zs1 * z;
    if (p.kind == PrefixTerm::Kind::geometric)
      d += p.coeff * s * zs1 / ((1.0 - u) * (1.0 - u));
    else
      d -= p.coeff * s * zs1 / (1.0 - u);
  }
  const auto& poly = model.poly();
  for (std::size_t r = poly.size(); r-- > 1;) d += static_cast<double>(r) * poly[r] * std::pow(z, static_cast<int>(r) - 1);
  if (z != 0.0)
    for (const auto& f : model.factors())
      d += f.weight * static_cast<double>(f.power) * f.kernel->J_sym(std::pow(z, f.power)) / z;
  return d;
}

MonodromyResult monodromy_loop(cplx center, double radius, const SpectralData& data, const TruncationParams& trunc) {
  if (!(radius > 0)) throw ValidationError("loop radius must be positive");
  SpectralKernel k(data, trunc);
  MonodromyResult res;
  for (const auto& p : k.poles(std::abs(center) + 2 * radius)) {
    const double d = std::abs(p.location - center);
    if (std::abs(d - radius) < 0.1 * radius)
      throw NumericError("loop passes within 10% of its radius of the pole " + format_complex(p.location));
    if (d < radius) ++res.enclosed;
  }
  if (res.enclosed > 1) throw NumericError("loop encloses " + std::to_string(res.enclosed) + " poles");
  const QuadResult q = integrate_circle([&](cplx w) { return w == 0.0 ? cplx(0) : k.J_tilde(w) / w; }, center,
                                        radius, 1e-12, 1 << 18);
  if (!q.converged) throw NumericError("contour quadrature did not converge");
  res.value = q.value;
  res.error = q.error;
  const cplx ratio = q.value / cplx(0, kTwoPi);
  res.fit = nearest_rational(ratio.real(), trunc.L_max);
  res.rational = res.fit.error < 1e-6 && std::abs(ratio.imag()) < 1e-6;
  return res;
}

ResidueResult residue_estimate(cplx pole, const ZlogModel& model) {
  const auto sing = model.singularities(std::abs(pole) + 1.0);
  const double scale = std::max(1.0, std::abs(pole));
  double near = INFINITY, other = INFINITY;
  for (const auto& s : sing) {
    const double d = std::abs(s.location - pole);
    if (d < 1e-6 * scale)
      near = std::min(near, d);
    else
      other = std::min(other, d);
  }
  if (!std::isfinite(near))
    throw ValidationError("no singular point of the model within 1e-6 of " + format_complex(pole));
  ResidueResult res;
  res.radius = std::min(1e-3 * scale, 0.3 * other);
  const auto Lz = [&](cplx z) { return log_derivative(z, model); };
  double mags[4] = {0, 0, 0, 0};
  cplx moments[4];
  for (int kk = 1; kk <= 3; ++kk) {
    const QuadResult q = integrate_circle([&](cplx z) { return Lz(z) * std::pow(z - pole, kk - 1); }, pole,
                                          res.radius, 1e-13 * std::pow(res.radius, kk - 1), 1 << 14);
    moments[kk] = q.value / cplx(0, kTwoPi);
    mags[kk] = std::abs(moments[kk]) / std::pow(res.radius, kk);
  }
  const double top = std::max({mags[1], mags[2], mags[3]});
  int order = 0;
  for (int kk = 1; kk <= 3; ++kk)
    if (mags[kk] > 1e-6 * top) order = kk;
  res.order = order;
  if (order != 1)
    throw OrderMismatch(order, "singularity at " + format_complex(pole) + " has order " + std::to_string(order) +
                                   ", not a simple pole");
  res.residue = moments[1];
  res.fit = nearest_rational(res.residue.real(), model.L_max());
  return res;
}

std::vector<cplx> locate_weil_poles(const ZlogModel& model) {
  if (!model.q()) throw ValidationError("locate_weil_poles needs a model with known q");
  const double sq = std::sqrt(static_cast<double>(*model.q()));
  std::vector<cplx> cand;
  for (const auto& f : model.factors())
    for (const auto& p : f.kernel->sym_poles(std::pow(sq * 1.01, f.power)))
      for (cplx z : roots_of(p.location, f.power))
        if (std::abs(std::abs(z) - sq) < 1e-6 * sq) {
          bool dup = false;
          for (cplx c : cand) dup = dup || std::abs(c - z) < 1e-9 * sq;
          if (!dup) cand.push_back(z);
        }
  std::vector<cplx> out;
  for (cplx z : cand) {
    try {
      const auto r = residue_estimate(z, model);
      if (std::abs(r.residue) > 1e-6) out.push_back(z);
    } catch (const OrderMismatch&) {
    }
  }
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace zlog
