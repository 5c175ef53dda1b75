#include "zlog/motive_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zlog {

namespace mp = boost::multiprecision;

namespace {

using PolyQ = std::vector<BigRational>;  // low degree first

void trim(PolyQ& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

PolyQ derivative(const PolyQ& f) {
  PolyQ d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
  trim(d);
  return d;
}

void divmod(const PolyQ& a, const PolyQ& b, PolyQ& quo, PolyQ& rem) {
  rem = a;
  trim(rem);
  quo.assign(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0, BigRational(0));
  while (rem.size() >= b.size() && !rem.empty()) {
    const BigRational c = rem.back() / b.back();
    const std::size_t shift = rem.size() - b.size();
    quo[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) rem[shift + i] -= c * b[i];
    rem.pop_back();
    trim(rem);
  }
  trim(quo);
}

PolyQ monic(PolyQ f) {
  trim(f);
  if (f.empty()) return f;
  const BigRational lead = f.back();
  for (auto& c : f) c /= lead;
  return f;
}

PolyQ gcd(PolyQ a, PolyQ b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyQ q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

PolyQ exact_div(const PolyQ& a, const PolyQ& b) {
  PolyQ q, r;
  divmod(a, b, q, r);
  return q;
}

PolyQ sub(PolyQ a, const PolyQ& b) {
  if (a.size() < b.size()) a.resize(b.size(), BigRational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// Yun's squarefree decomposition of a monic polynomial: pairs (factor, multiplicity)
std::vector<std::pair<PolyQ, int>> squarefree(const PolyQ& f) {
  std::vector<std::pair<PolyQ, int>> out;
  const PolyQ fp = derivative(f);
  PolyQ b = gcd(f, fp);
  PolyQ c = exact_div(f, b);
  PolyQ d = sub(exact_div(fp, b), derivative(c));
  int i = 1;
  while (c.size() > 1) {
    const PolyQ a = gcd(c, d);
    if (a.size() > 1) out.emplace_back(a, i);
    c = exact_div(c, a);
    d = sub(exact_div(d, a), derivative(c));
    ++i;
  }
  return out;
}

using lcplx = std::complex<long double>;

lcplx horner(const std::vector<long double>& f, lcplx x) {
  lcplx v = 0;
  for (std::size_t i = f.size(); i-- > 0;) v = v * x + f[i];
  return v;
}

// Aberth iteration for a monic squarefree polynomial, then Newton polish
std::vector<cplx> roots_of(const PolyQ& fq) {
  const int n = static_cast<int>(fq.size()) - 1;
  std::vector<long double> f(fq.size()), df;
  for (std::size_t i = 0; i < fq.size(); ++i) f[i] = static_cast<long double>(to_double(fq[i]));
  for (std::size_t i = 1; i < f.size(); ++i) df.push_back(f[i] * static_cast<long double>(i));
  if (n == 1) return {cplx(static_cast<double>(-f[0] / f[1]), 0.0)};

  long double radius = 0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::pow(std::abs(f[static_cast<std::size_t>(i)]), 1.0L / (n - i)));
  radius = std::max(radius, 1.0L);
  std::vector<lcplx> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    z[static_cast<std::size_t>(i)] = std::polar(radius, 2.0L * static_cast<long double>(kPi) * (i + 0.4L) / n);

  for (int iter = 0; iter < 500; ++iter) {
    long double change = 0;
    for (int i = 0; i < n; ++i) {
      const lcplx zi = z[static_cast<std::size_t>(i)];
      const lcplx ratio = horner(f, zi) / horner(df, zi);
      lcplx sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0L / (zi - z[static_cast<std::size_t>(j)]);
      const lcplx step = ratio / (1.0L - ratio * sum);
      z[static_cast<std::size_t>(i)] -= step;
      change = std::max(change, std::abs(step) / std::max(1.0L, std::abs(zi)));
    }
    if (change < 1e-17L) break;
  }
  std::vector<cplx> out;
  for (auto zi : z) {
    for (int k = 0; k < 3; ++k) {
      const lcplx d = horner(df, zi);
      if (std::abs(d) == 0) break;
      zi -= horner(f, zi) / d;
    }
    out.emplace_back(static_cast<double>(zi.real()), static_cast<double>(zi.imag()));
  }
  // snap tiny imaginary parts of real roots, order by (re, im)
  for (auto& r : out)
    if (std::abs(r.imag()) < 1e-13 * std::max(1.0, std::abs(r))) r = cplx(r.real(), 0.0);
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

int root_of_unity_order(cplx u) {
  if (std::abs(std::abs(u) - 1.0) > 1e-9) return 0;
  cplx pw = 1.0;
  for (int n = 1; n <= 720; ++n) {
    pw *= u;
    if (std::abs(pw - 1.0) < 1e-8) return n;
  }
  return 0;
}

std::vector<BigInt> poly_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out(a.size() + b.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

WeilBlock make_block(std::uint64_t q, int weight, std::vector<BigInt> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.size() < 2) throw ValidationError("Weil block: charpoly must have degree >= 1");
  if (coeffs.back() != 1) throw ValidationError("Weil block: charpoly must be monic");
  if (weight < 0) throw ValidationError("Weil block: weight must be >= 0");
  WeilBlock b;
  b.weight = weight;
  b.charpoly = coeffs;
  PolyQ fq;
  for (const auto& c : coeffs) fq.emplace_back(c);
  const double target = std::pow(static_cast<double>(q), weight / 2.0);
  for (const auto& [factor, mult] : squarefree(fq)) {
    for (cplx r : roots_of(factor)) {
      if (std::abs(std::abs(r) - target) > 1e-10 * target)
        throw ValidationError("Weil block: root " + format_complex(r) + " does not have absolute value q^{" +
                              std::to_string(weight) + "/2}");
      b.roots.push_back({r, weight, mult, root_of_unity_order(r / target)});
    }
  }
  return b;
}

}  // namespace

std::vector<BigInt> WeilBlock::power_sums(int kmax) const {
  // x^n + a_{n-1} x^{n-1} + ... + a_0
  const int n = degree();
  std::vector<BigInt> p(static_cast<std::size_t>(std::max(kmax, 0)) + 1, BigInt(0));
  p[0] = n;
  auto a = [&](int i) -> const BigInt& { return charpoly[static_cast<std::size_t>(i)]; };
  for (int k = 1; k <= kmax; ++k) {
    BigInt acc = 0;
    for (int i = 1; i <= std::min(k - 1, n); ++i) acc -= a(n - i) * p[static_cast<std::size_t>(k - i)];
    if (k <= n) acc -= BigInt(k) * a(n - k);
    p[static_cast<std::size_t>(k)] = acc;
  }
  return p;
}

BigInt WeilBlock::power_sum(int k) const { return power_sums(k)[static_cast<std::size_t>(k)]; }

WeilNumberSet WeilNumberSet::from_charpoly(std::uint64_t q, const std::vector<BigInt>& coeffs, int weight,
                                           bool abelian) {
  if (q < 2) throw ValidationError("Weil set: q must be >= 2");
  WeilNumberSet w;
  w.q_ = q;
  w.abelian_ = abelian;
  if (abelian && weight != 1) throw ValidationError("abelian Weil sets have weight 1");
  w.add_block(weight, coeffs);
  return w;
}

WeilNumberSet WeilNumberSet::from_entries(std::uint64_t q, const std::vector<WeilEntry>& entries) {
  if (q < 2) throw ValidationError("Weil set: q must be >= 2");
  WeilNumberSet w;
  w.q_ = q;
  std::vector<int> weights;
  for (const auto& e : entries) {
    if (e.multiplicity < 1) throw ValidationError("Weil entry: multiplicity must be >= 1");
    weights.push_back(e.weight);
  }
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
  for (int v : weights) {
    // expand prod (x - alpha)^mult numerically and round to integers
    std::vector<std::complex<long double>> poly{1.0L};
    for (const auto& e : entries) {
      if (e.weight != v) continue;
      for (int k = 0; k < e.multiplicity; ++k) {
        std::vector<std::complex<long double>> next(poly.size() + 1, 0.0L);
        const std::complex<long double> a(e.alpha.real(), e.alpha.imag());
        for (std::size_t i = 0; i < poly.size(); ++i) {
          next[i + 1] += poly[i];
          next[i] -= a * poly[i];
        }
        poly = std::move(next);
      }
    }
    std::vector<BigInt> coeffs;
    for (const auto& c : poly) {
      const long double re = std::round(c.real());
      if (std::abs(c.imag()) > 1e-6L * std::max(1.0L, std::abs(c)) ||
          std::abs(c.real() - re) > 1e-6L * std::max(1.0L, std::abs(c)))
        throw ValidationError("Weil entries of weight " + std::to_string(v) +
                              " are not conjugate-closed algebraic integers");
      coeffs.emplace_back(static_cast<long long>(re));
    }
    w.add_block(v, coeffs);
  }
  return w;
}

WeilNumberSet WeilNumberSet::curve_motive(std::uint64_t q, const std::vector<BigInt>& h1) {
  WeilNumberSet w;
  w.q_ = q;
  w.add_block(0, {BigInt(-1), BigInt(1)});
  w.add_block(1, h1);
  w.add_tate(1);
  return w;
}

void WeilNumberSet::add_block(int weight, const std::vector<BigInt>& coeffs) {
  if (q_ < 2) throw ValidationError("Weil set: q must be set before adding blocks");
  for (auto& b : blocks_) {
    if (b.weight == weight) {
      b = make_block(q_, weight, poly_mul(b.charpoly, coeffs));
      return;
    }
  }
  blocks_.push_back(make_block(q_, weight, coeffs));
  std::sort(blocks_.begin(), blocks_.end(), [](const WeilBlock& a, const WeilBlock& b) { return a.weight < b.weight; });
}

void WeilNumberSet::add_tate(int m) {
  BigInt qm = 1;
  for (int i = 0; i < m; ++i) qm *= q_;
  add_block(2 * m, {BigInt(-qm), BigInt(1)});
}

const WeilBlock& WeilNumberSet::block(int weight) const {
  for (const auto& b : blocks_)
    if (b.weight == weight) return b;
  throw ValidationError("Weil set has no eigenvalues of weight " + std::to_string(weight));
}

std::vector<WeilEntry> WeilNumberSet::entries() const {
  std::vector<WeilEntry> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.roots.begin(), b.roots.end());
  return out;
}

SpectralData SpectralData::conjugate() const {
  SpectralData c = *this;
  for (auto& it : c.items) it.lambda = std::conj(it.lambda);
  c.factors.clear();
  return c;
}

double SpectralData::M() const {
  double m = 0;
  for (const auto& it : items) m = std::max(m, std::abs(it.eps));
  return m;
}

void SpectralData::validate() const {
  for (const auto& it : items) {
    if (!(std::abs(it.lambda) < 1.0) || std::abs(it.lambda) == 0.0)
      throw ValidationError("spectral datum needs 0 < |lambda| < 1, got " + format_complex(it.lambda));
    if (it.eps == 0.0 || !std::isfinite(it.eps)) throw ValidationError("spectral datum needs eps != 0");
  }
}

cplx SpectralData::S(cplx r) const {
  cplx s = 0;
  for (const auto& it : items) s += it.eps * std::exp(r * std::log(it.lambda));
  return s;
}

double level_tail_bound(const SpectralData& data, int r0, int L, double radius) {
  if (data.items.empty()) return 0.0;
  double M1 = 0, mu = 0;
  for (const auto& it : data.items) {
    M1 += std::abs(it.eps);
    mu = std::max(mu, std::abs(it.lambda));
  }
  const double rho = M1 * std::pow(mu, r0);
  if (rho >= 1.0) return INFINITY;
  const double u = radius * std::pow(mu, L + 1);
  if (u >= 1.0) return INFINITY;
  const double lead = std::exp(r0 * std::log(std::max(radius, 1e-300)) + (L + 1) * std::log(rho));
  return lead / ((L + 1) * (1.0 - rho)) * 0.5 * (1.0 + u) / (1.0 - u);
}

TruncationParams truncation_for_r0(const SpectralData& data, int r0, double K, double eval_radius) {
  TruncationParams tp;
  tp.K = K;
  tp.r0 = r0;
  tp.M = data.M();
  tp.eval_radius = eval_radius;
  tp.J_max = std::max(8, static_cast<int>(std::ceil(40.0 / (kTwoPi * K))));
  if (data.items.empty()) {
    tp.L_max = 8;
    return tp;
  }
  double M1 = 0, mu = 0;
  for (const auto& it : data.items) {
    M1 += std::abs(it.eps);
    mu = std::max(mu, std::abs(it.lambda));
  }
  const double scale = std::max(1.0, std::pow(eval_radius, r0) * M1 * std::pow(mu, r0));
  for (int L = 8; L <= 512; ++L) {
    if (level_tail_bound(data, r0, L, eval_radius) < 1e-12 * scale) {
      tp.L_max = L;
      return tp;
    }
  }
  throw NumericError("select_truncation: level tail bound not below 1e-12 with L_max <= 512 at radius " +
                     format_double(eval_radius));
}

TruncationParams select_truncation(const SpectralData& data, double K, double eval_radius) {
  if (!(K > 0)) throw ValidationError("select_truncation: K must be positive");
  data.validate();
  if (data.items.empty()) return truncation_for_r0(data, 1, K, eval_radius);
  const double M = data.M();
  double mu = 0;
  for (const auto& it : data.items) mu = std::max(mu, std::abs(it.lambda));
  double G = 0;
  for (double y : {-K, K}) {
    double s = 0;
    for (const auto& it : data.items) s += std::exp(-y * std::arg(it.lambda));
    G = std::max(G, s);
  }
  for (int r0 = 1;; ++r0) {
    bool ok = M * std::pow(mu, r0) * G < 0.5;
    for (const auto& it : data.items) {
      const double worst = std::exp(K * std::abs(std::arg(it.lambda)));
      ok = ok && std::pow(std::abs(it.lambda), r0) * worst < 0.5;
    }
    if (ok) return truncation_for_r0(data, r0, K, eval_radius);
    if (r0 > 100000) throw NumericError("select_truncation: r0 search did not terminate");
  }
}

int fold_orbits(const SpectralData& in, SpectralData& out) {
  const std::size_t n = in.items.size();
  out = in;
  if (n < 2) return 1;
  for (std::size_t s = n; s >= 2; --s) {
    if (n % s != 0) continue;
    const cplx rot = std::polar(1.0, kTwoPi / static_cast<double>(s));
    std::vector<int> image(n, -1);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const cplx target = in.items[i].lambda * rot;
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(in.items[j].lambda - target) < 1e-12 * std::abs(target) &&
            std::abs(in.items[j].eps - in.items[i].eps) < 1e-12 * std::abs(in.items[i].eps)) {
          image[i] = static_cast<int>(j);
          break;
        }
      }
      ok = image[i] >= 0;
    }
    if (!ok) continue;
    std::vector<bool> seen(n, false);
    out.items.clear();
    out.factors.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i]) continue;
      std::size_t j = i;
      for (std::size_t k = 0; k < s; ++k) {
        seen[j] = true;
        j = static_cast<std::size_t>(image[j]);
      }
      const auto& it = in.items[i];
      out.items.push_back({static_cast<double>(s) * it.eps, std::pow(it.lambda, static_cast<double>(s))});
    }
    return static_cast<int>(s);
  }
  return 1;
}

TopWeightVerdict check_unique_top_weight(const WeilNumberSet& weil) {
  TopWeightVerdict v;
  const auto ent = weil.entries();
  if (ent.empty()) return v;
  double top = 0;
  for (const auto& e : ent) top = std::max(top, std::abs(e.alpha));
  int count = 0;
  const WeilEntry* t = nullptr;
  for (const auto& e : ent) {
    if (std::abs(e.alpha) >= top * (1 - 1e-10)) {
      count += e.multiplicity;
      t = &e;
    }
  }
  if (count != 1 || t->weight % 2 != 0) return v;
  const int m = t->weight / 2;
  const double qm = std::pow(static_cast<double>(weil.q()), m);
  if (std::abs(t->alpha - qm) > 1e-9 * qm) return v;
  v.unique = true;
  v.m = m;
  for (int l = 1; l < 100000; ++l) {
    double s = 0;
    for (const auto& e : ent) {
      if (&e == t) continue;
      s += e.multiplicity * std::pow(std::abs(e.alpha) / top, l);
    }
    if (s < 1.0) {
      v.vanish_bound = l - 1;
      break;
    }
  }
  return v;
}

VirtualCounts virtual_counts(const WeilNumberSet& weil, int L) {
  if (L < 1) throw ValidationError("virtual_counts: L must be >= 1");
  VirtualCounts vc;
  std::vector<std::vector<BigInt>> ps;
  for (const auto& b : weil.blocks()) ps.push_back(b.power_sums(L));
  for (int l = 1; l <= L; ++l) {
    BigRational n = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const BigInt& p = ps[i][static_cast<std::size_t>(l)];
      n += (weil.blocks()[i].weight % 2 == 0) ? BigRational(p) : BigRational(-p);
    }
    vc.values.push_back(n);
  }
  vc.vanish_bound = check_unique_top_weight(weil).vanish_bound;
  return vc;
}

SpectralDecomposition spectral_from_weil(const WeilNumberSet& weil, int m) {
  SpectralDecomposition dec;
  const double logq = std::log(static_cast<double>(weil.q()));
  if (weil.abelian()) {
    const auto& b = weil.block(1);
    for (const auto& e : b.roots) {
      SpectralFactor f;
      f.data.items.push_back({1.0, 1.0 / e.alpha});
      f.data.q = weil.q();
      f.weight = e.multiplicity;
      dec.factors.push_back(std::move(f));
    }
    dec.prefix_rate = 0.5 * b.degree() * logq;
    dec.m = 0;
    return dec;
  }
  const auto top = check_unique_top_weight(weil);
  if (!top.unique) throw ValidationError("spectral_from_weil: Weil set has no unique top weight");
  if (m >= 0 && m != top.m)
    throw ValidationError("spectral_from_weil: top eigenvalue is q^" + std::to_string(top.m) + ", not q^" +
                          std::to_string(m));
  m = top.m;
  const double qm = std::pow(static_cast<double>(weil.q()), m);
  SpectralData data;
  data.q = weil.q();
  for (const auto& e : weil.entries()) {
    if (e.weight == 2 * m && std::abs(e.alpha - qm) < 1e-9 * qm) continue;
    const cplx lambda = e.alpha / qm;
    if (std::abs(lambda) >= 1.0 - 1e-12)
      throw ValidationError("spectral_from_weil: eigenvalue " + format_complex(e.alpha) + " has |alpha| >= q^m");
    const double sign = (e.weight % 2 == 0) ? -1.0 : 1.0;
    data.items.push_back({sign * e.multiplicity, lambda});
  }
  SpectralFactor f;
  f.power = fold_orbits(data, f.data);
  f.data.q = weil.q();
  f.weight = 1.0 / f.power;
  dec.factors.push_back(std::move(f));
  dec.prefix_rate = m * logq;
  dec.m = m;
  return dec;
}

SpectralData product_data(const SpectralData& a, const SpectralData& b) {
  a.validate();
  b.validate();
  if (a.items.empty()) return b;
  if (b.items.empty()) return a;
  SpectralData out;
  out.items = a.items;
  out.items.insert(out.items.end(), b.items.begin(), b.items.end());
  for (const auto& x : a.items)
    for (const auto& y : b.items) {
      const cplx l = x.lambda * y.lambda;
      if (!(std::abs(l) < 1.0)) throw std::logic_error("product_data: |lambda| >= 1");
      out.items.push_back({-x.eps * y.eps, l});
    }
  if (a.q && b.q && *a.q == *b.q) out.q = a.q;
  out.factors = {std::make_shared<const SpectralData>(a), std::make_shared<const SpectralData>(b)};
  return out;
}

}  // namespace zlog
