#include "zlog/pseudo_divisor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace zlog {

namespace {

struct CellKey {
  long long a, b;
  bool operator==(const CellKey& o) const { return a == o.a && b == o.b; }
};
struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<long long>()(k.a) * 1000003u ^ std::hash<long long>()(k.b);
  }
};

// Greedy clustering of complex points on a hash grid with cell size = radius.
class Clusterer {
 public:
  explicit Clusterer(double radius) : h_(radius) {}

  // index of the cluster z joins (new one if none within radius)
  std::size_t add(cplx z, bool* created) {
    const long long a = static_cast<long long>(std::floor(z.real() / h_));
    const long long b = static_cast<long long>(std::floor(z.imag() / h_));
    for (long long da = -1; da <= 1; ++da)
      for (long long db = -1; db <= 1; ++db) {
        auto it = cells_.find({a + da, b + db});
        if (it == cells_.end()) continue;
        for (std::size_t idx : it->second)
          if (std::abs(centers_[idx] - z) <= h_) {
            *created = false;
            return idx;
          }
      }
    centers_.push_back(z);
    cells_[{a, b}].push_back(centers_.size() - 1);
    *created = true;
    return centers_.size() - 1;
  }

 private:
  double h_;
  std::vector<cplx> centers_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells_;
};

cplx reduce_im(cplx z) {
  double im = std::remainder(z.imag(), kTwoPi);  // [-pi, pi]
  if (im > kPi - 1e-8) im -= kTwoPi;
  return {z.real(), im};
}

bool location_less(const SupportPoint& x, const SupportPoint& y) {
  if (x.location.real() != y.location.real()) return x.location.real() < y.location.real();
  return x.location.imag() < y.location.imag();
}

// merges points with nearby locations; sum_mults=false keeps the first multiplicity (fiber convention)
std::vector<SupportPoint> merge_points(const std::vector<SupportPoint>& in, bool sum_mults) {
  Clusterer cl(kMergeRadius);
  std::vector<SupportPoint> out;
  std::vector<double> abs_sum;
  for (const auto& p : in) {
    bool created = false;
    const std::size_t idx = cl.add(p.location, &created);
    if (created) {
      out.push_back(p);
      abs_sum.push_back(std::abs(p.multiplicity));
      continue;
    }
    SupportPoint& q = out[idx];
    q.infinite = q.infinite || p.infinite;
    q.level = std::min(q.level, p.level);
    q.contributors += p.contributors;
    if (sum_mults) {
      q.multiplicity += p.multiplicity;
      abs_sum[idx] += std::abs(p.multiplicity);
    }
  }
  std::vector<SupportPoint> kept;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].infinite || std::abs(out[i].multiplicity) > 1e-12 * abs_sum[i]) kept.push_back(out[i]);
  std::sort(kept.begin(), kept.end(), location_less);
  return kept;
}

void enumerate_rec(const std::vector<cplx>& logs, const std::vector<double>& log_abs_eps,
                   const std::vector<bool>& neg, std::size_t slot, int remaining, double log_c, bool negative,
                   cplx kappa, const std::function<void(cplx, double, bool)>& emit) {
  const std::size_t N = logs.size();
  if (slot + 1 == N) {
    const int k = remaining;
    const double lc = log_c - std::lgamma(k + 1.0) + k * log_abs_eps[slot];
    emit(kappa + static_cast<double>(k) * logs[slot], lc, negative != (neg[slot] && (k % 2 == 1)));
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    const double lc = log_c - std::lgamma(k + 1.0) + k * log_abs_eps[slot];
    enumerate_rec(logs, log_abs_eps, neg, slot + 1, remaining - k, lc, negative != (neg[slot] && (k % 2 == 1)),
                  kappa + static_cast<double>(k) * logs[slot], emit);
  }
}

int ilcm(int a, int b) { return a / std::gcd(a, b) * b; }

}  // namespace

std::vector<LevelTerm> enumerate_level_terms(const SpectralData& data, int L_max, bool reduce_periodic) {
  data.validate();
  if (L_max < 1) throw ValidationError("L_max must be >= 1");
  std::vector<LevelTerm> terms;
  const std::size_t N = data.size();
  if (N == 0) return terms;
  std::vector<cplx> logs(N);
  std::vector<double> lae(N);
  std::vector<bool> neg(N);
  for (std::size_t i = 0; i < N; ++i) {
    logs[i] = std::log(data.items[i].lambda);
    lae[i] = std::log(std::abs(data.items[i].eps));
    neg[i] = data.items[i].eps < 0;
  }
  Clusterer cl(kMergeRadius);
  for (int l = 1; l <= L_max; ++l) {
    const double base = std::lgamma(static_cast<double>(l));  // log (l-1)!
    enumerate_rec(logs, lae, neg, 0, l, base, false, cplx(0), [&](cplx kappa, double log_c, bool negative) {
      const double c = (negative ? -1.0 : 1.0) * std::exp(log_c);
      if (c == 0.0) return;
      const cplx key = reduce_periodic ? reduce_im(kappa) : kappa;
      bool created = false;
      const std::size_t idx = cl.add(key, &created);
      if (created) {
        LevelTerm t;
        t.kappa = key;
        t.level = l;
        terms.push_back(t);
      }
      LevelTerm& t = terms[idx];
      t.coeff += c;
      t.abs_coeff += std::abs(c);
      ++t.contributors;
    });
  }
  std::vector<LevelTerm> kept;
  for (auto& t : terms) {
    if (std::abs(t.coeff) > 1e12) t.infinite = true;
    if (t.infinite || std::abs(t.coeff) > 1e-12 * t.abs_coeff) kept.push_back(t);
  }
  return kept;
}

Window parse_window(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw ValidationError("bad number");
    } catch (const std::exception&) {
      throw ValidationError("window must be remin:remax:immin:immax, got '" + s + "'");
    }
  }
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
    throw ValidationError("window must be remin:remax:immin:immax with min < max, got '" + s + "'");
  return {v[0], v[1], v[2], v[3]};
}

double PseudoDivisor::min_gap() const {
  std::vector<cplx> z;
  for (const auto& p : points) z.push_back(p.location);
  std::sort(z.begin(), z.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  double best = INFINITY;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size() && z[j].real() - z[i].real() < best; ++j)
      best = std::min(best, std::abs(z[j] - z[i]));
  return best;
}

PseudoDivisor build_support_P(const SpectralData& data, int L_max, const Window& window) {
  PseudoDivisor d;
  d.kind = DivisorKind::P;
  d.window = window;
  d.L_max = L_max;
  for (const auto& t : enumerate_level_terms(data, L_max, false)) {
    if (!window.contains(t.kappa)) continue;
    d.points.push_back({t.kappa, t.coeff, t.infinite, t.level, t.contributors});
  }
  std::sort(d.points.begin(), d.points.end(), location_less);
  if (data.size() > 0) {
    // points of level > L_max have Re <= -(L_max+1) min_i |log|lambda_i||
    double a = INFINITY;
    for (const auto& it : data.items) a = std::min(a, -std::log(std::abs(it.lambda)));
    d.coverage_warning = window.re_min < -(L_max + 1) * a;
  }
  d.verdict = classify_finiteness(data);
  return d;
}

PseudoDivisor periodify(const PseudoDivisor& p, int J_max, PeriodVariant variant) {
  if (p.kind != DivisorKind::P) throw ValidationError("periodify expects a divisor of kind P");
  if (J_max < 0) throw ValidationError("J_max must be >= 0");
  PseudoDivisor out = p;
  out.J_max = J_max;
  out.kind = variant == PeriodVariant::full ? DivisorKind::Pper
             : variant == PeriodVariant::plus ? DivisorKind::Pper_plus
                                              : DivisorKind::Pper_minus;
  // a support ray parallel to the translation would stack infinitely many translates
  bool vertical_ray = false;
  for (std::size_t i = 0; i < p.points.size() && !vertical_ray; ++i)
    for (std::size_t k = i + 1; k < p.points.size() && !vertical_ray; ++k) {
      const cplx d = p.points[k].location - p.points[i].location;
      vertical_ray = std::abs(d.real()) < kMergeRadius && std::abs(d.imag()) > kMergeRadius &&
                     std::abs(std::remainder(d.imag(), kTwoPi)) < kMergeRadius;
    }
  std::vector<SupportPoint> raw;
  const int lo = variant == PeriodVariant::plus ? 1 : -J_max;
  const int hi = variant == PeriodVariant::minus ? -1 : J_max;
  for (const auto& pt : p.points)
    for (int j = lo; j <= hi; ++j) {
      SupportPoint q = pt;
      q.location = pt.location + cplx(0, kTwoPi * j);
      if (vertical_ray) q.infinite = true;
      if (p.window.contains(q.location)) raw.push_back(q);
    }
  out.points = merge_points(raw, true);
  return out;
}

PseudoDivisor pullback_exp(const PseudoDivisor& pper, const Window& window) {
  if (pper.kind != DivisorKind::Pper) throw ValidationError("pullback_exp needs the full periodification");
  PseudoDivisor out;
  out.kind = DivisorKind::D;
  out.window = window;
  out.L_max = pper.L_max;
  out.J_max = pper.J_max;
  out.verdict = pper.verdict;
  out.coverage_warning = pper.coverage_warning;
  std::vector<SupportPoint> raw;
  for (const auto& pt : pper.points) {
    SupportPoint q = pt;
    q.location = std::exp(-pt.location);
    if (window.contains(q.location)) raw.push_back(q);
  }
  out.points = merge_points(raw, false);
  return out;
}

PseudoDivisor mirror_sum(const PseudoDivisor& d) {
  if (d.kind != DivisorKind::D) throw ValidationError("mirror_sum expects a divisor of kind D");
  PseudoDivisor out = d;
  out.kind = DivisorKind::E;
  std::vector<SupportPoint> raw = d.points;
  for (const auto& pt : d.points) {
    SupportPoint q = pt;
    q.location = std::conj(pt.location);
    raw.push_back(q);
  }
  out.points = merge_points(raw, true);
  return out;
}

PseudoDivisor divisor_D(const SpectralData& data, int L_max, const Window& z_window) {
  PseudoDivisor out;
  out.kind = DivisorKind::D;
  out.window = z_window;
  out.L_max = L_max;
  std::vector<SupportPoint> raw;
  for (const auto& t : enumerate_level_terms(data, L_max, true)) {
    const cplx z = std::exp(-t.kappa);
    if (z_window.contains(z)) raw.push_back({z, t.coeff, t.infinite, t.level, t.contributors});
  }
  out.points = merge_points(raw, false);
  out.verdict = classify_finiteness(data);
  return out;
}

FinitenessVerdict classify_finiteness(const SpectralData& data) {
  FinitenessVerdict v;
  const std::size_t N = data.size();
  if (N <= 1) {
    v.status = FinitenessStatus::LocallyFinite;
    v.rule = FinitenessRule::N_le_1_periodic;
    return v;
  }
  if (data.q && *data.q > 1) {
    const double half_log_q = 0.5 * std::log(static_cast<double>(*data.q));
    int M = 1;
    bool ok = true;
    for (const auto& it : data.items) {
      const double e = std::log(std::abs(it.lambda)) / half_log_q;
      if (std::abs(e - std::round(e)) > 1e-9) {
        ok = false;
        break;
      }
      const RationalFit f = nearest_rational(std::arg(it.lambda) / kTwoPi, 720);
      if (f.error > 1e-10) {
        ok = false;
        break;
      }
      M = ilcm(M, static_cast<int>(f.den));
    }
    if (ok) {
      v.status = FinitenessStatus::LocallyFinite;
      v.rule = FinitenessRule::lattice;
      v.lattice_M = M;
      return v;
    }
  }
  if (N == 2) {
    v.status = FinitenessStatus::LocallyFinite;
    v.rule = FinitenessRule::N_le_2;
    return v;
  }
  if (!data.factors.empty()) {
    bool all = true;
    for (const auto& f : data.factors)
      all = all && classify_finiteness(*f).status == FinitenessStatus::LocallyFinite;
    if (all) {
      v.status = FinitenessStatus::LocallyFinite;
      v.rule = FinitenessRule::product_construction;
      return v;
    }
  }
  Window w{-12.0, 0.0, -kPi, kPi};
  PseudoDivisor cloud;
  cloud.points.clear();
  for (const auto& t : enumerate_level_terms(data, 12, true))
    if (w.contains(t.kappa)) cloud.points.push_back({t.kappa, t.coeff, t.infinite, t.level, t.contributors});
  v.min_gap = cloud.min_gap();
  return v;
}

const char* kind_name(DivisorKind k) {
  switch (k) {
    case DivisorKind::P: return "P";
    case DivisorKind::Pper_plus: return "Pper_plus";
    case DivisorKind::Pper_minus: return "Pper_minus";
    case DivisorKind::Pper: return "Pper";
    case DivisorKind::D: return "D";
    case DivisorKind::E: return "E";
  }
  return "?";
}

const char* rule_name(FinitenessRule r) {
  switch (r) {
    case FinitenessRule::none: return "none";
    case FinitenessRule::N_le_2: return "N_le_2";
    case FinitenessRule::N_le_1_periodic: return "N_le_1_periodic";
    case FinitenessRule::lattice: return "lattice";
    case FinitenessRule::product_construction: return "product_construction";
  }
  return "?";
}

const char* status_name(FinitenessStatus s) {
  switch (s) {
    case FinitenessStatus::LocallyFinite: return "LocallyFinite";
    case FinitenessStatus::Undetermined: return "Undetermined";
    case FinitenessStatus::NotLocallyFiniteWitness: return "NotLocallyFiniteWitness";
  }
  return "?";
}

void write_divisor_csv(std::ostream& out, const PseudoDivisor& d) {
  out << "re,im,multiplicity,level\n";
  for (const auto& p : d.points) {
    out << format_double(p.location.real()) << ',' << format_double(p.location.imag()) << ',';
    if (p.infinite)
      out << "inf";
    else
      out << format_double(p.multiplicity);
    out << ',' << p.level << '\n';
  }
}

}  // namespace zlog
