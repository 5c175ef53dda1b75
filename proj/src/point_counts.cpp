#include "zlog/point_counts.hpp"

#include <algorithm>
#include <numeric>

#include "zlog/motive_data.hpp"

namespace zlog {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

using Digits = std::vector<std::uint32_t>;

Digits to_digits(std::uint32_t code, std::uint32_t p, int k) {
  Digits d(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    d[static_cast<std::size_t>(i)] = code % p;
    code /= p;
  }
  return d;
}

std::uint32_t from_digits(const Digits& d, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = d.size(); i-- > 0;) code = code * p + d[i];
  return code;
}

// a*b mod (monic) modulus, all digit vectors of length k
Digits raw_mul(const Digits& a, const Digits& b, const Digits& modulus, std::uint32_t p) {
  const std::size_t k = a.size();
  std::vector<std::uint64_t> prod(2 * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p;
  }
  for (std::size_t d = 2 * k - 1; d >= k && d < 2 * k; --d) {
    const std::uint64_t c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    // x^d = x^{d-k} * x^k, and x^k = -sum modulus[i] x^i
    for (std::size_t i = 0; i < k; ++i)
      prod[d - k + i] = (prod[d - k + i] + (p - c) * modulus[i]) % p;
  }
  Digits out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return out;
}

// remainder of f modulo monic g over F_p; both low-degree first
Digits poly_rem(Digits f, const Digits& g, std::uint32_t p) {
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    const std::uint64_t c = f.back();
    if (c != 0) {
      const std::size_t shift = f.size() - 1 - dg;
      for (std::size_t i = 0; i <= dg; ++i)
        f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + (p - c) * g[i]) % p);
    }
    f.pop_back();
  }
  return f;
}

bool irreducible(const Digits& f, std::uint32_t p) {
  const int k = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= k; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Digits g = to_digits(static_cast<std::uint32_t>(code), p, d);
      g.push_back(1);
      const Digits r = poly_rem(f, g, p);
      if (std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; })) return false;
    }
  }
  return true;
}

}  // namespace

FiniteField make_field(std::uint32_t p, int k) {
  if (!is_prime(p)) throw ValidationError("make_field: p = " + std::to_string(p) + " is not prime");
  if (k < 1) throw ValidationError("make_field: degree must be >= 1");
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    if (q > kEnumerationBudget) throw ValidationError("make_field: p^k exceeds the enumeration budget 2^20");
  }

  FiniteField f;
  f.p_ = p;
  f.k_ = k;
  f.q_ = static_cast<std::uint32_t>(q);

  bool found = false;
  for (std::uint64_t code = 0; code < q && !found; ++code) {
    Digits cand = to_digits(static_cast<std::uint32_t>(code), p, k);
    cand.push_back(1);
    if (irreducible(cand, p)) {
      f.modulus_ = cand;
      found = true;
    }
  }
  if (!found) throw std::logic_error("make_field: no irreducible modulus found");

  const Digits mod(f.modulus_.begin(), f.modulus_.end() - 1);
  auto logt = std::make_shared<std::vector<std::uint32_t>>(q, 0);
  auto expt = std::make_shared<std::vector<std::uint32_t>>(q, 0);
  const std::uint32_t order = f.q_ - 1;
  for (std::uint32_t g = 1; g < f.q_; ++g) {
    const Digits gd = to_digits(g, p, k);
    Digits cur = to_digits(1, p, k);
    std::uint32_t i = 0;
    bool ok = true;
    do {
      const std::uint32_t c = from_digits(cur, p);
      if (i > 0 && c == 1) {
        ok = false;
        break;
      }
      (*expt)[i] = c;
      (*logt)[c] = i;
      cur = raw_mul(cur, gd, mod, p);
      ++i;
    } while (i < order);
    if (ok && from_digits(cur, p) == 1) break;
    if (g + 1 == f.q_) throw std::logic_error("make_field: no primitive element");
  }
  f.log_ = logt;
  f.exp_ = expt;
  return f;
}

std::uint32_t FiniteField::add(std::uint32_t a, std::uint32_t b) const {
  if (p_ == 2) return a ^ b;
  std::uint32_t out = 0, scale = 1;
  for (int i = 0; i < k_; ++i) {
    out += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return out;
}

std::uint32_t FiniteField::neg(std::uint32_t a) const {
  if (p_ == 2) return a;
  std::uint32_t out = 0, scale = 1;
  for (int i = 0; i < k_; ++i) {
    out += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return out;
}

std::uint32_t FiniteField::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t s = std::uint64_t((*log_)[a]) + (*log_)[b];
  return (*exp_)[static_cast<std::size_t>(s % (q_ - 1))];
}

std::uint32_t FiniteField::pow(std::uint32_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t s = (std::uint64_t((*log_)[a]) * (e % (q_ - 1))) % (q_ - 1);
  return (*exp_)[static_cast<std::size_t>(s)];
}

std::uint32_t FiniteField::from_int(std::int64_t c) const {
  const std::int64_t pp = p_;
  return static_cast<std::uint32_t>(((c % pp) + pp) % pp);
}

void VarietySpec::validate() const {
  if (n < 0) throw ValidationError("variety: negative dimension");
  const int nv = num_vars();
  for (const auto& eq : equations) {
    int degree = -1;
    for (const auto& term : eq) {
      if (static_cast<int>(term.exponents.size()) > nv)
        throw ValidationError("variety: equation uses more than " + std::to_string(nv) + " variables");
      int deg = 0;
      for (int e : term.exponents) {
        if (e < 0) throw ValidationError("variety: negative exponent");
        deg += e;
      }
      if (ambient == Ambient::projective) {
        if (degree >= 0 && deg != degree) throw ValidationError("variety: projective equation is not homogeneous");
        degree = deg;
      }
    }
  }
}

namespace {

struct CompiledTerm {
  std::uint32_t coeff;
  std::vector<std::pair<int, int>> powers;  // (variable, exponent) with exponent > 0
};

std::vector<std::vector<CompiledTerm>> compile(const VarietySpec& spec, const FiniteField& F) {
  std::vector<std::vector<CompiledTerm>> out;
  for (const auto& eq : spec.equations) {
    std::vector<CompiledTerm> terms;
    for (const auto& t : eq) {
      CompiledTerm ct{F.from_int(t.coeff), {}};
      if (ct.coeff == 0) continue;
      for (std::size_t i = 0; i < t.exponents.size(); ++i)
        if (t.exponents[i] > 0) ct.powers.emplace_back(static_cast<int>(i), t.exponents[i]);
      terms.push_back(std::move(ct));
    }
    out.push_back(std::move(terms));
  }
  return out;
}

bool satisfies(const std::vector<std::vector<CompiledTerm>>& eqs, const std::vector<std::uint32_t>& x,
               const FiniteField& F) {
  for (const auto& eq : eqs) {
    std::uint32_t acc = 0;
    for (const auto& t : eq) {
      std::uint32_t v = t.coeff;
      for (const auto& [var, e] : t.powers) {
        v = F.mul(v, F.pow(x[static_cast<std::size_t>(var)], static_cast<std::uint64_t>(e)));
        if (v == 0) break;
      }
      acc = F.add(acc, v);
    }
    if (acc != 0) return false;
  }
  return true;
}

// odometer over positions [from, x.size())
bool advance(std::vector<std::uint32_t>& x, std::size_t from, std::uint32_t q) {
  for (std::size_t i = x.size(); i-- > from;) {
    if (++x[i] < q) return true;
    x[i] = 0;
  }
  return false;
}

}  // namespace

std::uint64_t count_naive(const VarietySpec& spec, const FiniteField& F) {
  spec.validate();
  const std::uint64_t q = F.q();
  const int nv = spec.num_vars();
  if (spec.ambient == VarietySpec::Ambient::projective && spec.n == 0 && spec.equations.empty())
    throw ValidationError("count_naive: projective(0) with no equations");

  std::uint64_t size = 0;
  if (spec.ambient == VarietySpec::Ambient::affine) {
    size = 1;
    for (int i = 0; i < nv; ++i) {
      size *= q;
      if (size > kEnumerationBudget) throw ValidationError("count_naive: enumeration budget exceeded");
    }
  } else {
    std::uint64_t pw = 1;
    for (int i = 0; i <= spec.n; ++i) {
      size += pw;
      if (size > kEnumerationBudget) throw ValidationError("count_naive: enumeration budget exceeded");
      pw *= q;
    }
  }

  const auto eqs = compile(spec, F);
  std::uint64_t count = 0;
  std::vector<std::uint32_t> x(static_cast<std::size_t>(nv), 0);
  if (spec.ambient == VarietySpec::Ambient::affine) {
    do {
      if (satisfies(eqs, x, F)) ++count;
    } while (nv > 0 && advance(x, 0, F.q()));
    return count;
  }
  // normalized representatives: first nonzero coordinate equals 1
  for (int lead = 0; lead < nv; ++lead) {
    std::fill(x.begin(), x.end(), 0);
    x[static_cast<std::size_t>(lead)] = 1;
    do {
      if (satisfies(eqs, x, F)) ++count;
    } while (advance(x, static_cast<std::size_t>(lead) + 1, F.q()));
  }
  return count;
}

Family parse_family(const std::string& name) {
  if (name == "affine") return Family::affine;
  if (name == "torus") return Family::torus;
  if (name == "projective") return Family::projective;
  if (name == "gl") return Family::gl;
  if (name == "grassmann") return Family::grassmann;
  if (name == "full_grassmann") return Family::full_grassmann;
  if (name == "quadric_type1") return Family::quadric_type1;
  throw ValidationError("unknown family '" + name + "'");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::affine: return "affine";
    case Family::torus: return "torus";
    case Family::projective: return "projective";
    case Family::gl: return "gl";
    case Family::grassmann: return "grassmann";
    case Family::full_grassmann: return "full_grassmann";
    case Family::quadric_type1: return "quadric_type1";
  }
  return "?";
}

namespace {

BigInt ipow(const BigInt& b, long e) {
  BigInt out = 1;
  for (long i = 0; i < e; ++i) out *= b;
  return out;
}

BigInt gaussian_binomial(int n, int k, const BigInt& Q) {
  if (k < 0 || k > n) return 0;
  BigInt num = 1, den = 1;
  for (int l = n - k + 1; l <= n; ++l) num *= ipow(Q, l) - 1;
  for (int l = 1; l <= k; ++l) den *= ipow(Q, l) - 1;
  return num / den;
}

}  // namespace

BigInt count_closed_form(const FamilyParams& fp, std::uint64_t q, int r) {
  if (q < 2) throw ValidationError("closed form: field size must be >= 2");
  if (r < 1) throw ValidationError("closed form: extension degree must be >= 1");
  const BigInt Q = ipow(BigInt(q), r);
  switch (fp.family) {
    case Family::affine:
      if (fp.n < 0) throw ValidationError("affine: n must be >= 0");
      return ipow(Q, fp.n);
    case Family::torus:
      if (fp.n < 0) throw ValidationError("torus: n must be >= 0");
      return ipow(Q - 1, fp.n);
    case Family::projective: {
      if (fp.n < 0) throw ValidationError("projective: n must be >= 0");
      BigInt s = 0;
      for (int i = 0; i <= fp.n; ++i) s += ipow(Q, i);
      return s;
    }
    case Family::gl: {
      if (fp.k < 1) throw ValidationError("gl: k must be >= 1");
      BigInt v = ipow(Q, static_cast<long>(fp.k) * (fp.k - 1) / 2);
      for (int l = 1; l <= fp.k; ++l) v *= ipow(Q, l) - 1;
      return v;
    }
    case Family::grassmann:
      if (fp.k < 0 || fp.n < fp.k) throw ValidationError("grassmann: need 0 <= k <= n");
      return gaussian_binomial(fp.n, fp.k, Q);
    case Family::full_grassmann: {
      if (fp.n < 0) throw ValidationError("full_grassmann: n must be >= 0");
      BigInt s = 0;
      for (int k = 0; k <= fp.n; ++k) s += gaussian_binomial(fp.n, k, Q);
      return s;
    }
    case Family::quadric_type1: {
      if (fp.m < 1 || fp.m % 2 == 0 || fp.m > fp.n)
        throw ValidationError("quadric_type1: need odd m with 1 <= m <= n");
      if (fp.alpha % static_cast<std::int64_t>(q) == 0 && is_prime(q))
        throw ValidationError("quadric_type1: alpha must be nonzero in F_q");
      return ipow(Q, fp.n - fp.m) * (ipow(Q, fp.m) - ipow(Q, (fp.m - 1) / 2));
    }
  }
  throw ValidationError("unknown family");
}

VarietySpec family_spec(const FamilyParams& fp) {
  VarietySpec s;
  switch (fp.family) {
    case Family::affine:
      s.ambient = VarietySpec::Ambient::affine;
      s.n = fp.n;
      return s;
    case Family::projective:
      s.ambient = VarietySpec::Ambient::projective;
      s.n = fp.n;
      return s;
    case Family::torus: {
      if (fp.n != 1) break;
      // x*y = 1 in A^2
      s.ambient = VarietySpec::Ambient::affine;
      s.n = 2;
      s.equations.push_back({{1, {1, 1}}, {-1, {0, 0}}});
      return s;
    }
    case Family::quadric_type1: {
      s.ambient = VarietySpec::Ambient::affine;
      s.n = fp.n + 1;
      Polynomial eq;
      for (int i = 0; i + 1 <= fp.m; i += 2) {
        std::vector<int> e(static_cast<std::size_t>(s.n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        e[static_cast<std::size_t>(i + 1)] = 1;
        eq.push_back({1, e});
      }
      eq.push_back({-fp.alpha, std::vector<int>(static_cast<std::size_t>(s.n), 0)});
      s.equations.push_back(eq);
      return s;
    }
    default:
      break;
  }
  throw ValidationError("family " + family_name(fp.family) + " has no enumeration spec for these parameters");
}

void CountSequence::require_positive() const {
  if (values.empty()) throw ValidationError("count sequence is empty");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] < 1)
      throw ValidationError("N_" + std::to_string(i + 1) + " < 1: Z_log is undefined for this sequence");
}

CountSequence closed_form_counts(const FamilyParams& params, std::uint64_t q, int R) {
  CountSequence cs;
  cs.q = q;
  cs.source = CountSequence::Source::closed_form;
  cs.family = family_name(params.family);
  for (int r = 1; r <= R; ++r) cs.values.emplace_back(count_closed_form(params, q, r));
  return cs;
}

BigRational counts_from_weil(const WeilNumberSet& weil, int r) {
  if (r < 1) throw ValidationError("counts_from_weil: r must be >= 1");
  if (weil.empty()) throw ValidationError("counts_from_weil: empty Weil set");
  if (weil.abelian()) {
    // elementary symmetric functions of alpha_j^r via Newton's identities
    const auto& block = weil.block(1);
    const int deg = block.degree();
    std::vector<BigRational> p(static_cast<std::size_t>(deg) + 1), e(static_cast<std::size_t>(deg) + 1);
    for (int k = 1; k <= deg; ++k) p[static_cast<std::size_t>(k)] = BigRational(block.power_sum(r * k));
    e[0] = 1;
    for (int k = 1; k <= deg; ++k) {
      BigRational acc = 0;
      for (int i = 1; i <= k; ++i) {
        const BigRational term = e[static_cast<std::size_t>(k - i)] * p[static_cast<std::size_t>(i)];
        acc += (i % 2 == 1) ? term : BigRational(-term);
      }
      e[static_cast<std::size_t>(k)] = acc / k;
    }
    BigRational val = 0;
    for (int k = 0; k <= deg; ++k) val += (k % 2 == 0) ? e[static_cast<std::size_t>(k)] : BigRational(-e[static_cast<std::size_t>(k)]);
    return val < 0 ? BigRational(-val) : val;
  }
  BigRational total = 0;
  for (const auto& b : weil.blocks()) {
    const BigInt ps = b.power_sum(r);
    total += (b.weight % 2 == 0) ? BigRational(ps) : BigRational(-ps);
  }
  return total;
}

CountSequence weil_counts(const WeilNumberSet& weil, int R) {
  CountSequence cs;
  cs.q = weil.q();
  cs.source = CountSequence::Source::weil;
  for (int r = 1; r <= R; ++r) cs.values.push_back(counts_from_weil(weil, r));
  return cs;
}

}  // namespace zlog
