#include "zlog/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace zlog {

namespace {

const std::set<std::string> kCommonKeys = {"kind", "name", "K", "eval_radius", "r0", "window", "res", "tol", "out"};

void check_keys(const Json& doc, const std::set<std::string>& allowed) {
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!kCommonKeys.count(it.key()) && !allowed.count(it.key()))
      throw ValidationError("unknown config key '" + it.key() + "' for kind '" + doc.value("kind", "") + "'");
}

template <class T>
T get(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("config is missing '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::uint64_t get_q(const Json& doc) {
  const auto q = get<std::int64_t>(doc, "q");
  if (q < 2) throw ValidationError("q must be >= 2");
  return static_cast<std::uint64_t>(q);
}

cplx get_complex(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_complex(v.get<std::string>());
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw ValidationError("expected a complex number (number, \"a+bi\" or [re, im])");
}

std::vector<BigInt> get_poly(const Json& doc, const char* key) {
  std::vector<BigInt> out;
  for (const auto& c : get<Json>(doc, key)) {
    if (!c.is_number_integer()) throw ValidationError(std::string("'") + key + "' needs integer coefficients");
    out.emplace_back(c.get<std::int64_t>());
  }
  if (out.size() < 2) throw ValidationError(std::string("'") + key + "' needs degree >= 1");
  return out;
}

ModelOptions model_options(const Json& doc) {
  ModelOptions o;
  o.K = doc.value("K", o.K);
  o.eval_radius = doc.value("eval_radius", o.eval_radius);
  o.r0 = doc.value("r0", o.r0);
  if (!(o.K > 0)) throw ValidationError("K must be positive");
  if (!(o.eval_radius > 0)) throw ValidationError("eval_radius must be positive");
  return o;
}

FamilyParams family_params(const Json& doc) {
  FamilyParams p;
  p.family = parse_family(get<std::string>(doc, "family"));
  p.n = doc.value("n", 0);
  p.k = doc.value("k", 0);
  p.m = doc.value("m", 0);
  p.alpha = doc.value("alpha", std::int64_t{1});
  return p;
}

void take_model(ModelConfig& cfg, ZlogModel m) {
  if (!m.factors().empty()) {
    cfg.data = m.factors().front().data;
    cfg.trunc = m.factors().front().kernel->trunc();
  } else {
    cfg.trunc = TruncationParams{};
  }
  cfg.model = std::move(m);
}

void dump_into(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << sep;
        dump_into(os, it.value(), indent, depth + 1);
      }
      os << nl << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        dump_into(os, j[i], indent, depth + 1);
      }
      os << nl << close << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x))
        os << format_double(x);
      else
        os << (std::isnan(x) ? "\"nan\"" : (x > 0 ? "\"inf\"" : "\"-inf\""));
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

WeilNumberSet parse_weil(const Json& doc, bool abelian) {
  const auto q = get_q(doc);
  if (doc.contains("charpoly")) {
    const auto poly = get_poly(doc, "charpoly");
    return abelian ? WeilNumberSet::from_charpoly(q, poly) : WeilNumberSet::curve_motive(q, poly);
  }
  if (doc.contains("eigenvalues")) {
    std::vector<WeilEntry> entries;
    for (const auto& e : doc.at("eigenvalues")) {
      WeilEntry w;
      w.alpha = {e.value("re", 0.0), e.value("im", 0.0)};
      w.weight = e.value("weight", 1);
      w.multiplicity = e.value("mult", 1);
      for (auto it = e.begin(); it != e.end(); ++it)
        if (it.key() != "re" && it.key() != "im" && it.key() != "weight" && it.key() != "mult")
          throw ValidationError("unknown eigenvalue key '" + it.key() + "'");
      entries.push_back(w);
    }
    return WeilNumberSet::from_entries(q, entries);
  }
  if (!abelian && doc.contains("blocks")) {
    WeilNumberSet w = WeilNumberSet::from_charpoly(q, {BigInt(-1), BigInt(1)}, 0, false);
    bool first = true;
    for (const auto& b : doc.at("blocks")) {
      const int weight = get<int>(b, "weight");
      const auto poly = get_poly(b, "charpoly");
      if (first) {
        w = WeilNumberSet::from_charpoly(q, poly, weight, false);
        first = false;
      } else {
        w.add_block(weight, poly);
      }
    }
    if (first) throw ValidationError("'blocks' is empty");
    return w;
  }
  throw ValidationError(abelian ? "abelian config needs 'charpoly' or 'eigenvalues'"
                                : "motive config needs 'charpoly', 'blocks' or 'eigenvalues'");
}

VarietySpec parse_variety(const Json& doc) {
  VarietySpec s;
  const auto amb = get<std::string>(doc, "ambient");
  if (amb == "affine")
    s.ambient = VarietySpec::Ambient::affine;
  else if (amb == "projective")
    s.ambient = VarietySpec::Ambient::projective;
  else
    throw ValidationError("ambient must be 'affine' or 'projective'");
  s.n = get<int>(doc, "n");
  for (const auto& eq : get<Json>(doc, "equations")) {
    Polynomial p;
    for (const auto& term : eq) {
      if (!term.is_array() || term.size() != 2) throw ValidationError("monomials are [coefficient, [exponents]]");
      Monomial m;
      m.coeff = term[0].get<std::int64_t>();
      m.exponents = term[1].get<std::vector<int>>();
      p.push_back(std::move(m));
    }
    s.equations.push_back(std::move(p));
  }
  s.validate();
  return s;
}

ModelConfig parse_config(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  ModelConfig cfg;
  cfg.doc = doc;
  cfg.kind = get<std::string>(doc, "kind");
  if (doc.contains("window")) cfg.window = parse_window(get<std::string>(doc, "window"));
  cfg.res = doc.value("res", cfg.res);
  cfg.tol = doc.value("tol", cfg.tol);
  if (doc.contains("out")) cfg.out = get<std::string>(doc, "out");
  if (cfg.res < 2 || cfg.res > 8192) throw ValidationError("res must be in [2, 8192]");
  if (!(cfg.tol > 0)) throw ValidationError("tol must be positive");
  const auto opt = model_options(doc);

  if (cfg.kind == "abelian" || cfg.kind == "motive") {
    const bool ab = cfg.kind == "abelian";
    check_keys(doc, ab ? std::set<std::string>{"q", "charpoly", "eigenvalues"}
                       : std::set<std::string>{"q", "charpoly", "eigenvalues", "blocks", "m"});
    const auto weil = parse_weil(doc, ab);
    cfg.q = weil.q();
    take_model(cfg, ab ? ZlogModel::abelian(weil, opt) : ZlogModel::motive(weil, doc.value("m", -1), opt));
    cfg.counts = [weil](int R) { return weil_counts(weil, R); };
  } else if (cfg.kind == "lambda") {
    check_keys(doc, {"q", "n"});
    const auto q = get_q(doc);
    const int n = get<int>(doc, "n");
    cfg.q = q;
    take_model(cfg, ZlogModel::lambda_n(n, q, opt));
    FamilyParams a;
    a.family = Family::affine;
    a.n = n;
    cfg.counts = [a, q](int R) {
      auto cs = closed_form_counts(a, q, R);
      for (auto& v : cs.values) v -= 1;
      cs.family = "lambda";
      return cs;
    };
  } else if (cfg.kind == "raw") {
    check_keys(doc, {"q", "data", "prefix"});
    SpectralFactor f;
    for (const auto& d : get<Json>(doc, "data")) {
      for (auto it = d.begin(); it != d.end(); ++it)
        if (it.key() != "eps" && it.key() != "lambda") throw ValidationError("unknown datum key '" + it.key() + "'");
      f.data.items.push_back({get<double>(d, "eps"), get_complex(get<Json>(d, "lambda"))});
    }
    if (doc.contains("q")) {
      cfg.q = get_q(doc);
      f.data.q = cfg.q;
    }
    f.data.validate();
    std::vector<PrefixTerm> prefix;
    if (doc.contains("prefix"))
      for (const auto& p : doc.at("prefix")) {
        PrefixTerm t;
        const auto k = get<std::string>(p, "kind");
        if (k == "geometric")
          t.kind = PrefixTerm::Kind::geometric;
        else if (k == "logarithmic")
          t.kind = PrefixTerm::Kind::logarithmic;
        else
          throw ValidationError("prefix kind must be 'geometric' or 'logarithmic'");
        t.coeff = get<double>(p, "coeff");
        t.power = p.value("power", 1);
        prefix.push_back(t);
      }
    if (f.data.items.empty()) {
      cfg.data = f.data;
      cfg.trunc = TruncationParams{};
    } else {
      take_model(cfg, ZlogModel::raw(prefix, {f}, std::nullopt, opt, cfg.q));
    }
  } else if (cfg.kind == "variety") {
    const auto q = get_q(doc);
    cfg.q = q;
    if (doc.contains("family")) {
      check_keys(doc, {"q", "family", "n", "k", "m", "alpha"});
      const auto params = family_params(doc);
      take_model(cfg, ZlogModel::family(params, q, opt));
      cfg.counts = [params, q](int R) { return closed_form_counts(params, q, R); };
    } else {
      check_keys(doc, {"q", "ambient", "n", "equations"});
      const auto spec = parse_variety(doc);
      cfg.counts = [spec, q](int R) {
        CountSequence cs;
        cs.q = q;
        cs.family = "variety";
        std::uint64_t p = q;
        int k = 1;
        for (std::uint64_t f = 2; f <= q; ++f)
          if (q % f == 0) {
            p = f;
            break;
          }
        for (std::uint64_t t = p; t < q; t *= p) ++k;
        if (std::pow(static_cast<double>(p), k) != static_cast<double>(q) || !is_prime(p))
          throw ValidationError("q must be a prime power");
        for (int r = 1; r <= R; ++r) cs.values.emplace_back(count_naive(spec, make_field(static_cast<std::uint32_t>(p), k * r)));
        return cs;
      };
    }
  } else {
    throw ValidationError("unknown config kind '" + cfg.kind + "'");
  }
  return cfg;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  dump_into(os, j, indent, 0);
  return os.str();
}

Json complex_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

void write_phase_pgm(std::ostream& out, int width, int height, const std::vector<cplx>& values) {
  out << "P5\n" << width << ' ' << height << "\n255\n";
  for (const auto& v : values) {
    unsigned char px = 0;
    if (std::isfinite(v.real()) && std::isfinite(v.imag())) {
      const double t = (std::arg(v) + kPi) / kTwoPi;
      px = static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
    }
    out.put(static_cast<char>(px));
  }
}

}  // namespace zlog
