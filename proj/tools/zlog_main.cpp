#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "zlog/abel_plana.hpp"
#include "zlog/config.hpp"
#include "zlog/continuation.hpp"
#include "zlog/pseudo_divisor.hpp"
#include "zlog/recurrence.hpp"
#include "zlog/series.hpp"

using namespace zlog;

namespace {

struct Options {
  std::string config;
  std::string out;
  int terms = 64;
  bool log_series = false;
  std::string z = "0.3";
  std::string path;
  double clearance = 1e-3;
  std::string func;
  std::string window;
  int res = 0;
  int threads = 0;
  std::string divisor_kind = "D";
  int L = 0;
  int J = 0;
  double radius = 0;
  std::string center = "2";
  std::string at;
  int d_max = 8;
  int R = 48;
  std::string format = "json";
  std::string w = "1";
  std::string a = "auto";
  std::string b;
  double eps = 0.25;
  std::string step = "V_plus";
  std::string test = "exp_decay";
  double tol = 0;
};

const ZlogModel& need_model(const ModelConfig& cfg) {
  if (!cfg.model) throw ValidationError("config kind '" + cfg.kind + "' does not define a Z_log model");
  return *cfg.model;
}

// stdout unless --out was given
void emit(const Options& o, const ModelConfig* cfg, const std::string& text) {
  std::string path = o.out;
  if (path.empty() && cfg && cfg->out) path = *cfg->out;
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

Json points_json(const std::vector<cplx>& pts) {
  Json arr = Json::array();
  for (cplx z : pts) arr.push_back(complex_json(z));
  return arr;
}

Json fit_json(const RationalFit& f) { return Json{{"num", f.num}, {"den", f.den}, {"error", f.error}}; }

int run_coeffs(const Options& o) {
  const auto cfg = load_config(o.config);
  if (o.terms < 1) throw ValidationError("--terms must be >= 1");
  RealPowerSeries logz;
  if (cfg.counts) {
    logz = log_count_series(cfg.counts(o.terms), o.terms);
  } else {
    const auto& m = need_model(cfg);
    logz.coeffs.assign(static_cast<std::size_t>(o.terms) + 1, 0.0);
    for (int r = 1; r <= o.terms; ++r) logz.coeffs[static_cast<std::size_t>(r)] = m.log_coefficient(r);
  }
  std::ostringstream os;
  write_series_csv(os, o.log_series ? logz : series_exp(logz));
  emit(o, &cfg, os.str());
  return 0;
}

int run_eval(const Options& o) {
  const auto cfg = load_config(o.config);
  const std::string func = o.func.empty() ? "zlog" : o.func;
  Json j;
  j["func"] = func;
  if (func == "T") {
    const cplx w = parse_complex(o.z);
    j["w"] = complex_json(w);
    j["value"] = complex_json(eval_T(w, cfg.data, cfg.trunc));
  } else if (func == "logderiv") {
    const cplx z = parse_complex(o.z);
    j["z"] = complex_json(z);
    j["value"] = complex_json(log_derivative(z, need_model(cfg)));
  } else {
    const PathSpec path = o.path.empty() ? PathSpec::straight(parse_complex(o.z), o.clearance)
                                         : parse_path(o.path, o.clearance);
    j["z"] = complex_json(path.end());
    j["path"] = points_json(path.vertices);
    ContinuationResult r;
    if (func == "zlog")
      r = eval_zlog(path, need_model(cfg));
    else if (func == "I")
      r = integrate_I(path, cfg.data, cfg.trunc);
    else if (func == "F")
      r = eval_F(path, cfg.data, cfg.trunc);
    else if (func == "f")
      r = eval_f(path, cfg.data, cfg.trunc);
    else
      throw ValidationError("unknown --func '" + func + "' (zlog, I, F, f, T, logderiv)");
    j["value"] = complex_json(r.value);
    j["log"] = complex_json(r.branch_offset);
    j["error_estimate"] = r.error_estimate;
  }
  emit(o, &cfg, dump_json(j) + "\n");
  return 0;
}

int run_grid(const Options& o) {
  const auto cfg = load_config(o.config);
  const Window win = !o.window.empty() ? parse_window(o.window) : cfg.window.value_or(parse_window("-3:3:-3:3"));
  const int res = o.res > 0 ? o.res : cfg.res;
  if (res < 2) throw ValidationError("--res must be >= 2");
  const std::string func = o.func.empty() ? "logderiv" : o.func;
  std::function<cplx(cplx)> f;
  if (func == "logderiv") {
    const auto& m = need_model(cfg);
    f = [&m](cplx z) { return log_derivative(z, m); };
  } else if (func == "zlog") {
    const auto& m = need_model(cfg);
    const double cl = o.clearance;
    f = [&m, cl](cplx z) { return eval_zlog(PathSpec::straight(z, cl), m).value; };
  } else if (func == "T") {
    f = [&cfg](cplx w) { return eval_T(w, cfg.data, cfg.trunc); };
  } else if (func == "J") {
    f = [&cfg](cplx z) { return eval_J_tilde(z, std::log(z), cfg.data, cfg.trunc); };
  } else {
    throw ValidationError("unknown grid --func '" + func + "' (logderiv, zlog, T, J)");
  }
  std::string out = o.out.empty() ? cfg.out.value_or("") : o.out;
  if (out.empty()) throw ValidationError("grid needs --out");

  // row 0 is the top edge (im_max)
  std::vector<cplx> vals(static_cast<std::size_t>(res) * res);
  auto point = [&](int row, int col) {
    return cplx(win.re_min + (win.re_max - win.re_min) * col / (res - 1),
                win.im_max - (win.im_max - win.im_min) * row / (res - 1));
  };
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int row; (row = next.fetch_add(1)) < res;)
      for (int col = 0; col < res; ++col) {
        cplx v(NAN, NAN);
        try {
          v = f(point(row, col));
        } catch (const NumericError&) {
        } catch (const ValidationError&) {
        }
        vals[static_cast<std::size_t>(row) * res + col] = v;
      }
  };
  const int nt = std::max(1, o.threads > 0 ? o.threads : static_cast<int>(std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  {
    std::ofstream pgm(out, std::ios::binary);
    if (!pgm) throw ValidationError("cannot write '" + out + "'");
    write_phase_pgm(pgm, res, res, vals);
  }
  const std::string csv = std::filesystem::path(out).replace_extension(".csv").string();
  std::ofstream c(csv, std::ios::binary);
  c << "row,col,re,im,value_re,value_im\n";
  for (int row = 0; row < res; ++row)
    for (int col = 0; col < res; ++col) {
      const cplx z = point(row, col), v = vals[static_cast<std::size_t>(row) * res + col];
      c << row << ',' << col << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << ','
        << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  std::size_t failed = 0;
  for (const auto& v : vals) failed += !std::isfinite(v.real());
  std::cout << dump_json(Json{{"pgm", out}, {"csv", csv}, {"res", res}, {"func", func}, {"failed_points", failed}})
            << "\n";
  return 0;
}

int run_divisor(const Options& o) {
  const auto cfg = load_config(o.config);
  const Window win = !o.window.empty() ? parse_window(o.window) : cfg.window.value_or(Window{});
  const int L = o.L > 0 ? o.L : cfg.trunc.L_max;
  const int J = o.J > 0 ? o.J : cfg.trunc.J_max;
  PseudoDivisor d;
  const std::string& k = o.divisor_kind;
  if (k == "P" || k.rfind("Pper", 0) == 0) {
    // w-plane kinds: periodic translates need the strips above and below the window
    Window wide = win;
    if (k != "P") {
      wide.im_min = win.im_min - kTwoPi * J;
      wide.im_max = win.im_max + kTwoPi * J;
    }
    d = build_support_P(cfg.data, L, k == "P" ? win : wide);
    if (k == "Pper+") d = periodify(d, J, PeriodVariant::plus);
    else if (k == "Pper-") d = periodify(d, J, PeriodVariant::minus);
    else if (k == "Pper") d = periodify(d, J, PeriodVariant::full);
    else if (k != "P") throw ValidationError("unknown divisor kind '" + k + "'");
    if (k != "P") {
      std::vector<SupportPoint> keep;
      for (const auto& p : d.points)
        if (win.contains(p.location)) keep.push_back(p);
      d.points = keep;
      d.window = win;
    }
  } else if (k == "D") {
    d = divisor_D(cfg.data, L, win);
  } else if (k == "E") {
    d = mirror_sum(divisor_D(cfg.data, L, win));
  } else {
    throw ValidationError("unknown divisor kind '" + k + "' (P, Pper+, Pper-, Pper, D, E)");
  }
  std::ostringstream os;
  write_divisor_csv(os, d);
  emit(o, &cfg, os.str());
  if (!o.out.empty() || cfg.out) {
    const auto v = classify_finiteness(cfg.data);
    std::cout << dump_json(Json{{"kind", kind_name(d.kind)},
                                {"points", d.size()},
                                {"L_max", L},
                                {"J_max", J},
                                {"finiteness", status_name(v.status)},
                                {"rule", rule_name(v.rule)},
                                {"coverage_warning", d.coverage_warning}})
              << "\n";
  }
  return 0;
}

int run_poles(const Options& o) {
  const auto cfg = load_config(o.config);
  const auto& m = need_model(cfg);
  const double radius = o.radius > 0 ? o.radius : 16.0;
  Json arr = Json::array();
  for (const auto& p : m.singularities(radius)) {
    Json e = complex_json(p.location);
    e["multiplicity"] = p.multiplicity;
    e["level"] = p.level;
    arr.push_back(e);
  }
  emit(o, &cfg, dump_json(Json{{"radius", radius}, {"singularities", arr}}) + "\n");
  return 0;
}

int run_monodromy(const Options& o) {
  const auto cfg = load_config(o.config);
  const cplx c = parse_complex(o.center);
  const double radius = o.radius > 0 ? o.radius : 0.25;
  const auto r = monodromy_loop(c, radius, cfg.data, cfg.trunc);
  Json j{{"center", complex_json(c)},
         {"radius", radius},
         {"value", complex_json(r.value)},
         {"abs_over_2pi", std::abs(r.value) / kTwoPi},
         {"fit", fit_json(r.fit)},
         {"rational", r.rational},
         {"enclosed", r.enclosed},
         {"error", r.error}};
  emit(o, &cfg, dump_json(j) + "\n");
  return 0;
}

int run_residue(const Options& o) {
  const auto cfg = load_config(o.config);
  const cplx z = parse_complex(o.at);
  Json j{{"pole", complex_json(z)}};
  try {
    const auto r = residue_estimate(z, need_model(cfg));
    j["order"] = r.order;
    j["residue"] = complex_json(r.residue);
    j["fit"] = fit_json(r.fit);
    j["radius"] = r.radius;
  } catch (const OrderMismatch& e) {
    j["order"] = e.order();
    j["residue"] = nullptr;
    j["message"] = e.what();
  }
  emit(o, &cfg, dump_json(j) + "\n");
  return 0;
}

int run_weil_poles(const Options& o) {
  const auto cfg = load_config(o.config);
  emit(o, &cfg, dump_json(Json{{"poles", points_json(locate_weil_poles(need_model(cfg)))}}) + "\n");
  return 0;
}

int run_recurrence(const Options& o) {
  const auto cfg = load_config(o.config);
  if (!cfg.counts) throw ValidationError("recurrence needs a config with point counts");
  const auto rep = falsify_report(cfg.counts(o.R), o.d_max, o.R, cfg.doc.value("name", cfg.kind));
  std::ostringstream os;
  if (o.format == "table") {
    os << "sequence " << rep.sequence_id << ", R = " << rep.R << "\n";
    os << "order  residual\n";
    for (const auto& f : rep.fits) os << f.order << "      " << format_double(f.residual) << "\n";
    os << "verdict: " << verdict_text(rep) << " (empirical up to the tested order, not a proof)\n";
  } else if (o.format == "json") {
    Json fits = Json::array();
    for (const auto& f : rep.fits) fits.push_back(Json{{"order", f.order}, {"residual", f.residual}, {"coeffs", f.coeffs}});
    os << dump_json(Json{{"sequence", rep.sequence_id},
                         {"R", rep.R},
                         {"d_max", rep.d_max},
                         {"threshold", kRecurrenceThreshold},
                         {"fits", fits},
                         {"verdict", verdict_text(rep)},
                         {"note", "empirical up to d_max, not a proof"}})
       << "\n";
  } else {
    throw ValidationError("--format must be json or table");
  }
  emit(o, &cfg, os.str());
  return 0;
}

Json report_json(const VerifyReport& r) {
  return Json{{"kind", r.kind},
              {"lhs", complex_json(r.lhs)},
              {"rhs", complex_json(r.rhs)},
              {"discrepancy", r.discrepancy},
              {"truncation_points", r.truncation_points}};
}

int parse_int(const std::string& s, const char* flag) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string(flag) + " expects an integer, got '" + s + "'");
  }
}

int run_verify(const std::string& what, const Options& o) {
  if (what == "classical") {
    const auto test = o.test == "exp_decay"        ? ClassicalTest::exp_decay
                      : o.test == "inverse_square" ? ClassicalTest::inverse_square
                                                   : throw ValidationError("--test must be exp_decay or inverse_square");
    emit(o, nullptr, dump_json(report_json(verify_classical(test, parse_complex(o.w)))) + "\n");
    return 0;
  }
  const auto cfg = load_config(o.config);
  const cplx w = parse_complex(o.w);
  const double tol = o.tol > 0 ? o.tol : cfg.tol;
  const int a = o.a == "auto" ? std::max(1, cfg.trunc.r0) : parse_int(o.a, "--a");
  std::optional<int> b;
  if (!o.b.empty() && o.b != "inf") b = o.b[0] == '+' ? a + parse_int(o.b.substr(1), "--b") : parse_int(o.b, "--b");
  VerifyReport rep;
  if (what == "box") {
    if (!b) throw ValidationError("box verification needs a finite --b");
    rep = verify_box_identity(BoxFunction{cfg.data, w, cfg.trunc}, a, *b, tol);
  } else {
    StepParams p;
    p.a = a;
    p.b = b;
    p.eps = o.eps;
    p.tol = tol;
    rep = verify_step_integrals(parse_step_kind(o.step), cfg.data, w, cfg.trunc, p);
  }
  Json j = report_json(rep);
  j["w"] = complex_json(w);
  j["a"] = a;
  j["b"] = b ? Json(*b) : Json("inf");
  emit(o, &cfg, dump_json(j) + "\n");
  return 0;
}

void fail(const char* kind, const std::string& msg) {
  std::cerr << dump_json(Json{{"error", kind}, {"message", msg}}, 0) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zlog: multiplicative zeta functions over finite fields"};
  app.require_subcommand(1);
  Options o;

  auto* coeffs = app.add_subcommand("coeffs", "power series coefficients of Z_log");
  coeffs->add_option("--config", o.config)->required();
  coeffs->add_option("--terms", o.terms);
  coeffs->add_flag("--log", o.log_series, "coefficients of log Z instead");
  coeffs->add_option("--out", o.out);

  auto* eval = app.add_subcommand("eval", "evaluate a continuation along a path");
  eval->add_option("--config", o.config)->required();
  eval->add_option("--z", o.z, "endpoint (straight path from 0), or w for --func T");
  eval->add_option("--path", o.path, "vertices 'a;b;c', starting at 0");
  eval->add_option("--clearance", o.clearance);
  eval->add_option("--func", o.func, "zlog (default), I, F, f, T, logderiv");
  eval->add_option("--out", o.out);

  auto* grid = app.add_subcommand("grid", "phase raster plus CSV over a window");
  grid->add_option("--config", o.config)->required();
  grid->add_option("--window", o.window);
  grid->add_option("--res", o.res);
  grid->add_option("--func", o.func, "logderiv (default), zlog, T, J");
  grid->add_option("--threads", o.threads);
  grid->add_option("--clearance", o.clearance);
  grid->add_option("--out", o.out);

  auto* divisor = app.add_subcommand("divisor", "pseudo-divisor support as CSV");
  divisor->add_option("--config", o.config)->required();
  divisor->add_option("--kind", o.divisor_kind, "P, Pper+, Pper-, Pper, D, E");
  divisor->add_option("--window", o.window);
  divisor->add_option("--L", o.L);
  divisor->add_option("--J", o.J);
  divisor->add_option("--out", o.out);

  auto* poles = app.add_subcommand("poles", "singularities of the log-derivative");
  poles->add_option("--config", o.config)->required();
  poles->add_option("--radius", o.radius);
  poles->add_option("--out", o.out);

  auto* mono = app.add_subcommand("monodromy", "loop integral of J~ around a point");
  mono->add_option("--config", o.config)->required();
  mono->add_option("--center", o.center);
  mono->add_option("--radius", o.radius);
  mono->add_option("--out", o.out);

  auto* residue = app.add_subcommand("residue", "residue of the log-derivative at a point");
  residue->add_option("--config", o.config)->required();
  residue->add_option("--at", o.at)->required();
  residue->add_option("--out", o.out);

  auto* weil = app.add_subcommand("weil-poles", "poles on |z| = sqrt(q)");
  weil->add_option("--config", o.config)->required();
  weil->add_option("--out", o.out);

  auto* rec = app.add_subcommand("recurrence", "linear recurrence test on log N_r");
  rec->add_option("--config", o.config)->required();
  rec->add_option("--d-max", o.d_max);
  rec->add_option("--R", o.R);
  rec->add_option("--format", o.format, "json or table");
  rec->add_option("--out", o.out);

  auto* verify = app.add_subcommand("verify", "Abel-Plana identity checks");
  verify->require_subcommand(1);
  for (const char* name : {"box", "step", "classical"}) {
    auto* sc = verify->add_subcommand(name);
    if (std::string(name) != "classical") sc->add_option("--config", o.config)->required();
    sc->add_option("--w", o.w);
    sc->add_option("--out", o.out);
    if (std::string(name) == "classical") {
      sc->add_option("--test", o.test, "exp_decay or inverse_square");
      continue;
    }
    sc->add_option("--a", o.a, "integer or auto (r0)");
    sc->add_option("--b", o.b, "integer, +offset from a, or inf");
    sc->add_option("--tol", o.tol);
    if (std::string(name) == "step") {
      sc->add_option("--kind", o.step, "V_plus, V_minus, real_axis, H_plus, H_minus");
      sc->add_option("--eps", o.eps);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail("validation", e.what());
    return 2;
  }

  try {
    if (*coeffs) return run_coeffs(o);
    if (*eval) return run_eval(o);
    if (*grid) return run_grid(o);
    if (*divisor) return run_divisor(o);
    if (*poles) return run_poles(o);
    if (*mono) return run_monodromy(o);
    if (*residue) return run_residue(o);
    if (*weil) return run_weil_poles(o);
    if (*rec) return run_recurrence(o);
    for (auto* sc : verify->get_subcommands())
      if (*sc) return run_verify(sc->get_name(), o);
  } catch (const ValidationError& e) {
    fail("validation", e.what());
    return 2;
  } catch (const NumericError& e) {
    fail("numeric", e.what());
    return 3;
  } catch (const std::exception& e) {
    fail("validation", e.what());
    return 2;
  }
  return 2;
}
