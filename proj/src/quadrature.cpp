#include "zlog/quadrature.hpp"

#include <cmath>
#include <queue>

namespace zlog {

namespace {

// Kronrod 15-point abscissae (positive half), weights; Gauss 7-point weights on the odd nodes
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<cplx(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kron = fc * kWgk[7];
  cplx gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const cplx s = f(c - dx) + f(c + dx);
    kron += kWgk[i] * s;
    if (i % 2 == 1) gauss += kWg[i / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadResult integrate_real(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                          int max_intervals) {
  QuadResult out;
  if (a == b) {
    out.value = 0;
    return out;
  }
  std::priority_queue<Piece> heap;
  Piece first = gk15(f, a, b);
  heap.push(first);
  cplx total = first.value;
  double err = first.error;
  int count = 1;
  while (err > abs_tol && count < max_intervals) {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      heap.push(worst);
      break;
    }
    const Piece l = gk15(f, worst.a, mid);
    const Piece r = gk15(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // recompute sums to shed accumulated cancellation
  total = 0;
  err = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = err;
  out.evaluations = 15 * (2 * count - 1);
  out.converged = err <= abs_tol;
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) out.converged = false;
  return out;
}

QuadResult integrate_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, double abs_tol,
                             int max_intervals) {
  const cplx d = b - a;
  QuadResult r = integrate_real([&](double t) { return f(a + t * d) * d; }, 0.0, 1.0, abs_tol, max_intervals);
  return r;
}

QuadResult integrate_circle(const std::function<cplx(cplx)>& f, cplx center, double radius, double abs_tol,
                            int max_points) {
  QuadResult out;
  auto sample = [&](int n, int offset, int stride) {
    cplx s = 0;
    for (int k = offset; k < n; k += stride) {
      const cplx u = std::polar(1.0, kTwoPi * k / n);
      s += f(center + radius * u) * u;
    }
    return s;
  };
  int n = 64;
  cplx sum = sample(n, 0, 1);
  cplx prev = sum * (cplx(0, kTwoPi) * radius / static_cast<double>(n));
  int evals = n;
  while (true) {
    const int n2 = 2 * n;
    sum += sample(n2, 1, 2);
    evals += n;
    const cplx cur = sum * (cplx(0, kTwoPi) * radius / static_cast<double>(n2));
    const double diff = std::abs(cur - prev);
    n = n2;
    prev = cur;
    if (diff <= abs_tol || n >= max_points) {
      out.value = cur;
      out.error = diff;
      out.converged = diff <= abs_tol;
      break;
    }
  }
  out.evaluations = evals;
  return out;
}

}  // namespace zlog
