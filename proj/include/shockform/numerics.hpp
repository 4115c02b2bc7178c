#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shockform {

/// Bad user-supplied data: scenario constants, config values, out-of-range
/// arguments. Messages name the offending field.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal numerical procedure could not reach its target accuracy
/// (lost bracket, step-size underflow, non-convergent tail integral).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace num {

// --------------------------------------------------------------------------
// root finding
// --------------------------------------------------------------------------

/// Newton iteration safeguarded by bisection on a sign-changing bracket
/// (rtsafe-style). Takes a bisection step whenever the Newton step would
/// leave the bracket or fails to shrink it fast enough.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double xtol,
                     double ftol = 0.0, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("newton_bisect: root not bracketed in [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
  double xl = lo, xh = hi;
  if (flo > 0.0) std::swap(xl, xh);  // keep f(xl) < 0 < f(xh)
  double x = 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  double fx = f(x);
  double dfx = df(x);
  for (int it = 0; it < max_iter; ++it) {
    const bool newton_unsafe =
        ((x - xh) * dfx - fx) * ((x - xl) * dfx - fx) > 0.0 ||
        std::abs(2.0 * fx) > std::abs(dx_old * dfx);
    dx_old = dx;
    if (newton_unsafe) {
      dx = 0.5 * (xh - xl);
      x = xl + dx;
    } else {
      dx = fx / dfx;
      x -= dx;
    }
    if (std::abs(dx) <= xtol) return x;
    fx = f(x);
    dfx = df(x);
    if (ftol > 0.0 && std::abs(fx) <= ftol) return x;
    if (fx < 0.0) xl = x; else xh = x;
  }
  throw NumericalError("newton_bisect: no convergence within iteration limit");
}

/// Plain bisection; requires lo < hi with a sign change.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("bisect: root not bracketed");
  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    if (fm == 0.0 || hi - lo <= xtol) return m;
    if ((fm > 0.0) == (fhi > 0.0)) { hi = m; fhi = fm; }
    else { lo = m; flo = fm; }
  }
  return 0.5 * (lo + hi);
}

// --------------------------------------------------------------------------
// quadrature
// --------------------------------------------------------------------------

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr double kGK15Node[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kGK15Weight[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weight[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
void gk15(F&& f, double a, double b, double& kronrod, double& gauss) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  kronrod = kGK15Weight[7] * fc;
  gauss = kG7Weight[3] * fc;
  for (int k = 0; k < 7; ++k) {
    const double dx = hw * kGK15Node[k];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += kGK15Weight[k] * (f1 + f2);
    if (k % 2 == 1) gauss += kG7Weight[k / 2] * (f1 + f2);
  }
  kronrod *= hw;
  gauss *= hw;
}

template <class F>
double integrate_rec(F&& f, double a, double b, double tol, int depth) {
  double k, g;
  gk15(f, a, b, k, g);
  const double err = std::abs(k - g);
  // once the estimate reaches the rounding floor of the panel value,
  // further subdivision only chases noise
  const double floor = 1e-14 * std::abs(k);
  if (err <= tol || err <= floor || depth <= 0 ||
      (b - a) <= 1e-14 * (1.0 + std::abs(a) + std::abs(b)))
    return k;
  const double m = 0.5 * (a + b);
  return integrate_rec(f, a, m, 0.5 * tol, depth - 1) +
         integrate_rec(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss–Kronrod (G7,K15) with bisection refinement.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10) {
  if (a == b) return 0.0;
  return detail::integrate_rec(f, a, b, tol, 30);
}

/// Panel list builder: {lo, hi} plus every mark strictly inside, sorted,
/// deduplicated. Integrands with known fronts/kinks get one panel per piece.
inline std::vector<double> panels(double lo, double hi,
                                  std::vector<double> marks) {
  std::vector<double> p{lo, hi};
  for (double m : marks)
    if (m > lo && m < hi) p.push_back(m);
  std::sort(p.begin(), p.end());
  const double eps = 1e-12 * (std::abs(hi - lo) + 1.0);
  p.erase(std::unique(p.begin(), p.end(),
                      [eps](double x, double y) { return y - x < eps; }),
          p.end());
  if (p.back() != hi) p.back() = hi;
  return p;
}

/// Integrate over consecutive panels.
template <class F>
double integrate(F&& f, std::span<const double> pts, double tol = 1e-10) {
  if (pts.size() < 2) return 0.0;
  const double per_panel = tol / static_cast<double>(pts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate(f, pts[i], pts[i + 1], per_panel);
  return total;
}

// --------------------------------------------------------------------------
// uniform-grid tables
// --------------------------------------------------------------------------

namespace detail {

// Cubic Lagrange interpolation through four consecutive uniform nodes;
// u is measured from the second node in units of the spacing.
inline double cubic4(double ym1, double y0, double y1, double y2, double u) {
  const double um = u - 1.0;
  const double up = u + 1.0;
  const double u2 = u - 2.0;
  return ym1 * (-u * um * u2 / 6.0) + y0 * (up * um * u2 / 2.0) +
         y1 * (-up * u * u2 / 2.0) + y2 * (up * u * um / 6.0);
}

inline double cubic4_deriv(double ym1, double y0, double y1, double y2,
                           double u) {
  // d/du of cubic4
  const double a = -ym1 / 6.0 + y0 / 2.0 - y1 / 2.0 + y2 / 6.0;   // u^3
  const double b = ym1 / 2.0 - y0 + y1 / 2.0;                     // u^2
  const double c = -ym1 / 3.0 - y0 / 2.0 + y1 - y2 / 6.0;         // u^1
  return (3.0 * a * u + 2.0 * b) * u + c;
}

}  // namespace detail

/// Sampled function on a uniform grid with local cubic interpolation and
/// fixed values outside the grid.
class UniformTable {
 public:
  UniformTable() = default;
  UniformTable(double x0, double h, std::vector<double> y, double below,
               double above)
      : x0_(x0), h_(h), y_(std::move(y)), below_(below), above_(above) {
    if (y_.size() < 4) throw ValidationError("UniformTable: need >= 4 nodes");
    if (h_ <= 0) throw ValidationError("UniformTable: step must be positive");
  }

  double x_min() const { return x0_; }
  double x_max() const { return x0_ + h_ * static_cast<double>(y_.size() - 1); }
  double step() const { return h_; }
  std::size_t size() const { return y_.size(); }
  double node(std::size_t i) const { return y_[i]; }
  double x_at(std::size_t i) const { return x0_ + h_ * static_cast<double>(i); }

  double operator()(double x) const {
    if (x < x_min()) return below_;
    if (x > x_max()) return above_;
    std::size_t k;
    double u;
    locate(x, k, u);
    return detail::cubic4(y_[k - 1], y_[k], y_[k + 1], y_[k + 2], u);
  }

  double derivative(double x) const {
    if (x < x_min() || x > x_max()) return 0.0;
    std::size_t k;
    double u;
    locate(x, k, u);
    return detail::cubic4_deriv(y_[k - 1], y_[k], y_[k + 1], y_[k + 2], u) /
           h_;
  }

 private:
  void locate(double x, std::size_t& k, double& u) const {
    const double s = (x - x0_) / h_;
    auto i = static_cast<std::ptrdiff_t>(std::floor(s));
    i = std::clamp<std::ptrdiff_t>(i, 1,
                                   static_cast<std::ptrdiff_t>(y_.size()) - 3);
    k = static_cast<std::size_t>(i);
    u = s - static_cast<double>(i);
  }

  double x0_ = 0, h_ = 1;
  std::vector<double> y_;
  double below_ = 0, above_ = 0;
};

/// Dense rectangular table with separable cubic interpolation, row-major
/// over (ix, iy). Coordinates are clamped to the grid.
class Grid2 {
 public:
  Grid2() = default;
  Grid2(double x0, double hx, std::size_t nx, double y0, double hy,
        std::size_t ny)
      : x0_(x0), hx_(hx), nx_(nx), y0_(y0), hy_(hy), ny_(ny), v_(nx * ny) {
    if (nx < 4 || ny < 4) throw ValidationError("Grid2: need >= 4x4 nodes");
  }

  double& at(std::size_t ix, std::size_t iy) { return v_[ix * ny_ + iy]; }
  double at(std::size_t ix, std::size_t iy) const { return v_[ix * ny_ + iy]; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

  double eval(double x, double y) const {
    std::size_t kx, ky;
    double ux, uy;
    locate(x, x0_, hx_, nx_, kx, ux);
    locate(y, y0_, hy_, ny_, ky, uy);
    double col[4];
    for (int r = 0; r < 4; ++r) {
      const double* row = &v_[(kx - 1 + static_cast<std::size_t>(r)) * ny_];
      col[r] = detail::cubic4(row[ky - 1], row[ky], row[ky + 1], row[ky + 2],
                              uy);
    }
    return detail::cubic4(col[0], col[1], col[2], col[3], ux);
  }

 private:
  static void locate(double x, double x0, double h, std::size_t n,
                     std::size_t& k, double& u) {
    double s = (x - x0) / h;
    s = std::clamp(s, 0.0, static_cast<double>(n - 1));
    auto i = static_cast<std::ptrdiff_t>(std::floor(s));
    i = std::clamp<std::ptrdiff_t>(i, 1, static_cast<std::ptrdiff_t>(n) - 3);
    k = static_cast<std::size_t>(i);
    u = s - static_cast<double>(i);
  }

  double x0_ = 0, hx_ = 1;
  std::size_t nx_ = 0;
  double y0_ = 0, hy_ = 1;
  std::size_t ny_ = 0;
  std::vector<double> v_;
};

// --------------------------------------------------------------------------
// grid integrals
// --------------------------------------------------------------------------

/// Running trapezoid integral anchored at node `center`:
/// out[j] = integral from x[center] to x[j].
inline std::vector<double> cumulative_from(std::span<const double> f, double h,
                                           std::size_t center) {
  std::vector<double> c(f.size());
  c[center] = 0.0;
  for (std::size_t j = center + 1; j < f.size(); ++j)
    c[j] = c[j - 1] + 0.5 * h * (f[j - 1] + f[j]);
  for (std::size_t j = center; j-- > 0;)
    c[j] = c[j + 1] - 0.5 * h * (f[j] + f[j + 1]);
  return c;
}

/// Composite Simpson rule over an odd number of uniform nodes.
inline double simpson(std::span<const double> f, double h) {
  if (f.size() < 3 || f.size() % 2 == 0)
    throw ValidationError("simpson: need an odd number of nodes");
  double s = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    s += f[i] * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

// --------------------------------------------------------------------------
// ODE integration
// --------------------------------------------------------------------------

/// One-dimensional Dormand–Prince 5(4) advance from x_from to x_to with an
/// embedded error estimate; works in either direction. h_hint carries the
/// accepted step size across calls.
template <class RHS>
double ode_advance(RHS&& rhs, double x_from, double x_to, double y,
                   double tol, double& h_hint) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                          e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                          e6 = 187.0 / 2100, e7 = 1.0 / 40;

  const double dir = (x_to >= x_from) ? 1.0 : -1.0;
  if (x_to == x_from) return y;
  double x = x_from;
  double h = (h_hint > 0 ? h_hint : std::abs(x_to - x_from)) * dir;
  int guard = 0;
  while (dir * (x_to - x) > 0) {
    if (++guard > 100000)
      throw NumericalError("ode_advance: iteration limit at x=" +
                           std::to_string(x));
    if (std::abs(h) > std::abs(x_to - x)) h = x_to - x;
    const double k1 = rhs(y);
    const double k2 = rhs(y + h * a21 * k1);
    const double k3 = rhs(y + h * (a31 * k1 + a32 * k2));
    const double k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = rhs(y5);
    const double y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 +
                               e6 * k6 + e7 * k7);
    const double err = std::abs(y5 - y4);
    const double scale = tol * (1.0 + std::abs(y));
    if (err <= scale) {
      x += h;
      y = y5;
    }
    const double fac =
        0.9 * std::pow(scale / std::max(err, 1e-300), 0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    if (std::abs(h) < 1e-14 * (1.0 + std::abs(x)))
      throw NumericalError("ode_advance: step size underflow at x=" +
                           std::to_string(x));
  }
  h_hint = std::abs(h);
  return y;
}

// --------------------------------------------------------------------------
// least squares
// --------------------------------------------------------------------------

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

inline LineFit fit_line(std::span<const double> xs,
                        std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ValidationError("fit_line: need >= 2 matching points");
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ValidationError("fit_line: degenerate abscissae");
  LineFit out;
  out.slope = (n * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (out.intercept + out.slope * xs[i]);
    ss += r * r;
  }
  out.rms = std::sqrt(ss / n);
  return out;
}

}  // namespace num
}  // namespace shockform
