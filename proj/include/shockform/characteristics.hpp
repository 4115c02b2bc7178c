#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shockform/dynamics.hpp"
#include "shockform/mollifier.hpp"
#include "shockform/numerics.hpp"
#include "shockform/scenario.hpp"

namespace shockform {

struct CharConfig {
  std::size_t x0_grid_points = 129;  // odd, so Simpson applies directly
  double invert_tol = 1e-12;         // residual tolerance, in units of a1-a2
  std::optional<double> A_override;  // manual monotonicity constant
  double monotonicity_margin = 0.1;  // required min of dx/dx0 in units of eps
  double tail_tol = 1e-8;            // Cauchy tolerance for the t=0 integral
};

/// The corrected characteristic map and everything cached for it.
///
/// Two running integrals are tabulated on the (x0, tau) product grid,
/// anchored at tau = 0:
///
///   Cx(x0,tau) = int_0^tau [B2 f'(U1(x0,rho)) + B1 f'(U1(xi(x0),rho))
///                           - f'(u1(x0))] dtau',
///   Cd(x0,tau) = int_0^tau [B2 f''(U1(x0,rho)) - B1 f''(U1(xi(x0),rho))]
///                           * dU1/dx0 dtau'.
///
/// With psi0 = eps*tau every public quantity combines them without removable
/// singularities:
///
///   x_hat    = x0 psi0/psi00 + b t + (eps/psi0') (Cx + Q),
///   dx/dx0   = (eps/psi0') Cd + eps (g'(x0) + A),
///   x_map    = x_hat + eps (g(x0) + A x0),
///
/// where Q(tau) is the running integral of the correction q and
/// g(x0) = -(Cx(x0,inf) + Q(inf))/psi0' makes x_map(x0, 0) = x0 (1 + eps A)
/// exact. The constant A is chosen by a doubling search so the map stays
/// strictly increasing in x0 uniformly over t in [0, 2 t*].
class CharacteristicField {
 public:
  CharacteristicField(const Scenario& s, const BTable& bt,
                      const RhoSolution& rho, const CharConfig& cfg = {})
      : s_(&s), bt_(&bt), rho_(&rho), cfg_(cfg) {
    const std::size_t nx = cfg.x0_grid_points;
    if (nx < 33 || nx % 2 == 0)
      throw ValidationError(
          "char.x0_grid_points: need an odd count of at least 33");
    const std::size_t nt = rho.size();
    hx_ = (s.a1() - s.a2()) / static_cast<double>(nx - 1);

    // per-node scenario data
    x0_.resize(nx);
    u1_.resize(nx);
    u1r_.resize(nx);
    u1p_.resize(nx);
    fpu1_.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
      x0_[i] = s.a2() + hx_ * static_cast<double>(i);
      u1_[i] = s.u1(x0_[i]);
      u1r_[i] = s.U() + s.u0() - u1_[i];
      u1p_[i] = s.u1_prime(x0_[i]);
      fpu1_[i] = -s.K() * x0_[i] + s.b();
    }

    cd_ = num::Grid2(s.a2(), hx_, nx, rho.tau_min(), rho.step(), nt);
    cx_ = num::Grid2(s.a2(), hx_, nx, rho.tau_min(), rho.step(), nt);

    // pass 1: derivative integrand, cumulative in tau (q-free, so it can
    // feed the corrections before q exists)
    {
      std::vector<double> row(nt);
      std::vector<double> b1v(nt), b2v(nt);
      for (std::size_t j = 0; j < nt; ++j) {
        b1v[j] = bt.b1(rho.rho_at(j));
        b2v[j] = 1.0 - b1v[j];
      }
      for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
          const double U1 = b2v[j] * u1_[i] + b1v[j] * u1r_[i];
          const double U1r = s.U() + s.u0() - U1;
          // dU1/dx0 = (B2 - B1) u1'(x0); the xi-branch derivative collapses
          // through u1'(xi) xi' = -u1'
          const double dU1 = (b2v[j] - b1v[j]) * u1p_[i];
          row[j] = (b2v[j] * s.flux().fsecond(U1) -
                    b1v[j] * s.flux().fsecond(U1r)) *
                   dU1;
        }
        auto cum = num::cumulative_from(row, rho.step(), rho.center_index());
        for (std::size_t j = 0; j < nt; ++j) cd_.at(i, j) = cum[j];
      }

      // weighted x0-integral of Cd feeding the correction g(tau)
      std::vector<double> weighted(nt);
      std::vector<double> slice(nx);
      for (std::size_t j = 0; j < nt; ++j) {
        for (std::size_t i = 0; i < nx; ++i)
          slice[i] = u1_[i] * cd_.at(i, j);
        weighted[j] = num::simpson(slice, hx_);
      }
      corrections_.emplace(s, bt, rho, weighted);

      // pass 2: transport integrand (q kept separate as its own running
      // integral so the 2-D tables stay q-free)
      for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
          const double U1 = b2v[j] * u1_[i] + b1v[j] * u1r_[i];
          const double U1r = s.U() + s.u0() - U1;
          row[j] = b2v[j] * s.flux().fprime(U1) +
                   b1v[j] * s.flux().fprime(U1r) - fpu1_[i];
        }
        auto cum = num::cumulative_from(row, rho.step(), rho.center_index());
        for (std::size_t j = 0; j < nt; ++j) cx_.at(i, j) = cum[j];
      }
    }

    // t = 0 correction g(x0), defined through the converged tail of the
    // transport integral; refuse to proceed when the tail has not settled
    {
      const double q_full = corrections_->q_integral(rho.tau_max());
      const double q_part = corrections_->q_integral(0.9 * rho.tau_max());
      std::vector<double> g(nx);
      double worst = 0.0;
      for (std::size_t i = 0; i < nx; ++i) {
        const double full = cx_.at(i, nt - 1) + q_full;
        const double part =
            cx_.eval(x0_[i], 0.9 * rho.tau_max()) + q_part;
        worst = std::max(worst, std::abs(full - part));
        g[i] = -full / s.psi0_prime();
      }
      if (worst > cfg.tail_tol)
        throw NumericalError(
            "characteristics: the t=0 correction integral is not converged "
            "at tau_max (tail " + std::to_string(worst) +
            "); enlarge dynamics.tau_max");
      std::vector<double> gp(nx);
      for (std::size_t i = 1; i + 1 < nx; ++i)
        gp[i] = (g[i + 1] - g[i - 1]) / (2.0 * hx_);
      gp[0] = (g[1] - g[0]) / hx_;
      gp[nx - 1] = (g[nx - 1] - g[nx - 2]) / hx_;
      g_ = num::UniformTable(s.a2(), hx_, std::move(g), 0.0, 0.0);
      gp_ = num::UniformTable(s.a2(), hx_, std::move(gp), 0.0, 0.0);
    }
  }

  const Scenario& scenario() const { return *s_; }
  const CorrectionFunctions& corrections() const { return *corrections_; }
  const CharConfig& config() const { return cfg_; }
  std::size_t x0_grid_points() const { return x0_.size(); }

  // -------------------------------------------------------------- profile

  /// Transported profile U1(x0, rho) = B2 u1(x0) + B1 u1(xi(x0)).
  double U1(double x0, double rho) const {
    const double b1 = bt_->b1(rho);
    return (1.0 - b1) * s_->u1(x0) + b1 * s_->u1_reflected(x0);
  }

  double dU1_dx0(double x0, double rho) const {
    const double b1 = bt_->b1(rho);
    return (1.0 - b1) * s_->u1_prime(x0) +
           b1 * s_->u1_prime(s_->xi(x0)) * s_->xi_prime(x0);
  }

  // ------------------------------------------------------ map evaluation

  /// Running transport integral divided by psi0' tau (finite at tau = 0).
  double X1(double x0, double tau) const {
    rho_->require_in_range(tau);
    const double num = cx_.eval(x0, tau) + corrections_->q_integral(tau);
    if (std::abs(tau) < 0.5 * rho_->step())
      return transport_integrand(x0, 0.0) / s_->psi0_prime();
    return num / (s_->psi0_prime() * tau);
  }

  /// x0-derivative of X1 (again finite at tau = 0).
  double dX1_dx0(double x0, double tau) const {
    rho_->require_in_range(tau);
    if (std::abs(tau) < 0.5 * rho_->step())
      return derivative_integrand(x0, 0.0) / s_->psi0_prime() -
             1.0 / s_->psi00();
    return cd_.eval(x0, tau) / (s_->psi0_prime() * tau) - 1.0 / s_->psi00();
  }

  /// x_hat(x0, t) = X(x0, t) + psi0 X1, with tau = psi0(t)/eps.
  double x_hat(double x0, double t, double eps) const {
    const double tau = tau_checked(t, eps);
    return x0 * s_->psi0(t) / s_->psi00() + s_->b() * t +
           (eps / s_->psi0_prime()) *
               (cx_.eval(x0, tau) + corrections_->q_integral(tau));
  }

  /// Full invertible map x_hat + eps (g(x0) + A x0).
  double x_map(double x0, double t, double eps, double A) const {
    return x_hat(x0, t, eps) + eps * (g_(x0) + A * x0);
  }

  double dx_dx0(double x0, double t, double eps, double A) const {
    const double tau = tau_checked(t, eps);
    return (eps / s_->psi0_prime()) * cd_.eval(x0, tau) +
           eps * (gp_(x0) + A);
  }

  /// t = 0 map correction (independent of eps).
  double g_of_x0(double x0) const { return g_(x0); }
  double g_prime(double x0) const { return gp_(x0); }

  // -------------------------------------------------------- monotonicity

  struct AChoice {
    double A = 0.0;
    double min_slope = 0.0;  // min of dx/dx0 over the search grid, per eps
  };

  /// Smallest A in {1, 2, 4, ...} giving dx/dx0 >= margin*eps on a
  /// 129 x 256 (x0, t) grid covering [0, 2 t*].
  AChoice choose_A(double eps, std::size_t t_points = 256) const {
    // dx/dx0 = eps * (Cd/psi0' + g' + A), so search the eps-free part
    double base_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < t_points; ++k) {
      const double t = 2.0 * s_->t_star() * static_cast<double>(k) /
                       static_cast<double>(t_points - 1);
      const double tau = tau_checked(t, eps);
      for (std::size_t i = 0; i < x0_.size(); ++i) {
        const double v =
            cd_.eval(x0_[i], tau) / s_->psi0_prime() + gp_(x0_[i]);
        base_min = std::min(base_min, v);
      }
    }
    for (double A = 1.0; A <= 1024.0; A *= 2.0) {
      if (base_min + A >= cfg_.monotonicity_margin)
        return AChoice{A, eps * (base_min + A)};
    }
    throw NumericalError(
        "choose_A: no A <= 1024 keeps the characteristic map monotone; "
        "the scenario/epsilon combination is outside the method's range");
  }

  // ------------------------------------------------------------ inversion

  /// Solve x_map(x0, t) = x for x0 in [a2, a1]; x outside the map's range
  /// clamps to the corresponding endpoint (there the profile is constant).
  double invert_x0(double x, double t, double eps, double A) const {
    const double lo = s_->a2(), hi = s_->a1();
    const double span = hi - lo;
    double flo = x_map(lo, t, eps, A) - x;
    double fhi = x_map(hi, t, eps, A) - x;
    if (flo >= 0.0) return lo;
    if (fhi <= 0.0) return hi;
    const double ftol = cfg_.invert_tol * span;
    double xl = lo, xh = hi;
    double x0 = lo + span * (0.0 - flo) / (fhi - flo);  // secant start
    for (int it = 0; it < 100; ++it) {
      const double fx = x_map(x0, t, eps, A) - x;
      if (std::abs(fx) <= ftol) return x0;
      if (fx < 0.0) xl = x0; else xh = x0;
      const double d = dx_dx0(x0, t, eps, A);
      double next = x0 - fx / d;
      if (!(next > xl && next < xh)) next = 0.5 * (xl + xh);
      if (std::abs(next - x0) < 1e-16 * span) return next;
      x0 = next;
    }
    return x0;
  }

  // ------------------------------------------------- raw table accessors

  double transport_cumulative(double x0, double tau) const {
    return cx_.eval(x0, tau);
  }
  double derivative_cumulative(double x0, double tau) const {
    return cd_.eval(x0, tau);
  }

  /// Integrand of Cx at arbitrary (x0, tau), recomputed from scratch.
  double transport_integrand(double x0, double tau) const {
    const double r = rho_->rho(tau);
    const double b1 = bt_->b1(r);
    const double b2 = 1.0 - b1;
    const double u1 = s_->u1(x0);
    const double U1 = b2 * u1 + b1 * (s_->U() + s_->u0() - u1);
    const double U1r = s_->U() + s_->u0() - U1;
    return b2 * s_->flux().fprime(U1) + b1 * s_->flux().fprime(U1r) -
           (-s_->K() * x0 + s_->b());
  }

  double derivative_integrand(double x0, double tau) const {
    const double r = rho_->rho(tau);
    const double b1 = bt_->b1(r);
    const double b2 = 1.0 - b1;
    const double u1 = s_->u1(x0);
    const double U1 = b2 * u1 + b1 * (s_->U() + s_->u0() - u1);
    const double U1r = s_->U() + s_->u0() - U1;
    return (b2 * s_->flux().fsecond(U1) - b1 * s_->flux().fsecond(U1r)) *
           (b2 - b1) * s_->u1_prime(x0);
  }

  double tau_checked(double t, double eps) const {
    if (!(eps > 0.0)) throw ValidationError("eps: must be positive");
    const double tau = s_->tau_of(t, eps);
    rho_->require_in_range(tau);
    return tau;
  }

 private:
  const Scenario* s_;
  const BTable* bt_;
  const RhoSolution* rho_;
  CharConfig cfg_;
  double hx_ = 0.0;
  std::vector<double> x0_, u1_, u1r_, u1p_, fpu1_;
  num::Grid2 cd_, cx_;
  std::optional<CorrectionFunctions> corrections_;
  num::UniformTable g_, gp_;
};

}  // namespace shockform
