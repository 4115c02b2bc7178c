#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "shockform/characteristics.hpp"
#include "shockform/dynamics.hpp"
#include "shockform/mollifier.hpp"
#include "shockform/numerics.hpp"
#include "shockform/scenario.hpp"

namespace shockform {

struct PhasesConfig {
  double omega_lambda = 5.0;       // width of the origin blend Omega(tau)
  std::size_t t_grid_points = 1024;
};

/// Singularity trajectories.
///
/// The endpoint characteristics phi_hat_i integrate the new-characteristic
/// velocity at x0 = a_i,
///
///   j_i(tau) = B2 f'(U1(a_i,rho)) + B1 f'(U1(xi(a_i),rho)) + q(tau),
///
/// from the exact initial positions a_i, so that
/// phi_hat_1 - phi_hat_2 = eps * rho(tau) identically (the normalization
/// difference against the x*-anchored representation is an O(eps) constant).
/// The shared correction hat_phi solves the linear equation obtained by
/// zeroing the sum of the two jump conditions, with the trajectory origins
/// replaced by the blend X0_hat(i,tau) = a_i + Omega(tau)(x_check - a_i):
///
///   (tau hat_phi)'(tau) = Phi(tau)/psi0',
///   Phi = [R - j1 (W1 - u0) - j2 (U - W2)] / (U - u0 + W1 - W2),
///
/// where W_i = U1(X0_hat(i,tau), rho) and R collects the B-weighted flux
/// differences. The assembled trajectories are
///
///   phi_i(t) = phi_hat_i(t) + eps (TPH(tau) - TPH(tau0)),
///
/// TPH(tau) = int_0^tau Phi/psi0', anchored at tau0 = psi00/eps so the
/// fronts start exactly at a_i.
class PhaseFunctions {
 public:
  PhaseFunctions(const Scenario& s, const BTable& bt, const RhoSolution& rho,
                 const CharacteristicField& field,
                 const PhasesConfig& cfg = {})
      : s_(&s), bt_(&bt), rho_(&rho), field_(&field), cfg_(cfg) {
    if (!(cfg_.omega_lambda > 0.0))
      throw ValidationError("phases.omega_lambda: must be positive");
    if (cfg_.t_grid_points < 16)
      throw ValidationError("phases.t_grid_points: need at least 16");
    x_check_ = s.x_check();
    if (!(x_check_ > s.a2() && x_check_ < s.a1()))
      throw ValidationError("scenario: confluence origin lies outside "
                            "(a2, a1)");

    const std::size_t n = rho.size();
    std::vector<double> j1(n), j2(n), phi_over(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Point p = eval_point(rho.tau_at(j));
      j1[j] = p.j1;
      j2[j] = p.j2;
      phi_over[j] = p.Phi / s.psi0_prime();
    }
    const double h = rho.step();
    auto J1 = num::cumulative_from(j1, h, rho.center_index());
    auto J2 = num::cumulative_from(j2, h, rho.center_index());
    auto TPH = num::cumulative_from(phi_over, h, rho.center_index());
    const double j1lo = J1.front(), j1hi = J1.back();
    const double j2lo = J2.front(), j2hi = J2.back();
    const double tlo = TPH.front(), thi = TPH.back();
    J1_ = num::UniformTable(rho.tau_min(), h, std::move(J1), j1lo, j1hi);
    J2_ = num::UniformTable(rho.tau_min(), h, std::move(J2), j2lo, j2hi);
    TPH_ = num::UniformTable(rho.tau_min(), h, std::move(TPH), tlo, thi);
  }

  double omega_lambda() const { return cfg_.omega_lambda; }
  double x_check() const { return x_check_; }

  /// Origin blend: 1 far past the interaction, 0 far before it.
  double Omega(double tau) const {
    return MollifierPair::sigma(-tau / cfg_.omega_lambda);
  }

  double X_hat_0(int i, double tau) const {
    const double a = (i == 1) ? s_->a1() : s_->a2();
    return a + Omega(tau) * (x_check_ - a);
  }

  /// New-characteristic velocity at the endpoint a_i.
  double endpoint_velocity(int i, double tau) const {
    return eval_point(tau).velocity(i);
  }

  /// Endpoint characteristic, anchored at phi_hat_i(0) = a_i.
  double phi_hat(int i, double t, double eps) const {
    const double tau = field_->tau_checked(t, eps);
    const double tau0 = tau0_checked(eps);
    const double a = (i == 1) ? s_->a1() : s_->a2();
    const num::UniformTable& J = (i == 1) ? J1_ : J2_;
    return a + (eps / s_->psi0_prime()) * (J(tau) - J(tau0));
  }

  /// Shared correction hat_phi(tau) = TPH(tau)/tau; O(1/tau) as tau -> inf,
  /// bounded as tau -> -inf.
  double hat_phi(double tau) const {
    rho_->require_in_range(tau);
    if (std::abs(tau) < 0.5 * rho_->step())
      return eval_point(0.0).Phi / s_->psi0_prime();
    return TPH_(tau) / tau;
  }

  double tau_phi_hat(double tau) const { return TPH_(tau); }

  /// Assembled trajectory phi_i(t).
  double phi(int i, double t, double eps) const {
    const double tau = field_->tau_checked(t, eps);
    const double tau0 = tau0_checked(eps);
    return phi_hat(i, t, eps) + eps * (TPH_(tau) - TPH_(tau0));
  }

  /// Analytic time derivative of phi_i along tau(t) = psi0(t)/eps.
  double phi_dt(int i, double t, double eps) const {
    const Point p = eval_point(field_->tau_checked(t, eps));
    return p.velocity(i) + p.Phi;
  }

  /// Central-difference slope, for the confluence diagnostics.
  double phi_dt_fd(int i, double t, double eps, double h) const {
    return (phi(i, t + h, eps) - phi(i, t - h, eps)) / (2.0 * h);
  }

  /// Left-hand sides of the two jump conditions, evaluated with the blended
  /// origins; their sum vanishes identically by the construction of hat_phi.
  std::pair<double, double> trajectory_equation_residuals(double t,
                                                          double eps) const {
    const Point p = eval_point(field_->tau_checked(t, eps));
    const auto& fx = s_->flux();
    const double u0 = s_->u0(), U = s_->U();
    const double W1h = U + u0 - p.W1;
    const double W2h = U + u0 - p.W2;
    const double phi1t = p.j1 + p.Phi;
    const double phi2t = p.j2 + p.Phi;
    const double r1 = phi1t * (p.W1 - u0) -
                      p.b2 * (fx.f(p.W1) - fx.f(u0)) -
                      p.b1 * (fx.f(U) - fx.f(W1h));
    const double r2 = phi2t * (U - p.W2) -
                      p.b2 * (fx.f(U) - fx.f(p.W2)) -
                      p.b1 * (fx.f(W2h) - fx.f(u0));
    return {r1, r2};
  }

  /// Uniform sampling grid over [0, 2 t*].
  std::vector<double> t_grid() const {
    std::vector<double> t(cfg_.t_grid_points);
    for (std::size_t k = 0; k < t.size(); ++k)
      t[k] = 2.0 * s_->t_star() * static_cast<double>(k) /
             static_cast<double>(t.size() - 1);
    return t;
  }

  double tau0_checked(double eps) const {
    if (!(eps > 0.0)) throw ValidationError("eps: must be positive");
    const double tau0 = s_->psi00() / eps;
    rho_->require_in_range(tau0);
    return tau0;
  }

 private:
  struct Point {
    double b1 = 0, b2 = 0, q = 0;
    double j1 = 0, j2 = 0;
    double W1 = 0, W2 = 0;
    double Phi = 0;
    double velocity(int i) const { return (i == 1) ? j1 : j2; }
  };

  Point eval_point(double tau) const {
    Point p;
    const double r = rho_->rho(tau);
    p.b1 = bt_->b1(r);
    p.b2 = 1.0 - p.b1;
    p.q = field_->corrections().q(tau);
    const auto& fx = s_->flux();
    const double u0 = s_->u0(), U = s_->U();
    const double ua1 = p.b2 * u0 + p.b1 * U;  // U1(a1, rho)
    const double ua2 = p.b2 * U + p.b1 * u0;  // U1(a2, rho)
    p.j1 = p.b2 * fx.fprime(ua1) + p.b1 * fx.fprime(ua2) + p.q;
    p.j2 = p.b2 * fx.fprime(ua2) + p.b1 * fx.fprime(ua1) + p.q;
    const double w1 = s_->u1(X_hat_0(1, tau));
    const double w2 = s_->u1(X_hat_0(2, tau));
    p.W1 = p.b2 * w1 + p.b1 * (U + u0 - w1);
    p.W2 = p.b2 * w2 + p.b1 * (U + u0 - w2);
    const double dden = (U - u0) + p.W1 - p.W2;
    // far before the interaction both the numerator and dden vanish beyond
    // double precision; the true ratio is superpolynomially small there
    if (dden < 1e-7 * std::max(1.0, U - u0)) {
      p.Phi = 0.0;
      return p;
    }
    const double W1h = U + u0 - p.W1;
    const double W2h = U + u0 - p.W2;
    const double R = p.b2 * (fx.f(p.W1) - fx.f(u0)) +
                     p.b1 * (fx.f(U) - fx.f(W1h)) +
                     p.b2 * (fx.f(U) - fx.f(p.W2)) +
                     p.b1 * (fx.f(W2h) - fx.f(u0));
    p.Phi = (R - p.j1 * (p.W1 - u0) - p.j2 * (U - p.W2)) / dden;
    return p;
  }

  const Scenario* s_;
  const BTable* bt_;
  const RhoSolution* rho_;
  const CharacteristicField* field_;
  PhasesConfig cfg_;
  double x_check_ = 0.0;
  num::UniformTable J1_, J2_, TPH_;
};

}  // namespace shockform
