#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "shockform/flux.hpp"
#include "shockform/numerics.hpp"

namespace shockform {

/// Immutable problem data: the convex flux together with every constant
/// derived from the piecewise datum
///
///     u(x,0) = U          for x < a2,
///              u1(x)      for a2 <= x <= a1,
///              u0_0       for x > a1,
///
/// where u1 is defined implicitly by f'(u1(x)) = -K x + b with the endpoint
/// conditions u1(a1) = u0_0 and u1(a2) = U. All characteristics issued from
/// [a2, a1] meet at (x_star, t_star); c is the Rankine–Hugoniot speed of the
/// shock that forms there.
class Scenario {
 public:
  Scenario(FluxModel flux, double u0_0, double U, double a1, double a2)
      : flux_(std::move(flux)), u0_(u0_0), U_(U), a1_(a1), a2_(a2) {
    if (!(a1_ > a2_))
      throw ValidationError("a1: must exceed a2 (got a1=" +
                            std::to_string(a1_) + ", a2=" +
                            std::to_string(a2_) + ")");
    if (!(U_ > u0_))
      throw ValidationError("U: must exceed u0 (got U=" + std::to_string(U_) +
                            ", u0=" + std::to_string(u0_) + ")");
    flux_.require_convex(u0_, U_);
    K_ = (flux_.fprime(U_) - flux_.fprime(u0_)) / (a1_ - a2_);
    b_ = flux_.fprime(u0_) + K_ * a1_;
    t_star_ = 1.0 / K_;
    x_star_ = a1_ + flux_.fprime(u0_) * t_star_;
    c_ = (flux_.f(U_) - flux_.f(u0_)) / (U_ - u0_);
    psi00_ = a1_ - a2_;
    psi0p_ = flux_.fprime(u0_) - flux_.fprime(U_);
    // strict convexity puts the shock speed strictly between the edge
    // characteristic speeds, which is also what places the confluence
    // origin x_check inside (a2, a1)
    if (!(flux_.fprime(u0_) < c_ && c_ < flux_.fprime(U_)))
      throw ValidationError("flux: shock speed is not strictly between "
                            "f'(u0) and f'(U)");
  }

  const FluxModel& flux() const { return flux_; }
  double u0() const { return u0_; }
  double U() const { return U_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }
  double K() const { return K_; }
  double b() const { return b_; }
  double t_star() const { return t_star_; }
  double x_star() const { return x_star_; }
  double c() const { return c_; }
  double psi00() const { return psi00_; }      // a1 - a2
  double psi0_prime() const { return psi0p_; } // f'(u0) - f'(U) < 0
  double state_span() const { return U_ - u0_; }

  double psi0(double t) const { return psi00_ + psi0p_ * t; }
  double tau_of(double t, double eps) const { return psi0(t) / eps; }

  /// Classical pre-breaking trajectories of the two weak discontinuities.
  double phi_classical(int i, double t) const {
    return (i == 1) ? a1_ + flux_.fprime(u0_) * t
                    : a2_ + flux_.fprime(U_) * t;
  }

  /// Post-breaking shock line x_star + c (t - t_star), defined for all t.
  double shock_position(double t) const {
    return x_star_ + c_ * (t - t_star_);
  }

  /// Confluence origin: the foot of the shock line at t = 0.
  double x_check() const { return x_star_ - c_ * t_star_; }

  /// The ramp profile u1(x) = (f')^{-1}(-K x + b), decreasing from U at a2
  /// to u0 at a1. Arguments outside [a2, a1] clamp to the nearest endpoint
  /// (characteristic inversion can land there within round-off).
  double u1(double x) const {
    const double xc = std::clamp(x, a2_, a1_);
    const double target = -K_ * xc + b_;
    if (xc == a1_) return u0_;
    if (xc == a2_) return U_;
    return num::newton_bisect(
        [&](double u) { return flux_.fprime(u) - target; },
        [&](double u) { return flux_.fsecond(u); }, u0_, U_, 1e-14, 1e-14);
  }

  /// u1(xi(x)) without the round trip: Eq-level reflection identity.
  double u1_reflected(double x) const { return U_ + u0_ - u1(x); }

  double u1_prime(double x) const {
    return -K_ / flux_.fsecond(u1(x));
  }

  /// Reflection map: the unique point pairing equal-sum states,
  /// u1(x0) + u1(xi(x0)) = U + u0. A decreasing involution of [a2, a1].
  double xi(double x0) const {
    const double v = u1_reflected(x0);
    return (b_ - flux_.fprime(v)) / K_;
  }

  double xi_prime(double x0) const {
    return -flux_.fsecond(u1_reflected(x0)) / flux_.fsecond(u1(x0));
  }

 private:
  FluxModel flux_;
  double u0_, U_, a1_, a2_;
  double K_ = 0, b_ = 0, t_star_ = 0, x_star_ = 0, c_ = 0;
  double psi00_ = 0, psi0p_ = 0;
};

inline Scenario build_scenario(FluxModel flux, double u0_0, double U,
                               double a1, double a2) {
  return Scenario(std::move(flux), u0_0, U, a1, a2);
}

/// The default desk-scale scenario used throughout the tests.
inline Scenario burgers_standard() {
  return Scenario(FluxModel::burgers(), 0.0, 1.0, 1.0, 0.0);
}

inline Scenario exponential_standard() {
  return Scenario(FluxModel::exponential(), 0.0, 1.0, 1.0, 0.0);
}

}  // namespace shockform
