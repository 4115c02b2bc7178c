#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "shockform/mollifier.hpp"
#include "shockform/numerics.hpp"
#include "shockform/scenario.hpp"

namespace shockform {

struct DynamicsConfig {
  double tau_min = -200.0;
  double tau_max = 200.0;
  double step = 0.01;
  double ode_tol = 1e-10;
};

/// Right-hand side of the autonomous front-separation equation
/// d(rho)/d(tau) = G(rho):
///
///   G = (B2 - B1) (f'(B2 u0 + B1 U) - f'(B2 U + B1 u0)) / psi0'.
///
/// G >= 0 everywhere with a degenerate (double) zero at rho0, and G -> 1 as
/// rho -> +inf since B2 -> 1 and psi0' = f'(u0) - f'(U).
inline double interaction_ode_rhs(double rho, const Scenario& s,
                                  const BTable& bt) {
  const double b1 = bt.b1(rho);
  const double b2 = 1.0 - b1;
  const double left = s.flux().fprime(b2 * s.u0() + b1 * s.U());
  const double right = s.flux().fprime(b2 * s.U() + b1 * s.u0());
  return (b2 - b1) * (left - right) / s.psi0_prime();
}

/// The solved separation rho(tau) with its derivative, sampled on a uniform
/// tau grid. The boundary value rho(tau_max) = tau_max pins the free time
/// translation of the autonomous equation; the neglected tail correction
/// decays faster than any power of 1/tau_max.
class RhoSolution {
 public:
  RhoSolution(const Scenario& s, const BTable& bt,
              const DynamicsConfig& cfg = {})
      : tau_min_(cfg.tau_min), tau_max_(cfg.tau_max), h_(cfg.step) {
    if (!(cfg.step > 0.0))
      throw ValidationError("dynamics.step: must be positive");
    if (!(tau_min_ < 0.0 && 0.0 < tau_max_))
      throw ValidationError("dynamics.tau range must straddle 0");
    n_ = static_cast<std::size_t>(
             std::round((tau_max_ - tau_min_) / h_)) + 1;
    center_ = static_cast<std::size_t>(std::round(-tau_min_ / h_));
    if (std::abs(tau_min_ + static_cast<double>(center_) * h_) > 1e-9 * h_)
      throw ValidationError("dynamics: tau grid must contain tau = 0");

    rho_.resize(n_);
    rho_dot_.resize(n_);
    auto rhs = [&](double r) { return interaction_ode_rhs(r, s, bt); };
    double y = tau_max_;
    double h_hint = 0.0;
    rho_[n_ - 1] = y;
    for (std::size_t j = n_ - 1; j-- > 0;) {
      const double from = tau_at(j + 1);
      const double to = tau_at(j);
      try {
        y = num::ode_advance(rhs, from, to, y, cfg.ode_tol, h_hint);
      } catch (const NumericalError& e) {
        throw NumericalError(std::string("rho solve: ") + e.what());
      }
      rho_[j] = y;
    }
    for (std::size_t j = 0; j < n_; ++j) rho_dot_[j] = rhs(rho_[j]);
    table_ = num::UniformTable(tau_min_, h_, rho_, rho_.front(), rho_.back());
    dot_table_ = num::UniformTable(tau_min_, h_, rho_dot_, rho_dot_.front(),
                                   rho_dot_.back());
  }

  double tau_min() const { return tau_min_; }
  double tau_max() const { return tau_max_; }
  double step() const { return h_; }
  std::size_t size() const { return n_; }
  std::size_t center_index() const { return center_; }
  double tau_at(std::size_t j) const {
    return tau_min_ + h_ * static_cast<double>(j);
  }
  double rho_at(std::size_t j) const { return rho_[j]; }
  double rho_dot_at(std::size_t j) const { return rho_dot_[j]; }

  double rho(double tau) const {
    require_in_range(tau);
    return table_(tau);
  }

  double rho_dot(double tau) const {
    require_in_range(tau);
    return dot_table_(tau);
  }

  void require_in_range(double tau) const {
    if (tau < tau_min_ - 1e-9 || tau > tau_max_ + 1e-9)
      throw ValidationError(
          "tau=" + std::to_string(tau) +
          " outside the dynamics grid; enlarge dynamics.tau_max or use a "
          "larger epsilon");
  }

 private:
  double tau_min_, tau_max_, h_;
  std::size_t n_ = 0, center_ = 0;
  std::vector<double> rho_, rho_dot_;
  num::UniformTable table_, dot_table_;
};

/// The two scalar corrections carried by the new characteristics:
///
///   g(tau) = psi0' rho rho_dot B2'(rho) (U + u0)/2
///            - psi0' rho_dot tau B2'(rho) * I(tau),
///   I(tau) = integral over [a2, a1] of u1(x0) (1/psi00 + dX1/dx0) dx0,
///   q(tau) = g(tau) / ((B2 - B1)(U - u0)).
///
/// The caller supplies S(tau_j) = integral of u1(x0) * Cd(x0, tau_j) dx0,
/// where Cd is the running integral of the q-free derivative integrand, so
/// that tau * I(tau) = S(tau)/psi0' without any removable singularity.
/// Near the balance point the q denominator vanishes like 1/|tau|; nodes
/// with |B2 - B1| below the guard are filled by quadratic extrapolation in
/// tau from the nearest safe nodes.
class CorrectionFunctions {
 public:
  CorrectionFunctions(const Scenario& s, const BTable& bt,
                      const RhoSolution& rho,
                      const std::vector<double>& weighted_cd_integral,
                      double denominator_guard = 1e-8)
      : guard_(denominator_guard) {
    const std::size_t n = rho.size();
    if (weighted_cd_integral.size() != n)
      throw ValidationError("corrections: weighted integral size mismatch");
    std::vector<double> g(n), q(n);
    std::vector<char> safe(n, 1);
    const double span = s.state_span();
    for (std::size_t j = 0; j < n; ++j) {
      const double r = rho.rho_at(j);
      const double rd = rho.rho_dot_at(j);
      const double b2p = bt.b2_prime(r);
      const double bracket = r * (s.U() + s.u0()) * 0.5 -
                             weighted_cd_integral[j] / s.psi0_prime();
      g[j] = s.psi0_prime() * rd * b2p * bracket;
      const double d = bt.b2(r) - bt.b1(r);
      if (std::abs(d) >= guard_) {
        q[j] = g[j] / (d * span);
      } else {
        safe[j] = 0;
      }
    }
    // rho > rho0 on the whole grid and d(rho) grows with tau, so unsafe
    // nodes (if any) sit at the far negative end; extrapolate from above.
    for (std::size_t j = n; j-- > 0;) {
      if (safe[j]) continue;
      std::size_t k = j + 1;
      while (k < n && !safe[k]) ++k;
      if (k + 2 >= n)
        throw NumericalError("corrections: no safe nodes to extrapolate q");
      const double t0 = rho.tau_at(k), t1 = rho.tau_at(k + 1),
                   t2 = rho.tau_at(k + 2);
      const double tj = rho.tau_at(j);
      const double l0 = (tj - t1) * (tj - t2) / ((t0 - t1) * (t0 - t2));
      const double l1 = (tj - t0) * (tj - t2) / ((t1 - t0) * (t1 - t2));
      const double l2 = (tj - t0) * (tj - t1) / ((t2 - t0) * (t2 - t1));
      q[j] = l0 * q[k] + l1 * q[k + 1] + l2 * q[k + 2];
    }
    const double h = rho.step();
    auto qcum = num::cumulative_from(q, h, rho.center_index());
    const double qc_lo = qcum.front();
    const double qc_hi = qcum.back();
    g_ = num::UniformTable(rho.tau_min(), h, std::move(g), 0.0, 0.0);
    q_ = num::UniformTable(rho.tau_min(), h, std::move(q), 0.0, 0.0);
    q_cum_ = num::UniformTable(rho.tau_min(), h, std::move(qcum), qc_lo,
                               qc_hi);
  }

  double g(double tau) const { return g_(tau); }
  double q(double tau) const { return q_(tau); }

  /// Running integral of q from 0 to tau.
  double q_integral(double tau) const { return q_cum_(tau); }

  const num::UniformTable& g_table() const { return g_; }
  const num::UniformTable& q_table() const { return q_; }

 private:
  double guard_;
  num::UniformTable g_, q_, q_cum_;
};

}  // namespace shockform
