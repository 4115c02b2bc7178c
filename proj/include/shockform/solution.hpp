#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "shockform/characteristics.hpp"
#include "shockform/mollifier.hpp"
#include "shockform/phases.hpp"
#include "shockform/scenario.hpp"

namespace shockform {

/// Exact entropy solution of the piecewise problem: the stretched ramp
/// u1((x - b t)/(1 - K t)) between the two weak discontinuities before
/// breaking, and the single admissible shock with left state U and right
/// state u0 afterwards.
class ReferenceSolution {
 public:
  explicit ReferenceSolution(const Scenario& s) : s_(&s) {}

  double eval(double x, double t) const {
    if (t < s_->t_star()) {
      if (x <= s_->phi_classical(2, t)) return s_->U();
      if (x >= s_->phi_classical(1, t)) return s_->u0();
      return s_->u1((x - s_->b() * t) / (1.0 - s_->K() * t));
    }
    return (x < s_->shock_position(t)) ? s_->U() : s_->u0();
  }

  double operator()(double x, double t) const { return eval(x, t); }

  const Scenario& scenario() const { return *s_; }

 private:
  const Scenario* s_;
};

/// The smooth eps-family approximating the formation of the shock:
///
///   u_eps(x,t) = u0 + (U1(x0(x,t),rho) - u0) omega_1((phi1 - x)/eps)
///                   + (U  - U1(x0(x,t),rho)) omega_2((phi2 - x)/eps),
///
/// with x0 recovered through the corrected characteristic map and
/// rho = rho(psi0(t)/eps). Pure evaluator over immutable tables; safe to
/// call concurrently.
class WeakAsymptoticSolution {
 public:
  WeakAsymptoticSolution(const Scenario& s, const MollifierPair& moll,
                         const BTable& bt, const RhoSolution& rho,
                         const CharacteristicField& field,
                         const PhaseFunctions& phases, double eps)
      : s_(&s), moll_(&moll), bt_(&bt), rho_(&rho), field_(&field),
        phases_(&phases), eps_(eps) {
    if (!(eps > 0.0 && eps <= 0.5))
      throw ValidationError("eps: must lie in (0, 0.5]");
    phases.tau0_checked(eps);  // the whole of [0, 2 t*] must map into the grid
    A_ = field.config().A_override.value_or(field.choose_A(eps).A);
  }

  double eps() const { return eps_; }
  double A() const { return A_; }
  const Scenario& scenario() const { return *s_; }
  const PhaseFunctions& phases() const { return *phases_; }
  const CharacteristicField& field() const { return *field_; }

  double phi1(double t) const { return phases_->phi(1, t, eps_); }
  double phi2(double t) const { return phases_->phi(2, t, eps_); }

  double x0_of(double x, double t) const {
    return field_->invert_x0(x, t, eps_, A_);
  }

  double eval(double x, double t) const {
    const double tau = field_->tau_checked(t, eps_);
    const double r = rho_->rho(tau);
    const double x0 = field_->invert_x0(x, t, eps_, A_);
    const double u1v = s_->u1(x0);
    const double b1 = bt_->b1(r);
    const double U1v = (1.0 - b1) * u1v + b1 * (s_->U() + s_->u0() - u1v);
    const double w1 = moll_->omega(1, (phi1(t) - x) / eps_);
    const double w2 = moll_->omega(2, (phi2(t) - x) / eps_);
    return s_->u0() + (U1v - s_->u0()) * w1 + (s_->U() - U1v) * w2;
  }

  double operator()(double x, double t) const { return eval(x, t); }

 private:
  const Scenario* s_;
  const MollifierPair* moll_;
  const BTable* bt_;
  const RhoSolution* rho_;
  const CharacteristicField* field_;
  const PhaseFunctions* phases_;
  double eps_;
  double A_ = 0.0;
};

struct ProfileRow {
  double x;
  double u_eps;
  double u_ref;
};

/// Uniform sampling of both solutions on [x_lo, x_hi]; the same evaluators
/// back every consumer, so table rows match direct calls bit for bit.
inline std::vector<ProfileRow> sample_profile(
    const WeakAsymptoticSolution& ue, const ReferenceSolution& ur, double t,
    double x_lo, double x_hi, std::size_t n) {
  if (n < 2) throw ValidationError("profile: need at least 2 points");
  if (!(x_lo < x_hi))
    throw ValidationError("profile: x_lo must be below x_hi");
  std::vector<ProfileRow> rows(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(k) /
                              static_cast<double>(n - 1);
    rows[k] = ProfileRow{x, ue.eval(x, t), ur.eval(x, t)};
  }
  return rows;
}

}  // namespace shockform
