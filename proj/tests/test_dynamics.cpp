#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "model_fixture.hpp"
#include "shockform/dynamics.hpp"

using namespace shockform;
using testing::burgers_model;
using testing::exponential_model;

namespace {

// Independent fixed-step classical RK4 march of d(rho)/d(tau) = G(rho),
// from rho(200) = 200 down to the requested tau values.
std::map<double, double> rk4_reference(const Scenario& s, const BTable& bt,
                                       std::vector<double> taus) {
  std::sort(taus.rbegin(), taus.rend());
  auto G = [&](double r) { return interaction_ode_rhs(r, s, bt); };
  std::map<double, double> out;
  double tau = 200.0, y = 200.0;
  const double h = -1e-3;
  for (double target : taus) {
    while (tau > target + 1e-12) {
      const double step = std::max(h, target - tau);
      const double k1 = G(y);
      const double k2 = G(y + 0.5 * step * k1);
      const double k3 = G(y + 0.5 * step * k2);
      const double k4 = G(y + step * k3);
      y += step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
      tau += step;
    }
    out[target] = y;
  }
  return out;
}

}  // namespace

TEST_CASE("interaction rhs collapses to the squared switch gap for burgers") {
  const auto& m = burgers_model();
  const BTable& bt = m.btable();
  for (double rho : {-5.0, 0.0, 1.0, 2.5, 4.0, 15.0}) {
    const double d = bt.b2(rho) - bt.b1(rho);
    CHECK(interaction_ode_rhs(rho, m.scenario(), bt) ==
          Catch::Approx(d * d).margin(1e-12));
  }
}

TEST_CASE("interaction rhs vanishes at the balance point and saturates at 1") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const BTable& bt = m->btable();
    CHECK(std::abs(interaction_ode_rhs(bt.rho0(), m->scenario(), bt)) <=
          1e-12);
    CHECK(interaction_ode_rhs(60.0, m->scenario(), bt) ==
          Catch::Approx(1.0).margin(1e-9));
    for (double rho : {-20.0, -1.0, 2.3, 7.0})
      CHECK(interaction_ode_rhs(rho, m->scenario(), bt) >= 0.0);
  }
}

TEST_CASE("degenerate fixed point: first derivative flat, curvature formula") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const Scenario& s = m->scenario();
    const BTable& bt = m->btable();
    const double rho0 = bt.rho0();
    auto G = [&](double rho) {
      const double b1 = bt.convolve(rho, false);
      const double b2 = 1.0 - b1;
      return (b2 - b1) *
             (s.flux().fprime(b2 * s.u0() + b1 * s.U()) -
              s.flux().fprime(b2 * s.U() + b1 * s.u0())) /
             s.psi0_prime();
    };
    const double h = 0.05;
    CHECK(std::abs((G(rho0 + h) - G(rho0 - h)) / (2.0 * h)) < 1e-8);
    const double gpp = (G(rho0 + h) - 2.0 * G(rho0) + G(rho0 - h)) / (h * h);
    const double expected = -8.0 * bt.b2_prime(rho0) * bt.b2_prime(rho0) *
                            s.state_span() *
                            s.flux().fsecond(0.5 * (s.U() + s.u0())) /
                            s.psi0_prime();
    CHECK(gpp == Catch::Approx(expected).epsilon(0.01));
    CHECK(gpp > 0.0);  // the rhs has a minimum at the balance point
  }
}

TEST_CASE("separation solve matches a tiny-step reference march") {
  const auto& m = burgers_model();
  const auto ref = rk4_reference(m.scenario(), m.btable(),
                                 {50.0, 0.0, -50.0, -100.0});
  for (const auto& [tau, rho_ref] : ref)
    CHECK(m.rho().rho(tau) == Catch::Approx(rho_ref).margin(1e-6));
}

TEST_CASE("separation is monotone with the pinned tail value") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const RhoSolution& rho = m->rho();
    const double rho0 = m->btable().rho0();
    for (std::size_t j = 0; j < rho.size(); j += 97)
      CHECK(rho.rho_dot_at(j) > 0.0);
    CHECK(rho.rho(rho.tau_max()) == Catch::Approx(rho.tau_max()).margin(1e-9));
    CHECK(rho.rho(0.0) > rho0);
    CHECK(rho.rho(0.0) < rho.tau_max());
  }
}

TEST_CASE("separation approaches the balance point like 1/|tau|") {
  const auto& rho = burgers_model().rho();
  const double rho0 = burgers_model().btable().rho0();
  const double d50 = rho.rho(-50.0) - rho0;
  const double d100 = rho.rho(-100.0) - rho0;
  // 1/|tau| decay predicts d100 = d50/2; allow a factor of 2 either way
  CHECK(d100 <= 2.0 * (d50 / 2.0));
  CHECK(d100 >= 0.5 * (d50 / 2.0));
}

TEST_CASE("grid must straddle tau = 0") {
  DynamicsConfig bad;
  bad.tau_min = 1.0;
  CHECK_THROWS_AS(
      RhoSolution(burgers_model().scenario(), burgers_model().btable(), bad),
      ValidationError);
}

TEST_CASE("out-of-grid tau is reported with guidance") {
  CHECK_THROWS_WITH(burgers_model().rho().rho(500.0),
                    Catch::Matchers::ContainsSubstring("tau"));
}

TEST_CASE("corrections decay at the pre-interaction end") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const auto& corr = m->field().corrections();
    const double tmax = m->rho().tau_max();
    CHECK(std::abs(corr.g(tmax)) < 1e-10);
    CHECK(std::abs(corr.q(tmax)) < 1e-9);
    // q ~ g once the switch gap saturates
    CHECK(corr.q(40.0) == Catch::Approx(corr.g(40.0) / m->scenario().state_span())
                              .margin(1e-9));
  }
}

TEST_CASE("corrections stay bounded against the interaction scales") {
  const auto& m = burgers_model();
  const auto& corr = m.field().corrections();
  const auto& rho = m.rho();
  double worst_t2g = 0.0, worst_tq = 0.0;
  for (std::size_t j = 0; j < rho.size(); j += 13) {
    const double tau = rho.tau_at(j);
    worst_t2g = std::max(worst_t2g, tau * tau * std::abs(corr.g(tau)));
    worst_tq = std::max(worst_tq, std::abs(tau) * std::abs(corr.q(tau)));
  }
  CHECK(worst_t2g < 10.0);
  CHECK(worst_tq < 10.0);
}

TEST_CASE("correction integral converges on both sides") {
  const auto& corr = burgers_model().field().corrections();
  auto gsum = [&](double lo, double hi) {
    const int n = 2000;
    double acc = 0.0;
    const double h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      acc += w * corr.g(lo + h * i);
    }
    return acc * h;
  };
  // pre-interaction side: superpolynomial decay, Cauchy at 1e-8
  CHECK(std::abs(gsum(180.0, 200.0)) < 1e-8);
  // post-interaction side: tails shrink with the 1/tau^2 envelope of g
  const double far = std::abs(gsum(-200.0, -180.0));
  const double near = std::abs(gsum(-100.0, -80.0));
  CHECK(far < 5e-3);
  CHECK(far < near);
}

TEST_CASE("division form of the correction ratio at tau = 0") {
  const auto& m = burgers_model();
  const auto& corr = m.field().corrections();
  const BTable& bt = m.btable();
  const double r0 = m.rho().rho(0.0);
  const double direct = corr.g(0.0) /
                        ((bt.b2(r0) - bt.b1(r0)) * m.scenario().state_span());
  CHECK(corr.q(0.0) == Catch::Approx(direct).margin(1e-12));
}
