#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "model_fixture.hpp"
#include "shockform/phases.hpp"
#include "shockform/verification.hpp"

using namespace shockform;
using testing::burgers_model;
using testing::exponential_model;

TEST_CASE("origin blend saturates and splits the interval") {
  const auto& ph = burgers_model().phases();
  const auto& rho = burgers_model().rho();
  CHECK(ph.Omega(rho.tau_max()) < 1e-10);
  CHECK(ph.Omega(rho.tau_min()) > 1.0 - 1e-10);
  CHECK(ph.Omega(0.0) == 0.5);
  // at tau = 0 the blended origin is the midpoint of [x_check, a_i]
  const Scenario& s = burgers_model().scenario();
  CHECK(ph.X_hat_0(1, 0.0) ==
        Catch::Approx(0.5 * (ph.x_check() + s.a1())).margin(1e-14));
}

TEST_CASE("confluence origin") {
  CHECK(burgers_model().phases().x_check() ==
        Catch::Approx(0.5).margin(1e-14));
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const double xc = m->phases().x_check();
    CHECK(xc > m->scenario().a2());
    CHECK(xc < m->scenario().a1());
  }
}

TEST_CASE("endpoint characteristics start at the datum corners") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const Scenario& s = m->scenario();
    for (double eps : {0.1, 0.05, 0.0125}) {
      CHECK(m->phases().phi_hat(1, 0.0, eps) ==
            Catch::Approx(s.a1()).margin(1e-9));
      CHECK(m->phases().phi_hat(2, 0.0, eps) ==
            Catch::Approx(s.a2()).margin(1e-9));
    }
  }
}

TEST_CASE("endpoint characteristics pass near the breaking point at t*") {
  // the a_i-anchored normalization trades the exact collapse onto x* for the
  // exact separation bookkeeping; the miss is O(eps)
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const Scenario& s = m->scenario();
    for (double eps : {0.05, 0.0125}) {
      CHECK(std::abs(m->phases().phi_hat(1, s.t_star(), eps) - s.x_star()) <
            5.0 * eps);
      CHECK(std::abs(m->phases().phi_hat(2, s.t_star(), eps) - s.x_star()) <
            5.0 * eps);
    }
  }
}

TEST_CASE("endpoint characteristics track the classical rays early on") {
  const auto& m = burgers_model();
  const Scenario& s = m.scenario();
  const double eps = 0.05;
  const double t = 0.25 * s.t_star();
  CHECK(std::abs(m.phases().phi_hat(1, t, eps) - s.phi_classical(1, t)) <
        5.0 * eps);
  CHECK(std::abs(m.phases().phi_hat(2, t, eps) - s.phi_classical(2, t)) <
        5.0 * eps);
}

TEST_CASE("separation bookkeeping is exact") {
  // (phi_hat_1 - phi_hat_2)/eps == rho(tau), by construction of the anchors
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const Scenario& s = m->scenario();
    const double eps = 0.05;
    double worst = 0.0;
    for (double t : m->phases().t_grid()) {
      const double sep = (m->phases().phi_hat(1, t, eps) -
                          m->phases().phi_hat(2, t, eps)) /
                         eps;
      worst = std::max(worst,
                       std::abs(sep - m->rho().rho(s.tau_of(t, eps))));
    }
    CHECK(worst < 1e-3);   // bookkeeping identity, up to table interpolation
    CHECK(worst < 0.05);   // the coarse consistency bound
  }
}

TEST_CASE("shared correction decays before the interaction") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const auto& ph = m->phases();
    const double tmax = m->rho().tau_max();
    CHECK(std::abs(ph.hat_phi(tmax)) * tmax < 10.0);
    CHECK(std::isfinite(ph.hat_phi(0.0)));
    CHECK(std::abs(ph.hat_phi(m->rho().tau_min())) < 10.0);
  }
}

TEST_CASE("jump-condition residuals cancel in the sum") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const double eps = 0.0125;
    const double tstar = m->scenario().t_star();
    for (double t : {0.1 * tstar, 0.7 * tstar, tstar, 1.4 * tstar,
                     1.97 * tstar}) {
      const auto [r1, r2] = m->phases().trajectory_equation_residuals(t, eps);
      CHECK(std::abs(r1 + r2) < 1e-6);
    }
  }
}

TEST_CASE("individual jump-condition residuals decay on both sides") {
  const auto& m = burgers_model();
  const double eps = 0.0125;
  const double tstar = m.scenario().t_star();
  {
    const auto [r1, r2] =
        m.phases().trajectory_equation_residuals(0.25 * tstar, eps);
    CHECK(std::abs(r1) < 1e-6);
    CHECK(std::abs(r2) < 1e-6);
  }
  {
    const double t = 1.9 * tstar;
    const double tau = std::abs(m.scenario().tau_of(t, eps));
    const auto [r1, r2] = m.phases().trajectory_equation_residuals(t, eps);
    CHECK(std::abs(r1) < 2.0 / tau);
    CHECK(std::abs(r2) < 2.0 / tau);
  }
}

TEST_CASE("assembled trajectories ride the shock line after confluence") {
  const auto& m = burgers_model();
  const Scenario& s = m.scenario();
  const double eps = 0.0125;
  const double h = 2.0 * s.t_star() / 1023.0;
  for (int i : {1, 2}) {
    const double slope = m.phases().phi_dt_fd(i, 1.5 * s.t_star(), eps, h);
    CHECK(slope == Catch::Approx(s.c()).margin(0.01));
  }
}

TEST_CASE("assembled trajectories stay close to the classical rays early") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const Scenario& s = m->scenario();
    const double eps = 0.05;
    for (double f : {0.1, 0.3, 0.5}) {
      const double t = f * s.t_star();
      for (int i : {1, 2})
        CHECK(std::abs(m->phases().phi(i, t, eps) - s.phi_classical(i, t)) <
              5.0 * eps);
    }
  }
}

TEST_CASE("trajectories never cross and settle at the balance separation") {
  for (const ShockModel* m : {&burgers_model(), &exponential_model()}) {
    const Scenario& s = m->scenario();
    const double eps = 0.05;
    const double rho0 = m->btable().rho0();
    double min_sep = 1e300;
    for (double t : m->phases().t_grid()) {
      const double sep = m->phases().phi(1, t, eps) - m->phases().phi(2, t, eps);
      min_sep = std::min(min_sep, sep);
    }
    CHECK(min_sep > 0.0);
    CHECK(min_sep > 0.9 * eps * rho0);
    const double end_sep = m->phases().phi(1, 2.0 * s.t_star(), eps) -
                           m->phases().phi(2, 2.0 * s.t_star(), eps);
    CHECK(end_sep ==
          Catch::Approx(eps * m->rho().rho(s.tau_of(2.0 * s.t_star(), eps)))
              .margin(1e-9));
    // separation at t* stays within the bookkeping bound
    const double sep_star = m->phases().phi(1, s.t_star(), eps) -
                            m->phases().phi(2, s.t_star(), eps);
    CHECK(std::abs(sep_star) <= eps * (rho0 + 1.0));
  }
}

TEST_CASE("post-interaction distance to the shock line is first order") {
  const auto& m = burgers_model();
  const Scenario& s = m.scenario();
  std::vector<RatePoint> pts;
  for (double eps : default_eps_sweep()) {
    double worst = 0.0;
    for (double t : m.phases().t_grid()) {
      if (t < 1.2 * s.t_star()) continue;
      for (int i : {1, 2})
        worst = std::max(worst, std::abs(m.phases().phi(i, t, eps) -
                                         s.shock_position(t)));
    }
    pts.push_back({eps, worst});
  }
  const auto rep = fit_rate(pts);
  CHECK(rep.passes(0.8));
  CHECK(rep.monotone_decreasing());
}

TEST_CASE("blended check-trajectories agree to first order") {
  const auto& m = exponential_model();
  const Scenario& s = m.scenario();
  std::vector<RatePoint> pts;
  for (double eps : default_eps_sweep()) {
    double worst = 0.0;
    for (double t : m.phases().t_grid()) {
      const double tau = s.tau_of(t, eps);
      for (int i : {1, 2}) {
        const double blend =
            (1.0 - m.phases().Omega(tau)) * m.phases().phi_hat(i, t, eps) +
            m.phases().Omega(tau) * s.shock_position(t);
        worst =
            std::max(worst, std::abs(m.phases().phi(i, t, eps) - blend));
      }
    }
    pts.push_back({eps, worst});
  }
  const auto rep = fit_rate(pts);
  CHECK(rep.passes(0.8));
}

TEST_CASE("origin replacement stays first order accurate") {
  const auto& m = exponential_model();
  const Scenario& s = m.scenario();
  std::vector<RatePoint> pts;
  for (double eps : {0.1, 0.05, 0.025}) {
    const auto ue = m.solution(eps);
    double worst = 0.0;
    for (double t : m.phases().t_grid()) {
      if (t <= 0.02 * s.t_star()) continue;
      const double tau = s.tau_of(t, eps);
      const double r = m.rho().rho(tau);
      for (int i : {1, 2}) {
        const double phi = m.phases().phi(i, t, eps);
        const double via_map = m.field().U1(ue.x0_of(phi, t), r);
        const double via_blend = m.field().U1(m.phases().X_hat_0(i, tau), r);
        worst = std::max(worst, std::abs(via_map - via_blend));
      }
    }
    pts.push_back({eps, worst});
  }
  const auto rep = fit_rate(pts);
  CHECK(rep.passes(0.8));
}

TEST_CASE("trajectories are insensitive to the blend width") {
  const auto& m = exponential_model();
  const auto alt = m.phases_with_lambda(10.0);
  const double eps = 0.05;
  double worst = 0.0;
  for (double t : m.phases().t_grid())
    for (int i : {1, 2})
      worst = std::max(worst, std::abs(m.phases().phi(i, t, eps) -
                                       alt.phi(i, t, eps)));
  CHECK(worst <= 10.0 * eps);
}

TEST_CASE("bad phase configuration is rejected") {
  const auto& m = burgers_model();
  PhasesConfig bad;
  bad.omega_lambda = -1.0;
  CHECK_THROWS_AS(PhaseFunctions(m.scenario(), m.btable(), m.rho(), m.field(),
                                 bad),
                  ValidationError);
  // epsilon too small for the tau grid
  CHECK_THROWS_AS(m.phases().tau0_checked(1e-4), ValidationError);
}
