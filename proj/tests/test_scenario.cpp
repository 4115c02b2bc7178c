#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "shockform/scenario.hpp"
#include "shockform/scenario_io.hpp"

using namespace shockform;

TEST_CASE("burgers standard constants") {
  const Scenario s = burgers_standard();
  CHECK(s.K() == Catch::Approx(1.0).margin(1e-14));
  CHECK(s.b() == Catch::Approx(1.0).margin(1e-14));
  CHECK(s.t_star() == Catch::Approx(1.0).margin(1e-14));
  CHECK(s.x_star() == Catch::Approx(1.0).margin(1e-14));
  CHECK(s.c() == Catch::Approx(0.5).margin(1e-14));
  CHECK(s.psi00() == 1.0);
  CHECK(s.psi0_prime() == Catch::Approx(-1.0).margin(1e-14));
}

TEST_CASE("burgers with doubled left state") {
  const Scenario s(FluxModel::burgers(), 0.0, 2.0, 1.0, 0.0);
  CHECK(s.K() == Catch::Approx(2.0).margin(1e-14));
  CHECK(s.b() == Catch::Approx(2.0).margin(1e-14));
  CHECK(s.t_star() == Catch::Approx(0.5).margin(1e-14));
  CHECK(s.c() == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("exponential flux constants") {
  const Scenario s = exponential_standard();
  const double e = std::exp(1.0);
  CHECK(s.K() == Catch::Approx(e - 1.0).margin(1e-14));
  CHECK(s.b() == Catch::Approx(e).margin(1e-14));
  CHECK(s.t_star() == Catch::Approx(0.581977).margin(1e-6));
  // endpoint root-check: f'(u1(a2)) must solve the linear profile at a2
  CHECK(s.flux().fprime(s.u1(s.a2())) ==
        Catch::Approx(-s.K() * s.a2() + s.b()).margin(1e-10));
}

TEST_CASE("ramp profile endpoint conditions and interior value") {
  const Scenario b = burgers_standard();
  CHECK(b.u1(0.5) == Catch::Approx(0.5).margin(1e-12));
  for (const Scenario& s : {burgers_standard(), exponential_standard()}) {
    CHECK(s.u1(s.a1()) == Catch::Approx(s.u0()).margin(1e-10));
    CHECK(s.u1(s.a2()) == Catch::Approx(s.U()).margin(1e-10));
    // clamping outside the ramp
    CHECK(s.u1(s.a1() + 0.5) == Catch::Approx(s.u0()).margin(1e-12));
    CHECK(s.u1(s.a2() - 0.5) == Catch::Approx(s.U()).margin(1e-12));
  }
}

TEST_CASE("reflection map") {
  const Scenario b = burgers_standard();
  CHECK(b.xi(0.3) == Catch::Approx(0.7).margin(1e-12));

  for (const Scenario& s : {burgers_standard(), exponential_standard()}) {
    // fixed point: the abscissa carrying the middle state reflects to itself
    const double mid =
        (s.b() - s.flux().fprime(0.5 * (s.U() + s.u0()))) / s.K();
    CHECK(s.xi(mid) == Catch::Approx(mid).margin(1e-10));
    CHECK(s.xi_prime(mid) == Catch::Approx(-1.0).margin(1e-9));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(s.a2(), s.a1());
    for (int k = 0; k < 100; ++k) {
      const double x0 = uni(rng);
      CHECK(std::abs(s.xi(s.xi(x0)) - x0) < 1e-9);
      CHECK(s.xi_prime(x0) < 0.0);
    }
  }
}

TEST_CASE("burgers reflection slope is -1 everywhere") {
  const Scenario b = burgers_standard();
  for (double x0 : {0.1, 0.4, 0.77})
    CHECK(b.xi_prime(x0) == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("reflection derivative matches finite differences") {
  const Scenario s = exponential_standard();
  const double x0 = 0.25, h = 1e-4;
  const double fd = (s.xi(x0 + h) - s.xi(x0 - h)) / (2.0 * h);
  CHECK(s.xi_prime(x0) == Catch::Approx(fd).margin(1e-6));
}

TEST_CASE("equal-sum reflection identity on a grid") {
  for (const Scenario& s : {burgers_standard(), exponential_standard()}) {
    for (int i = 0; i <= 64; ++i) {
      const double x0 = s.a2() + (s.a1() - s.a2()) * i / 64.0;
      CHECK(std::abs(s.u1(x0) + s.u1(s.xi(x0)) - (s.U() + s.u0())) < 1e-9);
    }
  }
}

TEST_CASE("front separation is linear in time") {
  for (const Scenario& s : {burgers_standard(), exponential_standard()}) {
    for (double t : {0.0, 0.3, 1.0, 1.7}) {
      const double tt = t * s.t_star();
      CHECK(std::abs(s.psi0(tt) / s.psi00() - (1.0 - s.K() * tt)) < 1e-12);
    }
    CHECK(s.flux().fprime(s.u0()) < s.c());
    CHECK(s.c() < s.flux().fprime(s.U()));
  }
}

TEST_CASE("characteristics from both edges meet at the breaking point") {
  for (const Scenario& s : {burgers_standard(), exponential_standard()}) {
    CHECK(std::abs(s.a1() + s.flux().fprime(s.u0()) * s.t_star() -
                   s.x_star()) < 1e-10);
    CHECK(std::abs(s.a2() + s.flux().fprime(s.U()) * s.t_star() -
                   s.x_star()) < 1e-10);
  }
}

TEST_CASE("scenario validation failures") {
  CHECK_THROWS_AS(Scenario(FluxModel::burgers(), 1.0, 0.5, 1.0, 0.0),
                  ValidationError);  // U below u0
  CHECK_THROWS_AS(Scenario(FluxModel::burgers(), 0.0, 1.0, 0.0, 1.0),
                  ValidationError);  // a1 below a2
  // cubic flux is concave for negative states
  CHECK_THROWS_AS(Scenario(FluxModel::cubic(), -1.0, 1.0, 1.0, 0.0),
                  ValidationError);
}

TEST_CASE("cubic flux on a positive state interval") {
  const Scenario s(FluxModel::cubic(), 0.5, 1.5, 1.0, 0.0);
  CHECK(s.K() == Catch::Approx(2.0).margin(1e-14));
  CHECK(s.b() == Catch::Approx(2.25).margin(1e-14));
  CHECK(s.t_star() == Catch::Approx(0.5).margin(1e-14));
  CHECK(s.c() == Catch::Approx(13.0 / 12.0).margin(1e-14));
}

TEST_CASE("scenario json round trip and field-named errors") {
  const Scenario s = exponential_standard();
  const Scenario back = scenario_from_json(scenario_to_json(s));
  CHECK(back.K() == Catch::Approx(s.K()).margin(1e-14));
  CHECK(back.flux().kind() == FluxKind::exponential);

  using nlohmann::json;
  CHECK_THROWS_WITH(scenario_from_json(json{{"flux", {{"kind", "burgers"}}},
                                            {"U", 1.0},
                                            {"a1", 1.0},
                                            {"a2", 0.0}}),
                    Catch::Matchers::ContainsSubstring("u0"));
  CHECK_THROWS_WITH(
      scenario_from_json(json{{"flux", {{"kind", "warp"}}},
                             {"u0", 0.0},
                             {"U", 1.0},
                             {"a1", 1.0},
                             {"a2", 0.0}}),
      Catch::Matchers::ContainsSubstring("flux.kind"));
  CHECK_THROWS_WITH(
      scenario_from_json(json{{"flux", {{"kind", "poly"}}},
                             {"u0", 0.0},
                             {"U", 1.0},
                             {"a1", 1.0},
                             {"a2", 0.0}}),
      Catch::Matchers::ContainsSubstring("coeffs"));
}

TEST_CASE("polynomial flux matches burgers when given the same coefficients") {
  const Scenario p(FluxModel::polynomial({0.0, 0.0, 0.5}), 0.0, 1.0, 1.0,
                   0.0);
  const Scenario b = burgers_standard();
  CHECK(p.K() == Catch::Approx(b.K()).margin(1e-14));
  CHECK(p.u1(0.37) == Catch::Approx(b.u1(0.37)).margin(1e-12));
}
