#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "shockform/numerics.hpp"

using namespace shockform;

TEST_CASE("newton_bisect finds bracketed roots") {
  auto f = [](double x) { return x * x * x - 2.0 * x - 5.0; };
  auto df = [](double x) { return 3.0 * x * x - 2.0; };
  const double r = num::newton_bisect(f, df, 2.0, 3.0, 1e-14);
  CHECK(r == Catch::Approx(2.0945514815423265).epsilon(1e-13));

  CHECK_THROWS_AS(num::newton_bisect(f, df, 3.0, 4.0, 1e-14),
                  NumericalError);
}

TEST_CASE("bisect converges on monotone functions") {
  const double r =
      num::bisect([](double x) { return std::tanh(x) - 0.5; }, -5.0, 5.0,
                  1e-13);
  CHECK(r == Catch::Approx(std::atanh(0.5)).margin(1e-12));
}

TEST_CASE("adaptive quadrature on smooth and front-like integrands") {
  CHECK(num::integrate([](double x) { return std::sin(x); }, 0.0,
                       M_PI, 1e-12) == Catch::Approx(2.0).epsilon(1e-12));
  // steep logistic front, far from panel ends
  auto front = [](double z) {
    const double e = std::exp(-2.0 * std::abs(z));
    return 2.0 * e / ((1.0 + e) * (1.0 + e));
  };
  const auto pts = num::panels(-30.0, 30.0, {0.0});
  CHECK(num::integrate(front, std::span<const double>(pts), 1e-13) ==
        Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("panels clamps and deduplicates marks") {
  const auto pts = num::panels(0.0, 1.0, {0.5, 0.5, -3.0, 2.0, 0.25});
  REQUIRE(pts.size() == 4);
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
}

TEST_CASE("uniform table reproduces cubics exactly") {
  const double h = 0.1;
  auto poly = [](double x) { return 2.0 + x - 0.5 * x * x + 0.25 * x * x * x; };
  std::vector<double> y;
  for (int i = 0; i <= 40; ++i) y.push_back(poly(h * i));
  num::UniformTable tbl(0.0, h, y, y.front(), y.back());
  for (double x : {0.001, 0.05, 1.234, 3.777, 3.999}) {
    CHECK(tbl(x) == Catch::Approx(poly(x)).margin(1e-13));
    CHECK(tbl.derivative(x) ==
          Catch::Approx(1.0 - x + 0.75 * x * x).margin(1e-11));
  }
  // outside the grid the fixed tail values apply
  CHECK(tbl(-1.0) == y.front());
  CHECK(tbl(5.0) == y.back());
}

TEST_CASE("uniform table interpolates smooth data to fourth order") {
  const double h = 0.05;
  std::vector<double> y;
  for (int i = 0; i <= 200; ++i) y.push_back(std::sin(h * i));
  num::UniformTable tbl(0.0, h, y, 0.0, 0.0);
  double worst = 0.0;
  for (double x = 0.013; x < 10.0; x += 0.0373)
    worst = std::max(worst, std::abs(tbl(x) - std::sin(x)));
  CHECK(worst < 1e-6);
}

TEST_CASE("grid2 bicubic reproduces separable cubics") {
  num::Grid2 g(0.0, 0.25, 9, -1.0, 0.5, 9);
  auto fx = [](double x) { return 1.0 + x * x * x - x; };
  auto fy = [](double y) { return 2.0 - y + 0.5 * y * y; };
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j)
      g.at(i, j) = fx(0.25 * i) * fy(-1.0 + 0.5 * j);
  for (double x : {0.1, 0.9, 1.99})
    for (double y : {-0.77, 0.0, 2.5})
      CHECK(g.eval(x, y) == Catch::Approx(fx(x) * fy(y)).margin(1e-12));
}

TEST_CASE("cumulative trapezoid anchors at the center node") {
  const double h = 0.01;
  std::vector<double> f;
  const std::size_t center = 500;
  for (int j = 0; j <= 1000; ++j) f.push_back(std::cos(h * (j - 500.0)));
  const auto c = num::cumulative_from(f, h, center);
  CHECK(c[center] == 0.0);
  for (std::size_t j = 0; j < c.size(); j += 113) {
    const double x = h * (static_cast<double>(j) - 500.0);
    CHECK(c[j] == Catch::Approx(std::sin(x)).margin(1e-5));
  }
}

TEST_CASE("simpson rule on uniform nodes") {
  std::vector<double> f;
  const double h = 1.0 / 128.0;
  for (int i = 0; i <= 128; ++i) f.push_back(std::exp(h * i));
  CHECK(num::simpson(f, h) == Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-9));
  std::vector<double> even(4, 1.0);
  CHECK_THROWS_AS(num::simpson(even, 0.1), ValidationError);
}

TEST_CASE("ode_advance integrates forward and backward") {
  double h_hint = 0.0;
  double y = num::ode_advance([](double v) { return v; }, 0.0, 1.0, 1.0,
                              1e-12, h_hint);
  CHECK(y == Catch::Approx(std::exp(1.0)).epsilon(1e-10));

  h_hint = 0.0;
  y = num::ode_advance([](double v) { return v * v; }, 0.0, 0.5, 1.0, 1e-12,
                       h_hint);
  CHECK(y == Catch::Approx(2.0).epsilon(1e-10));

  h_hint = 0.0;
  y = num::ode_advance([](double v) { return v; }, 1.0, 0.0, std::exp(1.0),
                       1e-12, h_hint);
  CHECK(y == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit_line recovers exact affine data") {
  std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.5 - 2.0 * x);
  const auto fit = num::fit_line(xs, ys);
  CHECK(fit.slope == Catch::Approx(-2.0).margin(1e-13));
  CHECK(fit.intercept == Catch::Approx(3.5).margin(1e-13));
  CHECK(fit.rms < 1e-13);
}
