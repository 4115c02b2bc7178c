#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "shockform/numerics.hpp"

namespace shockform {

struct MollifierConfig {
  double shift = 2.0;      // separation s between the two front profiles
  double rho_min = -40.0;  // switch-table range and resolution
  double rho_max = 60.0;
  double rho_step = 0.05;
};

/// Smoothed Heaviside pair built on the logistic profile
/// sigma(z) = (1 + tanh z)/2: omega_1(z) = sigma(z), omega_2(z) =
/// sigma(z + s). Both tend to 0/1 at -inf/+inf with exponentially decaying
/// derivatives of every order, and the positive shift s places the balance
/// point of the switch functions at rho_0 = s > 0.
class MollifierPair {
 public:
  explicit MollifierPair(double shift = 2.0) : shift_(shift) {
    if (!(shift_ > 0.0))
      throw ValidationError("mollifier.shift: must be positive");
  }

  double shift() const { return shift_; }

  static double sigma(double z) { return 0.5 * (1.0 + std::tanh(z)); }

  // sech^2(z)/2 written against exp(-2|z|) so large |z| underflows cleanly
  static double sigma_dot(double z) {
    const double e = std::exp(-2.0 * std::abs(z));
    const double r = 1.0 + e;
    return 2.0 * e / (r * r);
  }

  double omega(int i, double z) const {
    return sigma(i == 1 ? z : z + shift_);
  }

  double omega_dot(int i, double z) const {
    return sigma_dot(i == 1 ? z : z + shift_);
  }

 private:
  double shift_;
};

/// Tabulated switch functions of the normalized front separation rho:
///
///   B1(rho) = integral of omega_dot_1(z) * omega_2(z - rho) dz,
///   B2      = 1 - B1,
///   B2'(rho)= integral of omega_dot_1(z) * omega_dot_2(z - rho) dz,
///
/// sampled once by adaptive quadrature and interpolated afterwards. Beyond
/// the grid the tails saturate: B1 -> 0 (rho large), B1 -> 1 (rho very
/// negative), B2' -> 0, all with error far below the table tolerance because
/// the integrands decay like exp(-2|rho|). rho_0 is the unique balance point
/// B1(rho_0) = B2(rho_0) = 1/2.
class BTable {
 public:
  explicit BTable(const MollifierPair& moll, const MollifierConfig& cfg = {})
      : moll_(moll) {
    if (!(cfg.rho_step > 0.0))
      throw ValidationError("mollifier.table.step: must be positive");
    if (!(cfg.rho_min < cfg.rho_max))
      throw ValidationError("mollifier.table: rho_min must be below rho_max");
    const auto n =
        static_cast<std::size_t>(
            std::round((cfg.rho_max - cfg.rho_min) / cfg.rho_step)) + 1;
    std::vector<double> b1(n), b2p(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double rho = cfg.rho_min + cfg.rho_step * static_cast<double>(k);
      b1[k] = convolve(rho, /*dot_second=*/false);
      b2p[k] = convolve(rho, /*dot_second=*/true);
    }
    b1_ = num::UniformTable(cfg.rho_min, cfg.rho_step, std::move(b1),
                            /*below=*/1.0, /*above=*/0.0);
    b2p_ = num::UniformTable(cfg.rho_min, cfg.rho_step, std::move(b2p), 0.0,
                             0.0);
    // balance point by bisection on the interpolated table
    try {
      rho0_ = num::bisect([&](double r) { return b2(r) - 0.5; }, cfg.rho_min,
                          cfg.rho_max, 1e-13);
    } catch (const NumericalError&) {
      throw ValidationError(
          "mollifier: balance point rho0 lies outside the table range; "
          "check the shift against mollifier.table.rho_min/rho_max");
    }
  }

  double b1(double rho) const { return b1_(rho); }
  double b2(double rho) const { return 1.0 - b1_(rho); }
  double b2_prime(double rho) const { return b2p_(rho); }
  double rho0() const { return rho0_; }

  const MollifierPair& mollifier() const { return moll_; }
  const num::UniformTable& b1_table() const { return b1_; }
  const num::UniformTable& b2_prime_table() const { return b2p_; }

  /// Direct quadrature of B1 (or B2' when dot_second), bypassing the table.
  /// The tanh tails are below 1e-26 at |z| = 30, so the truncated window is
  /// exact to working precision.
  double convolve(double rho, bool dot_second) const {
    auto integrand = [&](double z) {
      const double w = moll_.omega_dot(1, z);
      return dot_second ? w * moll_.omega_dot(2, z - rho)
                        : w * moll_.omega(2, z - rho);
    };
    const auto pts = num::panels(-30.0, 30.0, {rho - moll_.shift(), 0.0});
    return num::integrate(integrand, std::span<const double>(pts), 1e-13);
  }

 private:
  MollifierPair moll_;
  num::UniformTable b1_;
  num::UniformTable b2p_;
  double rho0_ = 0.0;
};

}  // namespace shockform
