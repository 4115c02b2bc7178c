#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "shockform/numerics.hpp"

namespace shockform {

enum class FluxKind { burgers, cubic, exponential, polynomial };

/// Convex flux f(u) with analytic first and second derivatives. The built-in
/// families cover the strictly convex cases needed by the front-formation
/// construction; arbitrary polynomials are validated on the state interval
/// at scenario build time.
class FluxModel {
 public:
  static FluxModel burgers() { return FluxModel(FluxKind::burgers, {}); }
  static FluxModel cubic() { return FluxModel(FluxKind::cubic, {}); }
  static FluxModel exponential() {
    return FluxModel(FluxKind::exponential, {});
  }
  static FluxModel polynomial(std::vector<double> coeffs) {
    if (coeffs.size() < 3)
      throw ValidationError(
          "flux.coeffs: polynomial flux needs degree >= 2 (>= 3 coefficients)");
    return FluxModel(FluxKind::polynomial, std::move(coeffs));
  }

  FluxKind kind() const { return kind_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double f(double u) const {
    switch (kind_) {
      case FluxKind::burgers: return 0.5 * u * u;
      case FluxKind::cubic: return u * u * u / 3.0;
      case FluxKind::exponential: return std::exp(u);
      case FluxKind::polynomial: return horner(coeffs_, u);
    }
    return 0.0;
  }

  double fprime(double u) const {
    switch (kind_) {
      case FluxKind::burgers: return u;
      case FluxKind::cubic: return u * u;
      case FluxKind::exponential: return std::exp(u);
      case FluxKind::polynomial: return horner_deriv(coeffs_, u, 1);
    }
    return 0.0;
  }

  double fsecond(double u) const {
    switch (kind_) {
      case FluxKind::burgers: return 1.0;
      case FluxKind::cubic: return 2.0 * u;
      case FluxKind::exponential: return std::exp(u);
      case FluxKind::polynomial: return horner_deriv(coeffs_, u, 2);
    }
    return 0.0;
  }

  /// Sampled strict-convexity check on [ulo, uhi]; throws ValidationError
  /// when f'' fails to stay positive there.
  void require_convex(double ulo, double uhi, int samples = 257) const {
    for (int i = 0; i < samples; ++i) {
      const double u =
          ulo + (uhi - ulo) * static_cast<double>(i) / (samples - 1);
      const double fpp = fsecond(u);
      if (!(fpp > 0.0) || !std::isfinite(fpp))
        throw ValidationError("flux: f''(u) must be positive on the state "
                              "interval; fails at u=" + std::to_string(u));
    }
  }

 private:
  FluxModel(FluxKind kind, std::vector<double> coeffs)
      : kind_(kind), coeffs_(std::move(coeffs)) {}

  static double horner(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
    return v;
  }

  static double horner_deriv(const std::vector<double>& c, double u,
                             int order) {
    double v = 0.0;
    const auto n = static_cast<int>(c.size());
    for (int k = n - 1; k >= order; --k) {
      double w = c[static_cast<std::size_t>(k)];
      for (int j = 0; j < order; ++j) w *= static_cast<double>(k - j);
      v = v * u + w;
    }
    return v;
  }

  FluxKind kind_;
  std::vector<double> coeffs_;
};

inline std::string to_string(FluxKind k) {
  switch (k) {
    case FluxKind::burgers: return "burgers";
    case FluxKind::cubic: return "cubic";
    case FluxKind::exponential: return "exp";
    case FluxKind::polynomial: return "poly";
  }
  return "?";
}

}  // namespace shockform
