#pragma once

#include <memory>
#include <utility>

#include "shockform/characteristics.hpp"
#include "shockform/dynamics.hpp"
#include "shockform/mollifier.hpp"
#include "shockform/phases.hpp"
#include "shockform/scenario.hpp"
#include "shockform/solution.hpp"

namespace shockform {

struct ModelConfig {
  MollifierConfig mollifier;
  DynamicsConfig dynamics;
  CharConfig characteristics;
  PhasesConfig phases;
};

/// Owner of the whole evaluation pipeline for one scenario. Every table is
/// built eagerly here, once, and is independent of eps; solutions for any
/// number of eps values share them.
class ShockModel {
 public:
  explicit ShockModel(Scenario scenario, ModelConfig config = {})
      : config_(config),
        scenario_(std::move(scenario)),
        mollifier_(config.mollifier.shift),
        btable_(mollifier_, config.mollifier),
        rho_(scenario_, btable_, config.dynamics),
        field_(std::make_unique<CharacteristicField>(
            scenario_, btable_, rho_, config.characteristics)),
        phases_(std::make_unique<PhaseFunctions>(scenario_, btable_, rho_,
                                                 *field_, config.phases)) {}

  const ModelConfig& config() const { return config_; }
  const Scenario& scenario() const { return scenario_; }
  const MollifierPair& mollifier() const { return mollifier_; }
  const BTable& btable() const { return btable_; }
  const RhoSolution& rho() const { return rho_; }
  const CharacteristicField& field() const { return *field_; }
  const PhaseFunctions& phases() const { return *phases_; }

  /// Rebuild only the trajectory layer with a different origin-blend width.
  PhaseFunctions phases_with_lambda(double lambda) const {
    PhasesConfig cfg = config_.phases;
    cfg.omega_lambda = lambda;
    return PhaseFunctions(scenario_, btable_, rho_, *field_, cfg);
  }

  WeakAsymptoticSolution solution(double eps) const {
    return WeakAsymptoticSolution(scenario_, mollifier_, btable_, rho_,
                                  *field_, *phases_, eps);
  }

  ReferenceSolution reference() const { return ReferenceSolution(scenario_); }

 private:
  ModelConfig config_;
  Scenario scenario_;
  MollifierPair mollifier_;
  BTable btable_;
  RhoSolution rho_;
  std::unique_ptr<CharacteristicField> field_;
  std::unique_ptr<PhaseFunctions> phases_;
};

}  // namespace shockform
