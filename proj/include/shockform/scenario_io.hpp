#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "shockform/scenario.hpp"

namespace shockform {

/// Scenario file schema:
///   {"flux": {"kind": "burgers"|"cubic"|"exp"|"poly", "coeffs": [...]},
///    "u0": number, "U": number, "a1": number, "a2": number}
inline Scenario scenario_from_json(const nlohmann::json& j) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key))
      throw ValidationError(std::string(key) + ": missing required field");
    return j.at(key);
  };
  auto number = [&](const char* key) -> double {
    const auto& v = need(key);
    if (!v.is_number())
      throw ValidationError(std::string(key) + ": must be a number");
    return v.get<double>();
  };

  const auto& fj = need("flux");
  if (!fj.is_object() || !fj.contains("kind") || !fj.at("kind").is_string())
    throw ValidationError("flux.kind: missing or not a string");
  const std::string kind = fj.at("kind").get<std::string>();

  FluxModel flux = FluxModel::burgers();
  if (kind == "burgers") {
    flux = FluxModel::burgers();
  } else if (kind == "cubic") {
    flux = FluxModel::cubic();
  } else if (kind == "exp") {
    flux = FluxModel::exponential();
  } else if (kind == "poly") {
    if (!fj.contains("coeffs") || !fj.at("coeffs").is_array())
      throw ValidationError("flux.coeffs: required array for kind \"poly\"");
    flux = FluxModel::polynomial(fj.at("coeffs").get<std::vector<double>>());
  } else {
    throw ValidationError("flux.kind: unknown kind \"" + kind +
                          "\" (expected burgers|cubic|exp|poly)");
  }

  return Scenario(std::move(flux), number("u0"), number("U"), number("a1"),
                  number("a2"));
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json fj{{"kind", to_string(s.flux().kind())}};
  if (s.flux().kind() == FluxKind::polynomial) fj["coeffs"] = s.flux().coeffs();
  return nlohmann::json{{"flux", fj}, {"u0", s.u0()},  {"U", s.U()},
                        {"a1", s.a1()}, {"a2", s.a2()}};
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("scenario: cannot open file \"" + path + "\"");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("scenario: invalid JSON in \"" + path +
                          "\": " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace shockform
