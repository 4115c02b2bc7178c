#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shockform/model.hpp"
#include "shockform/scenario_io.hpp"
#include "shockform/verification.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace shockform;

namespace {

struct RunOptions {
  std::string scenario_path;
  std::string config_path;
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> times;  // absolute; defaults to {0.5 t*, 1.5 t*}
  std::string out_dir = "out";
  std::string check;
  std::uint64_t seed = 12345;
  std::size_t points = 2001;
  double radius = 3.0;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Write-then-rename so partially written artifacts never appear.
void write_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw ValidationError("out: cannot write to \"" + tmp.string() + "\"");
    out << contents;
  }
  fs::rename(tmp, path);
}

ModelConfig load_model_config(const std::string& path) {
  ModelConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in)
    throw ValidationError("config: cannot open file \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  auto get = [&](const json& node, const char* key, auto& slot) {
    if (node.contains(key)) slot = node.at(key).get<std::decay_t<decltype(slot)>>();
  };
  if (j.contains("mollifier")) {
    const auto& m = j.at("mollifier");
    get(m, "shift", cfg.mollifier.shift);
    if (m.contains("table")) {
      const auto& t = m.at("table");
      get(t, "rho_min", cfg.mollifier.rho_min);
      get(t, "rho_max", cfg.mollifier.rho_max);
      get(t, "step", cfg.mollifier.rho_step);
    }
  }
  if (j.contains("dynamics")) {
    const auto& d = j.at("dynamics");
    get(d, "tau_min", cfg.dynamics.tau_min);
    get(d, "tau_max", cfg.dynamics.tau_max);
    get(d, "step", cfg.dynamics.step);
    get(d, "ode_tol", cfg.dynamics.ode_tol);
  }
  if (j.contains("char")) {
    const auto& c = j.at("char");
    get(c, "x0_grid_points", cfg.characteristics.x0_grid_points);
    get(c, "invert_tol", cfg.characteristics.invert_tol);
    if (c.contains("A_override") && !c.at("A_override").is_null())
      cfg.characteristics.A_override = c.at("A_override").get<double>();
  }
  if (j.contains("phases")) {
    const auto& p = j.at("phases");
    get(p, "omega_lambda", cfg.phases.omega_lambda);
    get(p, "t_grid_points", cfg.phases.t_grid_points);
  }
  return cfg;
}

void validate_options(const Scenario& s, RunOptions& opt) {
  if (opt.eps.empty()) throw ValidationError("eps: list must not be empty");
  for (double e : opt.eps)
    if (!(e > 0.0 && e <= 0.5))
      throw ValidationError("eps: values must lie in (0, 0.5], got " +
                            fmt_short(e));
  if (opt.times.empty())
    opt.times = {0.5 * s.t_star(), 1.5 * s.t_star()};
  for (double t : opt.times)
    if (!(t >= 0.0 && t <= 2.0 * s.t_star()))
      throw ValidationError("t: values must lie in [0, 2 t*] = [0, " +
                            fmt_short(2.0 * s.t_star()) + "], got " +
                            fmt_short(t));
}

std::vector<CheckResult> run_checks(const ShockModel& model,
                                    const std::vector<double>& eps,
                                    const std::string& only,
                                    std::uint64_t seed) {
  using Runner = std::pair<std::string, std::function<CheckResult()>>;
  const std::vector<Runner> runners{
      {"ode_fixed_point", [&] { return check_ode_fixed_point(model); }},
      {"rho_asymptotics", [&] { return check_rho_asymptotics(model); }},
      {"lemma_superposition",
       [&] { return check_lemma_pairings(model, eps, seed); }},
      {"char_monotonicity",
       [&] { return check_char_monotonicity(model, eps); }},
      {"weak_residual", [&] { return check_weak_residual(model, eps); }},
      {"l1_convergence", [&] { return check_l1_convergence(model, eps); }},
      {"shock_speed_confluence", [&] { return check_confluence(model); }},
      {"trajectory_residuals",
       [&] { return check_trajectory_residuals(model); }},
      {"entropy_admissibility", [&] { return check_entropy(model, eps); }},
      {"omega_independence", [&] { return check_omega_independence(model); }},
  };
  bool matched = false;
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : runners) {
    if (!only.empty() && name != only) continue;
    matched = true;
    const auto t0 = std::chrono::steady_clock::now();
    out.push_back(fn());
    const auto dt = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    const auto& r = out.back();
    std::printf("%-24s %s  [%6.2fs]  %s\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", dt, r.note.c_str());
  }
  if (!only.empty() && !matched)
    throw ValidationError("check: unknown check \"" + only + "\"");
  return out;
}

json report_json(const Scenario& s, const std::vector<CheckResult>& checks) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    arr.push_back(json{{"name", c.name},
                       {"epsilons", c.epsilons},
                       {"values", c.values},
                       {"slope", std::isnan(c.slope) ? json(nullptr)
                                                     : json(c.slope)},
                       {"pass", c.pass},
                       {"note", c.note}});
  }
  return json{{"scenario", scenario_to_json(s)},
              {"checks", arr},
              {"all_pass", all}};
}

int cmd_profile(const ShockModel& model, const RunOptions& opt) {
  const Scenario& s = model.scenario();
  const ReferenceSolution ur = model.reference();
  fs::create_directories(opt.out_dir);
  for (double eps : opt.eps) {
    const auto ue = model.solution(eps);
    {
      std::ostringstream csv;
      csv << "t,phi1,phi2,shock_line\n";
      for (double t : model.phases().t_grid())
        csv << fmt17(t) << ',' << fmt17(ue.phi1(t)) << ','
            << fmt17(ue.phi2(t)) << ',' << fmt17(s.shock_position(t)) << '\n';
      write_atomic(fs::path(opt.out_dir) /
                       ("trajectories_eps" + fmt_short(eps) + ".csv"),
                   csv.str());
    }
    for (double t : opt.times) {
      const auto rows = sample_profile(ue, ur, t, s.x_star() - opt.radius,
                                       s.x_star() + opt.radius, opt.points);
      std::ostringstream csv;
      csv << "x,u_eps,u_ref\n";
      for (const auto& r : rows)
        csv << fmt17(r.x) << ',' << fmt17(r.u_eps) << ',' << fmt17(r.u_ref)
            << '\n';
      write_atomic(fs::path(opt.out_dir) /
                       ("profile_eps" + fmt_short(eps) + "_t" + fmt_short(t) +
                        ".csv"),
                   csv.str());
    }
  }
  std::printf("profile: wrote %zu file(s) to %s\n",
              opt.eps.size() * (1 + opt.times.size()), opt.out_dir.c_str());
  return 0;
}

int cmd_verify(const ShockModel& model, const RunOptions& opt) {
  fs::create_directories(opt.out_dir);
  const auto checks = run_checks(model, opt.eps, opt.check, opt.seed);
  const json rep = report_json(model.scenario(), checks);
  write_atomic(fs::path(opt.out_dir) / "verify_report.json", rep.dump(2) + "\n");
  std::ostringstream csv;
  csv << "check,eps,value\n";
  for (const auto& c : checks)
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      const double eps =
          c.epsilons.empty() ? 0.0 : c.epsilons[i % c.epsilons.size()];
      csv << c.name << ',' << fmt17(eps) << ',' << fmt17(c.values[i]) << '\n';
    }
  write_atomic(fs::path(opt.out_dir) / "verify_raw.csv", csv.str());
  const bool all = rep.at("all_pass").get<bool>();
  std::printf("verify: %s (report in %s)\n", all ? "all checks passed"
                                                 : "CHECK FAILURES",
              opt.out_dir.c_str());
  return all ? 0 : 1;
}

int cmd_sweep(const ShockModel& model, const RunOptions& opt) {
  if (opt.eps.size() < 3)
    throw ValidationError("eps: sweep needs at least 3 values");
  const Scenario& s = model.scenario();
  const ReferenceSolution ur = model.reference();
  fs::create_directories(opt.out_dir);

  const std::vector<std::pair<std::string, TestFunction>> etas{
      {"pre", TestFunction::bump(s.shock_position(2.0 * s.t_star()) + 2.5,
                                 0.5)},
      {"straddle", TestFunction::bump(s.x_star(), 1.5)},
      {"post", TestFunction::bump(s.a2() - 2.7, 0.7)}};

  std::ostringstream rcsv;
  rcsv << "eps,t,test_function,value\n";
  json rslopes = json::array();
  for (const auto& [label, eta] : etas) {
    for (double t : opt.times) {
      std::vector<RatePoint> pts;
      for (double eps : opt.eps) {
        const auto ue = model.solution(eps);
        const double v = std::abs(weak_residual(ue, t, eta));
        rcsv << fmt17(eps) << ',' << fmt17(t) << ',' << label << ','
             << fmt17(v) << '\n';
        pts.push_back({eps, v});
      }
      const auto rep = fit_rate(pts);
      rslopes.push_back(json{{"metric", "weak_residual"},
                             {"t", t},
                             {"test_function", label},
                             {"slope", rep.below_noise_floor
                                           ? json(nullptr)
                                           : json(rep.slope)}});
    }
  }
  rcsv << "# slopes: " << rslopes.dump() << '\n';
  write_atomic(fs::path(opt.out_dir) / "residual_sweep.csv", rcsv.str());

  std::ostringstream lcsv;
  lcsv << "eps,t,value\n";
  json lslopes = json::array();
  for (double t : opt.times) {
    std::vector<RatePoint> pts;
    for (double eps : opt.eps) {
      const auto ue = model.solution(eps);
      const double v = l1_distance(ue, ur, t, opt.radius);
      lcsv << fmt17(eps) << ',' << fmt17(t) << ',' << fmt17(v) << '\n';
      pts.push_back({eps, v});
    }
    const auto rep = fit_rate(pts);
    lslopes.push_back(json{{"metric", "l1"},
                           {"t", t},
                           {"slope", rep.below_noise_floor ? json(nullptr)
                                                           : json(rep.slope)}});
  }
  lcsv << "# slopes: " << lslopes.dump() << '\n';
  write_atomic(fs::path(opt.out_dir) / "l1_sweep.csv", lcsv.str());

  std::printf("sweep: wrote residual_sweep.csv and l1_sweep.csv to %s\n",
              opt.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shockform: weak asymptotic construction of shock formation "
               "for convex scalar conservation laws"};
  app.require_subcommand(1);

  RunOptions opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", opt.scenario_path,
                    "scenario JSON file")->required();
    sub->add_option("--config", opt.config_path, "model config JSON file");
    sub->add_option("--eps", opt.eps, "epsilon values")->delimiter(',');
    sub->add_option("--t", opt.times,
                    "absolute times in [0, 2 t*]; default {0.5 t*, 1.5 t*}")
        ->delimiter(',');
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "seed for sampled property checks");
  };
  CLI::App* profile = app.add_subcommand(
      "profile", "sample u_eps and the exact solution to CSV");
  add_common(profile);
  profile->add_option("--n", opt.points, "points per profile");
  profile->add_option("--r", opt.radius, "half-width of the x window");
  CLI::App* verify = app.add_subcommand(
      "verify", "run the verification battery, write a JSON report");
  add_common(verify);
  verify->add_option("--check", opt.check, "run a single named check");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "emit convergence tables over the eps sweep");
  add_common(sweep);
  sweep->add_option("--r", opt.radius, "half-width of the L1 window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Scenario scenario = load_scenario_file(opt.scenario_path);
    validate_options(scenario, opt);
    const ModelConfig config = load_model_config(opt.config_path);
    const ShockModel model(scenario, config);
    if (profile->parsed()) return cmd_profile(model, opt);
    if (verify->parsed()) return cmd_verify(model, opt);
    if (sweep->parsed()) return cmd_sweep(model, opt);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
