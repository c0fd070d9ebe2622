#include "hullmod/bounds.hpp"
#include "hullmod/classdata.hpp"
#include "hullmod/complexity.hpp"
#include "hullmod/experiments.hpp"
#include "hullmod/generators.hpp"
#include "hullmod/hullopt.hpp"
#include "hullmod/nets.hpp"
#include "hullmod/parallel.hpp"
#include "hullmod/process.hpp"
#include "hullmod/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hullmod;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir = ".";
};

std::string num(double v) { return format_number(v); }

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

void emit(const CsvTable& table, const Globals& g, const std::string& name) {
  const auto path = out_path(g, name);
  table.write_file(path);
  std::cout << "wrote " << path << " (" << table.rows().size() << " rows)\n";
}

int g_exit = 0;

void load_class_option(CLI::App* cmd, std::string& path, bool& range) {
  cmd->add_option("--class", path, "class CSV (one function per row)")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--range-01", range, "assert every value lies in [0, 1]");
}

std::string hash_of(const std::string& command, const std::vector<std::string>& parts) {
  std::string canonical = command;
  for (const auto& p : parts) canonical += "|" + p;
  return config_hash(canonical);
}

void add_generate(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("generate", "write a synthetic class as CSV");
  auto spec = std::make_shared<GeneratorSpec>();
  auto kind = std::make_shared<std::string>("two_point");
  auto out = std::make_shared<std::string>("class.csv");
  auto no_range = std::make_shared<bool>(false);
  cmd->add_option("--kind", *kind, "two_point | segment | ball | interval_indicators | lattice_holder");
  cmd->add_option("--n", spec->n, "sample size");
  cmd->add_option("--m", spec->m, "number of functions");
  cmd->add_option("--d", spec->dimension, "ball dimension");
  cmd->add_option("--distance", spec->distance, "two_point distance");
  cmd->add_option("--V", spec->V, "lattice_holder entropy exponent");
  cmd->add_option("--levels", spec->levels, "lattice_holder cells");
  cmd->add_flag("--no-range", *no_range, "ball: skip the map into [0, 1]");
  cmd->add_option("--out", *out, "output file name inside --out-dir");
  cmd->callback([=, &g] {
    spec->kind = parse_generator_kind(*kind);
    spec->seed = g.seed;
    spec->range_01 = !*no_range;
    const auto cls = generate(*spec);
    const auto path = out_path(g, *out);
    std::ofstream file(path);
    write_class_csv(file, cls);
    std::cout << "wrote " << path << ": " << cls.label() << ", m = " << cls.num_functions()
              << ", n = " << cls.sample_size() << "\n";
  });
}

void add_cover(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("cover", "greedy covering curve of a class");
  auto path = std::make_shared<std::string>();
  auto range = std::make_shared<bool>(false);
  auto grid = std::make_shared<std::string>("geometric:1:0.01:20");
  auto check = std::make_shared<bool>(false);
  load_class_option(cmd, *path, *range);
  cmd->add_option("--grid", *grid, "decreasing eps grid");
  cmd->add_flag("--check", *check, "verify cover and separation of every net (acceptance)");
  cmd->callback([=, &g] {
    const auto cls = load_class_csv_file(*path, *range);
    const auto eps = parse_grid(*grid);
    const EmpiricalGeometry geometry(cls);
    const auto curve = covering_curve(cls, geometry, eps);
    if (*check) {
      for (double e : eps) {
        try {
          check_net_invariants(greedy_net(cls, geometry, e), geometry);
        } catch (const std::logic_error& err) {
          std::cerr << "FAIL net invariants at eps " << e << ": " << err.what() << "\n";
          g_exit = 1;
        }
      }
    }
    const auto hash = hash_of("cover", {*path, *grid});
    CsvTable table({"eps", "size", "entropy", "seed", "draws", "config_hash"});
    for (std::size_t i = 0; i < eps.size(); ++i)
      table.add_row({num(eps[i]), std::to_string(curve.sizes[i]), num(curve.entropies[i]), std::to_string(g.seed), "0",
                     hash});
    emit(table, g, "covering.csv");
    if (eps.size() >= 6) std::cout << "covering slope " << covering_slope(curve).exponent << "\n";
  });
}

void add_modulus(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("modulus", "Monte Carlo continuity modulus");
  auto path = std::make_shared<std::string>();
  auto range = std::make_shared<bool>(false);
  auto grid = std::make_shared<std::string>("geometric:1:0.01:10");
  auto draws = std::make_shared<std::size_t>(1000);
  auto hull = std::make_shared<bool>(false);
  auto svg = std::make_shared<bool>(false);
  load_class_option(cmd, *path, *range);
  cmd->add_option("--grid", *grid, "delta grid");
  cmd->add_option("--draws", *draws, "Monte Carlo draws");
  cmd->add_option("--hull", *hull, "modulus of the convex hull instead of the class")->default_str("false");
  cmd->add_flag("--svg", *svg, "also write an SVG plot");
  cmd->callback([=, &g] {
    const auto cls = load_class_csv_file(*path, *range);
    const auto deltas = parse_grid(*grid);
    std::size_t warnings = 0;
    ModulusCurve curve;
    if (*hull) {
      const auto samples = modulus_convex_hull_samples(cls, deltas, *draws, g.seed, g.threads);
      warnings = samples.solver_warnings;
      curve = samples.summarize();
    } else {
      curve = modulus_finite(cls, deltas, *draws, g.seed, g.threads);
    }
    const auto hash = hash_of("modulus", {*path, *grid, std::to_string(*hull)});
    CsvTable table({"delta", "estimate", "std_error", "hull", "seed", "draws", "config_hash"});
    for (std::size_t j = 0; j < deltas.size(); ++j)
      table.add_row({num(deltas[j]), num(curve.estimates[j]), num(curve.std_errors[j]), *hull ? "1" : "0",
                     std::to_string(g.seed), std::to_string(*draws), hash});
    emit(table, g, *hull ? "modulus_hull.csv" : "modulus.csv");
    if (warnings) std::cout << warnings << " draws hit the inner iteration cap (bracket still certified)\n";
    if (*svg)
      write_svg_plot(out_path(g, "modulus.svg"), cls.label(), {{*hull ? "omega(conv F)" : "omega(F)", deltas, curve.estimates}},
                     true, true);
  });
}

void add_theorem1(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("theorem1-check", "omega(conv F) against inf_eps 2 omega(F, eps) + delta sqrt N(F, eps)");
  auto path = std::make_shared<std::string>();
  auto range = std::make_shared<bool>(false);
  auto deltas = std::make_shared<std::string>();
  auto eps = std::make_shared<std::string>();
  auto config = std::make_shared<Theorem1Config>();
  load_class_option(cmd, *path, *range);
  cmd->add_option("--deltas", *deltas, "delta grid (default: 10 points from the diameter down to diameter / 50)");
  cmd->add_option("--eps", *eps, "eps grid for the bound (default: automatic)");
  cmd->add_option("--draws", config->draws, "Monte Carlo draws");
  cmd->add_option("--sigmas", config->sigmas, "allowed combined standard errors");
  cmd->callback([=, &g] {
    const auto cls = load_class_csv_file(*path, *range);
    config->seed = g.seed;
    config->threads = g.threads;
    const EmpiricalGeometry geometry(cls);
    config->deltas = deltas->empty() ? geometric_grid(geometry.diameter(), geometry.diameter() / 50.0, 10)
                                     : parse_grid(*deltas);
    if (!eps->empty()) config->eps_grid = parse_grid(*eps);
    const auto report = run_theorem1_verification(cls, *config);
    emit(theorem1_table(report, *config), g, "theorem1.csv");
    std::cout << report.label << ": " << report.violations << " violations over " << report.rows.size()
              << " deltas, " << report.solver_warnings << " solver warnings\n";
    if (report.violations) g_exit = 1;
  });
}

void add_entropy(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("entropy-bound", "Dudley integral, Sudakov ratio and chaining sums");
  auto path = std::make_shared<std::string>();
  auto range = std::make_shared<bool>(false);
  auto k = std::make_shared<int>(6);
  auto draws = std::make_shared<std::size_t>(2000);
  auto variant = std::make_shared<std::string>("lif");
  load_class_option(cmd, *path, *range);
  cmd->add_option("--k", *k, "chaining depth");
  cmd->add_option("--draws", *draws, "Monte Carlo draws");
  cmd->add_option("--variant", *variant, "lif | lif2")->check(CLI::IsMember({"lif", "lif2"}));
  cmd->callback([=, &g] {
    const auto cls = rescaled_to_unit_diameter(load_class_csv_file(*path, *range));
    const auto grid = dyadic_grid(-1, *k + 1);
    const auto curve = covering_curve(cls, grid);
    const auto sup = modulus_finite(cls, std::vector<double>{1.0}, *draws, g.seed, g.threads);
    const double chaining = *variant == "lif"
                                ? entropy_from_modulus(modulus_finite(cls, dyadic_grid(-1, *k), *draws, g.seed, g.threads), *k)
                                : entropy_from_separated_moduli(separated_level_moduli(cls, *k, *draws, g.seed), *k);
    const double dudley = dudley_integral(curve, 0.0, 1.0);
    const double sudakov = sup.estimates[0] > 0.0 ? sudakov_ratio(curve, sup.estimates[0]) : 0.0;
    const auto hash = hash_of("entropy-bound", {*path, std::to_string(*k), *variant});
    CsvTable table({"quantity", "value", "seed", "draws", "config_hash"});
    table.add_row({"dudley_integral_0_1", num(dudley), std::to_string(g.seed), std::to_string(*draws), hash});
    table.add_row({"sudakov_ratio", num(sudakov), std::to_string(g.seed), std::to_string(*draws), hash});
    table.add_row({"chaining_sum_" + *variant, num(chaining), std::to_string(g.seed), std::to_string(*draws), hash});
    table.add_row({"entropy_at_2^-k", num(curve.entropies[static_cast<std::size_t>(*k) + 1]), std::to_string(g.seed),
                   std::to_string(*draws), hash});
    emit(table, g, "entropy_bound.csv");
    std::cout << "dudley " << dudley << ", sudakov ratio " << sudakov << ", chaining sum " << chaining << "\n";
  });
}

void add_rates(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("rates", "closed-form rate curves, optionally against a measured modulus");
  auto kind = std::make_shared<std::string>("ex1_poly_covering");
  auto curve = std::make_shared<RateCurve>();
  auto grid = std::make_shared<std::string>("geometric:0.3:0.01:12");
  auto path = std::make_shared<std::string>();
  auto draws = std::make_shared<std::size_t>(1000);
  auto hull = std::make_shared<bool>(true);
  auto svg = std::make_shared<bool>(false);
  cmd->add_option("--kind", *kind, "ex1_poly_covering | ex2_smallV | ex2_Veq2 | ex2_bigV | hullentropy_ex1 | hullentropy_ex2");
  cmd->add_option("--V", curve->exponent, "entropy exponent");
  cmd->add_option("--K", curve->constant, "constant");
  cmd->add_option("--grid", *grid, "x grid");
  cmd->add_option("--class", *path, "measure this class as well")->check(CLI::ExistingFile);
  cmd->add_option("--draws", *draws, "Monte Carlo draws");
  cmd->add_option("--hull", *hull, "measure the hull modulus")->default_str("true");
  cmd->add_flag("--svg", *svg, "also write an SVG plot");
  cmd->callback([=, &g] {
    curve->kind = parse_rate_kind(*kind);
    const auto xs = parse_grid(*grid);
    const auto hash = hash_of("rates", {*kind, num(curve->exponent), num(curve->constant), *grid, *path});
    CsvTable table({"x", "reference", "measured", "std_error", "seed", "draws", "config_hash"});
    std::vector<double> ref, measured;
    if (path->empty()) {
      for (double x : xs) {
        const double r = rate_reference(*curve, x);
        ref.push_back(r);
        table.add_row({num(x), num(r), "", "", std::to_string(g.seed), "0", hash});
      }
    } else {
      RateCurveConfig config;
      config.deltas = xs;
      config.draws = *draws;
      config.seed = g.seed;
      config.threads = g.threads;
      config.reference = *curve;
      config.hull = *hull;
      const auto report = run_rate_curves(load_class_csv_file(*path, false), config);
      for (const auto& row : report.rows) {
        ref.push_back(row.reference);
        measured.push_back(row.measured);
        table.add_row({num(row.x), num(row.reference), num(row.measured), num(row.std_error), std::to_string(g.seed),
                       std::to_string(*draws), hash});
      }
      std::cout << "fitted exponent " << report.fit.exponent << " over [" << report.fit.x_min << ", "
                << report.fit.x_max << "], residual " << report.fit.residual << "\n";
    }
    emit(table, g, "rates.csv");
    if (*svg) {
      std::vector<PlotSeries> series{{"reference", xs, ref}};
      if (!measured.empty()) series.push_back({"measured", xs, measured});
      write_svg_plot(out_path(g, "rates.svg"), *kind, series, true, true);
    }
  });
}

void print_fixed_point(const FixedPointResult& r) {
  nlohmann::json j = {{"equation", to_string(r.equation)},
                      {"value", r.value},
                      {"iterations", r.iterations},
                      {"residual", r.residual},
                      {"largest_verified", r.largest_verified}};
  for (const auto& [name, value] : r.components) j["components"][name] = value;
  std::cout << j.dump(2) << "\n";
}

void add_fixpoint(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("fixpoint", "largest fixed points of the rate equations");
  auto equation = std::make_shared<std::string>("uo");
  auto psi_spec = std::make_shared<std::string>("linear:0.5");
  auto oracle_spec = std::make_shared<std::string>("zero");
  auto path = std::make_shared<std::string>();
  auto delta = std::make_shared<double>(0.1);
  auto t = std::make_shared<double>(1.0);
  auto n = std::make_shared<std::size_t>(100);
  auto draws = std::make_shared<std::size_t>(500);
  auto profile_path = std::make_shared<std::string>();
  cmd->add_option("--equation", *equation, "uo | u | r | uent | rent")
      ->check(CLI::IsMember({"uo", "u", "r", "uent", "rent"}));
  cmd->add_option("--psi", *psi_spec, "linear:C | theorem1 | entropy (the latter two need --class)");
  cmd->add_option("--oracle", *oracle_spec, "zero | finite | hull (the latter two need --class)");
  cmd->add_option("--class", *path, "class CSV")->check(CLI::ExistingFile);
  cmd->add_option("--delta", *delta, "delta");
  cmd->add_option("--t", *t, "confidence parameter");
  cmd->add_option("--n", *n, "sample size (taken from the class when given)");
  cmd->add_option("--draws", *draws, "Monte Carlo draws for oracles and psi");
  cmd->add_option("--profile", *profile_path, "constants profile JSON")->check(CLI::ExistingFile);
  cmd->callback([=, &g] {
    const auto profile = profile_path->empty() ? ConstantsProfile{} : ConstantsProfile::load(*profile_path);
    std::optional<SampledClass> cls;
    if (!path->empty()) cls = load_class_csv_file(*path, false);
    const std::size_t size = cls ? cls->sample_size() : *n;
    auto make_psi = [&]() -> PsiFunction {
      if (psi_spec->rfind("linear:", 0) == 0) {
        const double c = std::stod(psi_spec->substr(7));
        return PsiFunction(PsiMethod::direct_mc, size, [c](double x) { return c * x; }, geometric_grid(2.0, 1e-6, 32));
      }
      if (!cls) throw CLI::ValidationError("--psi " + *psi_spec + " needs --class");
      const EmpiricalGeometry geometry(*cls);
      const auto eps = auto_eps_grid(geometry, 32);
      auto covering = covering_curve(*cls, geometry, eps);
      if (*psi_spec == "theorem1")
        return make_psi_theorem1(modulus_finite(*cls, eps, *draws, g.seed, g.threads), covering, size);
      if (*psi_spec == "entropy") return make_psi_entropy(covering, size);
      throw CLI::ValidationError("unknown --psi " + *psi_spec);
    };
    auto make_oracle = [&]() -> std::pair<LocalizedOracle, bool> {
      if (*oracle_spec == "zero") return {[](double) { return 0.0; }, false};
      if (!cls) throw CLI::ValidationError("--oracle " + *oracle_spec + " needs --class");
      const SampledClass checked(cls->values(), cls->label(), true);
      if (*oracle_spec == "finite") {
        auto frozen = std::make_shared<FrozenFiniteRademacher>(checked, *draws, g.seed);
        return {[frozen](double r) { return (*frozen)(r).estimate; }, true};
      }
      if (*oracle_spec == "hull") {
        auto frozen = std::make_shared<FrozenHullRademacher>(checked, *draws, g.seed);
        return {[frozen](double r) { return (*frozen)(r).estimate; }, true};
      }
      throw CLI::ValidationError("unknown --oracle " + *oracle_spec);
    };
    FixedPointResult result;
    if (*equation == "uo") {
      result = solve_zero_error(make_psi());
    } else if (*equation == "u" || *equation == "r") {
      const auto [oracle, noisy] = make_oracle();
      FixedPointOptions options;
      if (noisy) options.tolerance = 1e-4;
      result = *equation == "u" ? solve_U(*delta, *t, size, oracle, options) : solve_r(*delta, *t, size, oracle, options);
    } else {
      const auto psi = make_psi();
      const double r0 = r_zero(*t, size);
      result = *equation == "uent" ? solve_Uent(*delta, psi, r0, profile) : solve_rent(*delta, psi, r0, profile);
    }
    print_fixed_point(result);
    if (!result.largest_verified) std::cerr << "warning: largest-solution probe failed\n";
  });
}

void add_erm(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("erm", "least absolute deviation over the convex hull");
  auto path = std::make_shared<std::string>();
  auto target = std::make_shared<std::string>();
  cmd->add_option("--class", *path, "class CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--target", *target, "target values CSV")->required()->check(CLI::ExistingFile);
  cmd->callback([=, &g] {
    const auto cls = load_class_csv_file(*path, true);
    const auto y = load_vector_csv_file(*target);
    const auto sol = erm_convex_hull(cls, y);
    const auto hash = hash_of("erm", {*path, *target});
    CsvTable table({"index", "weight", "seed", "draws", "config_hash"});
    const auto w = sol.combination.weights();
    for (std::size_t i = 0; i < w.size(); ++i)
      table.add_row({std::to_string(i), num(w[i]), std::to_string(g.seed), "0", hash});
    emit(table, g, "erm_weights.csv");
    std::cout << "objective " << sol.objective_value << ", duality gap " << sol.residual << ", iterations "
              << sol.iterations << "\n";
  });
}

void add_certify(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("certify", "ERM plus the zero-error certificate K (r_hat + r_0)");
  auto path = std::make_shared<std::string>();
  auto target = std::make_shared<std::string>();
  auto t = std::make_shared<double>(3.0);
  auto draws = std::make_shared<std::size_t>(500);
  auto profile_path = std::make_shared<std::string>();
  cmd->add_option("--class", *path, "class CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--target", *target, "target values CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--t", *t, "confidence parameter");
  cmd->add_option("--draws", *draws, "Monte Carlo draws for psi");
  cmd->add_option("--profile", *profile_path, "constants profile JSON")->check(CLI::ExistingFile);
  cmd->callback([=, &g] {
    const auto profile = profile_path->empty() ? ConstantsProfile{} : ConstantsProfile::load(*profile_path);
    const auto cls = load_class_csv_file(*path, true);
    const auto y = load_vector_csv_file(*target);
    const auto sol = erm_convex_hull(cls, y);
    const auto rate = zero_error_rate(cls, *draws, g.seed);
    const auto cert = certificate(cls.label(), *t, cls.sample_size(), rate.r_hat, profile, g.seed);
    auto j = nlohmann::json::parse(cert.to_json());
    j["erm"] = {{"objective", sol.objective_value}, {"duality_gap", sol.residual}};
    j["draws"] = *draws;
    const auto out = out_path(g, "certificate.json");
    std::ofstream(out) << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\nwrote " << out << "\n";
  });
}

void add_trials(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("trials", "repeated ERM + certificate trials on interval indicators");
  auto config = std::make_shared<ErmTrialConfig>();
  auto calibrate = std::make_shared<bool>(false);
  auto profile_path = std::make_shared<std::string>();
  auto required = std::make_shared<double>(0.95);
  cmd->add_option("--m", config->m, "thresholds");
  cmd->add_option("--n", config->n, "sample size");
  cmd->add_option("--trials", config->trials, "trials per phase");
  cmd->add_option("--t", config->t, "confidence parameter");
  cmd->add_option("--draws", config->draws, "Monte Carlo draws for psi");
  cmd->add_option("--profile", *profile_path, "constants profile JSON")->check(CLI::ExistingFile);
  cmd->add_flag("--calibrate", *calibrate,
                "fit K on one set of trials, then check coverage on fresh seeds (acceptance)");
  cmd->add_option("--coverage", *required, "required coverage with --calibrate");
  cmd->callback([=, &g] {
    if (!profile_path->empty()) config->profile = ConstantsProfile::load(*profile_path);
    config->threads = g.threads;
    config->seed = g.seed;
    if (!*calibrate) {
      const auto report = run_erm_trials(*config);
      emit(erm_table(report, *config), g, "trials.csv");
      std::cout << "coverage " << report.coverage << " at K = " << report.K << ", max training objective "
                << report.max_train_objective << "\n";
      return;
    }
    const auto fit = run_erm_trials(*config);
    const double K = calibrate_constant(fit);
    ConstantsProfile profile = config->profile;
    profile.K_thm = K;
    profile.notes = "K_thm calibrated as the max of risk / (r_hat + r_0) over " + std::to_string(config->trials) +
                    " trials with seed " + std::to_string(g.seed);
    auto fresh_config = *config;
    fresh_config.seed = draw_seed(g.seed, 0xca1b);
    auto fresh = run_erm_trials(fresh_config);
    apply_constant(fresh, K);
    emit(erm_table(fit, *config), g, "trials_calibration.csv");
    emit(erm_table(fresh, fresh_config), g, "trials_holdout.csv");
    std::ofstream(out_path(g, "profile_calibrated.json")) << profile.to_json() << "\n";
    const double worst_train = std::max(fit.max_train_objective, fresh.max_train_objective);
    std::cout << "calibrated K = " << K << ", holdout coverage " << fresh.coverage << ", max training objective "
              << worst_train << "\n";
    if (fresh.coverage < *required || worst_train > 1e-8) g_exit = 1;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hullmod: continuity moduli, covering numbers and convex-hull bounds"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values");
  Globals g;
  app.add_option("--seed", g.seed, "base random seed");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  app.add_option("--out-dir", g.out_dir, "directory for output files");
  add_generate(app, g);
  add_cover(app, g);
  add_modulus(app, g);
  add_theorem1(app, g);
  add_entropy(app, g);
  add_rates(app, g);
  add_fixpoint(app, g);
  add_erm(app, g);
  add_certify(app, g);
  add_trials(app, g);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return g_exit;
}
