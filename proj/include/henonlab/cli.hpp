#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "henonlab/csv.hpp"
#include "henonlab/dynamics.hpp"
#include "henonlab/errors.hpp"
#include "henonlab/integrate.hpp"
#include "henonlab/lyapunov.hpp"
#include "henonlab/render.hpp"
#include "henonlab/scenario.hpp"
#include "henonlab/section.hpp"
#include "henonlab/validation.hpp"

namespace henonlab::cli {

namespace detail {

/// Raw flag values shared by the scenario-running subcommands.
struct ScenarioFlags {
    double x0 = 0.0;
    double p0 = 0.0;
    double hbar = 0.0;
    double g0 = 0.5;
    double pi0 = 0.0;
    double dt = 0.02;
    double t_total = 20000.0;
    double dx2 = 1e-4;
    long long stride = 50;
    std::string out;
    std::string preset;
    std::string config_path;
    bool allow_large_hbar = false;
};

inline void register_scenario_flags(CLI::App* sub, ScenarioFlags& f) {
    sub->add_option("--x0", f.x0, "initial x1(0)=x2(0)");
    sub->add_option("--p0", f.p0, "initial p1(0)=p2(0)");
    sub->add_option("--hbar", f.hbar, "effective Planck constant (0 = classical limit)");
    sub->add_option("--g0", f.g0, "initial width parameter g1=g2")->capture_default_str();
    sub->add_option("--pi0", f.pi0, "initial width momentum pi1=pi2")->capture_default_str();
    sub->add_option("--dt", f.dt, "integration step")->capture_default_str();
    sub->add_option("--t", f.t_total, "total integration time")->capture_default_str();
    sub->add_option("--dx2", f.dx2, "neighbor offset in x2")->capture_default_str();
    sub->add_option("--stride", f.stride, "separation sampling stride, in steps")
        ->capture_default_str();
    sub->add_option("--out", f.out, "output directory (default $HENONLAB_OUT or .)");
    sub->add_option("--preset", f.preset, "start from a named preset (see `presets`)");
    sub->add_option("--config", f.config_path, "flat key=value config file; explicit flags win");
    sub->add_flag("--allow-large-hbar", f.allow_large_hbar,
                  "override the hbar <= E/10 policy guard");
}

/// Flat key=value config format: one entry per line, '#' comments, keys
/// named after the long flags without the dashes.
inline std::map<std::string, std::string> read_flat_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    std::map<std::string, std::string> values;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto from = s.find_first_not_of(" \t\r");
        const auto to = s.find_last_not_of(" \t\r");
        return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string entry = trim(line);
        if (entry.empty() || entry.front() == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": expected key=value");
        values[trim(entry.substr(0, eq))] = trim(entry.substr(eq + 1));
    }
    return values;
}

inline double parse_config_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw std::invalid_argument("config value for '" + key + "' is not a number: " + value);
    return v;
}

/// Resolution order: preset, then config file, then explicit flags;
/// HENONLAB_OUT supplies the output directory when nothing else does.
/// Setting hbar (from either source) also selects the system: positive
/// values run the semiclassical variant, zero the classical one.
inline ScenarioConfig resolve_config(const CLI::App* sub, const ScenarioFlags& f) {
    std::map<std::string, std::string> file;
    if (sub->count("--config")) file = read_flat_config(f.config_path);

    std::string preset_name = f.preset;
    if (preset_name.empty()) {
        if (const auto it = file.find("preset"); it != file.end()) preset_name = it->second;
    }
    ScenarioConfig cfg;
    const bool from_preset = !preset_name.empty();
    if (from_preset) cfg = find_preset(preset_name);
    bool identity_changed = !from_preset;

    auto apply_hbar = [&](double value) {
        cfg.hbar = value;
        cfg.mode = value > 0.0 ? Mode::semiclassical : Mode::classical;
        identity_changed = true;
    };

    static const std::set<std::string> known_keys = {"preset", "x0",  "p0",     "hbar",
                                                     "g0",     "pi0", "dt",     "t",
                                                     "dx2",    "stride", "out", "allow-large-hbar"};
    for (const auto& [key, value] : file) {
        if (!known_keys.count(key))
            throw std::invalid_argument("unknown config key '" + key + "'");
        if (key == "x0") { cfg.x0 = parse_config_double(key, value); identity_changed = true; }
        else if (key == "p0") { cfg.p0 = parse_config_double(key, value); identity_changed = true; }
        else if (key == "hbar") apply_hbar(parse_config_double(key, value));
        else if (key == "g0") cfg.g0 = parse_config_double(key, value);
        else if (key == "pi0") cfg.pi0 = parse_config_double(key, value);
        else if (key == "dt") cfg.dt = parse_config_double(key, value);
        else if (key == "t") cfg.t_total = parse_config_double(key, value);
        else if (key == "dx2") cfg.dx2 = parse_config_double(key, value);
        else if (key == "stride")
            cfg.stride = static_cast<long long>(parse_config_double(key, value));
        else if (key == "allow-large-hbar")
            cfg.allow_large_hbar = (value == "1" || value == "true");
    }

    if (sub->count("--x0")) { cfg.x0 = f.x0; identity_changed = true; }
    if (sub->count("--p0")) { cfg.p0 = f.p0; identity_changed = true; }
    if (sub->count("--hbar")) apply_hbar(f.hbar);
    if (sub->count("--g0")) cfg.g0 = f.g0;
    if (sub->count("--pi0")) cfg.pi0 = f.pi0;
    if (sub->count("--dt")) cfg.dt = f.dt;
    if (sub->count("--t")) cfg.t_total = f.t_total;
    if (sub->count("--dx2")) cfg.dx2 = f.dx2;
    if (sub->count("--stride")) cfg.stride = f.stride;
    if (f.allow_large_hbar) cfg.allow_large_hbar = true;

    if (sub->count("--out")) {
        cfg.out_dir = f.out;
    } else if (const auto it = file.find("out"); it != file.end()) {
        cfg.out_dir = it->second;
    } else if (const char* env = std::getenv("HENONLAB_OUT")) {
        cfg.out_dir = env;
    } else {
        cfg.out_dir = ".";
    }

    if (identity_changed) cfg.label.clear(); // re-synthesized from the fields
    return cfg;
}

/// Output-directory resolution for the subcommands without scenario flags.
inline std::filesystem::path resolve_out_dir(const CLI::App* sub, const std::string& flag_value) {
    if (sub->count("--out")) return flag_value;
    if (const char* env = std::getenv("HENONLAB_OUT")) return env;
    return ".";
}

inline void print_summary(const RunSummary& summary, std::ostream& out) {
    out << "label=" << summary.config.label << "\n"
        << "mode=" << to_string(summary.config.mode) << "\n"
        << "energy=" << format_g17(summary.energy) << "\n"
        << "h_eff_initial=" << format_g17(summary.h_eff_initial) << "\n"
        << "lambda_final=" << format_g17(summary.lambda_final) << "\n"
        << "section_count=" << summary.section_count << "\n"
        << "max_energy_drift=" << format_g17(summary.max_energy_drift) << "\n"
        << "wall_seconds=" << format_g17(summary.wall_seconds) << "\n";
}

struct PartialRun {
    std::vector<SectionPoint> sections;
    LyapunovSeries series;
    double max_drift = 0.0;
    double d0 = 0.0;
};

template <typename Field, typename State, typename EnergyFn>
PartialRun run_sections(const Field& field, const State& s0, const IntegrationPlan& plan,
                        EnergyFn energy) {
    CrossingDetector<State> detector;
    EnergyDriftMonitor<State, EnergyFn> drift(energy);
    integrate(field, s0, plan, detector, drift);
    PartialRun out;
    out.sections = detector.points();
    out.max_drift = drift.max_drift();
    return out;
}

template <typename Field, typename State, typename EnergyFn>
PartialRun run_separation(const Field& field, const State& s0, const ScenarioConfig& cfg,
                          EnergyFn energy) {
    const IntegrationPlan plan{cfg.dt, cfg.t_total};
    EnergyDriftMonitor<State, EnergyFn> drift(energy);
    integrate(field, s0, plan, drift); // drift monitored on the primary orbit
    const auto pair = equal_energy_neighbor(s0, cfg.dx2);
    PartialRun out;
    out.series = lyapunov_series(field, pair, plan, cfg.stride);
    out.max_drift = drift.max_drift();
    out.d0 = pair.d0;
    return out;
}

inline RunSummary make_summary(const ScenarioConfig& cfg, const PartialRun& run) {
    RunSummary summary;
    summary.config = cfg;
    summary.energy = classical_energy(initial_classical_state(cfg));
    summary.h_eff_initial =
        cfg.mode == Mode::classical
            ? summary.energy
            : effective_energy(initial_semiclassical_state(cfg), Hbar(cfg.hbar));
    summary.d0 = run.d0;
    summary.lambda_final = run.series.lambda_final;
    summary.section_count = run.sections.size();
    summary.max_energy_drift = run.max_drift;
    return summary;
}

inline int cmd_simulate(ScenarioConfig cfg) {
    const RunSummary summary = run_scenario(std::move(cfg));
    print_summary(summary, std::cout);
    std::cout << "out_dir=" << summary.config.out_dir.string() << "\n";
    return 0;
}

inline int cmd_poincare(ScenarioConfig cfg) {
    if (cfg.label.empty()) cfg.label = scenario_label(cfg);
    validate_config(cfg);
    const IntegrationPlan plan{cfg.dt, cfg.t_total};
    PartialRun run;
    if (cfg.mode == Mode::classical) {
        run = run_sections(ClassicalField{}, initial_classical_state(cfg), plan,
                           [](const ClassicalState& s) { return classical_energy(s); });
    } else {
        const Hbar hbar(cfg.hbar);
        run = run_sections(SemiclassicalField{hbar}, initial_semiclassical_state(cfg), plan,
                           [hbar](const SemiclassicalState& s) { return effective_energy(s, hbar); });
    }
    Table section{{"t", "x2", "p2"}, {}};
    for (const auto& p : run.sections) section.rows.push_back({p.t, p.x2, p.p2});
    write_table(cfg.out_dir / (cfg.label + "_section.csv"), section);
    const RunSummary summary = make_summary(cfg, run);
    print_summary(summary, std::cout);
    std::cout << "section_csv=" << (cfg.out_dir / (cfg.label + "_section.csv")).string() << "\n";
    return 0;
}

inline int cmd_lyapunov(ScenarioConfig cfg) {
    if (cfg.label.empty()) cfg.label = scenario_label(cfg);
    validate_config(cfg);
    PartialRun run;
    if (cfg.mode == Mode::classical) {
        run = run_separation(ClassicalField{}, initial_classical_state(cfg), cfg,
                             [](const ClassicalState& s) { return classical_energy(s); });
    } else {
        const Hbar hbar(cfg.hbar);
        run = run_separation(SemiclassicalField{hbar}, initial_semiclassical_state(cfg), cfg,
                             [hbar](const SemiclassicalState& s) { return effective_energy(s, hbar); });
    }
    Table lyap{{"t", "d", "lambda"}, {}};
    for (const auto& s : run.series.samples) lyap.rows.push_back({s.t, s.d, s.lambda});
    write_table(cfg.out_dir / (cfg.label + "_lyapunov.csv"), lyap);
    const RunSummary summary = make_summary(cfg, run);
    print_summary(summary, std::cout);
    std::cout << "lyapunov_csv=" << (cfg.out_dir / (cfg.label + "_lyapunov.csv")).string() << "\n";
    return 0;
}

inline int cmd_sweep(ScenarioConfig cfg, std::vector<double> values) {
    cfg.mode = Mode::semiclassical;
    cfg.label.clear();
    if (values.empty())
        values = default_hbar_values(classical_energy(initial_classical_state(cfg)));
    const auto entries = hbar_sweep(cfg, std::move(values));
    bool all_ok = true;
    for (const auto& entry : entries) {
        if (entry.ok) {
            std::cout << "hbar=" << format_g17(entry.hbar)
                      << " lambda_final=" << format_g17(entry.summary.lambda_final)
                      << " sections=" << entry.summary.section_count << "\n";
        } else {
            all_ok = false;
            std::cerr << "hbar=" << format_g17(entry.hbar) << " failed: " << entry.error << "\n";
        }
    }
    return all_ok ? 0 : 1;
}

inline int cmd_presets() {
    for (const auto& preset : preset_scenarios()) {
        const double e = classical_energy(initial_classical_state(preset));
        std::cout << preset.label << "  mode=" << to_string(preset.mode) << " x0=" << preset.x0
                  << " p0=" << preset.p0 << " E=" << format_g17(e);
        if (preset.mode == Mode::semiclassical) {
            std::cout << " default_sweep={";
            const auto values = default_hbar_values(e);
            for (std::size_t i = 0; i < values.size(); ++i)
                std::cout << (i ? ", " : "") << format_g17(values[i]);
            std::cout << "}";
        }
        std::cout << "\n";
    }
    return 0;
}

inline int cmd_validate(const std::filesystem::path& out_dir) {
    const auto results = run_acceptance({out_dir / "validate_work"});
    return print_acceptance_report(results, std::cout) ? 0 : 1;
}

} // namespace detail

/// Parse and execute one CLI invocation.  Exit status: 0 on success,
/// 1 on a domain error (the originating scenario and error name go to
/// stderr), 2 on a usage error.
inline int dispatch(int argc, const char* const* argv) {
    CLI::App app{"Henon-Heiles dynamics lab: classical and semiclassical orbits, "
                 "Poincare sections, and separation-rate diagnostics"};
    app.require_subcommand(1);

    detail::ScenarioFlags simulate_flags, poincare_flags, lyapunov_flags, sweep_flags;
    std::vector<double> sweep_values;

    CLI::App* simulate = app.add_subcommand("simulate", "full run: sections + separation series");
    detail::register_scenario_flags(simulate, simulate_flags);
    CLI::App* poincare = app.add_subcommand("poincare", "surface-of-section run only");
    detail::register_scenario_flags(poincare, poincare_flags);
    CLI::App* lyapunov = app.add_subcommand("lyapunov", "neighbor-pair separation run only");
    detail::register_scenario_flags(lyapunov, lyapunov_flags);
    CLI::App* sweep = app.add_subcommand("sweep", "run a semiclassical scenario per hbar value");
    detail::register_scenario_flags(sweep, sweep_flags);
    sweep->add_option("--sweep", sweep_values, "comma-separated hbar list")->delimiter(',');

    std::size_t resolution = 201;
    std::vector<double> xrange{-1.2, 1.2}, yrange{-1.2, 1.2};
    std::string potential_out;
    CLI::App* potential = app.add_subcommand("potential", "sample the potential on a grid");
    potential->add_option("--res", resolution, "grid points per axis")->capture_default_str();
    potential->add_option("--xrange", xrange, "x1 range (two values)")->expected(2);
    potential->add_option("--yrange", yrange, "x2 range (two values)")->expected(2);
    potential->add_option("--out", potential_out, "output directory (default $HENONLAB_OUT or .)");

    CLI::App* presets = app.add_subcommand("presets", "list preset scenarios and energies");

    std::string validate_out;
    CLI::App* validate = app.add_subcommand("validate", "run the acceptance criteria");
    validate->add_option("--out", validate_out, "work directory (default $HENONLAB_OUT or .)");

    std::string render_csv, render_x, render_y, render_out, render_title;
    CLI::App* render = app.add_subcommand("render", "scatter-plot CSV columns to SVG");
    render->add_option("--csv", render_csv, "input CSV")->required();
    render->add_option("--x", render_x, "x column name")->required();
    render->add_option("--y", render_y, "y column name")->required();
    render->add_option("--svg", render_out, "output SVG path")->required();
    render->add_option("--title", render_title, "plot title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed())
            return detail::cmd_simulate(detail::resolve_config(simulate, simulate_flags));
        if (poincare->parsed())
            return detail::cmd_poincare(detail::resolve_config(poincare, poincare_flags));
        if (lyapunov->parsed())
            return detail::cmd_lyapunov(detail::resolve_config(lyapunov, lyapunov_flags));
        if (sweep->parsed())
            return detail::cmd_sweep(detail::resolve_config(sweep, sweep_flags), sweep_values);
        if (potential->parsed()) {
            const auto path = detail::resolve_out_dir(potential, potential_out) / "potential.csv";
            write_potential_grid(path, xrange[0], xrange[1], yrange[0], yrange[1], resolution);
            std::cout << "grid_csv=" << path.string() << "\n";
            return 0;
        }
        if (presets->parsed()) return detail::cmd_presets();
        if (validate->parsed())
            return detail::cmd_validate(detail::resolve_out_dir(validate, validate_out));
        if (render->parsed()) {
            render_scatter(render_csv, render_x, render_y, render_out, render_title);
            std::cout << "svg=" << render_out << "\n";
            return 0;
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

/// Convenience overload for in-process tests.
inline int dispatch(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("henonlab");
    for (const auto& a : args) argv.push_back(a.c_str());
    return dispatch(static_cast<int>(argv.size()), argv.data());
}

} // namespace henonlab::cli
