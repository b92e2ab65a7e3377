#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "henonlab/csv.hpp"
#include "henonlab/dynamics.hpp"
#include "henonlab/errors.hpp"
#include "henonlab/integrate.hpp"
#include "henonlab/lyapunov.hpp"
#include "henonlab/section.hpp"
#include "henonlab/state.hpp"

namespace henonlab {

enum class Mode { classical, semiclassical };

inline const char* to_string(Mode mode) {
    return mode == Mode::classical ? "classical" : "semiclassical";
}

/// Full description of one experiment: symmetric initial data
/// x1(0)=x2(0)=x0, p1(0)=p2(0)=p0, the system variant, and the
/// integration/diagnostic parameters.
struct ScenarioConfig {
    std::string label;             ///< synthesized from the fields when empty
    double x0 = 0.0;
    double p0 = 0.0;
    Mode mode = Mode::classical;
    double hbar = 0.0;             ///< semiclassical only; 0 is the classical-limit control
    double g0 = 0.5;
    double pi0 = 0.0;
    double dt = 0.02;
    double t_total = 20000.0;
    double dx2 = 1e-4;             ///< neighbor offset for the separation series
    long long stride = 50;         ///< separation sampling cadence, in steps
    bool allow_large_hbar = false; ///< overrides the hbar <= E/10 policy guard
    std::filesystem::path out_dir = ".";
};

struct RunSummary {
    ScenarioConfig config;
    double energy = 0.0;          ///< classical energy of the initial (x, p) block
    double h_eff_initial = 0.0;   ///< equals `energy` for classical runs
    double d0 = 0.0;
    double lambda_final = 0.0;
    std::size_t section_count = 0;
    double max_energy_drift = 0.0;
    double wall_seconds = 0.0;
};

namespace detail {

inline std::string format_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

/// Family label: identifies (mode, x0, p0) without the hbar member tag.
inline std::string make_family_label(const ScenarioConfig& cfg) {
    return std::string(cfg.mode == Mode::classical ? "cl" : "sc") + "-x" + format_short(cfg.x0) +
           "-p" + format_short(cfg.p0);
}

inline std::string make_label(const ScenarioConfig& cfg) {
    std::string label = make_family_label(cfg);
    if (cfg.mode == Mode::semiclassical) label += "-h" + format_short(cfg.hbar);
    return label;
}

} // namespace detail

/// Canonical label synthesized from the identifying fields, e.g.
/// "cl-x0.12-p0.001" or "sc-x0.2-p0.01-h0.004".
inline std::string scenario_label(const ScenarioConfig& cfg) { return detail::make_label(cfg); }

inline ClassicalState initial_classical_state(const ScenarioConfig& cfg) {
    return {cfg.x0, cfg.x0, cfg.p0, cfg.p0};
}

inline SemiclassicalState initial_semiclassical_state(const ScenarioConfig& cfg) {
    return {cfg.x0, cfg.x0, cfg.p0, cfg.p0, cfg.g0, cfg.g0, cfg.pi0, cfg.pi0};
}

/// Policy bound on the effective Planck constant for a run of classical
/// energy E.  The bound is inclusive: the standard sweep's largest
/// member sits exactly at E/10.
inline double hbar_policy_limit(double energy) { return energy / 10.0; }

inline void validate_config(const ScenarioConfig& cfg) {
    validate_plan(IntegrationPlan{cfg.dt, cfg.t_total});
    if (cfg.stride < 1) throw InvalidPlan("stride must be >= 1");
    if (!std::isfinite(cfg.x0) || !std::isfinite(cfg.p0) || !std::isfinite(cfg.dx2))
        throw NonFinite("scenario initial data must be finite");
    if (cfg.mode == Mode::semiclassical) {
        if (!(cfg.g0 >= kWidthFloor))
            throw NonPositiveWidth("g0 must be positive, got " + std::to_string(cfg.g0));
        if (!std::isfinite(cfg.hbar) || cfg.hbar < 0.0)
            throw NonFinite("hbar must be finite and non-negative");
        const double energy = classical_energy(initial_classical_state(cfg));
        if (!cfg.allow_large_hbar && cfg.hbar > hbar_policy_limit(energy))
            throw HbarPolicyViolation("hbar=" + std::to_string(cfg.hbar) + " exceeds E/10=" +
                                      std::to_string(hbar_policy_limit(energy)) +
                                      " (pass allow_large_hbar to override)");
    }
}

/// The six classical initial-data presets, followed by semiclassical
/// families for the first four (each meant to be swept in hbar; the
/// stored hbar is the policy maximum E/10).
inline std::vector<ScenarioConfig> preset_scenarios() {
    constexpr std::array<std::pair<double, double>, 6> initial_data = {{
        {0.12, 0.001}, {0.10, 0.01}, {0.20, 0.01}, {0.30, 0.01}, {0.33, 0.01}, {0.35, 0.01}}};
    std::vector<ScenarioConfig> presets;
    presets.reserve(10);
    for (const auto& [x0, p0] : initial_data) {
        ScenarioConfig cfg;
        cfg.x0 = x0;
        cfg.p0 = p0;
        cfg.mode = Mode::classical;
        cfg.label = detail::make_label(cfg);
        presets.push_back(cfg);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        ScenarioConfig cfg;
        cfg.x0 = initial_data[i].first;
        cfg.p0 = initial_data[i].second;
        cfg.mode = Mode::semiclassical;
        cfg.hbar = hbar_policy_limit(classical_energy(initial_classical_state(cfg)));
        cfg.label = detail::make_family_label(cfg);
        presets.push_back(cfg);
    }
    return presets;
}

/// Standard sweep values spanning the admissible range for energy E.
inline std::vector<double> default_hbar_values(double energy) {
    return {energy / 100.0, energy / 30.0, energy / 10.0};
}

/// Look up a preset by label.
inline ScenarioConfig find_preset(const std::string& label) {
    for (const auto& preset : preset_scenarios())
        if (preset.label == label) return preset;
    throw std::invalid_argument("unknown preset '" + label + "'");
}

namespace detail {

struct RunData {
    std::vector<SectionPoint> sections;
    LyapunovSeries series;
    double max_drift = 0.0;
    double d0 = 0.0;
};

template <typename Field, typename State, typename EnergyFn>
RunData execute_run(const Field& field, const State& s0, const ScenarioConfig& cfg,
                    EnergyFn energy) {
    const IntegrationPlan plan{cfg.dt, cfg.t_total};
    CrossingDetector<State> detector;
    EnergyDriftMonitor<State, EnergyFn> drift(energy);
    integrate(field, s0, plan, detector, drift);
    const NeighborPair<State> pair = equal_energy_neighbor(s0, cfg.dx2);
    RunData data;
    data.sections = detector.points();
    data.series = lyapunov_series(field, pair, plan, cfg.stride);
    data.max_drift = drift.max_drift();
    data.d0 = pair.d0;
    return data;
}

inline void emit_run_files(const std::filesystem::path& dir, const RunSummary& summary,
                           const RunData& data) {
    const auto& label = summary.config.label;

    Table section{{"t", "x2", "p2"}, {}};
    section.rows.reserve(data.sections.size());
    for (const auto& p : data.sections) section.rows.push_back({p.t, p.x2, p.p2});
    write_table(dir / (label + "_section.csv"), section);

    Table lyap{{"t", "d", "lambda"}, {}};
    lyap.rows.reserve(data.series.samples.size());
    for (const auto& s : data.series.samples) lyap.rows.push_back({s.t, s.d, s.lambda});
    write_table(dir / (label + "_lyapunov.csv"), lyap);

    const auto& cfg = summary.config;
    write_key_values(dir / (label + "_summary.txt"),
                     {{"label", label},
                      {"mode", to_string(cfg.mode)},
                      {"x0", format_g17(cfg.x0)},
                      {"p0", format_g17(cfg.p0)},
                      {"hbar", format_g17(cfg.mode == Mode::semiclassical ? cfg.hbar : 0.0)},
                      {"g0", format_g17(cfg.g0)},
                      {"pi0", format_g17(cfg.pi0)},
                      {"dt", format_g17(cfg.dt)},
                      {"t_total", format_g17(cfg.t_total)},
                      {"dx2", format_g17(cfg.dx2)},
                      {"stride", std::to_string(cfg.stride)},
                      {"energy", format_g17(summary.energy)},
                      {"h_eff_initial", format_g17(summary.h_eff_initial)},
                      {"d0", format_g17(summary.d0)},
                      {"lambda_final", format_g17(summary.lambda_final)},
                      {"section_count", std::to_string(summary.section_count)},
                      {"max_energy_drift", format_g17(summary.max_energy_drift)},
                      {"wall_seconds", format_g17(summary.wall_seconds)}});
}

} // namespace detail

/// Run one scenario end to end: build the initial state and its
/// equal-energy neighbor, integrate with crossing detection on the
/// primary orbit and lockstep separation tracking on the pair, and
/// emit <label>_section.csv, <label>_lyapunov.csv and <label>_summary.txt
/// under the configured directory.
inline RunSummary run_scenario(ScenarioConfig cfg) {
    if (cfg.label.empty()) cfg.label = detail::make_label(cfg);
    try {
        validate_config(cfg);
        const auto start = std::chrono::steady_clock::now();

        RunSummary summary;
        summary.config = cfg;
        summary.energy = classical_energy(initial_classical_state(cfg));

        detail::RunData data;
        if (cfg.mode == Mode::classical) {
            const ClassicalState s0 = initial_classical_state(cfg);
            summary.h_eff_initial = summary.energy;
            data = detail::execute_run(ClassicalField{}, s0, cfg,
                                       [](const ClassicalState& s) { return classical_energy(s); });
        } else {
            const SemiclassicalState s0 = initial_semiclassical_state(cfg);
            const Hbar hbar(cfg.hbar);
            summary.h_eff_initial = effective_energy(s0, hbar);
            data = detail::execute_run(
                SemiclassicalField{hbar}, s0, cfg,
                [hbar](const SemiclassicalState& s) { return effective_energy(s, hbar); });
        }

        summary.d0 = data.d0;
        summary.lambda_final = data.series.lambda_final;
        summary.section_count = data.sections.size();
        summary.max_energy_drift = data.max_drift;
        summary.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        detail::emit_run_files(cfg.out_dir, summary, data);
        return summary;
    } catch (DomainError& e) {
        e.add_context("scenario " + cfg.label);
        throw;
    }
}

/// One member of an hbar sweep; `error` is set (and `summary` left
/// default) when that member failed.
struct SweepEntry {
    double hbar = 0.0;
    bool ok = false;
    RunSummary summary;
    std::string error;
};

/// Run the base scenario once per hbar value (ascending); members that
/// fail are recorded and the sweep continues.  Emits a combined
/// <label>_sweep.csv with one row per successful member.
inline std::vector<SweepEntry> hbar_sweep(const ScenarioConfig& base, std::vector<double> hbars) {
    if (base.mode != Mode::semiclassical)
        throw std::invalid_argument("hbar_sweep requires a semiclassical base scenario");
    std::sort(hbars.begin(), hbars.end());

    const std::string base_label =
        base.label.empty() ? detail::make_family_label(base) : base.label;
    std::vector<SweepEntry> entries;
    entries.reserve(hbars.size());
    for (double h : hbars) {
        SweepEntry entry;
        entry.hbar = h;
        ScenarioConfig cfg = base;
        cfg.hbar = h;
        cfg.label = base_label + "-h" + detail::format_short(h);
        try {
            entry.summary = run_scenario(cfg);
            entry.ok = true;
        } catch (const DomainError& e) {
            entry.error = e.name() + std::string(": ") + e.what();
        }
        entries.push_back(std::move(entry));
    }

    Table sweep{{"hbar", "lambda_final", "E", "H_eff_initial"}, {}};
    for (const auto& entry : entries)
        if (entry.ok)
            sweep.rows.push_back({entry.hbar, entry.summary.lambda_final, entry.summary.energy,
                                  entry.summary.h_eff_initial});
    write_table(base.out_dir / (base_label + "_sweep.csv"), sweep);
    return entries;
}

/// Uniform sampling of the potential on [x1_min,x1_max] x [x2_min,x2_max]
/// with `resolution` points per axis (endpoints included).
inline Table potential_grid(double x1_min, double x1_max, double x2_min, double x2_max,
                            std::size_t resolution) {
    if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    if (!std::isfinite(x1_min) || !std::isfinite(x1_max) || !std::isfinite(x2_min) ||
        !std::isfinite(x2_max))
        throw NonFinite("grid ranges must be finite");
    Table grid{{"x1", "x2", "V"}, {}};
    grid.rows.reserve(resolution * resolution);
    const double dx1 = (x1_max - x1_min) / static_cast<double>(resolution - 1);
    const double dx2 = (x2_max - x2_min) / static_cast<double>(resolution - 1);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double x1 = x1_min + static_cast<double>(i) * dx1;
        for (std::size_t j = 0; j < resolution; ++j) {
            const double x2 = x2_min + static_cast<double>(j) * dx2;
            grid.rows.push_back({x1, x2, potential_value(x1, x2)});
        }
    }
    return grid;
}

/// Escape energy of the well: the saddle level V = 1/6.
inline constexpr double escape_energy() { return 1.0 / 6.0; }

inline void write_potential_grid(const std::filesystem::path& path, double x1_min, double x1_max,
                                 double x2_min, double x2_max, std::size_t resolution) {
    write_table(path, potential_grid(x1_min, x1_max, x2_min, x2_max, resolution),
                {"escape_energy = " + format_g17(escape_energy())});
}

} // namespace henonlab
