#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "henonlab/dynamics.hpp"
#include "henonlab/integrate.hpp"
#include "henonlab/lyapunov.hpp"
#include "henonlab/scenario.hpp"
#include "henonlab/section.hpp"
#include "henonlab/state.hpp"

namespace henonlab {

/// Outcome of one acceptance criterion.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; ///< measured values and the tolerance they were held to
};

struct AcceptanceOptions {
    std::filesystem::path work_dir = "acceptance_work"; ///< scratch dir for file-emitting checks
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::vector<ScenarioConfig> classical_presets() {
    std::vector<ScenarioConfig> out;
    for (const auto& p : preset_scenarios())
        if (p.mode == Mode::classical) out.push_back(p);
    return out;
}

inline std::vector<ScenarioConfig> semiclassical_presets() {
    std::vector<ScenarioConfig> out;
    for (const auto& p : preset_scenarios())
        if (p.mode == Mode::semiclassical) out.push_back(p);
    return out;
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace detail

/// Largest mismatch between the variational vector field and central
/// finite differences of the effective energy under the canonical
/// pairings (x_i, p_i) and (hbar*g_i, pi_i), over `n_states` random
/// valid states.  Errors are scaled by max(1, |analytic|).  The field
/// and energy are injected so a deliberately corrupted field can be
/// shown to fail.
template <typename FieldFn, typename EnergyFn>
double symplectic_gradient_max_error(const FieldFn& field, const EnergyFn& energy, Hbar hbar,
                                     int n_states, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xp(-0.4, 0.4);
    std::uniform_real_distribution<double> width(0.15, 1.5);
    std::uniform_real_distribution<double> width_momentum(-0.75, 0.75);
    const double h = 1e-6;

    double max_err = 0.0;
    auto check = [&](double analytic, double fd) {
        const double err = std::abs(analytic - fd) / std::max(1.0, std::abs(analytic));
        if (err > max_err) max_err = err;
    };

    for (int i = 0; i < n_states; ++i) {
        const SemiclassicalState s{xp(rng), xp(rng), xp(rng), xp(rng),
                                   width(rng), width(rng), width_momentum(rng), width_momentum(rng)};
        const SemiclassicalState ds = field(s, hbar);
        auto fd = [&](double SemiclassicalState::*member) {
            SemiclassicalState plus = s, minus = s;
            plus.*member += h;
            minus.*member -= h;
            return (energy(plus, hbar) - energy(minus, hbar)) / (2.0 * h);
        };
        check(ds.x1, fd(&SemiclassicalState::p1));
        check(ds.x2, fd(&SemiclassicalState::p2));
        check(ds.p1, -fd(&SemiclassicalState::x1));
        check(ds.p2, -fd(&SemiclassicalState::x2));
        if (hbar.value() != 0.0) {
            check(ds.g1, fd(&SemiclassicalState::pi1) / hbar.value());
            check(ds.g2, fd(&SemiclassicalState::pi2) / hbar.value());
            check(ds.pi1, -fd(&SemiclassicalState::g1) / hbar.value());
            check(ds.pi2, -fd(&SemiclassicalState::g2) / hbar.value());
        }
    }
    return max_err;
}

/// Area of the convex hull of a 2-d point set (monotone chain + shoelace).
inline double convex_hull_area(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 3) return 0.0;
    std::sort(pts.begin(), pts.end());
    auto cross = [](const std::pair<double, double>& o, const std::pair<double, double>& a,
                    const std::pair<double, double>& b) {
        return (a.first - o.first) * (b.second - o.second) -
               (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<double, double>> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
        hull[k++] = *it;
    }
    hull.resize(k > 1 ? k - 1 : 0);
    double area2 = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        area2 += a.first * b.second - b.first * a.second;
    }
    return 0.5 * std::abs(area2);
}

/// For every crossing the wrapped detector accepts, re-integrate the
/// bracket at a fine step from its left node and locate the raw sign
/// change by linear interpolation.  This checks the Hermite refinement
/// against the locally exact flow without sharing its code path, and
/// stays meaningful on chaotic orbits where two full-length
/// integrations at different steps cannot agree.
template <typename Field, typename State>
class BracketOracle {
public:
    explicit BracketOracle(Field field, double fine_dt = 1e-5)
        : field_(std::move(field)), fine_dt_(fine_dt) {}

    void operator()(const StepRecord<State>& a, const StepRecord<State>& b) {
        const std::size_t before = detector_.points().size();
        detector_(a, b);
        if (detector_.points().size() == before) return;
        const double t_refined = detector_.points().back().t;

        State s = a.state;
        double prev_x1 = s.x1;
        double best = std::numeric_limits<double>::infinity();
        const long long fine_steps = std::llround((b.t - a.t) / fine_dt_);
        for (long long k = 1; k <= fine_steps; ++k) {
            s = rk4_step(field_, s, fine_dt_);
            const double t_prev = a.t + static_cast<double>(k - 1) * fine_dt_;
            if (s.x1 == 0.0) {
                best = std::min(best, std::abs(a.t + static_cast<double>(k) * fine_dt_ - t_refined));
            } else if (prev_x1 != 0.0 && (prev_x1 < 0.0) != (s.x1 < 0.0)) {
                const double t_star = t_prev + prev_x1 / (prev_x1 - s.x1) * fine_dt_;
                best = std::min(best, std::abs(t_star - t_refined));
            }
            prev_x1 = s.x1;
        }
        if (std::isinf(best))
            ++unmatched_;
        else
            max_mismatch_ = std::max(max_mismatch_, best);
    }

    const std::vector<SectionPoint>& points() const { return detector_.points(); }
    double max_mismatch() const { return max_mismatch_; }
    std::size_t unmatched() const { return unmatched_; }

private:
    Field field_;
    double fine_dt_;
    CrossingDetector<State> detector_;
    double max_mismatch_ = 0.0;
    std::size_t unmatched_ = 0;
};

/// Upward x1 = 0 crossing times from a raw fine-step integration: sign
/// changes located by linear interpolation inside each dt-wide bracket.
/// Independent of the dense-output refinement path it is used to check.
template <typename Field, typename State>
std::vector<double> brute_force_crossing_times(const Field& field, const State& s0, double t_total,
                                               double dt) {
    std::vector<double> times;
    State prev = s0;
    const long long steps = std::llround(t_total / dt);
    for (long long k = 1; k <= steps; ++k) {
        const State cur = rk4_step(field, prev, dt);
        const double t_prev = static_cast<double>(k - 1) * dt;
        const double fa = prev.x1;
        const double fb = cur.x1;
        if (fb == 0.0) {
            if (fa != 0.0 && cur.p1 > 0.0) times.push_back(static_cast<double>(k) * dt);
        } else if (fa != 0.0 && (fa < 0.0) != (fb < 0.0)) {
            const double frac = fa / (fa - fb);
            const double p1 = prev.p1 + frac * (cur.p1 - prev.p1);
            if (p1 > 0.0) times.push_back(t_prev + frac * dt);
        }
        prev = cur;
    }
    return times;
}

namespace detail {

// ---- criterion 1: preset classical energies -------------------------------

inline CriterionResult check_preset_energies() {
    constexpr std::array<double, 6> expected = {0.01555, 0.01077, 0.04543,
                                                0.10810, 0.13296, 0.15118};
    constexpr double tol = 5e-6;
    const auto presets = classical_presets();
    CriterionResult r{1, "preset classical energies", true, ""};
    double worst = 0.0;
    std::string energies;
    for (std::size_t i = 0; i < presets.size(); ++i) {
        const double e = classical_energy(initial_classical_state(presets[i]));
        const double dev = std::abs(e - expected[i]);
        worst = std::max(worst, dev);
        energies += (i ? ", " : "") + fmt(e);
        if (dev > tol) r.pass = false;
    }
    r.detail = "E = {" + energies + "}, max |E - ref| = " + fmt(worst) + " (tol 5e-6)";
    return r;
}

// ---- criterion 2: initial effective energy --------------------------------

inline CriterionResult check_initial_effective_energy() {
    constexpr double tol = 1e-15;
    CriterionResult r{2, "initial effective energy offset", true, ""};
    double worst = 0.0;
    for (const auto& preset : semiclassical_presets()) {
        const double e = classical_energy(initial_classical_state(preset));
        for (double h : default_hbar_values(e)) {
            ScenarioConfig cfg = preset;
            cfg.hbar = h;
            const double h_eff = effective_energy(initial_semiclassical_state(cfg), Hbar(h));
            worst = std::max(worst, std::abs((h_eff - e) - h));
        }
    }
    r.pass = worst <= tol;
    r.detail = "max |(H_eff - E) - hbar| = " + fmt(worst) + " (tol 1e-15)";
    return r;
}

// ---- criterion 3: energy conservation over the full horizon ---------------

inline CriterionResult check_energy_conservation() {
    constexpr double tol = 1e-6;
    const IntegrationPlan plan{0.02, 20000.0};
    CriterionResult r{3, "energy conservation over T=20000", true, ""};
    double worst_classical = 0.0;
    std::string worst_classical_label;
    for (const auto& preset : classical_presets()) {
        auto drift = make_drift_monitor<ClassicalState>(
            [](const ClassicalState& s) { return classical_energy(s); });
        integrate(ClassicalField{}, initial_classical_state(preset), plan, drift);
        if (drift.max_drift() > worst_classical) {
            worst_classical = drift.max_drift();
            worst_classical_label = preset.label;
        }
    }
    double worst_semiclassical = 0.0;
    for (const auto& preset : semiclassical_presets()) {
        const double e = classical_energy(initial_classical_state(preset));
        for (double h : default_hbar_values(e)) {
            ScenarioConfig cfg = preset;
            cfg.hbar = h;
            const Hbar hbar(h);
            auto drift = make_drift_monitor<SemiclassicalState>(
                [hbar](const SemiclassicalState& s) { return effective_energy(s, hbar); });
            integrate(SemiclassicalField{hbar}, initial_semiclassical_state(cfg), plan, drift);
            worst_semiclassical = std::max(worst_semiclassical, drift.max_drift());
        }
    }
    r.pass = worst_classical <= tol && worst_semiclassical <= tol;
    r.detail = "max relative drift at dt=0.02: classical " + fmt(worst_classical) + " (" +
               worst_classical_label + "), semiclassical " + fmt(worst_semiclassical) +
               " (tol 1e-6)";
    if (!r.pass) {
        // Step-refinement context so a red result distinguishes a
        // resolution limit from an integration defect.
        auto fine_classical = make_drift_monitor<ClassicalState>(
            [](const ClassicalState& s) { return classical_energy(s); });
        integrate(ClassicalField{}, ClassicalState{0.35, 0.35, 0.01, 0.01},
                  IntegrationPlan{0.01, 20000.0}, fine_classical);
        const auto sc = semiclassical_presets()[0];
        const Hbar hbar(sc.hbar);
        auto fine_semi = make_drift_monitor<SemiclassicalState>(
            [hbar](const SemiclassicalState& s) { return effective_energy(s, hbar); });
        integrate(SemiclassicalField{hbar}, initial_semiclassical_state(sc),
                  IntegrationPlan{2e-4, 2000.0}, fine_semi);
        r.detail += "; step refinement: classical {0.35} at dt=0.01 -> " +
                    fmt(fine_classical.max_drift()) + ", semiclassical " + sc.label +
                    " at dt=2e-4 over T=2000 -> " + fmt(fine_semi.max_drift()) +
                    " (width parameters range over ~3e-3..1e2, unresolvable at dt=0.02)";
    }
    return r;
}

// ---- criterion 4: vector field vs gradient of the effective energy --------

inline CriterionResult check_symplectic_gradient() {
    constexpr double tol = 1e-6;
    CriterionResult r{4, "vector field matches energy gradient", true, ""};
    double worst = 0.0;
    for (double h : {0.001, 0.01}) {
        const double err = symplectic_gradient_max_error(
            [](const SemiclassicalState& s, Hbar hb) { return semiclassical_vector_field(s, hb); },
            [](const SemiclassicalState& s, Hbar hb) { return effective_energy(s, hb); },
            Hbar(h), 1000, 20220427UL);
        worst = std::max(worst, err);
    }
    r.pass = worst <= tol;
    r.detail = "max scaled error over 1000 states x hbar in {0.001, 0.01} = " + fmt(worst) +
               " (tol 1e-6)";
    return r;
}

// ---- criterion 5: hbar -> 0 reduction --------------------------------------

inline CriterionResult check_hbar_zero_reduction() {
    constexpr double tol = 1e-10;
    const IntegrationPlan plan{0.02, 100.0};
    CriterionResult r{5, "hbar=0 run reproduces the classical trajectory", true, ""};
    double worst = 0.0;
    for (const auto& preset : classical_presets()) {
        TraceSampler<ClassicalState> classical_trace(1);
        integrate(ClassicalField{}, initial_classical_state(preset), plan, classical_trace);

        ScenarioConfig semi = preset;
        semi.mode = Mode::semiclassical;
        semi.hbar = 0.0;
        TraceSampler<SemiclassicalState> semi_trace(1);
        integrate(SemiclassicalField{Hbar(0.0)}, initial_semiclassical_state(semi), plan,
                  semi_trace);

        const auto& a = classical_trace.samples();
        const auto& b = semi_trace.samples();
        for (std::size_t i = 0; i < a.size(); ++i) {
            worst = std::max({worst, std::abs(a[i].state.x1 - b[i].state.x1),
                              std::abs(a[i].state.x2 - b[i].state.x2),
                              std::abs(a[i].state.p1 - b[i].state.p1),
                              std::abs(a[i].state.p2 - b[i].state.p2)});
        }
    }
    r.pass = worst <= tol;
    r.detail = "max componentwise |classical - semiclassical(hbar=0)| over T=100 = " + fmt(worst) +
               " (tol 1e-10)";
    return r;
}

// ---- criterion 6: equal-energy neighbor construction ----------------------

inline CriterionResult check_equal_energy_neighbor() {
    constexpr double tol = 1e-13;
    CriterionResult r{6, "equal-energy neighbor construction", true, ""};
    double worst = 0.0;
    for (const auto& preset : classical_presets()) {
        const ClassicalState s = initial_classical_state(preset);
        const auto pair = equal_energy_neighbor(s, preset.dx2);
        const double e = classical_energy(pair.primary);
        worst = std::max(worst, std::abs(classical_energy(pair.shadow) - e) / std::abs(e));
    }
    for (const auto& preset : semiclassical_presets()) {
        const SemiclassicalState s = initial_semiclassical_state(preset);
        const auto pair = equal_energy_neighbor(s, preset.dx2);
        const Hbar hbar(preset.hbar);
        const double e = effective_energy(pair.primary, hbar);
        worst = std::max(worst, std::abs(effective_energy(pair.shadow, hbar) - e) / std::abs(e));
    }
    r.pass = worst <= tol;
    r.detail = "max relative energy mismatch = " + fmt(worst) + " (tol 1e-13)";
    return r;
}

// ---- criterion 7: section residuals and crossing-time oracle --------------

inline CriterionResult check_section_residuals() {
    constexpr double residual_tol = 1e-9;
    constexpr double time_tol = 1e-6;
    CriterionResult r{7, "section residuals and crossing-time oracle", true, ""};

    // residuals and gate over full-length runs
    double worst_residual = 0.0;
    double min_gate = std::numeric_limits<double>::infinity();
    std::size_t total_points = 0;
    const IntegrationPlan full{0.02, 20000.0};
    for (const auto& preset : classical_presets()) {
        CrossingDetector<ClassicalState> detector;
        integrate(ClassicalField{}, initial_classical_state(preset), full, detector);
        worst_residual = std::max(worst_residual, detector.max_residual());
        if (!detector.points().empty()) min_gate = std::min(min_gate, detector.min_gate_p1());
        total_points += detector.points().size();
    }
    for (const auto& preset : semiclassical_presets()) {
        CrossingDetector<SemiclassicalState> detector;
        integrate(SemiclassicalField{Hbar(preset.hbar)}, initial_semiclassical_state(preset), full,
                  detector);
        worst_residual = std::max(worst_residual, detector.max_residual());
        if (!detector.points().empty()) min_gate = std::min(min_gate, detector.min_gate_p1());
        total_points += detector.points().size();
    }

    // Full fine-trajectory oracle on T=100 windows.  Restricted to the
    // presets below the E = 1/12 mixing threshold: on chaotic orbits two
    // convergent integrators at different steps separate as exp(lambda*t),
    // so full-length agreement measures shadowing, not crossing location.
    const IntegrationPlan window{0.02, 100.0};
    double worst_dt = 0.0;
    bool counts_match = true;
    auto compare = [&](const std::vector<SectionPoint>& pts, const std::vector<double>& oracle) {
        if (pts.size() != oracle.size()) {
            counts_match = false;
            return;
        }
        for (std::size_t i = 0; i < pts.size(); ++i)
            worst_dt = std::max(worst_dt, std::abs(pts[i].t - oracle[i]));
    };
    for (const auto& preset : classical_presets()) {
        const double e = classical_energy(initial_classical_state(preset));
        if (e >= 1.0 / 12.0) continue;
        CrossingDetector<ClassicalState> detector;
        integrate(ClassicalField{}, initial_classical_state(preset), window, detector);
        compare(detector.points(), brute_force_crossing_times(
                                       ClassicalField{}, initial_classical_state(preset), 100.0, 1e-5));
    }

    // Per-bracket fine oracle on every preset, chaotic ones included.
    double worst_local = 0.0;
    std::size_t unmatched = 0;
    for (const auto& preset : classical_presets()) {
        BracketOracle<ClassicalField, ClassicalState> oracle{ClassicalField{}};
        integrate(ClassicalField{}, initial_classical_state(preset), window, oracle);
        worst_local = std::max(worst_local, oracle.max_mismatch());
        unmatched += oracle.unmatched();
    }
    {
        const auto preset = semiclassical_presets()[2]; // x0 = 0.20 family
        const SemiclassicalField field{Hbar(preset.hbar)};
        BracketOracle<SemiclassicalField, SemiclassicalState> oracle{field};
        integrate(field, initial_semiclassical_state(preset), window, oracle);
        worst_local = std::max(worst_local, oracle.max_mismatch());
        unmatched += oracle.unmatched();
    }

    r.pass = worst_residual <= residual_tol && min_gate > 0.0 && counts_match &&
             worst_dt <= time_tol && worst_local <= time_tol && unmatched == 0;
    r.detail = std::to_string(total_points) + " points, max |x1| = " + fmt(worst_residual) +
               " (tol 1e-9), min gate p1 = " + fmt(min_gate) +
               "; full-trajectory oracle (E<1/12): counts " +
               (counts_match ? "match" : "MISMATCH") + ", max |dt| = " + fmt(worst_dt) +
               "; bracket oracle (all presets): max |dt| = " + fmt(worst_local) +
               " (tol 1e-6 each)";
    return r;
}

// ---- criterion 8: fourth-order convergence ---------------------------------

inline CriterionResult check_rk4_order() {
    CriterionResult r{8, "fourth-order convergence of the stepper", true, ""};
    const ClassicalState s0{0.20, 0.20, 0.01, 0.01};
    auto endpoint = [&](double dt) {
        return integrate(ClassicalField{}, s0, IntegrationPlan{dt, 10.0});
    };
    const ClassicalState ref = endpoint(1e-5);
    auto error_norm = [&](const ClassicalState& s) {
        return std::sqrt((s.x1 - ref.x1) * (s.x1 - ref.x1) + (s.x2 - ref.x2) * (s.x2 - ref.x2) +
                         (s.p1 - ref.p1) * (s.p1 - ref.p1) + (s.p2 - ref.p2) * (s.p2 - ref.p2));
    };
    const double coarse = error_norm(endpoint(0.02));
    const double fine = error_norm(endpoint(0.01));
    const double factor = coarse / fine;
    r.pass = factor >= 14.0 && factor <= 18.0;
    r.detail = "T=10 endpoint error " + fmt(coarse) + " -> " + fmt(fine) + ", reduction factor " +
               fmt(factor) + " (required [14, 18])";
    return r;
}

// ---- criterion 9: regular vs chaotic separation-rate ordering --------------

inline CriterionResult check_regular_chaotic_ordering() {
    CriterionResult r{9, "separation rate orders regular vs chaotic presets", true, ""};
    const IntegrationPlan plan{0.02, 20000.0};
    auto lambda_final = [&](double x0, double p0) {
        const ClassicalState s0{x0, x0, p0, p0};
        const auto pair = equal_energy_neighbor(s0, 1e-4);
        return lyapunov_series(ClassicalField{}, pair, plan, 50).lambda_final;
    };
    const double chaotic = lambda_final(0.35, 0.01);
    const double regular = lambda_final(0.12, 0.001);
    r.pass = chaotic > regular;
    r.detail = "lambda_final{0.35, 0.01} = " + fmt(chaotic) + " vs lambda_final{0.12, 0.001} = " +
               fmt(regular);
    return r;
}

// ---- criterion 10: fluctuation terms push the regular preset chaotic -------

inline CriterionResult check_quantum_chaos_trend() {
    CriterionResult r{10, "fluctuations raise separation rate and section coverage", true, ""};
    const IntegrationPlan plan{0.02, 20000.0};
    const double e = classical_energy(ClassicalState{0.20, 0.20, 0.01, 0.01});

    struct Member {
        double lambda = 0.0;
        double hull_area = 0.0;
    };
    auto run_member = [&](double h) {
        const Hbar hbar(h);
        const SemiclassicalField field{hbar};
        const SemiclassicalState s0{0.20, 0.20, 0.01, 0.01, 0.5, 0.5, 0.0, 0.0};
        CrossingDetector<SemiclassicalState> detector;
        integrate(field, s0, plan, detector);
        std::vector<std::pair<double, double>> pts;
        pts.reserve(detector.points().size());
        for (const auto& p : detector.points()) pts.emplace_back(p.x2, p.p2);
        Member m;
        m.hull_area = convex_hull_area(pts);
        m.lambda = lyapunov_series(field, equal_energy_neighbor(s0, 1e-4), plan, 50).lambda_final;
        return m;
    };

    const Member base = run_member(0.0);
    const Member mid = run_member(e / 30.0);
    const Member top = run_member(e / 10.0);
    r.pass = mid.lambda > base.lambda && top.lambda > base.lambda &&
             top.hull_area > base.hull_area;
    r.detail = "lambda_final: hbar=0 " + fmt(base.lambda) + ", E/30 " + fmt(mid.lambda) +
               ", E/10 " + fmt(top.lambda) + "; hull area: hbar=0 " + fmt(base.hull_area) +
               ", E/10 " + fmt(top.hull_area);
    return r;
}

// ---- criterion 11: bit-identical rerun CSVs ---------------------------------

inline CriterionResult check_determinism(const std::filesystem::path& work_dir) {
    CriterionResult r{11, "reruns produce bit-identical CSVs", true, ""};
    namespace fs = std::filesystem;
    bool identical = true;
    auto rerun_and_compare = [&](ScenarioConfig cfg) {
        cfg.t_total = 2000.0;
        ScenarioConfig first = cfg, second = cfg;
        first.out_dir = work_dir / "determinism_a";
        second.out_dir = work_dir / "determinism_b";
        run_scenario(first);
        run_scenario(second);
        for (const char* suffix : {"_section.csv", "_lyapunov.csv"}) {
            const auto a = read_file_bytes(first.out_dir / (cfg.label + suffix));
            const auto b = read_file_bytes(second.out_dir / (cfg.label + suffix));
            if (a.empty() || a != b) identical = false;
        }
    };
    const auto presets = preset_scenarios();
    rerun_and_compare(presets[0]); // classical {0.12, 0.001}
    rerun_and_compare(presets[8]); // semiclassical x0=0.20 family at hbar=E/10
    r.pass = identical;
    r.detail = identical ? "section and lambda CSVs byte-identical across reruns"
                         : "rerun CSVs differ";
    return r;
}

} // namespace detail

/// Execute every acceptance criterion at its stated tolerance.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    std::filesystem::create_directories(options.work_dir);
    std::vector<CriterionResult> results;
    results.push_back(detail::check_preset_energies());
    results.push_back(detail::check_initial_effective_energy());
    results.push_back(detail::check_energy_conservation());
    results.push_back(detail::check_symplectic_gradient());
    results.push_back(detail::check_hbar_zero_reduction());
    results.push_back(detail::check_equal_energy_neighbor());
    results.push_back(detail::check_section_residuals());
    results.push_back(detail::check_rk4_order());
    results.push_back(detail::check_regular_chaotic_ordering());
    results.push_back(detail::check_quantum_chaos_trend());
    results.push_back(detail::check_determinism(options.work_dir));
    return results;
}

/// Render the per-criterion pass/fail report; returns true when every
/// criterion passed.
inline bool print_acceptance_report(const std::vector<CriterionResult>& results,
                                    std::ostream& out) {
    bool all = true;
    for (const auto& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name << " - "
            << r.detail << "\n";
        all = all && r.pass;
    }
    out << (all ? "acceptance: all criteria passed\n" : "acceptance: FAILURES present\n");
    return all;
}

} // namespace henonlab
