#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "henonlab/dynamics.hpp"
#include "henonlab/errors.hpp"
#include "henonlab/integrate.hpp"
#include "henonlab/state.hpp"

namespace henonlab {

/// Two initial conditions on the same (effective) energy shell, a
/// configuration-space offset d0 apart.
template <typename State>
struct NeighborPair {
    State primary{};
    State shadow{};
    double d0 = 0.0;
};

namespace detail {

/// Solve the equal-energy condition for the shadow's x1 given the
/// primary's (x1, x2) and the shifted x2'.  With momenta copied, the
/// shadow at x1' = sqrt(C / (2 x2' + 1)) has exactly the primary's
/// potential + kinetic energy, where
///   C = (2 x2 + 1) x1^2 + (x2^2 - x2'^2) - (2/3)(x2^3 - x2'^3).
inline double equal_energy_x1(double x1, double x2, double x2_shifted) {
    const double denom = 2.0 * x2_shifted + 1.0;
    if (denom <= 0.0)
        throw InvalidBranch("equal-energy neighbor needs 2*x2' + 1 > 0, got " +
                            std::to_string(denom));
    const double c = (2.0 * x2 + 1.0) * x1 * x1 + (x2 * x2 - x2_shifted * x2_shifted) -
                     (2.0 / 3.0) * (x2 * x2 * x2 - x2_shifted * x2_shifted * x2_shifted);
    if (c < 0.0)
        throw NegativeDiscriminant("no equal-energy neighbor on this branch (C=" +
                                   std::to_string(c) + ")");
    return std::sqrt(c / denom); // positive root; all presets start at x1 > 0
}

template <typename State>
NeighborPair<State> build_neighbor(const State& s, double dx2) {
    validate_state(s);
    if (!std::isfinite(dx2)) throw NonFinite("neighbor offset must be finite");
    State shadow = s;
    shadow.x2 = s.x2 + dx2;
    shadow.x1 = equal_energy_x1(s.x1, s.x2, shadow.x2);
    const double d0 = configuration_distance(s, shadow);
    if (d0 == 0.0) throw DegenerateOffset("neighbor coincides with the primary state");
    return {s, shadow, d0};
}

} // namespace detail

/// Shadow initial condition with x2 shifted by dx2, momenta copied, and
/// x1 adjusted so both orbits share the same energy.
inline NeighborPair<ClassicalState> equal_energy_neighbor(const ClassicalState& s, double dx2) {
    return detail::build_neighbor(s, dx2);
}

/// Semiclassical variant: widths and width momenta are copied unchanged,
/// so with g1 = g2 the fluctuation bracket is identical for both members
/// and the effective energies match by the same construction.
inline NeighborPair<SemiclassicalState> equal_energy_neighbor(const SemiclassicalState& s,
                                                              double dx2) {
    return detail::build_neighbor(s, dx2);
}

struct LyapunovSample {
    double t = 0.0;
    double d = 0.0;      ///< configuration-space separation at t
    double lambda = 0.0; ///< (ln d(t) - ln d(0)) / t
};

/// Finite-time separation-rate series for one neighbor pair.
struct LyapunovSeries {
    double d0 = 0.0;
    std::vector<LyapunovSample> samples;
    double lambda_final = 0.0;
};

/// Integrate both members of the pair in lockstep with the same stepper
/// and record the separation every `sample_stride` steps (and at the
/// final step).  No renormalization is performed: the series tracks two
/// literal orbits, so d(t) may saturate at the attractor scale.
template <typename Field, typename State>
LyapunovSeries lyapunov_series(const Field& field, const NeighborPair<State>& pair,
                               const IntegrationPlan& plan, long long sample_stride = 50) {
    validate_plan(plan);
    if (sample_stride < 1) throw InvalidPlan("sample stride must be >= 1");
    validate_state(pair.primary);
    validate_state(pair.shadow);

    LyapunovSeries series;
    series.d0 = configuration_distance(pair.primary, pair.shadow);
    if (series.d0 == 0.0) throw SeparationUnderflow("initial separation is zero");
    const double log_d0 = std::log(series.d0);

    State a = pair.primary;
    State b = pair.shadow;
    const long long steps = plan.step_count();
    for (long long k = 1; k <= steps; ++k) {
        try {
            a = rk4_step(field, a, plan.dt);
            b = rk4_step(field, b, plan.dt);
            validate_state(a);
            validate_state(b);
            if (k % sample_stride == 0 || k == steps) {
                const double t = static_cast<double>(k) * plan.dt;
                const double d = configuration_distance(a, b);
                if (d == 0.0)
                    throw SeparationUnderflow("orbit separation vanished");
                series.samples.push_back({t, d, (std::log(d) - log_d0) / t});
            }
        } catch (DomainError& e) {
            e.add_context("step " + std::to_string(k) + " (t=" +
                          std::to_string(static_cast<double>(k) * plan.dt) + ")");
            throw;
        }
    }
    series.lambda_final = series.samples.back().lambda;
    return series;
}

} // namespace henonlab
