#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "henonlab/dynamics.hpp"
#include "henonlab/lyapunov.hpp"
#include "henonlab/scenario.hpp"

using namespace henonlab;
using Catch::Matchers::WithinAbs;

namespace {

struct ZeroField {
    ClassicalState operator()(const ClassicalState&) const { return {}; }
};

// Both coordinates harmonic, no coupling: separations stay bounded by
// the initial phase-space offset.
struct DecoupledHarmonic {
    ClassicalState operator()(const ClassicalState& s) const {
        return {s.p1, s.p2, -s.x1, -s.x2};
    }
};

} // namespace

TEST_CASE("equal-energy neighbor") {
    SECTION("shadow shares the energy to substitution accuracy") {
        const ClassicalState s{0.12, 0.12, 0.001, 0.001};
        const auto pair = equal_energy_neighbor(s, 1e-4);
        REQUIRE(pair.shadow.x2 == s.x2 + 1e-4);
        REQUIRE(pair.shadow.p1 == s.p1);
        REQUIRE(pair.shadow.p2 == s.p2);
        REQUIRE(pair.shadow.x1 > 0.0); // positive root
        REQUIRE_THAT(classical_energy(pair.shadow), WithinAbs(classical_energy(s), 1e-15));
        REQUIRE(pair.d0 == std::hypot(pair.shadow.x1 - s.x1, pair.shadow.x2 - s.x2));
    }
    SECTION("every preset satisfies the relative equality bound") {
        for (const auto& preset : preset_scenarios()) {
            CAPTURE(preset.label);
            if (preset.mode == Mode::classical) {
                const ClassicalState s = initial_classical_state(preset);
                const auto pair = equal_energy_neighbor(s, preset.dx2);
                const double e = classical_energy(s);
                REQUIRE(std::abs(classical_energy(pair.shadow) - e) / std::abs(e) <= 1e-13);
            } else {
                const SemiclassicalState s = initial_semiclassical_state(preset);
                const auto pair = equal_energy_neighbor(s, preset.dx2);
                for (double h : {0.0, preset.hbar}) {
                    const double e = effective_energy(s, Hbar(h));
                    REQUIRE(std::abs(effective_energy(pair.shadow, Hbar(h)) - e) / std::abs(e) <=
                            1e-13);
                }
            }
        }
    }
    SECTION("zero offset reproduces the same configuration") {
        REQUIRE_THROWS_AS(equal_energy_neighbor(ClassicalState{0.12, 0.12, 0.001, 0.001}, 0.0),
                          DegenerateOffset);
    }
    SECTION("branch and discriminant guards") {
        REQUIRE_THROWS_AS(equal_energy_neighbor(ClassicalState{0.1, -0.5, 0.0, 0.0}, 0.0),
                          InvalidBranch);
        REQUIRE_THROWS_AS(equal_energy_neighbor(ClassicalState{0.0, 0.0, 0.01, 0.01}, 0.1),
                          NegativeDiscriminant);
    }
}

TEST_CASE("separation series") {
    SECTION("a frozen field keeps the separation constant") {
        const NeighborPair<ClassicalState> pair{{0.0, 0.0, 0.0, 0.0}, {1e-4, 0.0, 0.0, 0.0}, 1e-4};
        const auto series = lyapunov_series(ZeroField{}, pair, {0.02, 10.0}, 50);
        REQUIRE(series.d0 == 1e-4);
        for (const auto& sample : series.samples) {
            REQUIRE(sample.d == 1e-4);
            REQUIRE(sample.lambda == 0.0);
        }
    }
    SECTION("stored rates satisfy their defining relation exactly") {
        const auto pair = equal_energy_neighbor(ClassicalState{0.2, 0.2, 0.01, 0.01}, 1e-4);
        const auto series = lyapunov_series(ClassicalField{}, pair, {0.02, 200.0}, 50);
        REQUIRE_FALSE(series.samples.empty());
        const double log_d0 = std::log(series.d0);
        for (const auto& sample : series.samples) {
            REQUIRE(sample.t > 0.0);
            REQUIRE(sample.lambda == (std::log(sample.d) - log_d0) / sample.t);
        }
        REQUIRE(series.lambda_final == series.samples.back().lambda);
    }
    SECTION("sampling stride and the forced final sample") {
        const NeighborPair<ClassicalState> pair{{0.0, 0.0, 0.0, 0.0}, {1e-4, 0.0, 0.0, 0.0}, 1e-4};
        const auto series = lyapunov_series(ZeroField{}, pair, {0.02, 0.2}, 7);
        REQUIRE(series.samples.size() == 2);
        REQUIRE_THAT(series.samples[0].t, WithinAbs(0.14, 1e-15));
        REQUIRE_THAT(series.samples[1].t, WithinAbs(0.20, 1e-15));
    }
    SECTION("bounded harmonic separations decay as 1/t against the phase-space cap") {
        const ClassicalState primary{0.12, 0.12, 0.001, 0.001};
        const auto pair = equal_energy_neighbor(primary, 1e-4);
        const auto series = lyapunov_series(DecoupledHarmonic{}, pair, {0.02, 2000.0}, 50);
        // For the linear flow the configuration separation never exceeds
        // the initial phase-space separation of the difference orbit.
        const double dx1 = pair.shadow.x1 - primary.x1;
        const double dx2 = pair.shadow.x2 - primary.x2;
        const double cap = std::sqrt(dx1 * dx1 + dx2 * dx2); // momenta offsets are zero
        for (const auto& sample : series.samples)
            REQUIRE(sample.lambda <= (std::log(cap) - std::log(series.d0)) / sample.t + 1e-12);
        REQUIRE(std::abs(series.lambda_final) < 1e-3);
    }
    SECTION("coincident members are rejected") {
        const ClassicalState s{0.12, 0.12, 0.001, 0.001};
        const NeighborPair<ClassicalState> degenerate{s, s, 0.0};
        REQUIRE_THROWS_AS(lyapunov_series(ClassicalField{}, degenerate, {0.02, 1.0}, 50),
                          SeparationUnderflow);
    }
    SECTION("member failures carry the failing step") {
        const SemiclassicalState bad{0, 0, 0, 0, 1e-10, 0.5, -100.0, 0.0};
        const NeighborPair<SemiclassicalState> pair{bad, [&] {
                                                        SemiclassicalState shifted = bad;
                                                        shifted.x1 += 1e-4;
                                                        return shifted;
                                                    }(),
                                                    1e-4};
        try {
            lyapunov_series(SemiclassicalField{Hbar(0.001)}, pair, {0.02, 1.0}, 1);
            FAIL("expected NonPositiveWidth");
        } catch (const NonPositiveWidth& e) {
            REQUIRE(std::string(e.what()).find("step 1") != std::string::npos);
        }
    }
    SECTION("invalid stride") {
        const NeighborPair<ClassicalState> pair{{0, 0, 0, 0}, {1e-4, 0, 0, 0}, 1e-4};
        REQUIRE_THROWS_AS(lyapunov_series(ZeroField{}, pair, {0.02, 1.0}, 0), InvalidPlan);
    }
}
