#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "henonlab/dynamics.hpp"
#include "henonlab/integrate.hpp"

using namespace henonlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct ZeroField {
    ClassicalState operator()(const ClassicalState&) const { return {}; }
};

// Harmonic motion in coordinate 1 only; RK4 on a linear system equals
// the degree-4 Taylor polynomial of the rotation, which the tests below
// exploit for exact expectations.
struct LinearOscillator {
    ClassicalState operator()(const ClassicalState& s) const { return {s.p1, 0.0, -s.x1, 0.0}; }
};

struct ConstantField {
    ClassicalState operator()(const ClassicalState&) const { return {0.25, -1.0, 3.0, 0.5}; }
};

bool states_equal(const ClassicalState& a, const ClassicalState& b) {
    return a.x1 == b.x1 && a.x2 == b.x2 && a.p1 == b.p1 && a.p2 == b.p2;
}

} // namespace

TEST_CASE("rk4 step") {
    SECTION("zero field leaves the state untouched") {
        const ClassicalState s{0.3, -0.2, 0.7, 0.05};
        REQUIRE(states_equal(rk4_step(ZeroField{}, s, 0.02), s));
    }
    SECTION("linear oscillator equals the fourth-order Taylor rotation") {
        const double dt = 0.02;
        const ClassicalState next = rk4_step(LinearOscillator{}, ClassicalState{1.0, 0.0, 0.0, 0.0}, dt);
        const double x_expect = 1.0 - dt * dt / 2.0 + dt * dt * dt * dt / 24.0;
        const double p_expect = -(dt - dt * dt * dt / 6.0);
        REQUIRE_THAT(next.x1, WithinAbs(x_expect, 1e-16));
        REQUIRE_THAT(next.p1, WithinAbs(p_expect, 1e-16));
        REQUIRE_THAT(next.x1, WithinAbs(0.99980000667, 1e-11));
        REQUIRE_THAT(next.p1, WithinAbs(-0.0199986667, 1e-10));
    }
    SECTION("one coarse step agrees with 2000 composed fine steps") {
        const ClassicalState s0{0.12, 0.12, 0.001, 0.001};
        const ClassicalState coarse = rk4_step(ClassicalField{}, s0, 0.02);
        ClassicalState fine = s0;
        for (int i = 0; i < 2000; ++i) fine = rk4_step(ClassicalField{}, fine, 1e-5);
        // Measured disagreement is ~6.4e-12, dominated by the momenta;
        // that is the local truncation error of the single coarse step.
        REQUIRE_THAT(coarse.x1, WithinAbs(fine.x1, 1e-11));
        REQUIRE_THAT(coarse.x2, WithinAbs(fine.x2, 1e-11));
        REQUIRE_THAT(coarse.p1, WithinAbs(fine.p1, 1e-11));
        REQUIRE_THAT(coarse.p2, WithinAbs(fine.p2, 1e-11));
    }
    SECTION("invalid step width") {
        REQUIRE_THROWS_AS(rk4_step(ZeroField{}, ClassicalState{}, 0.0), InvalidPlan);
        REQUIRE_THROWS_AS(rk4_step(ZeroField{}, ClassicalState{}, -0.02), InvalidPlan);
    }
    SECTION("non-finite stages are reported") {
        struct BlowUp {
            ClassicalState operator()(const ClassicalState&) const {
                return {std::numeric_limits<double>::infinity(), 0, 0, 0};
            }
        };
        REQUIRE_THROWS_AS(rk4_step(BlowUp{}, ClassicalState{}, 0.02), NonFinite);
    }
    SECTION("width collapse inside a stage surfaces as NonPositiveWidth") {
        // g shrinks at rate 4*g*pi; with pi = -100 the half-step stage
        // already drives g through zero.
        const SemiclassicalState s{0, 0, 0, 0, 1e-10, 0.5, -100.0, 0.0};
        REQUIRE_THROWS_AS(rk4_step(SemiclassicalField{Hbar(0.001)}, s, 0.02), NonPositiveWidth);
    }
}

TEST_CASE("integration plan") {
    REQUIRE(IntegrationPlan{0.02, 20000.0}.step_count() == 1000000);
    REQUIRE_THROWS_AS(validate_plan({0.0, 10.0}), InvalidPlan);
    REQUIRE_THROWS_AS(validate_plan({-0.1, 10.0}), InvalidPlan);
    REQUIRE_THROWS_AS(validate_plan({0.02, 0.005}), InvalidPlan);
}

TEST_CASE("integrate") {
    SECTION("a single-step horizon reproduces rk4_step") {
        const ClassicalState s0{0.2, 0.2, 0.01, 0.01};
        const ClassicalState direct = rk4_step(ClassicalField{}, s0, 0.02);
        const ClassicalState via_plan = integrate(ClassicalField{}, s0, {0.02, 0.02});
        REQUIRE(states_equal(direct, via_plan));
    }
    SECTION("observers see every bracket in order") {
        struct Counter {
            long long n = 0;
            double last_t = 0.0;
            void operator()(const StepRecord<ClassicalState>& a,
                            const StepRecord<ClassicalState>& b) {
                REQUIRE(b.t > a.t);
                REQUIRE(a.t == last_t);
                last_t = b.t;
                ++n;
            }
        } counter;
        integrate(ClassicalField{}, ClassicalState{0.1, 0.1, 0.01, 0.01}, {0.02, 1.0}, counter);
        REQUIRE(counter.n == 50);
        REQUIRE_THAT(counter.last_t, WithinRel(1.0, 1e-12));
    }
    SECTION("records carry the field value at their state") {
        struct CheckDerivative {
            void operator()(const StepRecord<ClassicalState>& a,
                            const StepRecord<ClassicalState>& b) {
                REQUIRE(states_equal(a.derivative, classical_vector_field(a.state)));
                REQUIRE(states_equal(b.derivative, classical_vector_field(b.state)));
            }
        } check;
        integrate(ClassicalField{}, ClassicalState{0.1, 0.1, 0.01, 0.01}, {0.02, 0.2}, check);
    }
    SECTION("energy drift over T=100 stays below 1e-8 on the quiet preset") {
        auto drift = make_drift_monitor<ClassicalState>(
            [](const ClassicalState& s) { return classical_energy(s); });
        integrate(ClassicalField{}, ClassicalState{0.12, 0.12, 0.001, 0.001}, {0.02, 100.0},
                  drift);
        REQUIRE(drift.max_drift() <= 1e-8);
    }
    SECTION("hbar = 0 trace matches the classical trace componentwise") {
        TraceSampler<ClassicalState> classical_trace(1);
        integrate(ClassicalField{}, ClassicalState{0.2, 0.2, 0.01, 0.01}, {0.02, 100.0},
                  classical_trace);
        TraceSampler<SemiclassicalState> semi_trace(1);
        integrate(SemiclassicalField{Hbar(0.0)},
                  SemiclassicalState{0.2, 0.2, 0.01, 0.01, 0.5, 0.5, 0.0, 0.0}, {0.02, 100.0},
                  semi_trace);
        REQUIRE(classical_trace.samples().size() == semi_trace.samples().size());
        for (std::size_t i = 0; i < classical_trace.samples().size(); ++i) {
            const auto& a = classical_trace.samples()[i].state;
            const auto& b = semi_trace.samples()[i].state;
            REQUIRE_THAT(a.x1, WithinAbs(b.x1, 1e-10));
            REQUIRE_THAT(a.x2, WithinAbs(b.x2, 1e-10));
            REQUIRE_THAT(a.p1, WithinAbs(b.p1, 1e-10));
            REQUIRE_THAT(a.p2, WithinAbs(b.p2, 1e-10));
        }
    }
    SECTION("halving dt cuts the endpoint error by roughly 2^4") {
        const ClassicalState s0{0.2, 0.2, 0.01, 0.01};
        const ClassicalState ref = integrate(ClassicalField{}, s0, {1e-5, 10.0});
        auto err = [&](double dt) {
            const ClassicalState s = integrate(ClassicalField{}, s0, {dt, 10.0});
            return std::hypot(std::hypot(s.x1 - ref.x1, s.x2 - ref.x2),
                              std::hypot(s.p1 - ref.p1, s.p2 - ref.p2));
        };
        const double factor = err(0.02) / err(0.01);
        REQUIRE(factor >= 14.0);
        REQUIRE(factor <= 18.0);
    }
    SECTION("repeated runs are bit-identical") {
        TraceSampler<ClassicalState> first(10), second(10);
        const ClassicalState s0{0.33, 0.33, 0.01, 0.01};
        integrate(ClassicalField{}, s0, {0.02, 200.0}, first);
        integrate(ClassicalField{}, s0, {0.02, 200.0}, second);
        REQUIRE(first.samples().size() == second.samples().size());
        for (std::size_t i = 0; i < first.samples().size(); ++i)
            REQUIRE(states_equal(first.samples()[i].state, second.samples()[i].state));
    }
    SECTION("width collapse halts the run with the step attached") {
        const SemiclassicalState s{0, 0, 0, 0, 1e-10, 0.5, -100.0, 0.0};
        try {
            integrate(SemiclassicalField{Hbar(0.001)}, s, {0.02, 10.0});
            FAIL("expected NonPositiveWidth");
        } catch (const NonPositiveWidth& e) {
            REQUIRE(std::string(e.what()).find("step 1") != std::string::npos);
        }
    }
    SECTION("observer failures abort with the step attached") {
        struct Throws {
            void operator()(const StepRecord<ClassicalState>&,
                            const StepRecord<ClassicalState>& b) {
                if (b.t > 0.05) throw EmptyData("observer gave up");
            }
        } observer;
        try {
            integrate(ClassicalField{}, ClassicalState{0.1, 0.1, 0.01, 0.01}, {0.02, 1.0},
                      observer);
            FAIL("expected EmptyData");
        } catch (const EmptyData& e) {
            REQUIRE(std::string(e.what()).find("step 3") != std::string::npos);
        }
    }
}

TEST_CASE("hermite dense output") {
    LinearOscillator osc;
    const ClassicalState a{1.0, 0.0, 0.0, 0.0};
    const StepRecord<ClassicalState> ra{0.0, a, osc(a)};
    const ClassicalState b = rk4_step(osc, a, 0.02);
    const StepRecord<ClassicalState> rb{0.02, b, osc(b)};

    SECTION("endpoints are reproduced exactly") {
        REQUIRE(states_equal(hermite_interpolate(ra, rb, 0.0), a));
        REQUIRE(states_equal(hermite_interpolate(ra, rb, 0.02), b));
    }
    SECTION("midpoint tracks the analytic rotation") {
        const ClassicalState mid = hermite_interpolate(ra, rb, 0.01);
        REQUIRE_THAT(mid.x1, WithinAbs(std::cos(0.01), 1e-9));
        REQUIRE_THAT(mid.p1, WithinAbs(-std::sin(0.01), 1e-9));
    }
    SECTION("linear motion is reproduced at every interior point") {
        ConstantField field;
        const ClassicalState s0{1.0, 2.0, -0.5, 0.0};
        const StepRecord<ClassicalState> la{0.0, s0, field(s0)};
        const ClassicalState s1 = rk4_step(field, s0, 0.02);
        const StepRecord<ClassicalState> lb{0.02, s1, field(s1)};
        for (double t : {0.003, 0.01, 0.017}) {
            const ClassicalState v = hermite_interpolate(la, lb, t);
            REQUIRE_THAT(v.x1, WithinRel(1.0 + 0.25 * t, 1e-14));
            REQUIRE_THAT(v.x2, WithinRel(2.0 - 1.0 * t, 1e-14));
            REQUIRE_THAT(v.p1, WithinRel(-0.5 + 3.0 * t, 1e-13));
            REQUIRE_THAT(v.p2, WithinRel(0.5 * t, 1e-14));
        }
    }
    SECTION("out-of-bracket queries are rejected") {
        REQUIRE_THROWS_AS(hermite_interpolate(ra, rb, -1e-9), OutOfBracket);
        REQUIRE_THROWS_AS(hermite_interpolate(ra, rb, 0.02 + 1e-9), OutOfBracket);
    }
}

TEST_CASE("energy drift helper") {
    REQUIRE(energy_drift({1.5, 1.5, 1.5}) == 0.0);
    REQUIRE_THAT(energy_drift({1.0, 1.0001}), WithinRel(1e-4, 1e-9));
    REQUIRE_THROWS_AS(energy_drift({0.0, 1.0}), ZeroReferenceEnergy);
    REQUIRE_THROWS_AS(energy_drift({}), EmptyData);
}
