#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "henonlab/errors.hpp"
#include "henonlab/state.hpp"

namespace henonlab {

/// One node of an integration: state and the cached vector-field value
/// at that state.  Consecutive records bracket a step and carry enough
/// information for dense output.
template <typename State>
struct StepRecord {
    double t = 0.0;
    State state{};
    State derivative{};
};

/// Fixed-step plan.  The step count is round(t_total/dt) and node times
/// are computed as k*dt, never by accumulated addition.
struct IntegrationPlan {
    double dt = 0.02;
    double t_total = 20000.0;

    long long step_count() const { return std::llround(t_total / dt); }
};

inline void validate_plan(const IntegrationPlan& plan) {
    if (!std::isfinite(plan.dt) || plan.dt <= 0.0)
        throw InvalidPlan("dt must be positive, got " + std::to_string(plan.dt));
    if (!std::isfinite(plan.t_total) || plan.t_total < plan.dt)
        throw InvalidPlan("t_total must be at least dt, got " + std::to_string(plan.t_total));
}

namespace detail {

template <typename Field, typename State>
State rk4_step_from(const Field& field, const State& s, const State& k1, double dt) {
    const State k2 = field(s + (0.5 * dt) * k1);
    const State k3 = field(s + (0.5 * dt) * k2);
    const State k4 = field(s + dt * k3);
    if (!is_finite(k1) || !is_finite(k2) || !is_finite(k3) || !is_finite(k4))
        throw NonFinite("vector-field stage produced a non-finite value");
    const State next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!is_finite(next)) throw NonFinite("step produced a non-finite state");
    return next;
}

} // namespace detail

/// Classical fourth-order Runge-Kutta update over one step of width dt.
template <typename Field, typename State>
State rk4_step(const Field& field, const State& s, double dt) {
    if (!(dt > 0.0)) throw InvalidPlan("rk4_step requires dt > 0");
    return detail::rk4_step_from(field, s, field(s), dt);
}

/// Advance s0 through round(t_total/dt) steps.  Each observer is called
/// once per step with the bracketing StepRecords; a domain error thrown
/// by a stage, the produced state, or an observer aborts the run with
/// the step index and time attached.  Returns the final state.
template <typename Field, typename State, typename... Observers>
State integrate(const Field& field, const State& s0, const IntegrationPlan& plan,
                Observers&... observers) {
    validate_plan(plan);
    validate_state(s0);
    const long long steps = plan.step_count();
    StepRecord<State> prev{0.0, s0, field(s0)};
    for (long long k = 1; k <= steps; ++k) {
        try {
            const State s = detail::rk4_step_from(field, prev.state, prev.derivative, plan.dt);
            validate_state(s);
            const StepRecord<State> cur{static_cast<double>(k) * plan.dt, s, field(s)};
            (observers(prev, cur), ...);
            prev = cur;
        } catch (DomainError& e) {
            e.add_context("step " + std::to_string(k) + " (t=" +
                          std::to_string(static_cast<double>(k) * plan.dt) + ")");
            throw;
        }
    }
    return prev.state;
}

/// Cubic Hermite interpolant through both endpoint (state, derivative)
/// pairs; exact at the endpoints and O(dt^4) in between, matching the
/// integrator's global order.
template <typename State>
State hermite_interpolate(const StepRecord<State>& a, const StepRecord<State>& b, double t) {
    if (t < a.t || t > b.t)
        throw OutOfBracket("t=" + std::to_string(t) + " outside [" + std::to_string(a.t) + ", " +
                           std::to_string(b.t) + "]");
    const double h = b.t - a.t;
    if (h == 0.0) return a.state;
    const double u = (t - a.t) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = 3.0 * u2 - 2.0 * u3;
    const double h11 = u3 - u2;
    return h00 * a.state + (h * h10) * a.derivative + h01 * b.state + (h * h11) * b.derivative;
}

/// Largest relative excursion of a sampled conserved quantity from its
/// initial value: max_t |E(t) - E(0)| / |E(0)|.
inline double energy_drift(const std::vector<double>& energies) {
    if (energies.empty()) throw EmptyData("energy_drift needs a non-empty sequence");
    const double e0 = energies.front();
    if (e0 == 0.0) throw ZeroReferenceEnergy("reference energy is zero");
    double max_drift = 0.0;
    for (double e : energies) {
        const double drift = std::abs(e - e0) / std::abs(e0);
        if (drift > max_drift) max_drift = drift;
    }
    return max_drift;
}

/// Observer that tracks the running relative drift of an energy
/// functional along the trajectory.
template <typename State, typename EnergyFn>
class EnergyDriftMonitor {
public:
    explicit EnergyDriftMonitor(EnergyFn energy) : energy_(std::move(energy)) {}

    void operator()(const StepRecord<State>& a, const StepRecord<State>& b) {
        if (!reference_) {
            const double e0 = energy_(a.state);
            if (e0 == 0.0) throw ZeroReferenceEnergy("reference energy is zero");
            reference_ = e0;
        }
        const double drift = std::abs(energy_(b.state) - *reference_) / std::abs(*reference_);
        if (drift > max_drift_) max_drift_ = drift;
    }

    double max_drift() const { return max_drift_; }
    double reference_energy() const { return reference_ ? *reference_ : 0.0; }

private:
    EnergyFn energy_;
    std::optional<double> reference_;
    double max_drift_ = 0.0;
};

template <typename State, typename EnergyFn>
EnergyDriftMonitor<State, EnergyFn> make_drift_monitor(EnergyFn energy) {
    return EnergyDriftMonitor<State, EnergyFn>(std::move(energy));
}

/// Observer that records (t, state) every `stride` steps, starting with
/// the initial state.
template <typename State>
class TraceSampler {
public:
    struct Sample {
        double t;
        State state;
    };

    explicit TraceSampler(long long stride = 1) : stride_(stride) {
        if (stride_ < 1) throw InvalidPlan("sampler stride must be >= 1");
    }

    void operator()(const StepRecord<State>& a, const StepRecord<State>& b) {
        if (samples_.empty()) samples_.push_back({a.t, a.state});
        ++step_;
        if (step_ % stride_ == 0) samples_.push_back({b.t, b.state});
    }

    const std::vector<Sample>& samples() const { return samples_; }

private:
    long long stride_;
    long long step_ = 0;
    std::vector<Sample> samples_;
};

} // namespace henonlab
