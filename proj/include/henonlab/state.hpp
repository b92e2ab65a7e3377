#pragma once

#include <cmath>
#include <string>

#include "henonlab/errors.hpp"

namespace henonlab {

/// Widths below this are treated as a collapsed wave packet: the
/// 1/(4G) and 1/(8G^2) terms must fail loudly instead of feeding
/// Inf/NaN into a long integration.
inline constexpr double kWidthFloor = 1e-12;

/// Point in the four-dimensional classical phase space.
struct ClassicalState {
    double x1 = 0.0;
    double x2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Point in the extended variational phase space: classical pair plus,
/// per degree of freedom, a width parameter g (position variance is
/// hbar*g) and its conjugate width momentum pi.
struct SemiclassicalState {
    double x1 = 0.0;
    double x2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double g1 = 0.5;
    double g2 = 0.5;
    double pi1 = 0.0;
    double pi2 = 0.0;
};

/// Dimensionless effective Planck constant.  hbar = 0 recovers the
/// classical sector exactly.
class Hbar {
public:
    Hbar() = default;

    explicit Hbar(double value) : value_(value) {
        if (!std::isfinite(value) || value < 0.0)
            throw NonFinite("hbar must be finite and non-negative, got " + std::to_string(value));
    }

    double value() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

inline ClassicalState operator+(const ClassicalState& a, const ClassicalState& b) {
    return {a.x1 + b.x1, a.x2 + b.x2, a.p1 + b.p1, a.p2 + b.p2};
}

inline ClassicalState operator*(double c, const ClassicalState& s) {
    return {c * s.x1, c * s.x2, c * s.p1, c * s.p2};
}

inline SemiclassicalState operator+(const SemiclassicalState& a, const SemiclassicalState& b) {
    return {a.x1 + b.x1, a.x2 + b.x2, a.p1 + b.p1, a.p2 + b.p2,
            a.g1 + b.g1, a.g2 + b.g2, a.pi1 + b.pi1, a.pi2 + b.pi2};
}

inline SemiclassicalState operator*(double c, const SemiclassicalState& s) {
    return {c * s.x1, c * s.x2, c * s.p1, c * s.p2,
            c * s.g1, c * s.g2, c * s.pi1, c * s.pi2};
}

inline bool is_finite(const ClassicalState& s) {
    return std::isfinite(s.x1) && std::isfinite(s.x2) && std::isfinite(s.p1) && std::isfinite(s.p2);
}

inline bool is_finite(const SemiclassicalState& s) {
    return std::isfinite(s.x1) && std::isfinite(s.x2) && std::isfinite(s.p1) &&
           std::isfinite(s.p2) && std::isfinite(s.g1) && std::isfinite(s.g2) &&
           std::isfinite(s.pi1) && std::isfinite(s.pi2);
}

inline void validate_state(const ClassicalState& s) {
    if (!is_finite(s)) throw NonFinite("classical state has non-finite component");
}

inline void validate_state(const SemiclassicalState& s) {
    if (!is_finite(s)) throw NonFinite("semiclassical state has non-finite component");
    if (s.g1 < kWidthFloor || s.g2 < kWidthFloor)
        throw NonPositiveWidth("width parameter not positive: g1=" + std::to_string(s.g1) +
                               ", g2=" + std::to_string(s.g2));
}

/// Distance between the two configuration-space projections; momenta
/// (and widths) deliberately do not contribute.
template <typename State>
double configuration_distance(const State& a, const State& b) {
    return std::hypot(a.x1 - b.x1, a.x2 - b.x2);
}

} // namespace henonlab
