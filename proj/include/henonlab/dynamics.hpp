#pragma once

#include <cmath>
#include <stdexcept>

#include "henonlab/errors.hpp"
#include "henonlab/state.hpp"

namespace henonlab {

namespace detail {

// Shared by the classical and semiclassical vector fields so the two
// code paths stay bit-identical on the (x, p) block.
inline double accel1(double x1, double x2) { return -x1 - 2.0 * x1 * x2; }
inline double accel2(double x1, double x2) { return -x2 - x1 * x1 + x2 * x2; }

} // namespace detail

/// V(x1, x2) = (x1^2 + x2^2)/2 + x1^2 x2 - x2^3/3.
/// Three-fold symmetric well with escape energy 1/6.
inline double potential_value(double x1, double x2) {
    return 0.5 * (x1 * x1 + x2 * x2) + x1 * x1 * x2 - x2 * x2 * x2 / 3.0;
}

/// H = (p1^2 + p2^2)/2 + V(x1, x2).
inline double classical_energy(const ClassicalState& s) {
    return 0.5 * (s.p1 * s.p1 + s.p2 * s.p2) + potential_value(s.x1, s.x2);
}

/// Hamiltonian flow: (p1, p2, -x1 - 2 x1 x2, -x2 - x1^2 + x2^2).
inline ClassicalState classical_vector_field(const ClassicalState& s) {
    return {s.p1, s.p2, detail::accel1(s.x1, s.x2), detail::accel2(s.x1, s.x2)};
}

namespace detail {

inline void require_positive_widths(const SemiclassicalState& s) {
    if (!(s.g1 >= kWidthFloor) || !(s.g2 >= kWidthFloor))
        throw NonPositiveWidth("width parameter not positive: g1=" + std::to_string(s.g1) +
                               ", g2=" + std::to_string(s.g2));
}

} // namespace detail

/// Expectation value of the Hamiltonian in the Gaussian trial state:
/// the classical energy of (x, p) plus the hbar-weighted fluctuation
/// bracket  (1/(4g_i) + g_i + 4 g_i pi_i^2)/2 summed over i, plus the
/// width-coordinate coupling (g1 - g2) x2.
inline double effective_energy(const SemiclassicalState& s, Hbar hbar) {
    detail::require_positive_widths(s);
    const double classical = 0.5 * (s.p1 * s.p1 + s.p2 * s.p2) + potential_value(s.x1, s.x2);
    const double bracket =
        0.5 * ((0.25 / s.g1 + s.g1 + 4.0 * s.g1 * s.pi1 * s.pi1) +
               (0.25 / s.g2 + s.g2 + 4.0 * s.g2 * s.pi2 * s.pi2)) +
        (s.g1 - s.g2) * s.x2;
    return classical + hbar.value() * bracket;
}

/// Variational equations of motion on the extended phase space.
///
/// The (x, p) block reduces to the classical field when hbar = 0 (only
/// the (g1 - g2) back-reaction on p2 carries hbar); the width pairs
/// evolve as dg/dt = 4 g pi, dpi/dt = 1/(8 g^2) - 2 pi^2 -/+ x2 - 1/2.
inline SemiclassicalState semiclassical_vector_field(const SemiclassicalState& s, Hbar hbar) {
    detail::require_positive_widths(s);
    double dp2 = detail::accel2(s.x1, s.x2);
    if (hbar.value() != 0.0) dp2 -= hbar.value() * (s.g1 - s.g2);
    return {s.p1,
            s.p2,
            detail::accel1(s.x1, s.x2),
            dp2,
            4.0 * s.g1 * s.pi1,
            4.0 * s.g2 * s.pi2,
            0.125 / (s.g1 * s.g1) - 2.0 * s.pi1 * s.pi1 - s.x2 - 0.5,
            0.125 / (s.g2 * s.g2) - 2.0 * s.pi2 * s.pi2 + s.x2 - 0.5};
}

/// Second moments of the Gaussian trial state.
struct JKMoments {
    double dq2_1 = 0.0; ///< position variance, particle 1
    double dq2_2 = 0.0; ///< position variance, particle 2
    double dp2_1 = 0.0; ///< momentum variance, particle 1
    double dp2_2 = 0.0; ///< momentum variance, particle 2
    double ur_1 = 0.0;  ///< uncertainty product dQ1*dP1
    double ur_2 = 0.0;  ///< uncertainty product dQ2*dP2
};

/// dQ_i^2 = hbar g_i,  dP_i^2 = 4 hbar g_i pi_i^2 + hbar/(4 g_i),
/// dQ_i dP_i = (hbar/2) sqrt(1 + (4 g_i pi_i)^2) >= hbar/2, with
/// equality exactly at pi_i = 0.
inline JKMoments jk_moments(const SemiclassicalState& s, Hbar hbar) {
    detail::require_positive_widths(s);
    if (hbar.value() <= 0.0)
        throw std::invalid_argument("jk_moments requires hbar > 0");
    const double h = hbar.value();
    JKMoments m;
    m.dq2_1 = h * s.g1;
    m.dq2_2 = h * s.g2;
    m.dp2_1 = 4.0 * h * s.g1 * s.pi1 * s.pi1 + 0.25 * h / s.g1;
    m.dp2_2 = 4.0 * h * s.g2 * s.pi2 * s.pi2 + 0.25 * h / s.g2;
    const double a1 = 4.0 * s.g1 * s.pi1;
    const double a2 = 4.0 * s.g2 * s.pi2;
    m.ur_1 = 0.5 * h * std::sqrt(1.0 + a1 * a1);
    m.ur_2 = 0.5 * h * std::sqrt(1.0 + a2 * a2);
    return m;
}

/// Callable form of the classical flow, for the generic integrator.
struct ClassicalField {
    ClassicalState operator()(const ClassicalState& s) const { return classical_vector_field(s); }
};

/// Callable form of the variational flow at fixed hbar.
struct SemiclassicalField {
    Hbar hbar;
    SemiclassicalState operator()(const SemiclassicalState& s) const {
        return semiclassical_vector_field(s, hbar);
    }
};

} // namespace henonlab
