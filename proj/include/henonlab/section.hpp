#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "henonlab/errors.hpp"
#include "henonlab/integrate.hpp"

namespace henonlab {

/// One surface-of-section crossing: the orbit pierces the plane x1 = 0
/// with p1 > 0 at time t, recorded in the (x2, p2) section coordinates.
struct SectionPoint {
    double t = 0.0;
    double x2 = 0.0;
    double p2 = 0.0;
};

namespace detail {

/// Locate the root of x1 on the dense-output interpolant by bisection.
/// The bracket endpoints must have opposite x1 signs.  Bisects until the
/// interval is at the floating-point floor, then requires the residual
/// to meet the section tolerance.
template <typename State>
double refine_crossing(const StepRecord<State>& a, const StepRecord<State>& b,
                       double residual_tol, int max_iterations) {
    double lo = a.t, hi = b.t;
    double f_lo = a.state.x1;
    const double width_tol = 1e-12 + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi);
    int iterations = 0;
    while (hi - lo > width_tol) {
        if (++iterations > max_iterations)
            throw RefinementFailure("crossing bisection exceeded " +
                                    std::to_string(max_iterations) + " iterations");
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at ulp resolution
        const double f_mid = hermite_interpolate(a, b, mid).x1;
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    const double t_star = 0.5 * (lo + hi);
    if (std::abs(hermite_interpolate(a, b, t_star).x1) > residual_tol)
        throw RefinementFailure("refined crossing residual above tolerance at t=" +
                                std::to_string(t_star));
    return t_star;
}

} // namespace detail

/// Observer that extracts Poincare-section points on the plane x1 = 0,
/// keeping only upward (p1 > 0) crossings.  A node that lands exactly on
/// the plane is treated as the crossing of its preceding bracket; a sign
/// change whose refined crossing has p1 <= 0 is discarded.
template <typename State>
class CrossingDetector {
public:
    static constexpr double kResidualTolerance = 1e-9;
    static constexpr int kMaxBisectionIterations = 200;

    void operator()(const StepRecord<State>& a, const StepRecord<State>& b) {
        const double fa = a.state.x1;
        const double fb = b.state.x1;

        if (fb == 0.0) {
            if (fa != 0.0 && b.state.p1 > 0.0) accept(b.t, b.state);
            return;
        }
        if (fa == 0.0) return;            // counted with the previous bracket
        if ((fa < 0.0) == (fb < 0.0)) return;

        const double t_star =
            detail::refine_crossing(a, b, kResidualTolerance, kMaxBisectionIterations);
        const State at_crossing = hermite_interpolate(a, b, t_star);
        if (at_crossing.p1 > 0.0) accept(t_star, at_crossing);
    }

    const std::vector<SectionPoint>& points() const { return points_; }

    /// Largest |x1| among accepted points (refinement quality).
    double max_residual() const { return max_residual_; }

    /// Smallest p1 among accepted points; positive by construction.
    double min_gate_p1() const { return min_gate_p1_; }

private:
    void accept(double t, const State& s) {
        points_.push_back({t, s.x2, s.p2});
        max_residual_ = std::max(max_residual_, std::abs(s.x1));
        min_gate_p1_ = std::min(min_gate_p1_, s.p1);
    }

    std::vector<SectionPoint> points_;
    double max_residual_ = 0.0;
    double min_gate_p1_ = std::numeric_limits<double>::infinity();
};

} // namespace henonlab
