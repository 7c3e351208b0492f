#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace phase_atlas {

/// dy/dt = f(y, t), written into `dy`.
using Rhs = std::function<void(std::span<const double> y, double t, std::span<double> dy)>;

/// Quartic interpolant over one step, valid for t in [t0, t0 + h].
struct DenseSegment {
    double t0 = 0;
    double h = 0;
    std::array<std::vector<double>, 5> coeffs;

    double t1() const { return t0 + h; }
    std::vector<double> at(double t) const;
};

struct RungeKuttaStep {
    std::vector<double> state;
    /// Difference between the order-5 and order-4 solutions.
    std::vector<double> error;
    /// f at the new state, reusable as the first stage of the next step.
    std::vector<double> last_slope;
    DenseSegment dense;
};

/// One Dormand-Prince 5(4) step from (y, t) with signed step h. `first_slope`
/// may carry f(y, t) from the previous step. Throws IntegrationError when
/// any stage evaluates to a non-finite value.
RungeKuttaStep step_embedded(const Rhs& f, std::span<const double> y, double t, double h,
                         std::span<const double> first_slope = {});

/// Adaptive Dormand-Prince integration of a generic field; throws
/// IntegrationError on step-size underflow.
std::vector<double> integrate_adaptive(const Rhs& f, std::vector<double> y, double t0, double t1, double rel_tol,
                                       double abs_tol);

/// n equal order-5 steps from t0 to t1.
std::vector<double> integrate_fixed(const Rhs& f, std::vector<double> y, double t0, double t1, std::size_t n);

/// log2 of the ratio of successive differences of fixed-step solutions with
/// n, 2n and 4n steps (sup norm).
double richardson_order(const Rhs& f, const std::vector<double>& y0, double t0, double t1, std::size_t n);

} // namespace phase_atlas
