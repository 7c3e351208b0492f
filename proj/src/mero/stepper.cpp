#include "phase_atlas/mero/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phase_atlas/error.hpp"

namespace phase_atlas {

namespace {

constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// The order-5 weights equal the last row of kA (first same as last).
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0,         -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
// Dense output weights.
constexpr std::array<double, 7> kD{-12715105075.0 / 11282082432, 0.0, 87487479700.0 / 32700410799,
                                   -10690763975.0 / 1880347072,  701980252875.0 / 199316789632,
                                   -1453857185.0 / 822651844,    69997945.0 / 29380423};

void eval_checked(const Rhs& f, std::span<const double> y, double t, std::span<double> out) {
    f(y, t, out);
    for (double v : out)
        if (!std::isfinite(v))
            throw IntegrationError("non-finite right-hand side at t = " + std::to_string(t));
}

} // namespace

std::vector<double> DenseSegment::at(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    std::vector<double> out(coeffs[0].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = coeffs[0][i] +
                 s * (coeffs[1][i] + s1 * (coeffs[2][i] + s * (coeffs[3][i] + s1 * coeffs[4][i])));
    return out;
}

RungeKuttaStep step_embedded(const Rhs& f, std::span<const double> y, double t, double h,
                         std::span<const double> first_slope) {
    const std::size_t n = y.size();
    std::array<std::vector<double>, 7> k;
    std::vector<double> tmp(n);
    for (std::size_t s = 0; s < 7; ++s) {
        k[s].resize(n);
        if (s == 0 && first_slope.size() == n) {
            std::copy(first_slope.begin(), first_slope.end(), k[0].begin());
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0;
            for (std::size_t j = 0; j < s; ++j)
                acc += kA[s][j] * k[j][i];
            tmp[i] = y[i] + h * acc;
        }
        eval_checked(f, tmp, t + kC[s] * h, k[s]);
    }
    // Stage 7 was evaluated at the order-5 solution itself.
    RungeKuttaStep r;
    r.state = tmp;
    r.error.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double e = 0;
        for (std::size_t s = 0; s < 7; ++s)
            e += kE[s] * k[s][i];
        r.error[i] = h * e;
    }
    r.last_slope = k[6];

    r.dense.t0 = t;
    r.dense.h = h;
    auto& c = r.dense.coeffs;
    for (auto& v : c)
        v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dy = r.state[i] - y[i];
        c[0][i] = y[i];
        c[1][i] = dy;
        c[2][i] = h * k[0][i] - dy;
        c[3][i] = dy - h * k[6][i] - c[2][i];
        double d = 0;
        for (std::size_t s = 0; s < 7; ++s)
            d += kD[s] * k[s][i];
        c[4][i] = h * d;
    }
    return r;
}

std::vector<double> integrate_adaptive(const Rhs& f, std::vector<double> y, double t0, double t1, double rel_tol,
                                       double abs_tol) {
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    double t = t0;
    double h = std::min(1e-3, std::abs(t1 - t0));
    while (dir * (t1 - t) > 0) {
        const double remaining = std::abs(t1 - t);
        const double habs = std::min(h, remaining);
        double err = std::numeric_limits<double>::infinity();
        RungeKuttaStep r;
        try {
            r = step_embedded(f, y, t, dir * habs);
            double acc = 0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(r.state[i]));
                acc += (r.error[i] / sc) * (r.error[i] / sc);
            }
            err = std::sqrt(acc / static_cast<double>(y.size()));
        } catch (const IntegrationError&) {
        }
        if (err <= 1) {
            t = habs == remaining ? t1 : t + dir * habs;
            y = std::move(r.state);
        }
        const double factor = err == 0 ? 5.0 : std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.2;
        h = habs * std::clamp(factor, 0.2, 5.0);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegrationError("step size underflow at t = " + std::to_string(t));
    }
    return y;
}

std::vector<double> integrate_fixed(const Rhs& f, std::vector<double> y, double t0, double t1, std::size_t n) {
    if (n == 0)
        throw Error("integrate_fixed needs at least one step");
    const double h = (t1 - t0) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        y = step_embedded(f, y, t0 + static_cast<double>(i) * h, h).state;
    return y;
}

double richardson_order(const Rhs& f, const std::vector<double>& y0, double t0, double t1, std::size_t n) {
    const auto a = integrate_fixed(f, y0, t0, t1, n);
    const auto b = integrate_fixed(f, y0, t0, t1, 2 * n);
    const auto c = integrate_fixed(f, y0, t0, t1, 4 * n);
    double d1 = 0, d2 = 0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        d1 = std::max(d1, std::abs(a[i] - b[i]));
        d2 = std::max(d2, std::abs(b[i] - c[i]));
    }
    if (d2 == 0)
        throw Error("step-halving differences vanished; choose fewer steps");
    return std::log2(d1 / d2);
}

} // namespace phase_atlas
