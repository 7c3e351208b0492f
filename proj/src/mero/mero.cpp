#include "phase_atlas/mero/mero.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/linear_algebra.hpp"

namespace phase_atlas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Offset used to sample a pole from either side.
constexpr double kPoleOffset = 1e-4;

double sup_norm(const State& y) {
    double m = 0;
    for (double v : y)
        m = std::max(m, std::abs(v));
    return m;
}

bool finite(const State& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

State to_state(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Root of g in [a, b] (either order) given a sign change.
double bisect(const std::function<double(double)>& g, double a, double b) {
    double ga = g(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b)
            break;
        const double gm = g(m);
        if (gm == 0)
            return m;
        if ((gm < 0) == (ga < 0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// value(t_star + s*tau) * s*tau extrapolated linearly to tau = 0.
double one_sided(const std::function<double(double)>& value, double t_star, double side, double h) {
    const double c1 = value(t_star + side * h) * side * h;
    const double c2 = value(t_star + 2 * side * h) * 2 * side * h;
    return 2 * c1 - c2;
}

// The one-sided products stay put for a pole and scale with tau otherwise.
bool looks_polar(const std::function<double(double)>& value, double t_star, double side, double h) {
    const double c1 = value(t_star + side * h) * side * h;
    const double c2 = value(t_star + 2 * side * h) * 2 * side * h;
    return std::isfinite(c1) && std::isfinite(c2) && c1 != 0 && std::abs(c2 - c1) <= 0.1 * std::abs(c1);
}

const DenseSegment* find_segment(const Trajectory& traj, double t) {
    const auto& segs = traj.segments;
    if (segs.empty())
        return nullptr;
    const bool forward = segs.front().h > 0;
    auto it = std::partition_point(segs.begin(), segs.end(), [&](const DenseSegment& s) {
        return forward ? s.t1() < t : s.t1() > t;
    });
    if (it == segs.end())
        return nullptr;
    const double lo = std::min(it->t0, it->t1());
    const double hi = std::max(it->t0, it->t1());
    if (t < lo || t > hi)
        return nullptr;
    return &*it;
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0))
        throw Error("tolerances must be positive");
    if (!(hysteresis > 0 && hysteresis < 1))
        throw Error("hysteresis must lie in (0, 1)");
    if (!(switch_radius > 0) || !(hard_limit > switch_radius))
        throw Error("need 0 < switch_radius < hard_limit");
    if (!(min_step > 0) || !(max_step >= min_step) || !(initial_step > 0))
        throw Error("need 0 < min_step <= max_step and a positive initial step");
}

Sample Trajectory::at(double t) const {
    const DenseSegment* seg = find_segment(*this, t);
    if (!seg)
        throw Error("t = " + fmt(t) + " is outside the dense output");
    const std::size_t chart = segment_charts[static_cast<std::size_t>(seg - segments.data())];
    return {t, chart, to_state(seg->at(t))};
}

Trajectory integrate_in_chart(const PhaseSpace& space, std::size_t chart, const State& ic, double t0, double t1,
                              const Params& params, const IntegratorConfig& cfg) {
    cfg.validate();
    if (chart >= space.size())
        throw Error("chart index out of range");
    if (!finite(ic) || !finite(params) || !std::isfinite(t0) || !std::isfinite(t1))
        throw Error("initial condition, parameters and time span must be finite");

    Trajectory tr;
    tr.params = params;
    State y = ic;
    double t = t0;
    tr.samples.push_back({t, chart, y});
    if (t1 == t0)
        return tr;
    const double dir = t1 > t0 ? 1.0 : -1.0;

    const Rhs f = [&](std::span<const double> s, double tt, std::span<double> out) {
        const State v = space.rhs(chart, {s[0], s[1], s[2]}, tt, params);
        std::copy(v.begin(), v.end(), out.begin());
    };
    auto slope_at = [&] {
        std::vector<double> s(3);
        f(y, t, s);
        for (double v : s)
            if (!std::isfinite(v))
                throw IntegrationError("non-finite right-hand side at t = " + fmt(t));
        return s;
    };
    std::vector<double> slope = slope_at();

    double h = std::min(cfg.initial_step, std::abs(t1 - t0));
    std::size_t steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > cfg.max_steps)
            throw IntegrationError("step budget exhausted at t = " + fmt(t));
        const double remaining = std::abs(t1 - t);
        const double habs = std::min({h, cfg.max_step, remaining});
        const bool last = habs == remaining;

        RungeKuttaStep res;
        double err = kInf;
        try {
            res = step_embedded(f, y, t, dir * habs, slope);
            double acc = 0;
            for (std::size_t i = 0; i < 3; ++i) {
                const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(res.state[i]));
                acc += (res.error[i] / sc) * (res.error[i] / sc);
            }
            err = std::sqrt(acc / 3);
            if (!std::isfinite(err))
                err = kInf;
        } catch (const IntegrationError&) {
            err = kInf;
        }
        if (!(err <= 1)) {
            ++tr.rejected_steps;
            h = habs * (std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2);
            if (h < cfg.min_step)
                throw IntegrationError("step size underflow at t = " + fmt(t) + " in chart " + space.name(chart));
            continue;
        }

        const double tnew = last ? t1 : t + dir * habs;
        const State ynew = to_state(res.state);

        // Poles of the U0 image: a U0 denominator changes sign inside the step.
        std::vector<double> roots;
        for (std::size_t k = 0; k < 3; ++k) {
            const double d0 = space.u0_denominator(chart, k, y, t, params);
            const double d1 = space.u0_denominator(chart, k, ynew, tnew, params);
            if (!((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)))
                continue;
            const auto g = [&](double s) {
                const State p = cfg.dense_output ? to_state(res.dense.at(s)) : y;
                return space.u0_denominator(chart, k, p, s, params);
            };
            roots.push_back(cfg.dense_output ? bisect(g, t, tnew) : t + (tnew - t) * d0 / (d0 - d1));
        }
        std::sort(roots.begin(), roots.end(), [&](double a, double b) { return dir * a < dir * b; });
        double previous = t;
        for (double r : roots) {
            if (dir * (r - previous) <= 1e-12 * std::max(1.0, std::abs(r)) || dir * (tnew - r) <= 0)
                continue;
            tr.pole_events.push_back({r, chart, std::nullopt});
            const State at_pole = cfg.dense_output ? to_state(res.dense.at(r)) : ynew;
            tr.samples.push_back({r, chart, at_pole});
            previous = r;
        }

        if (cfg.dense_output) {
            tr.segments.push_back(res.dense);
            tr.segment_charts.push_back(chart);
        }
        y = ynew;
        t = tnew;
        slope = res.last_slope;
        tr.samples.push_back({t, chart, y});

        const double cur = sup_norm(y);
        if (cur > cfg.switch_radius) {
            std::optional<std::pair<std::size_t, State>> best;
            double best_norm = kInf;
            for (std::size_t j = 0; j < space.size(); ++j) {
                if (j == chart)
                    continue;
                const auto img = space.transform(chart, j, y, t, params);
                if (img && sup_norm(*img) < best_norm) {
                    best_norm = sup_norm(*img);
                    best.emplace(j, *img);
                }
            }
            if (best && best_norm < cfg.hysteresis * cur) {
                tr.switches.push_back({t, chart, best->first, y, best->second});
                chart = best->first;
                y = best->second;
                tr.samples.back() = {t, chart, y};
                slope = slope_at();
            } else if (cur > cfg.hard_limit) {
                std::ostringstream os;
                os.precision(17);
                os << "no chart reduces the sup norm " << cur << " of the state in " << space.name(chart)
                   << " at t = " << t;
                throw AtlasIncompleteError(os.str());
            }
        }
        h = habs * (err > 0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0);
    }

    if (cfg.dense_output)
        for (auto& e : tr.pole_events) {
            try {
                e.estimate = estimate_pole(space, tr, e);
            } catch (const Error&) {
                e.estimate.reset();
            }
        }
    return tr;
}

Trajectory integrate_meromorphic(const PhaseSpace& space, const State& ic, double t0, double t1,
                                 const Params& params, const IntegratorConfig& cfg) {
    return integrate_in_chart(space, 0, ic, t0, t1, params, cfg);
}

SimplePole estimate_simple_pole(const std::function<double(double)>& value,
                                const std::function<double(double)>& denominator, double lo, double hi) {
    const double dlo = denominator(lo);
    const double dhi = denominator(hi);
    if (!((dlo < 0 && dhi > 0) || (dlo > 0 && dhi < 0)))
        throw Error("no sign change of the denominator is bracketed");
    SimplePole p;
    p.t_star = bisect(denominator, lo, hi);
    p.left = one_sided(value, p.t_star, -1, kPoleOffset);
    p.right = one_sided(value, p.t_star, 1, kPoleOffset);
    p.residue = 0.5 * (p.left + p.right);
    return p;
}

PoleEstimate estimate_pole(const PhaseSpace& space, const Trajectory& traj, const PoleEvent& event) {
    const DenseSegment* seg = find_segment(traj, event.t_star);
    if (!seg)
        throw Error("no dense output around the pole at t = " + fmt(event.t_star));
    const std::size_t chart = traj.segment_charts[static_cast<std::size_t>(seg - traj.segments.data())];
    const double a = seg->t0;
    const double b = seg->t1();

    const double span_lo = std::min(traj.samples.front().t, traj.samples.back().t);
    const double span_hi = std::max(traj.samples.front().t, traj.samples.back().t);

    PoleEstimate est;
    bool bracketed = false;
    for (std::size_t k = 0; k < 3; ++k) {
        auto den = [&](double s) { return space.u0_denominator(chart, k, to_state(seg->at(s)), s, traj.params); };
        const double da = den(a);
        const double db = den(b);
        if (!((da < 0 && db > 0) || (da > 0 && db < 0)))
            continue;
        if (!bracketed) {
            est.t_star = bisect(den, a, b);
            bracketed = true;
        }
    }
    if (!bracketed)
        throw Error("no sign change bracketed near t = " + fmt(event.t_star));
    if (est.t_star - 2 * kPoleOffset < span_lo || est.t_star + 2 * kPoleOffset > span_hi)
        throw Error("pole at t = " + fmt(est.t_star) + " is too close to the end of the span");

    for (std::size_t k = 0; k < 3; ++k) {
        auto value = [&](double s) {
            const Sample p = traj.at(s);
            return space.to_U0(p.chart, p.coords, s, traj.params)[k];
        };
        est.diverging[k] = looks_polar(value, est.t_star, -1, kPoleOffset) &&
                           looks_polar(value, est.t_star, 1, kPoleOffset);
        if (!est.diverging[k])
            continue;
        est.left[k] = one_sided(value, est.t_star, -1, kPoleOffset);
        est.right[k] = one_sided(value, est.t_star, 1, kPoleOffset);
        est.residue[k] = 0.5 * (est.left[k] + est.right[k]);
    }
    return est;
}

std::vector<std::array<Rational, 3>> laurent_balances(const VectorField& f) {
    if (f.dimension() != 3)
        throw Error("Laurent balances are computed for three-dimensional fields");
    const auto& coords = f.coords();
    // L[i][j]: coefficient of x_i x_j in the rhs of x_i (doubled for i == j counts once).
    std::array<std::array<Rational, 3>, 3> L{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!f.rhs()[i].is_polynomial())
            throw Error("Laurent balances need a polynomial field");
        for (const auto& term : f.rhs()[i].numerator().terms()) {
            std::uint32_t deg = 0;
            bool other = false;
            for (const auto& [v, e] : term.monomial.factors()) {
                if (std::find(coords.begin(), coords.end(), v) != coords.end())
                    deg += e;
                else
                    other = true;
            }
            if (deg > 2)
                throw Error("Laurent balances need a field of degree two");
            if (deg < 2)
                continue;
            if (other)
                throw Error("quadratic coefficients must be numbers");
            if (term.monomial.exponent(coords[i]) == 0)
                throw Error("quadratic part of d" + (*f.context())[coords[i]].name +
                            "/dt is not divisible by that coordinate");
            for (std::size_t j = 0; j < 3; ++j) {
                const auto e = term.monomial.exponent(coords[j]) - (j == i ? 1 : 0);
                if (e == 1)
                    L[i][j] += term.coeff;
            }
        }
    }
    // Balance: -c_i = c_i L_i(c), so c_i = 0 or L_i(c) = -1.
    std::vector<std::array<Rational, 3>> out;
    for (unsigned mask = 1; mask < 8; ++mask) {
        std::vector<std::size_t> S;
        for (std::size_t i = 0; i < 3; ++i)
            if (mask & (1u << i))
                S.push_back(i);
        RationalMatrix m;
        RationalVector rhs;
        for (std::size_t i : S) {
            std::vector<Rational> row;
            for (std::size_t j : S)
                row.push_back(L[i][j]);
            m.push_back(row);
            rhs.push_back(-1);
        }
        if (rank(m, S.size()) < S.size())
            continue;
        const auto sol = solve(m, rhs, S.size());
        if (!sol)
            continue;
        std::array<Rational, 3> c{0, 0, 0};
        bool nonzero = true;
        for (std::size_t k = 0; k < S.size(); ++k) {
            c[S[k]] = (*sol)[k];
            nonzero = nonzero && (*sol)[k] != 0;
        }
        if (nonzero)
            out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::array<Rational, 3>> matching_balance(const State& residue,
                                                        const std::vector<std::array<Rational, 3>>& balances,
                                                        double rel) {
    for (const auto& c : balances) {
        double scale = 0, diff = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            scale = std::max(scale, std::abs(c[k].get_d()));
            diff = std::max(diff, std::abs(residue[k] - c[k].get_d()));
        }
        if (diff <= rel * scale)
            return c;
    }
    return std::nullopt;
}

double switch_roundtrip_error(const PhaseSpace& space, const Trajectory& traj) {
    double worst = 0;
    for (const auto& s : traj.switches) {
        const auto back = space.transform(s.to, s.from, s.after, s.t, traj.params);
        if (!back)
            return kInf;
        for (std::size_t k = 0; k < 3; ++k)
            worst = std::max(worst, std::abs((*back)[k] - s.before[k]) / std::max(1.0, std::abs(s.before[k])));
    }
    return worst;
}

double endpoint_distance(const PhaseSpace& space, const Trajectory& a, const Trajectory& b) {
    const Sample& ea = a.end();
    const Sample& eb = b.end();
    const auto img = space.transform(eb.chart, ea.chart, eb.coords, eb.t, b.params);
    if (!img)
        throw Error("endpoints are not comparable in chart " + space.name(ea.chart));
    double d = 0;
    for (std::size_t k = 0; k < 3; ++k)
        d = std::max(d, std::abs((*img)[k] - ea.coords[k]) / std::max(1.0, std::abs(ea.coords[k])));
    return d;
}

double backlund_commutation_test(const PhaseSpace& space, const RationalMap& s, const State& ic,
                                 const Params& params, double t0, double t1, const IntegratorConfig& cfg) {
    const auto& ctx = *s.context();
    const CompiledTriple state_map(s.forward(), s.source(), ctx);
    std::vector<std::string> slots;
    for (VarIndex v : s.source())
        slots.push_back(ctx[v].name);
    for (const char* n : {"t", "a1", "a2", "a3"})
        slots.emplace_back(n);
    Params shifted = params;
    {
        const std::array<double, 7> in{ic[0], ic[1], ic[2], t0, params[0], params[1], params[2]};
        for (const auto& [p, e] : s.parameter_action()) {
            const std::string& name = ctx[p].name;
            const std::size_t k = name == "a1" ? 0 : name == "a2" ? 1 : name == "a3" ? 2 : 3;
            if (k == 3)
                throw Error("map '" + s.name() + "' acts on an unknown parameter '" + name + "'");
            shifted[k] = CompiledExpr(e, slots)(in);
        }
    }

    auto apply = [&](const State& y, double t) {
        const State img = state_map(y, t, params);
        if (!finite(img))
            throw IntegrationError("map '" + s.name() + "' has a pole at t = " + fmt(t));
        return img;
    };

    const Trajectory direct = integrate_meromorphic(space, ic, t0, t1, params, cfg);
    // The map's denominators must not change sign between finite samples.
    std::optional<std::pair<double, State>> prev_den;
    std::vector<double> pole_times;
    for (const auto& e : direct.pole_events)
        pole_times.push_back(e.t_star);
    for (const auto& smp : direct.samples) {
        const State u = space.to_U0(smp.chart, smp.coords, smp.t, params);
        // Sign changes through a pole are not crossings of the pole locus.
        if (!finite(u) || std::find(pole_times.begin(), pole_times.end(), smp.t) != pole_times.end()) {
            prev_den.reset();
            continue;
        }
        State den;
        for (std::size_t k = 0; k < 3; ++k)
            den[k] = state_map.denominator(k, u, smp.t, params);
        if (prev_den)
            for (std::size_t k = 0; k < 3; ++k)
                if ((prev_den->second[k] < 0 && den[k] > 0) || (prev_den->second[k] > 0 && den[k] < 0) ||
                    den[k] == 0)
                    throw IntegrationError("trajectory crosses the pole locus of '" + s.name() + "' between t = " +
                                           fmt(prev_den->first) + " and t = " + fmt(smp.t));
        prev_den.emplace(smp.t, den);
    }

    const State end_u0 = space.to_U0(direct.end().chart, direct.end().coords, t1, params);
    if (!finite(end_u0))
        throw IntegrationError("trajectory ends at a pole");
    const State lhs = apply(end_u0, t1);

    const Trajectory mapped = integrate_meromorphic(space, apply(ic, t0), t0, t1, shifted, cfg);
    const State rhs = space.to_U0(mapped.end().chart, mapped.end().coords, t1, shifted);
    if (!finite(rhs))
        throw IntegrationError("transformed trajectory ends at a pole");
    double d = 0;
    for (std::size_t k = 0; k < 3; ++k)
        d = std::max(d, std::abs(lhs[k] - rhs[k]) / std::max(1.0, std::abs(lhs[k])));
    return d;
}

SweepReport robustness_sweep(const PhaseSpace& space, std::size_t runs, std::uint64_t seed, double t0, double t1,
                             double ic_bound, double alpha_bound, const IntegratorConfig& cfg) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ic_dist(-ic_bound, ic_bound);
    std::uniform_real_distribution<double> al_dist(-alpha_bound, alpha_bound);
    std::vector<std::pair<State, Params>> inputs(runs);
    for (auto& [ic, al] : inputs) {
        for (double& v : ic)
            v = ic_dist(rng);
        for (double& v : al)
            v = al_dist(rng);
    }

    SweepReport rep;
    rep.runs = runs;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs; i = next++) {
            const auto& [ic, al] = inputs[i];
            try {
                const auto tr = integrate_meromorphic(space, ic, t0, t1, al, cfg);
                std::lock_guard lock(mu);
                ++rep.completed;
                rep.pole_events += tr.pole_events.size();
            } catch (const AtlasIncompleteError& e) {
                std::lock_guard lock(mu);
                ++rep.atlas_incomplete;
                rep.failures.push_back({i, ic, al, "atlas-incomplete", e.what()});
            } catch (const Error& e) {
                std::lock_guard lock(mu);
                rep.failures.push_back({i, ic, al, "integration", e.what()});
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < n; ++k)
            pool.emplace_back(worker);
    }
    std::sort(rep.failures.begin(), rep.failures.end(),
              [](const SweepFailure& a, const SweepFailure& b) { return a.run < b.run; });
    return rep;
}

} // namespace phase_atlas
