#include "phase_atlas/singular/singular.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "phase_atlas/atlas/atlas.hpp"
#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/parser.hpp"
#include "phase_atlas/singular/univariate.hpp"

namespace phase_atlas {

namespace {

std::string tuple_string(const std::array<Rational, 3>& t) {
    return "(" + to_string(t[0]) + ", " + to_string(t[1]) + ", " + to_string(t[2]) + ")";
}

Bindings point_bindings(const VectorField& f, const std::vector<Rational>& point) {
    Bindings b;
    for (std::size_t i = 0; i < f.dimension(); ++i)
        b.emplace(f.coords()[i], RationalExpr::constant(f.context(), point[i]));
    return b;
}

std::size_t position_in(const VectorField& f, VarIndex v) {
    auto it = std::find(f.coords().begin(), f.coords().end(), v);
    if (it == f.coords().end())
        throw Error("boundary is not a coordinate of the field");
    return static_cast<std::size_t>(it - f.coords().begin());
}

void require_simple_pole(const VectorField& f, std::size_t boundary_pos) {
    const auto orders = pole_order(f, Polynomial::variable(f.context(), f.coords()[boundary_pos]));
    const Context& ctx = *f.context();
    for (std::size_t i = 0; i < orders.size(); ++i) {
        const std::string name = ctx[f.coords()[i]].name;
        if (i == boundary_pos && orders[i] != 0)
            throw Error("d" + name + "/dt has a pole along its own boundary");
        if (orders[i] > 1)
            throw Error("d" + name + "/dt has a pole of order " + std::to_string(orders[i]) +
                        " along the boundary");
    }
}

// boundary * rhs of each tangential coordinate.
std::vector<RationalExpr> polar_numerators(const VectorField& f, std::size_t boundary_pos) {
    const RationalExpr b(Polynomial::variable(f.context(), f.coords()[boundary_pos]));
    std::vector<RationalExpr> out;
    for (std::size_t i = 0; i < f.dimension(); ++i)
        if (i != boundary_pos)
            out.push_back(b * f.rhs()[i]);
    return out;
}

void require_t_free(const RationalExpr& e, const VectorField& f, const char* what) {
    if (auto t = time_variable(*f.context()); t && e.involves(*t))
        throw Error(std::string(what) + " depends on t at this point");
}

std::string upoly_string(const UPoly& p, const std::string& var) {
    std::string out;
    for (std::size_t k = p.size(); k-- > 0;) {
        if (p[k] == 0)
            continue;
        std::string c = to_string(p[k]);
        if (!out.empty())
            out += c.front() == '-' ? " - " : " + ";
        else if (c.front() == '-')
            out += "-";
        if (c.front() == '-')
            c.erase(0, 1);
        const bool unit = c == "1" && k > 0;
        if (!unit)
            out += c;
        if (k > 0)
            out += (unit ? "" : "*") + var + (k > 1 ? "^" + std::to_string(k) : "");
    }
    return out.empty() ? "0" : out;
}

// Common rational zeros of `eqs`, polynomials in x and y only.
void solve_plane(std::vector<Polynomial> eqs, VarIndex x, VarIndex y, const Context& ctx,
                 AccessibleScan& scan, const std::function<void(Rational, Rational)>& emit) {
    const std::string xn = ctx[x].name;
    const std::string yn = ctx[y].name;
    std::erase_if(eqs, [](const Polynomial& p) { return p.is_zero(); });
    if (eqs.empty()) {
        scan.positive_dimensional.push_back("the whole boundary divisor");
        return;
    }
    Polynomial g = eqs.front();
    for (const auto& e : eqs)
        g = gcd(g, e);
    if (!g.is_constant()) {
        scan.positive_dimensional.push_back("curve " + to_string(g) + " = 0");
        for (auto& e : eqs)
            e = e.divide_exact(g);
    }
    if (std::any_of(eqs.begin(), eqs.end(), [](const Polynomial& p) { return p.is_constant(); }))
        return;

    // A combination of the remaining equations coprime to the first one.
    const Polynomial& p = eqs.front();
    std::optional<Polynomial> q;
    for (long attempt = 1; attempt <= 6 && !q; ++attempt) {
        Polynomial c(p.context());
        for (std::size_t k = 1; k < eqs.size(); ++k)
            c += eqs[k].scaled(Rational(static_cast<long>(k) * attempt + 1));
        if (!c.is_zero() && gcd(p, c).is_constant())
            q = std::move(c);
    }
    if (!q)
        throw Error("could not find two coprime polar equations");
    if (!p.involves(y) && !q->involves(y))
        return; // coprime univariate polynomials in x
    const Polynomial r = resultant(p, *q, y);
    if (r.is_constant())
        return;
    const auto xs = rational_roots(univariate_coefficients(r, x));
    for (const auto& [x0, mult] : xs.roots) {
        Bindings at{{x, RationalExpr::constant(p.context(), x0)}};
        Polynomial h(p.context());
        for (const auto& e : eqs)
            h = gcd(h, substitute(e, at).numerator());
        if (h.is_zero()) {
            scan.positive_dimensional.push_back("line " + xn + " = " + to_string(x0));
            continue;
        }
        if (h.is_constant())
            continue;
        const auto ys = rational_roots(univariate_coefficients(h, y));
        for (const auto& [y0, m] : ys.roots)
            emit(x0, y0);
        if (ys.cofactor.size() > 1)
            scan.unresolved.push_back(xn + " = " + to_string(x0) + ", " + yn + " a root of " +
                                      upoly_string(ys.cofactor, yn));
    }
    if (xs.cofactor.size() > 1)
        scan.unresolved.push_back(xn + " a root of " + upoly_string(xs.cofactor, xn));
}

} // namespace

Homogeneous normalized(Homogeneous h) {
    for (std::size_t k = 4; k-- > 0;)
        if (h[k] != 0) {
            const Rational s = h[k];
            for (auto& c : h)
                c /= s;
            return h;
        }
    throw Error("the zero vector is not a projective point");
}

std::string to_string(const Homogeneous& h) {
    return "[" + to_string(h[0]) + ":" + to_string(h[1]) + ":" + to_string(h[2]) + ":" +
           to_string(h[3]) + "]";
}

Homogeneous BoundaryChart::homogeneous(const std::vector<Rational>& local) const {
    Homogeneous h;
    for (std::size_t k = 0; k < 4; ++k)
        h[k] = slots[k] < 0 ? Rational(1) : local.at(static_cast<std::size_t>(slots[k]));
    return normalized(h);
}

const std::vector<BoundaryChart>& boundary_charts() {
    // uvw: [w:u:v:1], lmn: [m:l:1:n], pqr: [p:1:q:r].
    static const std::vector<BoundaryChart> charts{
        {"uvw", {2, 0, 1, -1}},
        {"lmn", {1, 0, -1, 2}},
        {"pqr", {0, -1, 1, 2}},
    };
    return charts;
}

const BoundaryChart& boundary_chart(std::string_view name) {
    for (const auto& c : boundary_charts())
        if (c.name == name)
            return c;
    throw Error("unknown boundary chart '" + std::string(name) + "'");
}

std::optional<std::array<Rational, 3>> LocalIndex::constant_tuple() const {
    std::array<Rational, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        if (!tuple[k].is_constant())
            return std::nullopt;
        out[k] = tuple[k].constant_value();
    }
    return out;
}

std::optional<std::array<Rational, 3>> LocalIndex::normalized() const {
    if (!a.is_constant() || a.is_zero() || !eigenvalues[0].is_constant() ||
        !eigenvalues[1].is_constant())
        return std::nullopt;
    const Rational av = a.constant_value();
    return std::array<Rational, 3>{Rational(1), eigenvalues[0].constant_value() / av,
                                   eigenvalues[1].constant_value() / av};
}

std::string to_string(const LocalIndex& index) {
    return "(" + to_string(index.tuple[0]) + ", " + to_string(index.tuple[1]) + ", " +
           to_string(index.tuple[2]) + ")";
}

LocalIndex local_index(const VectorField& f, const std::vector<Rational>& point, VarIndex boundary) {
    if (f.dimension() != 3 || point.size() != 3)
        throw Error("local index needs a three-dimensional field and point");
    const std::size_t bp = position_in(f, boundary);
    if (point[bp] != 0)
        throw Error("point does not lie on the boundary");
    require_simple_pole(f, bp);
    const Bindings at = point_bindings(f, point);

    LocalIndex out{RationalExpr(f.context()), {RationalExpr(f.context()), RationalExpr(f.context())},
                   {RationalExpr(f.context()), RationalExpr(f.context()), RationalExpr(f.context())},
                   true, {}};
    out.a = substitute(f.rhs()[bp], at);
    require_t_free(out.a, f, "the boundary rhs");

    std::vector<VarIndex> tangential;
    for (std::size_t i = 0; i < 3; ++i)
        if (i != bp)
            tangential.push_back(f.coords()[i]);
    const auto numerators = polar_numerators(f, bp);
    std::array<std::array<RationalExpr, 2>, 2> jac{
        {{RationalExpr(f.context()), RationalExpr(f.context())},
         {RationalExpr(f.context()), RationalExpr(f.context())}}};
    for (std::size_t i = 0; i < 2; ++i) {
        if (!substitute(numerators[i], at).is_zero())
            throw Error("point is not accessible: a polar numerator does not vanish there");
        for (std::size_t j = 0; j < 2; ++j) {
            jac[i][j] = substitute(numerators[i].differentiate(tangential[j]), at);
            require_t_free(jac[i][j], f, "the linearization");
        }
    }

    const bool diagonal = jac[0][1].is_zero() && jac[1][0].is_zero();
    if (jac[0][1].is_zero() || jac[1][0].is_zero()) {
        out.eigenvalues = {jac[0][0], jac[1][1]};
    } else {
        out.triangular = false;
        const RationalExpr tr = jac[0][0] + jac[1][1];
        const RationalExpr det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        const RationalExpr disc = tr * tr - RationalExpr::constant(f.context(), 4) * det;
        std::optional<Rational> root;
        if (disc.is_constant())
            root = rational_sqrt(disc.constant_value());
        if (!root || !tr.is_constant())
            throw Error("eigenvalues of the linearization are not rational");
        const Rational trv = tr.constant_value();
        out.eigenvalues = {RationalExpr::constant(f.context(), (trv - *root) / 2),
                           RationalExpr::constant(f.context(), (trv + *root) / 2)};
    }
    if (!diagonal)
        out.warnings.push_back("linear cross terms: index read from Jacobian eigenvalues");
    if (out.a.is_zero() || out.eigenvalues[0].is_zero() || out.eigenvalues[1].is_zero())
        out.warnings.push_back("zero entry: the normal form with nonzero constants does not apply");

    std::size_t next = 0;
    for (std::size_t i = 0; i < 3; ++i)
        out.tuple[i] = i == bp ? out.a : out.eigenvalues[next++];
    return out;
}

AccessibleScan find_accessible(const VectorField& f, VarIndex boundary) {
    if (f.dimension() != 3)
        throw Error("accessible singularities need a three-dimensional field");
    const std::size_t bp = position_in(f, boundary);
    require_simple_pole(f, bp);
    std::vector<VarIndex> tangential;
    for (std::size_t i = 0; i < 3; ++i)
        if (i != bp)
            tangential.push_back(f.coords()[i]);

    const Bindings on_boundary{{boundary, RationalExpr::constant(f.context(), 0)}};
    std::vector<Polynomial> eqs;
    for (const auto& n : polar_numerators(f, bp)) {
        const RationalExpr restricted = substitute(n, on_boundary);
        for (auto& c : coefficient_forms(restricted.numerator(), tangential))
            eqs.push_back(std::move(c));
    }

    AccessibleScan scan;
    solve_plane(std::move(eqs), tangential[0], tangential[1], *f.context(), scan,
                [&](const Rational& x0, const Rational& y0) {
                    std::vector<Rational> p(3);
                    p[bp] = 0;
                    p[bp == 0 ? 1 : 0] = x0;
                    p[bp == 2 ? 1 : 2] = y0;
                    scan.points.push_back(std::move(p));
                });
    return scan;
}

ChartScan scan_chart(const FixtureSet& fixtures, const BoundaryChart& chart, const VectorField& base) {
    const RationalMap& m = fixtures.map(chart.name);
    const VectorField f = pushforward(base, m);
    const VarIndex boundary = m.target().at(chart.boundary_position());
    AccessibleScan scan = find_accessible(f, boundary);
    ChartScan out{chart.name, {}, std::move(scan.unresolved), std::move(scan.positive_dimensional)};
    for (auto& p : scan.points) {
        AccessibleSingularity s{chart.name, p, chart.homogeneous(p), std::nullopt, {}};
        try {
            s.index = local_index(f, p, boundary);
        } catch (const Error& e) {
            s.index_error = e.what();
        }
        out.points.push_back(std::move(s));
    }
    return out;
}

std::size_t TableReport::matched_rows() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const TableRow& r) { return r.matched(); }));
}

bool TableReport::ok() const {
    return matched_rows() == rows.size() && extra.empty() && unresolved.empty() &&
           positive_dimensional.empty() && distinct_points == rows.size();
}

TableReport verify_table(const FixtureSet& fixtures) {
    const VectorField& base = fixtures.field(kBaseField);
    TableReport rep;
    // Distinct points in chart priority order, with the other charts that see them.
    std::vector<AccessibleSingularity> merged;
    std::vector<std::vector<std::string>> seen;
    for (const auto& chart : boundary_charts()) {
        ChartScan scan = scan_chart(fixtures, chart, base);
        for (auto& u : scan.unresolved)
            rep.unresolved.push_back(chart.name + ": " + u);
        for (auto& u : scan.positive_dimensional)
            rep.positive_dimensional.push_back(chart.name + ": " + u);
        for (auto& p : scan.points) {
            auto it = std::find_if(merged.begin(), merged.end(),
                                   [&](const auto& m) { return m.homogeneous == p.homogeneous; });
            if (it != merged.end()) {
                seen[static_cast<std::size_t>(it - merged.begin())].push_back(chart.name);
                continue;
            }
            merged.push_back(std::move(p));
            seen.emplace_back();
        }
    }
    rep.distinct_points = merged.size();

    std::vector<bool> used(merged.size(), false);
    for (const auto& expected : fixtures.points) {
        TableRow row;
        row.expected = expected;
        const Homogeneous target = normalized(expected.homogeneous);
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const auto& m) { return m.homogeneous == target; });
        if (it == merged.end()) {
            row.problems.push_back("no accessible point at " + to_string(target));
            rep.rows.push_back(std::move(row));
            continue;
        }
        const std::size_t k = static_cast<std::size_t>(it - merged.begin());
        used[k] = true;
        row.found = true;
        row.homogeneous = it->homogeneous;
        row.chart = it->chart;
        row.also_seen_in = seen[k];
        if (row.chart != expected.chart)
            row.problems.push_back("found in chart " + row.chart + ", table says " + expected.chart);

        std::optional<std::array<Rational, 3>> chart_index;
        if (it->index)
            chart_index = it->index->constant_tuple();
        if (!expected.local_system.empty()) {
            row.index_source = expected.local_system;
            try {
                const VectorField& local = fixtures.field(expected.local_system);
                const auto& chart = boundary_chart(row.chart);
                const VarIndex boundary = local.coords().at(chart.boundary_position());
                row.index = local_index(local, std::vector<Rational>(3, Rational(0)), boundary)
                                .constant_tuple();
            } catch (const Error& e) {
                row.problems.push_back(std::string("local system: ") + e.what());
            }
            if (row.index && chart_index && *row.index != *chart_index)
                row.problems.push_back("index " + tuple_string(*chart_index) + " in chart " +
                                       row.chart + " differs from the local system");
        } else {
            row.index_source = row.chart;
            row.index = chart_index;
            if (!it->index)
                row.problems.push_back("index: " + it->index_error);
        }
        if (!row.index)
            row.problems.push_back("index is not constant");
        else if (*row.index != expected.index)
            row.problems.push_back("index " + tuple_string(*row.index) + ", table says " +
                                   tuple_string(expected.index));
        rep.rows.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < merged.size(); ++k)
        if (!used[k])
            rep.extra.push_back(merged[k]);
    return rep;
}

} // namespace phase_atlas
