#include "phase_atlas/symmetry/symmetry.hpp"

#include <algorithm>
#include <numeric>

#include "phase_atlas/atlas/atlas.hpp"
#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/parser.hpp"

namespace phase_atlas {

namespace {

constexpr std::size_t kColumnsPerEquation = 13;
constexpr std::size_t kQuadraticColumns = 9;

RationalMap in_context(const RationalMap& m, const ContextPtr& ctx) {
    return same_context(m.context(), ctx) ? m : m.lifted(ctx);
}

std::vector<VarIndex> variables_of_kind(const Context& ctx, IndeterminateKind kind) {
    std::vector<VarIndex> out;
    for (VarIndex v = 0; v < ctx.size(); ++v)
        if (ctx[v].kind == kind)
            out.push_back(v);
    return out;
}

// Parameters occurring in the field, in declaration order.
std::vector<VarIndex> field_parameters(const VectorField& f) {
    std::vector<VarIndex> out;
    for (VarIndex p : variables_of_kind(*f.context(), IndeterminateKind::parameter))
        if (std::any_of(f.rhs().begin(), f.rhs().end(), [&](const RationalExpr& r) { return r.involves(p); }))
            out.push_back(p);
    return out;
}

// Scales to coprime integer coefficients with a positive leading coefficient.
Polynomial primitive_integer(const Polynomial& p) {
    if (p.is_zero())
        return p;
    mpz_class den = 1, num = 0;
    for (const auto& t : p.terms()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
    }
    Rational s(den, num);
    s.canonicalize();
    if (p.leading_coefficient() < 0)
        s = -s;
    return p.scaled(s);
}

// Sum of the terms of p that involve none of `vars`.
Polynomial part_free_of(const Polynomial& p, const std::vector<VarIndex>& vars) {
    std::vector<Term> kept;
    for (const auto& t : p.terms())
        if (std::none_of(vars.begin(), vars.end(), [&](VarIndex v) { return t.monomial.exponent(v) > 0; }))
            kept.push_back(t);
    return Polynomial(p.context(), std::move(kept));
}

Polynomial polynomial_rhs(const RationalExpr& e, const std::string& what) {
    if (!e.is_polynomial())
        throw Error(what + " is not polynomial");
    return e.numerator();
}

std::string coordinate_label(const VectorField& f, std::size_t i) {
    return "d" + (*f.context())[f.coords()[i]].name + "/dt";
}

// Dynamic variables: coordinates and time.
std::vector<VarIndex> dynamic_variables(const VectorField& f) {
    std::vector<VarIndex> out = f.coords();
    if (auto t = time_variable(*f.context()))
        out.push_back(*t);
    return out;
}

} // namespace

BacklundImage apply_backlund(const RationalMap& s, const std::vector<RationalExpr>& state,
                             const Bindings& parameters) {
    if (state.size() != s.source().size())
        throw Error("map '" + s.name() + "' needs " + std::to_string(s.source().size()) + " state values");
    Bindings at = parameters;
    for (std::size_t i = 0; i < state.size(); ++i)
        at.insert_or_assign(s.source()[i], state[i]);
    BacklundImage out;
    for (const auto& f : s.forward())
        out.state.push_back(substitute(f, at));
    for (const auto& [p, e] : s.parameter_action())
        out.parameters.emplace(p, substitute(e, parameters));
    return out;
}

std::vector<RationalExpr> invariance_residual(const VectorField& f, const RationalMap& map) {
    const RationalMap s = in_context(map, f.context());
    std::vector<VarIndex> a = f.coords(), b = s.source(), c = s.target();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::sort(c.begin(), c.end());
    if (a != b || a != c)
        throw Error("map '" + s.name() + "' does not act on the field's coordinates");
    Bindings image = s.forward_bindings();
    for (const auto& [p, e] : s.parameter_action())
        image.insert_or_assign(p, e);
    std::vector<RationalExpr> out;
    for (VarIndex v : f.coords()) {
        const std::size_t k = static_cast<std::size_t>(
            std::find(s.target().begin(), s.target().end(), v) - s.target().begin());
        out.push_back(f.lie_derivative(s.forward()[k]) - substitute(f.rhs_for(v), image));
    }
    return out;
}

bool is_invariant(const VectorField& f, const RationalMap& s) {
    const auto r = invariance_residual(f, s);
    return std::all_of(r.begin(), r.end(), [](const RationalExpr& e) { return e.is_zero(); });
}

RationalVector InvariantFamily::coefficients_of(const VectorField& f) const {
    const VectorField g = same_context(f.context(), context) ? f : f.lifted(context);
    if (g.coords() != ansatz.coords())
        throw Error("field coordinates differ from the ansatz");
    RationalVector v(columns.size(), Rational(0));
    for (std::size_t i = 0; i < g.dimension(); ++i) {
        const Polynomial p = polynomial_rhs(g.rhs()[i], coordinate_label(g, i));
        for (const auto& t : p.terms()) {
            // Match the term against the ansatz monomials (unknown factor removed).
            bool found = false;
            for (std::size_t j = 0; j < kColumnsPerEquation && !found; ++j) {
                const std::size_t col = i * kColumnsPerEquation + j;
                const auto& m = column_monomials[col];
                if (m == t.monomial) {
                    v[col] = t.coeff;
                    found = true;
                }
            }
            if (!found)
                throw Error(coordinate_label(g, i) + ": term " +
                            to_string(Polynomial::monomial(context, t.monomial, t.coeff)) +
                            " is outside the ansatz");
        }
    }
    return v;
}

bool InvariantFamily::contains(const VectorField& f) const {
    const RationalVector v = coefficients_of(f);
    for (std::size_t col = 0; col < v.size(); ++col)
        if (v[col] != 0 && std::find(active_columns.begin(), active_columns.end(), col) == active_columns.end())
            return false;
    RationalMatrix rows = basis;
    const std::size_t before = rank(rows, columns.size());
    rows.push_back(v);
    return rank(rows, columns.size()) == before;
}

InvariantFamily derive_invariant_family(const VectorField& base, const std::vector<RationalMap>& maps,
                                        bool affine_constant) {
    if (base.dimension() != 3)
        throw Error("the quadratic ansatz is written for three coordinates");
    const auto t = time_variable(*base.context());
    if (!t)
        throw Error("the ansatz needs a time variable");
    const auto params = field_parameters(base);
    if (params.size() != 3)
        throw Error("the ansatz needs exactly three parameters in the base field");

    std::vector<Indeterminate> extra;
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= kColumnsPerEquation; ++j)
            extra.push_back({"e" + std::to_string(i) + "_" + std::to_string(j), IndeterminateKind::coefficient});
    const ContextPtr ctx = base.context()->extended(extra);
    const VectorField lifted_base = base.lifted(ctx);
    const auto& xs = lifted_base.coords();
    const VarIndex tv = ctx->index_of((*base.context())[*t].name);

    // Column monomials in the order of the ansatz.
    std::vector<Monomial> per_equation{
        Monomial::variable(xs[0], 2), Monomial::variable(xs[1], 2), Monomial::variable(xs[2], 2),
        Monomial::from_factors({{xs[0], 1}, {xs[1], 1}}), Monomial::from_factors({{xs[1], 1}, {xs[2], 1}}),
        Monomial::from_factors({{xs[2], 1}, {xs[0], 1}}), Monomial::from_factors({{tv, 1}, {xs[0], 1}}),
        Monomial::from_factors({{tv, 1}, {xs[1], 1}}), Monomial::from_factors({{tv, 1}, {xs[2], 1}})};
    for (VarIndex p : params)
        per_equation.push_back(Monomial::variable(ctx->index_of((*base.context())[p].name)));
    per_equation.push_back(Monomial());

    InvariantFamily fam{ctx, {}, {}, {}, {}, 0, {}, lifted_base, lifted_base};
    std::vector<RationalExpr> ansatz_rhs;
    for (std::size_t i = 0; i < 3; ++i) {
        Polynomial rhs(ctx);
        for (std::size_t j = 0; j < kColumnsPerEquation; ++j) {
            const std::size_t col = i * kColumnsPerEquation + j;
            const Polynomial mono = Polynomial::monomial(ctx, per_equation[j]);
            fam.columns.push_back(coordinate_label(lifted_base, i) + ": " + to_string(mono));
            fam.column_monomials.push_back(per_equation[j]);
            if (j + 1 == kColumnsPerEquation && !affine_constant)
                continue;
            const VarIndex e = ctx->index_of(extra[col].name);
            fam.active_columns.push_back(col);
            fam.unknowns.push_back(e);
            rhs += mono * Polynomial::variable(ctx, e);
        }
        ansatz_rhs.emplace_back(std::move(rhs));
    }
    fam.ansatz = VectorField("ansatz", xs, ansatz_rhs);

    // One linear form in the unknowns per monomial of every residual numerator.
    const std::size_t n = fam.unknowns.size();
    RationalMatrix rows;
    for (const auto& m : maps)
        for (const auto& r : invariance_residual(fam.ansatz, m))
            for (const auto& form : coefficient_forms(r.numerator(), fam.unknowns)) {
                RationalVector row(n, Rational(0));
                for (const auto& term : form.terms()) {
                    const auto f = term.monomial.factors();
                    if (f.size() != 1 || f[0].second != 1)
                        throw Error("invariance constraints are not linear homogeneous in the unknowns");
                    const auto k = static_cast<std::size_t>(
                        std::find(fam.unknowns.begin(), fam.unknowns.end(), f[0].first) - fam.unknowns.begin());
                    row[k] = term.coeff;
                }
                rows.push_back(std::move(row));
            }
    fam.constraints = rows.size();

    const RowEchelon ech = reduced_row_echelon(rows, n);
    std::vector<bool> pivot(n, false);
    for (std::size_t p : ech.pivots)
        pivot[p] = true;
    std::vector<RationalExpr> general(3, RationalExpr(ctx));
    for (std::size_t free = 0; free < n; ++free) {
        if (pivot[free])
            continue;
        RationalVector sol(n, Rational(0));
        sol[free] = 1;
        for (std::size_t r = 0; r < ech.rows.size(); ++r)
            sol[ech.pivots[r]] = -ech.rows[r][free];
        RationalVector full(fam.columns.size(), Rational(0));
        for (std::size_t k = 0; k < n; ++k)
            full[fam.active_columns[k]] = sol[k];
        const Polynomial u = Polynomial::variable(ctx, fam.unknowns[free]);
        for (std::size_t col = 0; col < full.size(); ++col)
            if (full[col] != 0)
                general[col / kColumnsPerEquation] +=
                    RationalExpr(Polynomial::monomial(ctx, fam.column_monomials[col], full[col]) * u);
        fam.basis.push_back(std::move(full));
    }
    fam.family = VectorField("invariant family", xs, general);
    return fam;
}

FamilyComparison compare_with_printed(const InvariantFamily& fam, const VectorField& printed,
                                      const std::vector<RationalMap>& maps) {
    FamilyComparison out;
    const Context& pctx = *printed.context();
    std::vector<VarIndex> letters;
    for (VarIndex c : variables_of_kind(pctx, IndeterminateKind::coefficient))
        if (std::any_of(printed.rhs().begin(), printed.rhs().end(), [&](const RationalExpr& r) { return r.involves(c); }))
            letters.push_back(c);

    // Column vector of each letter's direction.
    std::vector<RationalVector> printed_vectors;
    for (VarIndex l : letters) {
        Bindings pick;
        for (VarIndex m : letters)
            pick.emplace(m, RationalExpr::constant(printed.context(), m == l ? 1 : 0));
        printed_vectors.push_back(fam.coefficients_of(printed.specialized(pick)));
    }
    out.printed_rank = rank(printed_vectors, fam.columns.size());

    std::vector<std::size_t> quad;
    for (std::size_t col = 0; col < fam.columns.size(); ++col)
        if (col % kColumnsPerEquation < kQuadraticColumns)
            quad.push_back(col);
    auto project = [&](const RationalVector& v) {
        RationalVector p;
        for (std::size_t c : quad)
            p.push_back(v[c]);
        return p;
    };
    RationalMatrix pd, pp;
    for (const auto& b : fam.basis)
        pd.push_back(project(b));
    for (const auto& v : printed_vectors)
        pp.push_back(project(v));
    RationalMatrix both = pd;
    both.insert(both.end(), pp.begin(), pp.end());
    const std::size_t rd = rank(pd, quad.size()), rp = rank(pp, quad.size());
    out.quadratic_span_matches = rd == rp && rank(both, quad.size()) == rd;

    out.printed_invariant = std::all_of(maps.begin(), maps.end(),
                                        [&](const RationalMap& m) { return is_invariant(printed, m); });
    if (!out.quadratic_span_matches)
        return out;

    // Projection matrix with one column per basis vector.
    RationalMatrix proj(quad.size(), RationalVector(fam.basis.size()));
    for (std::size_t r = 0; r < quad.size(); ++r)
        for (std::size_t k = 0; k < fam.basis.size(); ++k)
            proj[r][k] = pd[k][r];
    // Basis directions with no quadratic part, paired in order with the
    // printed letters that have none.
    std::vector<RationalVector> kernel;
    for (const auto& k : nullspace(proj, fam.basis.size())) {
        RationalVector full(fam.columns.size(), Rational(0));
        for (std::size_t b = 0; b < k.size(); ++b)
            for (std::size_t c = 0; c < full.size(); ++c)
                full[c] += k[b] * fam.basis[b][c];
        kernel.push_back(std::move(full));
    }
    const ContextPtr& ctx = fam.context;
    for (const auto& k : kernel) {
        std::string text;
        for (std::size_t eq = 0; eq < 3; ++eq) {
            Polynomial c(ctx);
            for (std::size_t j = kQuadraticColumns; j < kColumnsPerEquation; ++j) {
                const std::size_t col = eq * kColumnsPerEquation + j;
                if (k[col] != 0)
                    c += Polynomial::monomial(ctx, fam.column_monomials[col], k[col]);
            }
            if (!c.is_zero())
                text += (text.empty() ? "" : "; ") + coordinate_label(printed, eq) + ": " + to_string(primitive_integer(c));
        }
        out.free_constant_directions.push_back(text);
    }
    std::size_t next_kernel = 0;
    std::vector<Polynomial> derived(3, Polynomial(ctx)), printed_const(3, Polynomial(ctx)),
        derived_const(3, Polynomial(ctx));
    for (std::size_t li = 0; li < letters.size(); ++li) {
        const RationalVector& v = printed_vectors[li];
        RationalVector d;
        if (std::all_of(pp[li].begin(), pp[li].end(), [](const Rational& q) { return q == 0; })) {
            if (next_kernel < kernel.size())
                d = kernel[next_kernel++];
            else
                d = RationalVector(fam.columns.size(), Rational(0));
        } else {
            auto c = solve(proj, pp[li], fam.basis.size());
            if (!c)
                return out;
            d = RationalVector(fam.columns.size(), Rational(0));
            for (std::size_t b = 0; b < c->size(); ++b)
                for (std::size_t col = 0; col < d.size(); ++col)
                    d[col] += (*c)[b] * fam.basis[b][col];
        }
        const Polynomial letter = Polynomial::variable(ctx, ctx->index_of(pctx[letters[li]].name));
        for (std::size_t col = 0; col < d.size(); ++col) {
            const std::size_t eq = col / kColumnsPerEquation;
            const bool constant = col % kColumnsPerEquation >= kQuadraticColumns;
            if (d[col] != 0) {
                Polynomial term = Polynomial::monomial(ctx, fam.column_monomials[col], d[col]) * letter;
                derived[eq] += term;
                if (constant)
                    derived_const[eq] += term;
            }
            if (constant && v[col] != 0)
                printed_const[eq] += Polynomial::monomial(ctx, fam.column_monomials[col], v[col]) * letter;
        }
    }
    std::vector<RationalExpr> rhs;
    for (std::size_t eq = 0; eq < 3; ++eq) {
        rhs.emplace_back(derived[eq].lifted(printed.context()));
        if (printed_const[eq] != derived_const[eq])
            out.constant_discrepancies.push_back(coordinate_label(printed, eq) + " constant: printed " +
                                                 to_string(printed_const[eq]) + ", derived " +
                                                 to_string(derived_const[eq]));
    }
    out.derived_in_printed_letters = VectorField(printed.label() + " (derived constants)", printed.coords(), rhs);
    return out;
}

DecouplingResult decoupling_check(const VectorField& family, VarIndex decoupled) {
    const auto pos = family.position_of(decoupled);
    if (!pos)
        throw Error("decoupled variable is not a coordinate");
    const ContextPtr& ctx = family.context();
    const auto coeffs = variables_of_kind(*ctx, IndeterminateKind::coefficient);
    DecouplingResult out;
    for (std::size_t i = 0; i < family.dimension(); ++i) {
        if (i == *pos)
            continue;
        const RationalExpr& r = family.rhs()[i];
        if (r.denominator().involves(decoupled))
            throw Error(coordinate_label(family, i) + " has a denominator involving the decoupled coordinate");
        std::vector<Term> with_x;
        for (const auto& t : r.numerator().terms())
            if (t.monomial.exponent(decoupled) > 0)
                with_x.push_back(t);
        for (const auto& form : coefficient_forms(Polynomial(ctx, std::move(with_x)), coeffs)) {
            Polynomial c = primitive_integer(form);
            if (std::find(out.conditions.begin(), out.conditions.end(), c) == out.conditions.end())
                out.conditions.push_back(std::move(c));
        }
    }
    if (out.conditions.empty()) {
        std::vector<VarIndex> rest;
        std::vector<RationalExpr> rhs;
        for (std::size_t i = 0; i < family.dimension(); ++i)
            if (i != *pos) {
                rest.push_back(family.coords()[i]);
                rhs.push_back(family.rhs()[i]);
            }
        out.subsystem = VectorField(family.label() + " subsystem", rest, rhs);
        return out;
    }

    // Linear conditions: eliminate the latest-declared coefficients first.
    std::vector<VarIndex> vars;
    for (const auto& c : out.conditions) {
        if (c.total_degree() > 1)
            return out;
        for (VarIndex v : c.variables())
            vars.push_back(v);
    }
    std::sort(vars.begin(), vars.end(), std::greater<>());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    RationalMatrix m;
    for (const auto& c : out.conditions) {
        RationalVector row(vars.size() + 1, Rational(0));
        for (const auto& t : c.terms()) {
            if (t.monomial.factors().empty()) {
                row.back() = t.coeff;
                continue;
            }
            const VarIndex v = t.monomial.factors()[0].first;
            row[static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin())] = t.coeff;
        }
        m.push_back(std::move(row));
    }
    const RowEchelon e = reduced_row_echelon(m, vars.size() + 1);
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] == vars.size())
            return out; // inconsistent: a nonzero constant must vanish
        Polynomial value = Polynomial::constant(ctx, -e.rows[r].back());
        for (std::size_t k = e.pivots[r] + 1; k < vars.size(); ++k)
            if (e.rows[r][k] != 0)
                value -= Polynomial::variable(ctx, vars[k]).scaled(e.rows[r][k]);
        out.solution.emplace(vars[e.pivots[r]], RationalExpr(value));
    }
    std::vector<VarIndex> rest;
    std::vector<RationalExpr> rhs;
    for (std::size_t i = 0; i < family.dimension(); ++i)
        if (i != *pos) {
            rest.push_back(family.coords()[i]);
            rhs.push_back(substitute(family.rhs()[i], out.solution));
            if (rhs.back().involves(decoupled))
                return out;
        }
    out.subsystem = VectorField(family.label() + " subsystem", rest, rhs);
    return out;
}

LocalIndex p3_index_family(const FixtureSet& fixtures, const VectorField& family) {
    const RationalMap pqr = in_context(fixtures.map("pqr"), family.context());
    const VectorField f = pushforward(family, pqr);
    const VarIndex boundary = pqr.target().at(boundary_chart("pqr").boundary_position());
    try {
        return local_index(f, {0, 0, 0}, boundary);
    } catch (const Error& e) {
        throw Error(std::string("P3 is not accessible for this family: ") + e.what());
    }
}

ReductionReport ny_reduction_check(const FixtureSet& fixtures) {
    const VectorField& big = fixtures.field("coupled4");
    const VectorField& target = fixtures.field(kBaseField);
    const ContextPtr& ctx = big.context();
    const VarIndex x = ctx->index_of("x");
    const VarIndex b1 = ctx->index_of("b1");
    const Polynomial constraint = Polynomial::variable(ctx, x);

    ReductionReport out{restrict_to_manifold(big, constraint).residual, false, std::nullopt, {}, false, {}};
    const auto r = restrict_to_manifold(big.specialized({{b1, RationalExpr::constant(ctx, 0)}}), constraint);
    out.invariant = r.invariant;
    out.reduced = r.reduced;
    const VectorField& red = r.reduced;
    if (red.dimension() != target.dimension()) {
        out.mismatches.push_back("reduced system has the wrong dimension");
        return out;
    }

    // Coordinate renaming: the only one that carries the quadratic and
    // t-linear parts onto those of the target.
    std::vector<std::size_t> perm(red.dimension());
    std::iota(perm.begin(), perm.end(), 0);
    const auto target_dyn = dynamic_variables(target);
    do {
        Bindings coords;
        for (std::size_t k = 0; k < perm.size(); ++k)
            coords.emplace(red.coords()[k], RationalExpr(Polynomial::variable(ctx, target.coords()[perm[k]])));
        std::vector<RationalExpr> renamed(red.dimension(), RationalExpr(ctx));
        for (std::size_t k = 0; k < perm.size(); ++k)
            renamed[perm[k]] = substitute(red.rhs()[k], coords);
        bool same = true;
        std::vector<Polynomial> rc, tc;
        for (std::size_t i = 0; i < renamed.size() && same; ++i) {
            const Polynomial a = polynomial_rhs(renamed[i], "reduced rhs");
            const Polynomial b = polynomial_rhs(target.rhs()[i], "target rhs");
            rc.push_back(part_free_of(a, target_dyn));
            tc.push_back(part_free_of(b, target_dyn));
            same = a - rc.back() == b - tc.back();
        }
        if (!same)
            continue;
        for (std::size_t k = 0; k < perm.size(); ++k)
            out.renaming.emplace_back((*ctx)[red.coords()[k]].name, (*ctx)[target.coords()[perm[k]]].name);

        // Parameter renaming from the constant terms, each c * parameter.
        Bindings params;
        for (std::size_t i = 0; i < rc.size(); ++i) {
            if (rc[i].size() != 1 || tc[i].size() != 1 || rc[i].terms()[0].coeff != tc[i].terms()[0].coeff ||
                rc[i].total_degree() != 1 || tc[i].total_degree() != 1) {
                out.mismatches.push_back(coordinate_label(target, i) + ": constant " + to_string(rc[i]) +
                                         " cannot be renamed to " + to_string(tc[i]));
                continue;
            }
            const VarIndex from = rc[i].terms()[0].monomial.factors()[0].first;
            const VarIndex to = tc[i].terms()[0].monomial.factors()[0].first;
            params.emplace(from, RationalExpr(Polynomial::variable(ctx, to)));
            out.renaming.emplace_back((*ctx)[from].name, (*ctx)[to].name);
        }
        std::vector<RationalExpr> final_rhs;
        for (const auto& e : renamed)
            final_rhs.push_back(substitute(e, params));
        const auto diffs = compare_fields(VectorField("renamed", target.coords(), final_rhs), target);
        out.mismatches.insert(out.mismatches.end(), diffs.begin(), diffs.end());
        out.matched = out.mismatches.empty();
        return out;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.mismatches.push_back("no coordinate renaming matches the quadratic and t-linear parts");
    return out;
}

PainleveReport piv_reduction_check(const FixtureSet& fixtures) {
    const VectorField& base = fixtures.field(kBaseField);
    const ContextPtr& ctx = base.context();
    const VarIndex x = ctx->index_of("x");
    const Polynomial constraint = Polynomial::variable(ctx, x);
    PainleveReport out{restrict_to_manifold(base, constraint).residual, false, std::nullopt, false, {}, {}, false};
    const auto r =
        restrict_to_manifold(base.specialized({{ctx->index_of("a1"), RationalExpr::constant(ctx, 0)}}), constraint);
    out.invariant = r.invariant;
    out.reduced = r.reduced;
    out.mismatches = compare_fields(r.reduced, fixtures.field("piv"));
    out.matched = out.mismatches.empty();
    const RationalExpr& fx = base.rhs_for(x);
    if (fx.is_polynomial()) {
        for (auto& c : fx.numerator().coefficients_in(x))
            out.riccati_coefficients.emplace_back(std::move(c));
        out.riccati = out.riccati_coefficients.size() <= 3;
    }
    return out;
}

} // namespace phase_atlas
