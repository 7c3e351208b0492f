#include "phase_atlas/symcore/linear_algebra.hpp"

#include <algorithm>

#include "phase_atlas/error.hpp"

namespace phase_atlas {

RowEchelon reduced_row_echelon(RationalMatrix m, std::size_t columns) {
    RowEchelon out;
    out.columns = columns;
    std::size_t row = 0;
    for (std::size_t col = 0; col < columns && row < m.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.size() && sgn(m[pivot][col]) == 0)
            ++pivot;
        if (pivot == m.size())
            continue;
        std::swap(m[row], m[pivot]);
        const Rational inv = 1 / m[row][col];
        for (auto& x : m[row])
            x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || sgn(m[r][col]) == 0)
                continue;
            const Rational f = m[r][col];
            for (std::size_t c = col; c < columns; ++c)
                m[r][c] -= f * m[row][c];
        }
        out.pivots.push_back(col);
        ++row;
    }
    m.resize(row);
    out.rows = std::move(m);
    return out;
}

std::vector<RationalVector> nullspace(const RationalMatrix& m, std::size_t columns) {
    RowEchelon e = reduced_row_echelon(m, columns);
    std::vector<bool> is_pivot(columns, false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector<RationalVector> basis;
    for (std::size_t free = 0; free < columns; ++free) {
        if (is_pivot[free])
            continue;
        RationalVector v(columns, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < e.rows.size(); ++r)
            v[e.pivots[r]] = -e.rows[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rank(const RationalMatrix& m, std::size_t columns) {
    return reduced_row_echelon(m, columns).rows.size();
}

std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b,
                                    std::size_t columns) {
    if (b.size() != m.size())
        throw Error("right-hand side length differs from the row count");
    RationalMatrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) {
        aug[i].resize(columns);
        aug[i].push_back(b[i]);
    }
    const RowEchelon e = reduced_row_echelon(std::move(aug), columns + 1);
    RationalVector x(columns, Rational(0));
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] == columns)
            return std::nullopt;
        x[e.pivots[r]] = e.rows[r][columns];
    }
    return x;
}

} // namespace phase_atlas
