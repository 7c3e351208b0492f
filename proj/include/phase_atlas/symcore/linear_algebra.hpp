#pragma once

#include <optional>
#include <vector>

#include "phase_atlas/symcore/polynomial.hpp"

namespace phase_atlas {

using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

struct RowEchelon {
    RationalMatrix rows;             // nonzero rows of the reduced echelon form
    std::vector<std::size_t> pivots; // pivot column of each row
    std::size_t columns = 0;
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.
RowEchelon reduced_row_echelon(RationalMatrix m, std::size_t columns);

/// Basis of {v : m v = 0}, one vector per free column, with that free
/// column set to 1 and the other free columns 0.
std::vector<RationalVector> nullspace(const RationalMatrix& m, std::size_t columns);

std::size_t rank(const RationalMatrix& m, std::size_t columns);

/// A solution of m x = b with free columns set to 0, or nullopt when the
/// system is inconsistent.
std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b,
                                    std::size_t columns);

} // namespace phase_atlas
