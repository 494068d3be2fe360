#ifndef JOINTSLAB_LINALG_HPP
#define JOINTSLAB_LINALG_HPP

#include <optional>
#include <vector>

#include "jointslab/scalar.hpp"

namespace jointslab {

// Reduced row echelon form of a row list.
struct RowEchelon {
    Field field;
    std::size_t cols = 0;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    std::vector<Vec> rows;  // the `rank` nonzero RREF rows
};

RowEchelon row_reduce(Field f, std::vector<Vec> rows, std::size_t cols);

std::size_t rank(Field f, const std::vector<Vec>& rows, std::size_t cols);

// Dimension of {x : r.x = 0 for every row r}; an empty row list gives `cols`.
std::size_t nullspace_dimension(Field f, const std::vector<Vec>& rows, std::size_t cols);

std::vector<Vec> nullspace_basis(Field f, const std::vector<Vec>& rows, std::size_t cols);

// Solves A x = b for square A; nullopt when A is singular.
std::optional<Vec> solve_square(Field f, const std::vector<Vec>& a, const Vec& b);

Scalar dot(const Vec& a, const Vec& b);

}  // namespace jointslab

#endif
