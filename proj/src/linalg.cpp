#include "jointslab/linalg.hpp"

namespace jointslab {

namespace {

void check_rows(const std::vector<Vec>& rows, std::size_t cols) {
    for (const auto& r : rows)
        if (r.size() != cols)
            fail(ErrorKind::DimensionMismatch,
                 "row of length " + std::to_string(r.size()) + " in a system with " +
                     std::to_string(cols) + " columns");
}

// Plain residues are much faster than variant scalars for the modular case.
RowEchelon reduce_mod_p(Field f, const std::vector<Vec>& rows, std::size_t cols) {
    const std::uint64_t p = f.modulus();
    std::vector<std::vector<std::uint64_t>> m(rows.size(), std::vector<std::uint64_t>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = rows[i][j].residue();

    auto inv = [p](std::uint64_t a) {
        std::uint64_t result = 1, base = a, e = p - 2;
        while (e) {
            if (e & 1) result = result * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return result;
    };

    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        std::uint64_t s = inv(m[r][c]);
        for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * s % p;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            std::uint64_t factor = m[i][c];
            for (std::size_t j = c; j < cols; ++j) {
                if (m[r][j] == 0) continue;
                m[i][j] = (m[i][j] + (p - factor) * m[r][j]) % p;
            }
        }
        pivots.push_back(c);
        ++r;
    }

    RowEchelon out{f, cols, r, pivots, {}};
    for (std::size_t i = 0; i < r; ++i) {
        Vec row;
        row.reserve(cols);
        for (std::size_t j = 0; j < cols; ++j) row.emplace_back(f, static_cast<long>(m[i][j]));
        out.rows.push_back(std::move(row));
    }
    return out;
}

RowEchelon reduce_generic(Field f, std::vector<Vec> m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c].is_zero()) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        Scalar s = m[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= s;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Scalar factor = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (!m[r][j].is_zero()) m[i][j] -= factor * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return RowEchelon{f, cols, r, pivots, std::move(m)};
}

}  // namespace

RowEchelon row_reduce(Field f, std::vector<Vec> rows, std::size_t cols) {
    check_rows(rows, cols);
    if (f.is_prime()) return reduce_mod_p(f, rows, cols);
    return reduce_generic(f, std::move(rows), cols);
}

std::size_t rank(Field f, const std::vector<Vec>& rows, std::size_t cols) {
    return row_reduce(f, rows, cols).rank;
}

std::size_t nullspace_dimension(Field f, const std::vector<Vec>& rows, std::size_t cols) {
    if (rows.empty()) return cols;
    return cols - rank(f, rows, cols);
}

std::vector<Vec> nullspace_basis(Field f, const std::vector<Vec>& rows, std::size_t cols) {
    RowEchelon e = row_reduce(f, rows, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vec v = zero_vec(f, cols);
        v[free] = Scalar::one(f);
        for (std::size_t i = 0; i < e.rank; ++i) v[e.pivots[i]] = -e.rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve_square(Field f, const std::vector<Vec>& a, const Vec& b) {
    const std::size_t n = a.size();
    if (b.size() != n) fail(ErrorKind::DimensionMismatch, "right-hand side length mismatch");
    std::vector<Vec> aug;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) fail(ErrorKind::DimensionMismatch, "matrix is not square");
        Vec row = a[i];
        row.push_back(b[i]);
        aug.push_back(std::move(row));
    }
    RowEchelon e = row_reduce(f, std::move(aug), n + 1);
    if (e.rank != n || (n > 0 && e.pivots.back() != n - 1)) return std::nullopt;
    Vec x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(e.rows[i][n]);
    return x;
}

Scalar dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) fail(ErrorKind::DimensionMismatch, "dot product length mismatch");
    if (a.empty()) fail(ErrorKind::InvalidArgument, "empty dot product has no field");
    Scalar s(a[0].field());
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace jointslab
