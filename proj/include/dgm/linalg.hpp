#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "dgm/matrix.hpp"

namespace dgm {

struct Echelon {
    Matrix rref;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

namespace detail {

inline Echelon rref_field(Matrix m) {
    const Field f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, r);
        const Scalar inv = m(r, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j)
            if (!m(r, j).is_zero()) m(r, j) = m(r, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            const Scalar t = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(r, j).is_zero()) m(i, j) -= t * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    (void)f;
    return {std::move(m), std::move(pivots)};
}

// Fraction-free forward elimination (Bareiss) on an integer image of the
// matrix, followed by a rational back-substitution to reach the RREF.
inline Echelon rref_rational(const Matrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<BigInt>> a(R, std::vector<BigInt>(C));
    for (std::size_t i = 0; i < R; ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < C; ++j) {
            const auto& q = std::get<Rational>(m(i, j).value());
            const BigInt den = denominator(q);
            l = l / boost::multiprecision::gcd(l, den) * den;
        }
        for (std::size_t j = 0; j < C; ++j) {
            const auto& q = std::get<Rational>(m(i, j).value());
            a[i][j] = numerator(q) * (l / denominator(q));
        }
    }
    std::vector<std::size_t> pivots;
    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t p = r;
        while (p < R && a[p][c] == 0) ++p;
        if (p == R) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < R; ++i) {
            for (std::size_t j = c + 1; j < C; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[r][c];
        pivots.push_back(c);
        ++r;
    }
    const Field Q = Field::rationals();
    Matrix out(Q, R, C);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        const BigInt& piv = a[i][pivots[i]];
        for (std::size_t j = 0; j < C; ++j)
            if (a[i][j] != 0) out(i, j) = Scalar::rational(make_rational(a[i][j], piv));
    }
    for (std::size_t k = pivots.size(); k-- > 0;) {
        const std::size_t c = pivots[k];
        for (std::size_t i = 0; i < k; ++i) {
            if (out(i, c).is_zero()) continue;
            const Scalar t = out(i, c);
            for (std::size_t j = c; j < C; ++j)
                if (!out(k, j).is_zero()) out(i, j) -= t * out(k, j);
        }
    }
    return {std::move(out), std::move(pivots)};
}

}  // namespace detail

/// Reduced row echelon form. Exact; the result is unique, so the choice of
/// elimination strategy is invisible to callers.
inline Echelon row_reduce(const Matrix& m) {
    if (m.field().kind() == FieldKind::rationals) return detail::rref_rational(m);
    return detail::rref_field(m);
}

inline std::size_t rank(const Matrix& m) { return row_reduce(m).pivots.size(); }

namespace detail {

inline std::vector<Vector> kernel_from_rref(const Echelon& e, std::size_t n) {
    const Field f = e.rref.field();
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots)
        if (p < n) is_pivot[p] = true;
    std::vector<Vector> out;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        Vector v(f, n);
        v[free] = Scalar::one(f);
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            if (e.pivots[r] < n) v[e.pivots[r]] = -e.rref(r, free);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace detail

inline std::vector<Vector> kernel_basis(const Matrix& m) {
    return detail::kernel_from_rref(row_reduce(m), m.cols());
}

struct AffineSolution {
    std::optional<Vector> solution;
    std::vector<Vector> kernel;
    std::optional<Vector> certificate;  // y with y^T A = 0 and y^T b != 0

    bool feasible() const { return solution.has_value(); }
};

/// Solve A x = b. On failure a certificate y with y^T A = 0, y^T b != 0 is
/// returned instead of a solution.
inline AffineSolution solve_affine(const Matrix& A, const Vector& b) {
    if (A.field() != b.field()) throw FieldMismatch();
    if (A.rows() != b.size()) throw DimensionMismatch("right-hand side length differs from row count");
    const Field f = A.field();
    const std::size_t m = A.rows(), n = A.cols();
    Matrix aug(f, m, n + 1);
    aug.set_block(0, 0, A);
    for (std::size_t i = 0; i < m; ++i) aug(i, n) = b[i];
    Echelon e = row_reduce(aug);
    AffineSolution out;
    const bool infeasible = std::find(e.pivots.begin(), e.pivots.end(), n) != e.pivots.end();
    if (!infeasible) {
        Vector x(f, n);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.rref(r, n);
        out.solution = std::move(x);
        out.kernel = detail::kernel_from_rref(e, n);
        return out;
    }
    Matrix full(f, m, n + 1 + m);
    full.set_block(0, 0, aug);
    full.set_block(0, n + 1, Matrix::identity(f, m));
    Echelon g = row_reduce(full);
    for (std::size_t r = 0; r < g.pivots.size(); ++r) {
        if (g.pivots[r] == n) {
            Vector y(f, m);
            for (std::size_t i = 0; i < m; ++i) y[i] = g.rref(r, n + 1 + i);
            out.certificate = std::move(y);
            break;
        }
    }
    if (!out.certificate) throw InternalError("infeasible system without certificate");
    out.kernel = detail::kernel_from_rref(g, n);
    return out;
}

/// Indices of a maximal independent set of columns, chosen greedily left to right.
inline std::vector<std::size_t> independent_columns(const Matrix& m) { return row_reduce(m).pivots; }

inline std::vector<Vector> column_space_basis(const Matrix& m) {
    std::vector<Vector> out;
    for (auto c : independent_columns(m)) out.push_back(m.column(c));
    return out;
}

/// L with L * P = I for P of full column rank.
inline Matrix left_inverse(const Matrix& P) {
    const Field f = P.field();
    const std::size_t n = P.rows(), k = P.cols();
    Matrix aug(f, n, k + n);
    aug.set_block(0, 0, P);
    aug.set_block(0, k, Matrix::identity(f, n));
    Echelon e = row_reduce(aug);
    if (e.pivots.size() < k || (k > 0 && e.pivots[k - 1] != k - 1))
        throw InternalError("left_inverse of a rank-deficient matrix");
    return e.rref.block(0, k, k, n);
}

inline bool in_span(const std::vector<Vector>& basis, const Vector& v) {
    if (basis.empty()) return v.is_zero();
    return solve_affine(Matrix::from_columns(v.field(), v.size(), basis), v).feasible();
}

/// Solve residual(x) = 0 for a residual that is affine in x in k^n. The
/// system is recovered by probing the residual at 0 and at unit vectors.
inline AffineSolution solve_affine_fn(Field f, std::size_t n, const std::function<Vector(const Vector&)>& residual) {
    const Vector r0 = residual(Vector(f, n));
    Matrix A(f, r0.size(), n);
    for (std::size_t k = 0; k < n; ++k) A.set_column(k, residual(Vector::unit(f, n, k)) - r0);
    return solve_affine(A, -r0);
}

/// The matrix of a linear map given as a function, probed on unit vectors.
inline Matrix matrix_of(Field f, std::size_t n, std::size_t m, const std::function<Vector(const Vector&)>& fn) {
    Matrix A(f, m, n);
    for (std::size_t k = 0; k < n; ++k) A.set_column(k, fn(Vector::unit(f, n, k)));
    return A;
}

}  // namespace dgm
