#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dgm/linalg.hpp"
#include "dgm/verdict.hpp"

namespace dgm {

enum class Grading { Z, Z2 };

inline const char* to_string(Grading g) { return g == Grading::Z ? "Z" : "Z2"; }

/// Canonical representative of a degree in the grading group.
inline int reduce_degree(Grading g, int n) {
    if (g == Grading::Z) return n;
    return ((n % 2) + 2) % 2;
}

/// (-1)^n, computed from the parity so it is meaningful for both gradings.
inline int koszul(int n) { return (n % 2 == 0) ? 1 : -1; }

inline Scalar signed_one(Field f, int n) { return Scalar(f, koszul(n)); }

/// A finite-dimensional graded space with a chosen homogeneous basis and a
/// degree +1 differential. Column j of d is d(e_j).
struct DgSpace {
    Field field;
    Grading grading = Grading::Z;
    std::vector<int> degrees;
    Matrix d;

    DgSpace(Field f, Grading g, std::vector<int> degs)
        : field(f), grading(g), degrees(std::move(degs)), d(f, degrees.size(), degrees.size()) {
        for (auto& n : degrees) n = reduce_degree(g, n);
    }
    DgSpace(Field f, Grading g, std::vector<int> degs, Matrix diff)
        : field(f), grading(g), degrees(std::move(degs)), d(std::move(diff)) {
        for (auto& n : degrees) n = reduce_degree(g, n);
        if (d.rows() != degrees.size() || d.cols() != degrees.size())
            throw DimensionMismatch("differential must be square of the space dimension");
        if (d.field() != f) throw FieldMismatch();
        for (std::size_t i = 0; i < degrees.size(); ++i)
            for (std::size_t j = 0; j < degrees.size(); ++j)
                if (!d(i, j).is_zero() && degrees[i] != reduce_degree(g, degrees[j] + 1))
                    throw InvalidInput("differential does not raise degree by one");
    }

    std::size_t dim() const { return degrees.size(); }

    std::vector<std::size_t> indices_in(int n) const {
        n = reduce_degree(grading, n);
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < degrees.size(); ++i)
            if (degrees[i] == n) out.push_back(i);
        return out;
    }

    std::size_t dim_in(int n) const { return indices_in(n).size(); }

    std::set<int> support() const { return {degrees.begin(), degrees.end()}; }

    /// d restricted to degree n -> n+1, in local coordinates.
    Matrix d_block(int n) const { return d.submatrix(indices_in(n + 1), indices_in(n)); }

    Vector apply_d(const Vector& v) const { return d * v; }

    Vector zero() const { return Vector(field, dim()); }

    /// Embed local coordinates of degree n into the full space.
    Vector embed(int n, const Vector& local) const {
        Vector v(field, dim());
        const auto idx = indices_in(n);
        for (std::size_t k = 0; k < idx.size(); ++k) v[idx[k]] = local[k];
        return v;
    }
    Vector restrict(int n, const Vector& full) const {
        const auto idx = indices_in(n);
        Vector v(field, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) v[k] = full[idx[k]];
        return v;
    }

    /// True when v is supported in degree n only.
    bool is_homogeneous(const Vector& v, int n) const {
        n = reduce_degree(grading, n);
        for (std::size_t i = 0; i < dim(); ++i)
            if (!v[i].is_zero() && degrees[i] != n) return false;
        return true;
    }
};

inline VerdictReport validate_dg(const DgSpace& V) {
    VerdictReport rep("dg-space", V.field.name());
    const Matrix dd = V.d * V.d;
    std::optional<int> bad;
    for (std::size_t j = 0; j < V.dim() && !bad; ++j)
        if (!dd.column(j).is_zero()) bad = V.degrees[j];
    json w = nullptr;
    if (bad) w = json{{"degree", *bad}};
    rep.add("d_squared_zero", !bad, bad ? "d o d nonzero starting in degree " + std::to_string(*bad) : "", w);
    return rep;
}

struct Cohomology {
    std::size_t dim = 0;
    std::vector<Vector> representatives;  // full-space coordinates
};

namespace detail {

// Cocycles in degree n (full coordinates) and coboundaries hitting degree n.
inline std::vector<Vector> cocycles(const DgSpace& V, int n) {
    std::vector<Vector> out;
    for (const auto& k : kernel_basis(V.d_block(n))) out.push_back(V.embed(n, k));
    return out;
}

inline std::vector<Vector> coboundaries(const DgSpace& V, int n) {
    std::vector<Vector> out;
    const Matrix b = V.d_block(n - 1);
    for (const auto& c : column_space_basis(b)) out.push_back(V.embed(n, c));
    return out;
}

}  // namespace detail

/// Basis of H^n with a coordinate map from cocycles to classes.
class CohomologyBasis {
public:
    CohomologyBasis(const DgSpace& V, int n) : field_(V.field), n_(n), full_dim_(V.dim()) {
        idx_ = V.indices_in(n);
        const auto B = detail::coboundaries(V, n);
        const auto Z = detail::cocycles(V, n);
        std::vector<Vector> span;
        for (const auto& b : B) span.push_back(V.restrict(n, b));
        const std::size_t nb = span.size();
        // Extend a basis of B^n to one of Z^n.
        std::vector<Vector> cand = span;
        for (const auto& z : Z) cand.push_back(V.restrict(n, z));
        const Matrix M = Matrix::from_columns(field_, idx_.size(), cand);
        std::vector<Vector> reps_local;
        for (auto c : independent_columns(M)) {
            if (c < nb) continue;
            reps_local.push_back(cand[c]);
        }
        for (const auto& r : reps_local) reps_.push_back(V.embed(n, r));
        std::vector<Vector> cols = reps_local;
        cols.insert(cols.end(), span.begin(), span.end());
        if (!cols.empty()) left_ = left_inverse(Matrix::from_columns(field_, idx_.size(), cols));
    }

    /// Uses the given cocycles as representatives; they must form a basis of H^n.
    CohomologyBasis(const DgSpace& V, int n, const std::vector<Vector>& reps)
        : field_(V.field), n_(n), full_dim_(V.dim()) {
        idx_ = V.indices_in(n);
        const CohomologyBasis canon(V, n);
        if (reps.size() != canon.dim()) throw InvalidInput("representatives do not match the cohomology dimension");
        for (const auto& r : reps)
            if (!V.is_homogeneous(r, n) || !V.apply_d(r).is_zero())
                throw InvalidInput("representative is not a cocycle of the stated degree");
        std::vector<Vector> cols;
        for (const auto& r : reps) cols.push_back(V.restrict(n, r));
        for (const auto& b : detail::coboundaries(V, n)) cols.push_back(V.restrict(n, b));
        if (!cols.empty()) {
            const Matrix M = Matrix::from_columns(field_, idx_.size(), cols);
            if (rank(M) != cols.size()) throw InvalidInput("representatives are dependent modulo coboundaries");
            left_ = left_inverse(M);
        }
        reps_ = reps;
    }

    std::size_t dim() const { return reps_.size(); }
    const std::vector<Vector>& representatives() const { return reps_; }
    int degree() const { return n_; }

    /// Class coordinates of a cocycle of degree n.
    Vector class_of(const Vector& z) const {
        Vector out(field_, dim());
        if (!left_) return out;
        Vector local(field_, idx_.size());
        for (std::size_t k = 0; k < idx_.size(); ++k) local[k] = z[idx_[k]];
        const Vector c = *left_ * local;
        for (std::size_t k = 0; k < dim(); ++k) out[k] = c[k];
        return out;
    }

    /// Linear map from class coordinates to a cocycle representative.
    Vector lift(const Vector& c) const {
        Vector v(field_, full_dim_);
        for (std::size_t k = 0; k < dim(); ++k) v.axpy(c[k], reps_[k]);
        return v;
    }

    /// Matrix taking full coordinates (restricted to cocycles) to class coordinates.
    Matrix class_matrix() const {
        Matrix m(field_, dim(), full_dim_);
        if (!left_) return m;
        for (std::size_t k = 0; k < dim(); ++k)
            for (std::size_t j = 0; j < idx_.size(); ++j) m(k, idx_[j]) = (*left_)(k, j);
        return m;
    }

private:
    Field field_;
    int n_;
    std::size_t full_dim_;
    std::vector<std::size_t> idx_;
    std::vector<Vector> reps_;
    std::optional<Matrix> left_;
};

inline Cohomology cohomology_at(const DgSpace& V, int n) {
    CohomologyBasis hb(V, n);
    return {hb.dim(), hb.representatives()};
}

struct CoboundaryResult {
    std::optional<Vector> primitive;    // g with d g = z, full coordinates
    std::optional<Vector> certificate;  // y with y d = 0 on degree n-1, y z != 0 (local to degree n)

    bool found() const { return primitive.has_value(); }
};

/// Decide whether the degree-n cocycle z is a coboundary.
inline CoboundaryResult is_coboundary(const DgSpace& V, const Vector& z, int n) {
    if (!V.is_homogeneous(z, n)) throw InvalidInput("element is not homogeneous of the stated degree");
    if (!V.apply_d(z).is_zero()) throw InvalidInput("is_coboundary requires a closed element");
    const Matrix A = V.d_block(n - 1);
    const Vector b = V.restrict(n, z);
    CoboundaryResult out;
    if (A.rows() == 0) {
        out.primitive = V.zero();
        return out;
    }
    auto sol = solve_affine(A, b);
    if (sol.feasible())
        out.primitive = V.embed(n - 1, *sol.solution);
    else
        out.certificate = sol.certificate;
    return out;
}

/// Euler characteristic from dimensions (Z grading).
inline long long euler_characteristic(const DgSpace& V) {
    long long chi = 0;
    for (int n : V.degrees) chi += koszul(n);
    return chi;
}

inline long long cohomology_euler_characteristic(const DgSpace& V) {
    long long chi = 0;
    for (int n : V.support()) chi += koszul(n) * static_cast<long long>(cohomology_at(V, n).dim);
    return chi;
}

}  // namespace dgm
