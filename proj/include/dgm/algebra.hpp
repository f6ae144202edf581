#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dgm/monad.hpp"

namespace dgm {

/// A finite-dimensional associative unital algebra by structure constants:
/// a_s a_t = sum_u mult[s][t][u] a_u.
struct AlgebraPresentation {
    Field field;
    std::size_t dim = 0;
    std::vector<std::vector<Vector>> mult;
    Vector unit;
    std::string name = "A";

    AlgebraPresentation(Field f, std::size_t n, std::string nm = "A")
        : field(f), dim(n), mult(n, std::vector<Vector>(n, Vector(f, n))), unit(f, n), name(std::move(nm)) {}

    Vector product(const Vector& x, const Vector& y) const {
        Vector out(field, dim);
        for (std::size_t s = 0; s < dim; ++s)
            if (!x[s].is_zero())
                for (std::size_t t = 0; t < dim; ++t)
                    if (!y[t].is_zero()) out.axpy(x[s] * y[t], mult[s][t]);
        return out;
    }

    /// Matrix of left multiplication by x.
    Matrix left(const Vector& x) const {
        return matrix_of(field, dim, dim, [&](const Vector& y) { return product(x, y); });
    }
    Matrix right(const Vector& x) const {
        return matrix_of(field, dim, dim, [&](const Vector& y) { return product(y, x); });
    }
};

inline VerdictReport validate_algebra(const AlgebraPresentation& A) {
    VerdictReport rep("algebra " + A.name, A.field.name());
    const Field f = A.field;
    json wa = nullptr, wu = nullptr;
    bool shape = A.unit.size() == A.dim && A.mult.size() == A.dim;
    for (const auto& row : A.mult) {
        shape = shape && row.size() == A.dim;
        for (const auto& v : row) shape = shape && v.size() == A.dim;
    }
    rep.add("shape", shape);
    if (!shape) return rep;
    for (std::size_t s = 0; s < A.dim && wa.is_null(); ++s)
        for (std::size_t t = 0; t < A.dim && wa.is_null(); ++t)
            for (std::size_t u = 0; u < A.dim; ++u) {
                const Vector es = Vector::unit(f, A.dim, s), et = Vector::unit(f, A.dim, t), eu = Vector::unit(f, A.dim, u);
                if (A.product(A.product(es, et), eu) != A.product(es, A.product(et, eu))) {
                    wa = json{{"basis", {s, t, u}}};
                    break;
                }
            }
    rep.add("associativity", wa.is_null(), "", wa);
    for (std::size_t s = 0; s < A.dim && wu.is_null(); ++s) {
        const Vector es = Vector::unit(f, A.dim, s);
        if (A.product(A.unit, es) != es || A.product(es, A.unit) != es) wu = json{{"basis", s}};
    }
    rep.add("unit", wu.is_null(), "", wu);
    return rep;
}

inline AlgebraPresentation ground_algebra(Field f) {
    AlgebraPresentation A(f, 1, "k");
    A.mult[0][0] = Vector::unit(f, 1, 0);
    A.unit = Vector::unit(f, 1, 0);
    return A;
}

/// k[X]/(X^2) with basis 1, X.
inline AlgebraPresentation dual_numbers(Field f) {
    AlgebraPresentation A(f, 2, "k[X]/(X^2)");
    A.mult[0][0] = Vector::unit(f, 2, 0);
    A.mult[0][1] = Vector::unit(f, 2, 1);
    A.mult[1][0] = Vector::unit(f, 2, 1);
    A.unit = Vector::unit(f, 2, 0);
    return A;
}

/// k[X]/(X^2 - c).
inline AlgebraPresentation quadratic_algebra(Field f, const Scalar& c) {
    AlgebraPresentation A(f, 2, "k[X]/(X^2-" + c.to_string() + ")");
    A.mult[0][0] = Vector::unit(f, 2, 0);
    A.mult[0][1] = Vector::unit(f, 2, 1);
    A.mult[1][0] = Vector::unit(f, 2, 1);
    A.mult[1][1] = Vector::unit(f, 2, 0) * c;
    A.unit = Vector::unit(f, 2, 0);
    return A;
}

/// k x k with orthogonal idempotents.
inline AlgebraPresentation split_algebra(Field f) {
    AlgebraPresentation A(f, 2, "k x k");
    A.mult[0][0] = Vector::unit(f, 2, 0);
    A.mult[1][1] = Vector::unit(f, 2, 1);
    A.unit = Vector(f, {Scalar::one(f), Scalar::one(f)});
    return A;
}

/// F_{p^n} as an F_p-algebra with basis 1, x, ..., x^{n-1}.
inline AlgebraPresentation field_extension_algebra(long long p, int n) {
    if (n < 1) throw InvalidInput("extension degree must be positive");
    const Field k = Field::prime(p);
    const Field l = Field::extension(p, Field::conway_like_modulus(p, n));
    AlgebraPresentation A(k, static_cast<std::size_t>(n), "F_" + std::to_string(p) + "^" + std::to_string(n));
    auto coords = [&](const Scalar& x) {
        Vector v(k, n);
        const auto cs = x.coefficients();
        for (std::size_t i = 0; i < cs.size() && i < std::size_t(n); ++i) v[i] = Scalar(k, static_cast<long long>(cs[i]));
        return v;
    };
    auto power = [&](int e) {
        std::vector<std::uint64_t> c(static_cast<std::size_t>(n), 0);
        if (n == 1) return Scalar::one(l);
        c[static_cast<std::size_t>(e)] = 1;
        return Scalar::from_coefficients(l, c);
    };
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) A.mult[s][t] = coords(power(s) * power(t));
    A.unit = Vector::unit(k, n, 0);
    return A;
}

/// The group algebra k[G] from a multiplication table, basis in element order.
inline AlgebraPresentation group_algebra(Field f, const std::vector<std::vector<std::size_t>>& table) {
    const std::size_t n = table.size();
    AlgebraPresentation A(f, n, "k[G]");
    std::size_t e = n;
    for (std::size_t g = 0; g < n && e == n; ++g) {
        bool ok = true;
        for (std::size_t h = 0; h < n; ++h) ok = ok && table[g][h] == h && table[h][g] == h;
        if (ok) e = g;
    }
    if (e == n) throw InvalidInput("group table has no identity");
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h) A.mult[g][h] = Vector::unit(f, n, table[g][h]);
    A.unit = Vector::unit(f, n, e);
    return A;
}

/// A1 (x) A2 with basis a_s (x) b_t at index s * n2 + t.
inline AlgebraPresentation tensor_algebra(const AlgebraPresentation& A1, const AlgebraPresentation& A2) {
    if (A1.field != A2.field) throw FieldMismatch();
    const Field f = A1.field;
    const std::size_t n1 = A1.dim, n2 = A2.dim, n = n1 * n2;
    AlgebraPresentation T(f, n, A1.name + " (x) " + A2.name);
    for (std::size_t s = 0; s < n1; ++s)
        for (std::size_t t = 0; t < n2; ++t)
            for (std::size_t s2 = 0; s2 < n1; ++s2)
                for (std::size_t t2 = 0; t2 < n2; ++t2) {
                    Vector v(f, n);
                    const auto& x = A1.mult[s][s2];
                    const auto& y = A2.mult[t][t2];
                    for (std::size_t u = 0; u < n1; ++u)
                        for (std::size_t w = 0; w < n2; ++w) v[u * n2 + w] = x[u] * y[w];
                    T.mult[s * n2 + t][s2 * n2 + t2] = std::move(v);
                }
    for (std::size_t u = 0; u < n1; ++u)
        for (std::size_t w = 0; w < n2; ++w) T.unit[u * n2 + w] = A1.unit[u] * A2.unit[w];
    return T;
}

/// Upper triangular 2x2 matrices with basis e11, e12, e22.
inline AlgebraPresentation upper_triangular_algebra(Field f) {
    AlgebraPresentation A(f, 3, "T2");
    A.mult[0][0] = Vector::unit(f, 3, 0);
    A.mult[0][1] = Vector::unit(f, 3, 1);
    A.mult[1][2] = Vector::unit(f, 3, 1);
    A.mult[2][2] = Vector::unit(f, 3, 2);
    A.unit = Vector::unit(f, 3, 0) + Vector::unit(f, 3, 2);
    return A;
}

/// A^op: a_s * a_t = a_t a_s.
inline AlgebraPresentation opposite_algebra(const AlgebraPresentation& A) {
    AlgebraPresentation O(A.field, A.dim, A.name + "^op");
    for (std::size_t s = 0; s < A.dim; ++s)
        for (std::size_t t = 0; t < A.dim; ++t) O.mult[s][t] = A.mult[t][s];
    O.unit = A.unit;
    return O;
}

/// One object "k" with End = k in degree 0.
inline std::shared_ptr<FiniteDgCategory> field_category(Field f, Grading g = Grading::Z, const std::string& name = "k") {
    auto C = std::make_shared<FiniteDgCategory>(f, g, std::vector<std::string>{name});
    C->set_hom(0, 0, DgSpace(f, g, {0}));
    C->set_compose(0, 0, 0, 0, 0, Vector::unit(f, 1, 0));
    C->set_identity(0, Vector::unit(f, 1, 0));
    return C;
}

/// One object with End = A concentrated in degree 0.
inline std::shared_ptr<FiniteDgCategory> algebra_category(const AlgebraPresentation& A, Grading g = Grading::Z,
                                                          const std::string& name = "L") {
    const Field f = A.field;
    auto C = std::make_shared<FiniteDgCategory>(f, g, std::vector<std::string>{name});
    C->set_hom(0, 0, DgSpace(f, g, std::vector<int>(A.dim, 0)));
    for (std::size_t s = 0; s < A.dim; ++s)
        for (std::size_t t = 0; t < A.dim; ++t)
            if (!A.mult[s][t].is_zero()) C->set_compose(0, 0, 0, s, t, A.mult[s][t]);
    C->set_identity(0, A.unit);
    return C;
}

/// A (x) - on twisted complexes over the one-object field category. M(k) has
/// one entry per basis element; the entry t * n + s of MM(k) is a_s (x) a_t.
inline PretrMonad algebra_monad(const AlgebraPresentation& A, const TwistedCatPtr& P) {
    auto fin = dynamic_cast<const FiniteDgCategory*>(&P->base());
    if (!fin || fin->size() != 1 || fin->hom_dim(0, 0) != 1) throw InvalidInput("algebra monads live over the field category");
    if (A.field != P->field()) throw FieldMismatch();
    if (!validate_algebra(A).passed()) throw InvalidInput("algebra '" + A.name + "' fails its axioms");
    const std::size_t n = A.dim;
    const Field f = A.field;
    auto M = PretrFunctor(
        P, P,
        [n](ObjId) {
            TwistedComplex T;
            for (std::size_t s = 0; s < n; ++s) T.entries.emplace_back(0, 0);
            return T;
        },
        [P, n](ObjId, ObjId, const Vector& c) {
            const ObjId Mk = P->add([&] {
                TwistedComplex T;
                for (std::size_t s = 0; s < n; ++s) T.entries.emplace_back(0, 0);
                return T;
            }());
            Vector out(P->field(), P->hom_dim(Mk, Mk));
            for (std::size_t s = 0; s < n; ++s) P->add_block(Mk, Mk, out, s, s, c);
            return out;
        },
        A.name + "(x)-");
    const ObjId Mk = M.base_image(0);
    const ObjId MMk = M.apply(Mk);
    return make_pretr_monad(
        P, M,
        [P, A, Mk, MMk, n, f](ObjId) {
            Vector out(f, P->hom_dim(MMk, Mk));
            for (std::size_t t = 0; t < n; ++t)
                for (std::size_t s = 0; s < n; ++s)
                    for (std::size_t u = 0; u < n; ++u)
                        if (!A.mult[s][t][u].is_zero())
                            P->add_block(MMk, Mk, out, u, t * n + s, Vector(f, {A.mult[s][t][u]}));
            return out;
        },
        [P, A, Mk, n, f](ObjId) {
            const ObjId k = P->single(0);
            Vector out(f, P->hom_dim(k, Mk));
            for (std::size_t u = 0; u < n; ++u)
                if (!A.unit[u].is_zero()) P->add_block(k, Mk, out, u, 0, Vector(f, {A.unit[u]}));
            return out;
        },
        A.name + "(x)-");
}

}  // namespace dgm
