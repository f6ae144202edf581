#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dgm/algebra.hpp"
#include "dgm/em.hpp"
#include "dgm/h0.hpp"
#include "dgm/monad.hpp"

namespace dgm::testing {

using Rng = std::mt19937_64;

inline Scalar random_scalar(Field f, Rng& rng) {
    if (f.kind() == FieldKind::rationals) return Scalar(f, static_cast<long long>(rng() % 5) - 2);
    const auto els = field_elements(f);
    return els[rng() % els.size()];
}

inline Vector random_vector(Field f, std::size_t n, Rng& rng) {
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_scalar(f, rng));
    return Vector(f, std::move(v));
}

inline Matrix random_matrix(Field f, std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = random_scalar(f, rng);
    return m;
}

/// Calls visit on every vector of F^n until it returns true. Returns whether
/// some call returned true.
inline bool enumerate(Field f, std::size_t n, const std::function<bool(const Vector&)>& visit) {
    const auto els = field_elements(f);
    std::vector<std::size_t> idx(n, 0);
    Vector v(f, n);
    while (true) {
        if (visit(v)) return true;
        std::size_t k = 0;
        while (k < n && ++idx[k] == els.size()) {
            idx[k] = 0;
            v[k] = els[0];
            ++k;
        }
        if (k == n) return false;
        v[k] = els[idx[k]];
    }
}

/// Vectors of F^n supported on the given coordinates.
inline bool enumerate_on(Field f, std::size_t n, const std::vector<std::size_t>& support,
                         const std::function<bool(const Vector&)>& visit) {
    return enumerate(f, support.size(), [&](const Vector& loc) {
        Vector v(f, n);
        for (std::size_t k = 0; k < support.size(); ++k) v[support[k]] = loc[k];
        return visit(v);
    });
}

/// A random unital algebra of dimension at most two.
inline AlgebraPresentation random_small_algebra(Field f, Rng& rng) {
    switch (rng() % 5) {
        case 0: return ground_algebra(f);
        case 1: return dual_numbers(f);
        case 2: return split_algebra(f);
        default: return quadratic_algebra(f, random_scalar(f, rng));
    }
}

/// A random depth-1 twisted complex over the base of P with at most max_len
/// entries: no entry is both the source and the target of a twist block, so
/// q q = 0 and Maurer-Cartan reduces to closedness of the blocks. Shifts are
/// mostly chosen so that some earlier entry admits a block of a degree that
/// carries cocycles.
inline ObjId random_twisted(const TwistedCategory& P, Rng& rng, std::size_t max_len = 3, int max_shift = 1) {
    const auto& C = P.base();
    const auto objs = base_objects(P);
    const Field f = P.field();
    const std::size_t len = 1 + rng() % max_len;
    TwistedComplex T;
    for (std::size_t i = 0; i < len; ++i) {
        const ObjId A = objs[rng() % objs.size()];
        int r = static_cast<int>(rng() % (2 * max_shift + 1)) - max_shift;
        if (i > 0 && rng() % 3) {
            const std::size_t j = rng() % i;
            const auto& h = C.hom(T.entries[j].first, A);
            std::vector<int> degs;
            for (int e : h.support())
                if (!dgm::detail::cocycles(h, e).empty()) degs.push_back(e);
            if (!degs.empty()) r = T.entries[j].second + degs[rng() % degs.size()] - 1;
        }
        T.entries.push_back({A, r});
    }
    std::vector<bool> source(len, false), target(len, false);
    for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            if (target[j] || source[i] || rng() % 4 == 0) continue;
            const auto& h = C.hom(T.entries[j].first, T.entries[i].first);
            const int deg = reduce_degree(C.grading(), 1 + T.entries[i].second - T.entries[j].second);
            const auto z = dgm::detail::cocycles(h, deg);
            if (z.empty()) continue;
            Vector q(f, h.dim());
            for (const auto& v : z) q.axpy(random_scalar(f, rng), v);
            if (q.is_zero()) continue;
            T.q.insert_or_assign({i, j}, q);
            source[j] = true;
            target[i] = true;
        }
    return P.add(T);
}

/// The functor presentation of Phi between full subcategories on the listed
/// objects. Every image of src_objs must occur in dst_objs.
inline FunctorPresentation functor_between(const PretrFunctor& Phi, const std::vector<ObjId>& src_objs,
                                           const FiniteCatPtr& C, const std::vector<ObjId>& dst_objs,
                                           const FiniteCatPtr& D) {
    const Field f = C->field();
    FunctorPresentation F{C, D, {}, {}};
    for (ObjId a : src_objs) {
        const ObjId img = Phi.apply(a);
        std::size_t k = 0;
        while (k < dst_objs.size() && dst_objs[k] != img) ++k;
        if (k == dst_objs.size()) throw InternalError("image missing from target list");
        F.obj.push_back(k);
    }
    for (std::size_t a = 0; a < src_objs.size(); ++a)
        for (std::size_t b = 0; b < src_objs.size(); ++b) {
            const std::size_t n = C->hom_dim(a, b), m = D->hom_dim(F.obj[a], F.obj[b]);
            Matrix M(f, m, n);
            for (std::size_t k = 0; k < n; ++k)
                M.set_column(k, Phi.apply(src_objs[a], src_objs[b], Vector::unit(f, n, k)));
            F.mor.push_back(std::move(M));
        }
    return F;
}

inline NatPresentation nat_between(const PretrNat& nu, const FunctorPresentation& F, const FunctorPresentation& G,
                                   const std::vector<ObjId>& src_objs) {
    NatPresentation out{F, G, {}};
    for (ObjId a : src_objs) out.comp.push_back(nu.component(a));
    return out;
}

/// Multiplication by a on A (x) -, as a transformation M_A => M_A.
inline PretrNat multiplication_nat(const PretrMonad& MA, const AlgebraPresentation& A, const Vector& a) {
    const auto P = MA.cat;
    const Field f = P->field();
    return PretrNat(MA.M, MA.M, [P, f, MA, A, a](ObjId B) {
        const ObjId X = MA.M.base_image(B);
        Vector v(f, P->hom_dim(X, X));
        for (std::size_t j = 0; j < A.dim; ++j)
            for (std::size_t s = 0; s < A.dim; ++s) {
                if (a[s].is_zero()) continue;
                const Vector prod = A.mult[s][j] * a[s];
                for (std::size_t i = 0; i < A.dim; ++i)
                    if (!prod[i].is_zero()) P->add_block(X, X, v, i, j, Vector(f, {prod[i]}));
            }
        return v;
    });
}

/// x -> a (x) x, as a transformation Id => M_A.
inline PretrNat element_nat(const PretrMonad& MA, const AlgebraPresentation& A, const Vector& a) {
    const auto P = MA.cat;
    const Field f = P->field();
    return PretrNat(identity_pretr(P), MA.M, [P, f, MA, A, a](ObjId B) {
        const ObjId X = MA.M.base_image(B), S = P->single(B);
        Vector v(f, P->hom_dim(S, X));
        for (std::size_t i = 0; i < A.dim; ++i)
            if (!a[i].is_zero()) P->add_block(S, X, v, i, 0, Vector(f, {a[i]}));
        return v;
    });
}

/// Brute-force separability idempotent: e in A (x) A with mu(e) = 1 and
/// a e = e a for every basis element a. Coordinates t * n + s stand for a_s (x) a_t.
inline bool has_separability_idempotent(const AlgebraPresentation& A) {
    const Field f = A.field;
    const std::size_t n = A.dim;
    auto mul = [&](const Vector& x, const Vector& y) {
        Vector out(f, n);
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = 0; t < n; ++t)
                if (!x[s].is_zero() && !y[t].is_zero()) out.axpy(x[s] * y[t], A.mult[s][t]);
        return out;
    };
    return enumerate(f, n * n, [&](const Vector& e) {
        Vector m(f, n);
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = 0; t < n; ++t)
                if (!e[t * n + s].is_zero()) m.axpy(e[t * n + s], A.mult[s][t]);
        if (m != A.unit) return false;
        for (std::size_t b = 0; b < n; ++b) {
            const Vector eb = Vector::unit(f, n, b);
            Vector left(f, n * n), right(f, n * n);
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t t = 0; t < n; ++t) {
                    const Scalar c = e[t * n + s];
                    if (c.is_zero()) continue;
                    const Vector bs = mul(eb, Vector::unit(f, n, s));
                    const Vector tb = mul(Vector::unit(f, n, t), eb);
                    for (std::size_t u = 0; u < n; ++u) {
                        if (!bs[u].is_zero()) left[t * n + u] += c * bs[u];
                        if (!tb[u].is_zero()) right[u * n + s] += c * tb[u];
                    }
                }
            if (left != right) return false;
        }
        return true;
    });
}

/// Exhaustive search over the separability unknowns of a monad.
inline bool separability_by_enumeration(const PretrMonad& PM, SepMode mode) {
    const SeparabilitySystem sys(PM, mode);
    return enumerate(PM.cat->field(), sys.unknowns(), [&](const Vector& x) { return sys.residual(x).is_zero(); });
}

inline bool same(const NatPresentation& a, const NatPresentation& b) {
    return a.source == b.source && a.target == b.target && a.comp == b.comp;
}

/// Full finite subcategory on distinct objects, keeping first occurrences.
inline std::vector<ObjId> distinct(std::vector<ObjId> v) {
    std::vector<ObjId> out;
    for (ObjId x : v)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
}

/// Random functors C -> D -> E between full subcategories of twisted
/// complexes over k, each either the identity or A (x) - for a random small
/// algebra A, with transformations alpha: F => F1, alpha1: F1 => F2 and
/// beta: G => G1.
struct TwoCells {
    TwistedCatPtr P;
    std::vector<ObjId> U0, U1, U2;
    FiniteCatPtr C, D, E;
    FunctorPresentation F, F1, F2, G, G1;
    NatPresentation alpha, alpha1, beta;
};

namespace detail {

struct Level {
    AlgebraPresentation A;
    PretrMonad M;
    std::vector<bool> tensor;  // per functor: A (x) - or the identity
};

inline PretrFunctor level_functor(const Level& L, std::size_t i, const TwistedCatPtr& P) {
    return L.tensor[i] ? L.M.M : identity_pretr(P);
}

inline PretrNat level_nat(const Level& L, std::size_t i, std::size_t j, const TwistedCatPtr& P, Rng& rng) {
    const Field f = P->field();
    const bool ti = L.tensor[i], tj = L.tensor[j];
    if (!ti && !tj) {
        const Scalar c = random_scalar(f, rng);
        return PretrNat(identity_pretr(P), identity_pretr(P), [P, c](ObjId B) { return P->base().identity(B) * c; });
    }
    const Vector a = random_vector(f, L.A.dim, rng);
    if (!ti && tj) return element_nat(L.M, L.A, a);
    if (ti && tj) return multiplication_nat(L.M, L.A, a);
    return PretrNat(L.M.M, identity_pretr(P), [P, L](ObjId B) {
        return Vector(P->field(), P->hom_dim(L.M.M.base_image(B), P->single(B)));
    });
}

}  // namespace detail

inline TwoCells random_two_cells(Field f, Rng& rng) {
    auto P = std::make_shared<TwistedCategory>(field_category(f));
    TwoCells t;
    t.P = P;
    auto level = [&](std::size_t n) {
        detail::Level L{random_small_algebra(f, rng), identity_monad(P), {}};
        L.M = algebra_monad(L.A, P);
        for (std::size_t i = 0; i < n; ++i) L.tensor.push_back(rng() % 2);
        return L;
    };
    const auto L1 = level(3), L2 = level(2);
    t.U0 = distinct({random_twisted(*P, rng, 2), random_twisted(*P, rng, 2)});
    std::vector<PretrFunctor> f1, f2;
    for (std::size_t i = 0; i < 3; ++i) f1.push_back(detail::level_functor(L1, i, P));
    for (std::size_t i = 0; i < 2; ++i) f2.push_back(detail::level_functor(L2, i, P));
    for (const auto& Phi : f1)
        for (ObjId x : t.U0) t.U1.push_back(Phi.apply(x));
    t.U1 = distinct(t.U1);
    for (const auto& Phi : f2)
        for (ObjId x : t.U1) t.U2.push_back(Phi.apply(x));
    t.U2 = distinct(t.U2);
    t.C = materialize(*P, t.U0);
    t.D = materialize(*P, t.U1);
    t.E = materialize(*P, t.U2);
    t.F = functor_between(f1[0], t.U0, t.C, t.U1, t.D);
    t.F1 = functor_between(f1[1], t.U0, t.C, t.U1, t.D);
    t.F2 = functor_between(f1[2], t.U0, t.C, t.U1, t.D);
    t.G = functor_between(f2[0], t.U1, t.D, t.U2, t.E);
    t.G1 = functor_between(f2[1], t.U1, t.D, t.U2, t.E);
    t.alpha = nat_between(detail::level_nat(L1, 0, 1, P, rng), t.F, t.F1, t.U0);
    t.alpha1 = nat_between(detail::level_nat(L1, 1, 2, P, rng), t.F1, t.F2, t.U0);
    t.beta = nat_between(detail::level_nat(L2, 0, 1, P, rng), t.G, t.G1, t.U1);
    return t;
}

}  // namespace dgm::testing
