#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dgm/algebra.hpp"
#include "dgm/compatible.hpp"
#include "dgm/em.hpp"
#include "dgm/group_action.hpp"

namespace dgm::corpus {

/// The 2-periodic complex B over k: basis 1_0, 1_1, X_0, X_1 as entries
/// (k,0), (k,1), (k,0), (k,1), with d(1_0) = X_1 and d(1_1) = X_0.
inline TwistedComplex b_bullet(Field f) {
    TwistedComplex B;
    B.entries = {{0, 0}, {0, 1}, {0, 0}, {0, 1}};
    B.q.emplace(std::make_pair<std::size_t, std::size_t>(3, 0), Vector::unit(f, 1, 0));
    B.q.emplace(std::make_pair<std::size_t, std::size_t>(2, 1), Vector::unit(f, 1, 0));
    return B;
}

/// Structure map of an A-module on a twisted complex over the field
/// category, given the action matrices rho(a_s) on the entries.
inline Vector action_lambda(const PretrMonad& PM, ObjId x, const std::vector<Matrix>& rho) {
    const auto& P = *PM.cat;
    const ObjId Mx = PM.apply(x);
    const std::size_t n = rho.size();
    const std::size_t m = P.complex(x).size();
    Vector lam(P.field(), P.hom_dim(Mx, x));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t i = 0; i < m; ++i)
                if (!rho[s](i, j).is_zero()) P.add_block(Mx, x, lam, i, j * n + s, Vector(P.field(), {rho[s](i, j)}));
    return lam;
}

/// B with A = k[X]/(X^2) acting by multiplication.
inline ModuleObject b_bullet_module(const PretrMonad& dual, ObjId B) {
    const Field f = dual.cat->field();
    Matrix X(f, 4, 4);
    X(2, 0) = Scalar::one(f);
    X(3, 1) = Scalar::one(f);
    return {B, action_lambda(dual, B, {Matrix::identity(f, 4), X})};
}

/// Objects a, b and a zero object z; Hom(a, b) = k, no maps out of b.
inline std::shared_ptr<FiniteDgCategory> collapse_category(Field f) {
    auto C = std::make_shared<FiniteDgCategory>(f, Grading::Z, std::vector<std::string>{"a", "b", "0"});
    C->set_hom(0, 0, DgSpace(f, Grading::Z, {0}));
    C->set_hom(1, 1, DgSpace(f, Grading::Z, {0}));
    C->set_hom(0, 1, DgSpace(f, Grading::Z, {0}));
    const Vector one = Vector::unit(f, 1, 0);
    C->set_compose(0, 0, 0, 0, 0, one);
    C->set_compose(1, 1, 1, 0, 0, one);
    C->set_compose(0, 0, 1, 0, 0, one);
    C->set_compose(0, 1, 1, 0, 0, one);
    C->set_identity(0, one);
    C->set_identity(1, one);
    return C;
}

/// a -> a, b -> 0, 0 -> 0 with unit id_a, 0, 0.
inline FunctorPresentation collapse_functor(const FiniteCatPtr& C) {
    const Field f = C->field();
    FunctorPresentation L{C, C, {0, 2, 2}, {}};
    for (ObjId a = 0; a < 3; ++a)
        for (ObjId b = 0; b < 3; ++b) {
            Matrix m(f, C->hom_dim(L.obj[a], L.obj[b]), C->hom_dim(a, b));
            if (a == 0 && b == 0) m = Matrix::identity(f, 1);
            L.mor.push_back(m);
        }
    return L;
}

inline NatPresentation collapse_unit(const FunctorPresentation& L) {
    const auto& C = *L.src;
    return NatPresentation{identity_functor(L.src), L,
                           {C.identity(0), Vector(C.field(), 0), Vector(C.field(), 0)}};
}

/// The collapse functor as an idempotent monad with mu = id.
inline FiniteMonad collapse_monad(const FiniteCatPtr& C) {
    const auto L = collapse_functor(C);
    const auto LL = compose(L, L);
    NatPresentation mu{LL, L, {}};
    for (ObjId a = 0; a < C->size(); ++a) mu.comp.push_back(C->identity(L.obj[a]));
    return FiniteMonad{L, mu, collapse_unit(L), "collapse"};
}

/// Commuting algebra monads A1 (x) - and A2 (x) - with the swap exchange
/// a_s (x) b_t -> b_t (x) a_s.
inline CompatiblePair algebra_pair(const AlgebraPresentation& A1, const AlgebraPresentation& A2,
                                   const TwistedCatPtr& P) {
    auto M1 = algebra_monad(A1, P);
    auto M2 = algebra_monad(A2, P);
    const std::size_t n1 = A1.dim, n2 = A2.dim;
    auto tau = make_exchange(M1, M2, [P, M1, M2, n1, n2](ObjId) {
        const ObjId k = P->single(0);
        const ObjId M12 = M1.apply(M2.apply(k)), M21 = M2.apply(M1.apply(k));
        Vector out(P->field(), P->hom_dim(M12, M21));
        for (std::size_t s = 0; s < n1; ++s)
            for (std::size_t t = 0; t < n2; ++t)
                P->add_block(M12, M21, out, s * n2 + t, t * n1 + s, Vector::unit(P->field(), 1, 0));
        return out;
    });
    return CompatiblePair{M1, M2, tau};
}

/// The adjunction F -| G between twisted complexes over k and over one
/// object L with End(L) = A^op, where F includes k and G = Hom(L, -). The
/// composite G F is the algebra monad of A.
struct ComparisonFixture {
    TwistedCatPtr PC, PD;
    PretrMonad M;
    PretrFunctor F, G;
    PretrNat eps;
};

inline ComparisonFixture algebra_comparison(const AlgebraPresentation& A, Grading g = Grading::Z) {
    const Field f = A.field;
    const std::size_t n = A.dim;
    auto k = field_category(f, g);
    auto L = algebra_category(opposite_algebra(A), g);
    auto PC = std::make_shared<TwistedCategory>(k);
    auto PD = std::make_shared<TwistedCategory>(L);
    Matrix incl(f, n, 1);
    incl.set_column(0, A.unit);
    auto F = pretr_functor(FunctorPresentation{k, L, {0}, {incl}}, PC, PD);
    auto copies = [n](ObjId) {
        TwistedComplex T;
        for (std::size_t s = 0; s < n; ++s) T.entries.emplace_back(0, 0);
        return T;
    };
    const AlgebraPresentation Aop = opposite_algebra(A);
    PretrFunctor G(
        PD, PC, copies,
        [PC, Aop, copies](ObjId, ObjId, const Vector& a) {
            const ObjId Gl = PC->add(copies(0));
            const Matrix m = Aop.left(a);
            Vector out(PC->field(), PC->hom_dim(Gl, Gl));
            for (std::size_t u = 0; u < m.rows(); ++u)
                for (std::size_t t = 0; t < m.cols(); ++t)
                    if (!m(u, t).is_zero()) PC->add_block(Gl, Gl, out, u, t, Vector(PC->field(), {m(u, t)}));
            return out;
        },
        "Hom(L,-)");
    const auto FG = compose(F, G);
    PretrNat eps(FG, identity_pretr(PD), [PD, FG, n](ObjId) {
        const ObjId l = PD->single(0), FGl = FG.apply(l);
        Vector out(PD->field(), PD->hom_dim(FGl, l));
        for (std::size_t s = 0; s < n; ++s) PD->add_block(FGl, l, out, 0, s, Vector::unit(PD->field(), n, s));
        return out;
    });
    return {PC, PD, algebra_monad(A, PC), F, G, eps};
}

}  // namespace dgm::corpus
