#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dgm/dg_category.hpp"

namespace dgm {

/// H^0 of a finite DG category: an additive presentation (homs in degree 0,
/// zero differential) together with the cocycle bases used to build it.
struct H0Category {
    FiniteCatPtr dg;
    std::shared_ptr<FiniteDgCategory> cat;
    std::vector<CohomologyBasis> bases;  // index a * n + b

    const CohomologyBasis& basis(ObjId a, ObjId b) const { return bases.at(a * dg->size() + b); }
};

namespace detail {

inline H0Category build_h0(const FiniteCatPtr& C, std::vector<CohomologyBasis> bases) {
    const std::size_t n = C->size();
    const Field f = C->field();
    H0Category H{C, std::make_shared<FiniteDgCategory>(f, Grading::Z, C->names()), std::move(bases)};
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b)
            H.cat->set_hom(a, b, DgSpace(f, Grading::Z, std::vector<int>(H.basis(a, b).dim(), 0)));
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b)
            for (ObjId c = 0; c < n; ++c) {
                const auto& Bab = H.basis(a, b);
                const auto& Bbc = H.basis(b, c);
                for (std::size_t i = 0; i < Bbc.dim(); ++i)
                    for (std::size_t j = 0; j < Bab.dim(); ++j) {
                        const Vector r = C->compose(a, b, c, Bbc.representatives()[i], Bab.representatives()[j]);
                        const Vector cls = H.basis(a, c).class_of(r);
                        if (!cls.is_zero()) H.cat->set_compose(a, b, c, i, j, cls);
                    }
            }
    for (ObjId a = 0; a < n; ++a) H.cat->set_identity(a, H.basis(a, a).class_of(C->identity(a)));
    return H;
}

}  // namespace detail

inline H0Category h0_category(const FiniteCatPtr& C) {
    std::vector<CohomologyBasis> bases;
    for (ObjId a = 0; a < C->size(); ++a)
        for (ObjId b = 0; b < C->size(); ++b) bases.emplace_back(C->hom(a, b), 0);
    return detail::build_h0(C, std::move(bases));
}

/// Same construction with caller-chosen cocycle representatives per hom.
inline H0Category h0_category(const FiniteCatPtr& C, const std::vector<std::vector<Vector>>& reps) {
    std::vector<CohomologyBasis> bases;
    for (ObjId a = 0; a < C->size(); ++a)
        for (ObjId b = 0; b < C->size(); ++b) bases.emplace_back(C->hom(a, b), 0, reps.at(a * C->size() + b));
    return detail::build_h0(C, std::move(bases));
}

/// H^0(F): the class of F applied to a representative.
inline FunctorPresentation h0_functor(const FunctorPresentation& F, const H0Category& HC, const H0Category& HD) {
    if (F.src != HC.dg || F.dst != HD.dg) throw InvalidInput("H0 data does not match the functor");
    FunctorPresentation out{HC.cat, HD.cat, F.obj, {}};
    const Field f = F.src->field();
    for (ObjId a = 0; a < F.src->size(); ++a)
        for (ObjId b = 0; b < F.src->size(); ++b) {
            const auto& B = HC.basis(a, b);
            const auto& T = HD.basis(F.obj[a], F.obj[b]);
            Matrix m(f, T.dim(), B.dim());
            for (std::size_t k = 0; k < B.dim(); ++k) m.set_column(k, T.class_of(F.apply(a, b, B.representatives()[k])));
            out.mor.push_back(std::move(m));
        }
    return out;
}

inline NatPresentation h0_nat(const NatPresentation& nu, const H0Category& HC, const H0Category& HD) {
    NatPresentation out{h0_functor(nu.source, HC, HD), h0_functor(nu.target, HC, HD), {}};
    for (ObjId a = 0; a < HC.dg->size(); ++a)
        out.comp.push_back(HD.basis(nu.source.obj[a], nu.target.obj[a]).class_of(nu.comp[a]));
    return out;
}

/// Change-of-representative isomorphism between two H^0 presentations of the
/// same category; verifies it intertwines composition and identities.
inline bool h0_tables_isomorphic(const H0Category& H1, const H0Category& H2) {
    if (H1.dg != H2.dg) return false;
    const std::size_t n = H1.dg->size();
    const Field f = H1.dg->field();
    std::vector<Matrix> P;
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b) {
            const auto& B1 = H1.basis(a, b);
            const auto& B2 = H2.basis(a, b);
            if (B1.dim() != B2.dim()) return false;
            Matrix m(f, B2.dim(), B1.dim());
            for (std::size_t k = 0; k < B1.dim(); ++k) m.set_column(k, B2.class_of(B1.representatives()[k]));
            if (rank(m) != B1.dim()) return false;
            P.push_back(std::move(m));
        }
    for (ObjId a = 0; a < n; ++a) {
        if (P[a * n + a] * H1.cat->identity(a) != H2.cat->identity(a)) return false;
        for (ObjId b = 0; b < n; ++b)
            for (ObjId c = 0; c < n; ++c) {
                const auto dab = H1.cat->hom_dim(a, b), dbc = H1.cat->hom_dim(b, c);
                for (std::size_t i = 0; i < dbc; ++i)
                    for (std::size_t j = 0; j < dab; ++j) {
                        const Vector g = Vector::unit(f, dbc, i), h = Vector::unit(f, dab, j);
                        const Vector l = P[a * n + c] * H1.cat->compose(a, b, c, g, h);
                        const Vector r = H2.cat->compose(a, b, c, P[b * n + c] * g, P[a * n + b] * h);
                        if (l != r) return false;
                    }
            }
    }
    return true;
}

/// Class of a degree-0 cocycle in H^0 Hom(a, b) of any DG category.
inline Vector h0_class(const DgCategory& C, ObjId a, ObjId b, const Vector& z) {
    return CohomologyBasis(C.hom(a, b), 0).class_of(z);
}

/// True when the degree-0 cocycle z is a coboundary.
inline bool is_null_homotopic(const DgCategory& C, ObjId a, ObjId b, const Vector& z) {
    if (z.is_zero()) return true;
    return is_coboundary(C.hom(a, b), z, 0).found();
}

/// A two-sided inverse of alpha: x -> y up to homotopy, as a cocycle
/// representative, found by solving for its class in H^0 Hom(y, x).
inline std::optional<Vector> h0_inverse(const DgCategory& C, ObjId x, ObjId y, const Vector& alpha) {
    const Field f = C.field();
    const CohomologyBasis Byx(C.hom(y, x), 0);
    const CohomologyBasis Bxx(C.hom(x, x), 0);
    const CohomologyBasis Byy(C.hom(y, y), 0);
    const Vector idx = Bxx.class_of(C.identity(x));
    const Vector idy = Byy.class_of(C.identity(y));
    auto residual = [&](const Vector& c) {
        const Vector beta = Byx.lift(c);
        Vector r = Byy.class_of(C.compose(y, x, y, alpha, beta)) - idy;
        r.append(Bxx.class_of(C.compose(x, y, x, beta, alpha)) - idx);
        return r;
    };
    auto sol = solve_affine_fn(f, Byx.dim(), residual);
    if (!sol.feasible()) return std::nullopt;
    return Byx.lift(*sol.solution);
}

struct WeakIsoComponent {
    ObjId source, target;
    Vector alpha;
};

/// Per-object invertibility of the H^0 classes of the given components.
inline VerdictReport is_weak_nat_iso(const DgCategory& C, const std::vector<WeakIsoComponent>& comps,
                                     const std::string& subject = "weak-natural-isomorphism") {
    VerdictReport rep(subject, C.field().name());
    for (const auto& cmp : comps) {
        const auto& h = C.hom(cmp.source, cmp.target);
        const std::string name = "invertible@" + C.object_name(cmp.source);
        if (!h.is_homogeneous(cmp.alpha, 0) || !h.apply_d(cmp.alpha).is_zero()) {
            rep.add(name, false, "component is not a closed degree-0 morphism");
            continue;
        }
        auto inv = h0_inverse(C, cmp.source, cmp.target, cmp.alpha);
        if (inv) {
            rep.add(name, true, "", json{{"inverse", to_json(h0_class(C, cmp.target, cmp.source, *inv))}});
        } else {
            const auto dx = CohomologyBasis(C.hom(cmp.source, cmp.source), 0).dim();
            const auto dy = CohomologyBasis(C.hom(cmp.target, cmp.target), 0).dim();
            rep.add(name, Status::infeasible, "no inverse class exists",
                    json{{"class", to_json(h0_class(C, cmp.source, cmp.target, cmp.alpha))},
                         {"h0_end_dims", {dx, dy}}});
        }
    }
    return rep;
}

}  // namespace dgm
