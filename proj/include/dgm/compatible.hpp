#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgm/em.hpp"

namespace dgm {

/// Two monads on one twisted layer with an exchange tau: M1 M2 => M2 M1.
struct CompatiblePair {
    PretrMonad first, second;
    PretrNat exchange;
};

inline PretrNat make_exchange(const PretrMonad& M1, const PretrMonad& M2, PretrNat::CompFn comp0) {
    return PretrNat(compose(M1.M, M2.M), compose(M2.M, M1.M), std::move(comp0));
}

/// Closed degree-0 natural isomorphism plus the four exchange identities
/// with the units and multiplications, at every base object.
inline VerdictReport check_compatible(const CompatiblePair& cp) {
    Stopwatch sw;
    const auto& P = *cp.first.cat;
    const Field f = P.field();
    const auto& M1 = cp.first;
    const auto& M2 = cp.second;
    const auto& tau = cp.exchange;
    VerdictReport rep("compatible " + M1.name + "," + M2.name, f.name());
    if (M1.cat != M2.cat) throw InvalidInput("compatible monads must act on the same category");
    rep.merge(validate_pretr_nat(tau, NatMode::strict), "exchange.");
    if (!rep.passed()) {
        rep.seconds = sw.seconds();
        return rep;
    }
    json wi = nullptr, wa = nullptr, wb = nullptr, wc = nullptr, wd = nullptr;
    for (ObjId A : base_objects(P)) {
        const ObjId a = P.single(A);
        const ObjId M1A = M1.apply(a), M2A = M2.apply(a);
        const ObjId M12 = M1.apply(M2A), M21 = M2.apply(M1A);
        const Vector t = tau.component(a);
        const auto& h = P.hom(M21, M12);
        const auto idx = h.indices_in(0);
        const auto sol = solve_affine_fn(f, idx.size(), [&](const Vector& c) {
            Vector inv(f, h.dim());
            for (std::size_t k = 0; k < idx.size(); ++k) inv[idx[k]] = c[k];
            Vector r = P.compose(M21, M12, M21, t, inv) - P.identity(M21);
            r.append(P.compose(M12, M21, M12, inv, t) - P.identity(M12));
            return r;
        });
        if (!sol.feasible() && wi.is_null()) wi = json{{"object", P.object_name(a)}};
        // (a) tau o M1(eta2) = eta2_{M1}
        const Vector la = P.compose(M1A, M12, M21, t, M1.M.apply(a, M2A, M2.eta_at(a)));
        if (la != M2.eta_at(M1A) && wa.is_null()) wa = json{{"object", P.object_name(a)}};
        // (b) tau o eta1_{M2} = M2(eta1)
        const Vector lb = P.compose(M2A, M12, M21, t, M1.eta_at(M2A));
        if (lb != M2.M.apply(a, M1A, M1.eta_at(a)) && wb.is_null()) wb = json{{"object", P.object_name(a)}};
        // (c) tau o M1(mu2) = mu2_{M1} o M2(tau) o tau_{M2}
        const ObjId M2M2A = M2.apply(M2A), M1M2M2A = M1.apply(M2M2A);
        const ObjId M2M1M2A = M2.apply(M12), M2M2M1A = M2.apply(M21);
        const Vector lc = P.compose(M1M2M2A, M12, M21, t, M1.M.apply(M2M2A, M2A, M2.mu_at(a)));
        const Vector rc = P.compose(M1M2M2A, M2M2M1A, M21, M2.mu_at(M1A),
                                    P.compose(M1M2M2A, M2M1M2A, M2M2M1A, M2.M.apply(M12, M21, t),
                                              tau.component(M2A)));
        if (lc != rc && wc.is_null()) wc = json{{"object", P.object_name(a)}, {"residual", to_json(lc - rc)}};
        // (d) tau o mu1_{M2} = M2(mu1) o tau_{M1} o M1(tau)
        const ObjId M1M1M2A = M1.apply(M12), M1M2M1A = M1.apply(M21);
        const ObjId M1M1A = M1.apply(M1A), M2M1M1A = M2.apply(M1M1A);
        const Vector ld = P.compose(M1M1M2A, M12, M21, t, M1.mu_at(M2A));
        const Vector rd = P.compose(M1M1M2A, M2M1M1A, M21, M2.M.apply(M1M1A, M1A, M1.mu_at(a)),
                                    P.compose(M1M1M2A, M1M2M1A, M2M1M1A, tau.component(M1A),
                                              M1.M.apply(M12, M21, t)));
        if (ld != rd && wd.is_null()) wd = json{{"object", P.object_name(a)}, {"residual", to_json(ld - rd)}};
    }
    rep.add("exchange_invertible", wi.is_null(), "", wi);
    rep.add("unit_second", wa.is_null(), "tau o M1(eta2) = eta2 M1", wa);
    rep.add("unit_first", wb.is_null(), "tau o eta1 M2 = M2(eta1)", wb);
    rep.add("mult_second", wc.is_null(), "tau o M1(mu2) = mu2 M1 o M2(tau) o tau M2", wc);
    rep.add("mult_first", wd.is_null(), "tau o mu1 M2 = M2(mu1) o tau M1 o M1(tau)", wd);
    rep.seconds = sw.seconds();
    return rep;
}

/// The composite monad M2 M1 with mu = mu2_{M1} o M2M2(mu1) o M2(tau_{M1})
/// and eta = eta2_{M1} o eta1.
inline PretrMonad compose_compatible(const CompatiblePair& cp) {
    const auto rep = check_compatible(cp);
    if (!rep.passed()) throw InvalidInput("exchange identities fail: " + rep.to_json().dump());
    const auto& P = cp.first.cat;
    const PretrMonad M1 = cp.first, M2 = cp.second;
    const PretrNat tau = cp.exchange;
    const PretrFunctor M = compose(M2.M, M1.M);
    return make_pretr_monad(
        P, M,
        [P, M1, M2, tau](ObjId A) {
            const ObjId a = P->single(A);
            const ObjId M1A = M1.apply(a), M21A = M2.apply(M1A);
            const ObjId M1M1A = M1.apply(M1A);
            const ObjId M2M1M1A = M2.apply(M1M1A), M2M2M1M1A = M2.apply(M2M1M1A);
            const ObjId M2M2M1A = M2.apply(M21A);
            const ObjId M1M21A = M1.apply(M21A), M2M1M21A = M2.apply(M1M21A);
            const Vector t = M2.M.apply(M1M21A, M2M1M1A, tau.component(M1A));
            const Vector m1 = M2.M.apply(M2M1M1A, M21A, M2.M.apply(M1M1A, M1A, M1.mu_at(a)));
            return P->compose(M2M1M21A, M2M2M1A, M21A, M2.mu_at(M1A),
                              P->compose(M2M1M21A, M2M2M1M1A, M2M2M1A, m1, t));
        },
        [P, M1, M2](ObjId A) {
            const ObjId a = P->single(A);
            const ObjId M1A = M1.apply(a);
            return P->compose(a, M1A, M2.apply(M1A), M2.eta_at(M1A), M1.eta_at(a));
        },
        M2.name + "." + M1.name);
}

/// M2 lifted to M1-modules: (x, lambda) -> (M2 x, M2(lambda) o tau_x).
inline ModuleObject induced_apply(const CompatiblePair& cp, const ModuleObject& m) {
    const auto& P = *cp.first.cat;
    const ObjId x = m.x, M1x = cp.first.apply(x), M2x = cp.second.apply(x);
    const ObjId M12 = cp.first.apply(M2x), M21 = cp.second.apply(M1x);
    return {M2x, P.compose(M12, M21, M2x, cp.second.M.apply(M1x, x, m.lambda), cp.exchange.component(x))};
}

/// Module and monad axioms of the induced monad on the supplied M1-modules.
inline VerdictReport check_induced_monad(const CompatiblePair& cp, const std::vector<ModuleObject>& mods) {
    const auto& P = *cp.first.cat;
    const auto& M1 = cp.first;
    const auto& M2 = cp.second;
    VerdictReport rep("induced-monad " + M2.name + " on Mod(" + M1.name + ")", P.field().name());
    json wm = nullptr, wi = nullptr, wmu = nullptr, weta = nullptr, wax = nullptr;
    for (const auto& m : mods) {
        if (!check_module(M1, m, NatMode::strict).passed()) {
            if (wm.is_null()) wm = json{{"object", P.object_name(m.x)}};
            continue;
        }
        const ModuleObject Mm = induced_apply(cp, m);
        const ModuleObject MMm = induced_apply(cp, Mm);
        if (!check_module(M1, Mm, NatMode::strict).passed() && wi.is_null()) wi = json{{"object", P.object_name(m.x)}};
        if (!is_module_morphism(M1, MMm, Mm, M2.mu_at(m.x)) && wmu.is_null())
            wmu = json{{"object", P.object_name(m.x)}};
        if (!is_module_morphism(M1, m, Mm, M2.eta_at(m.x)) && weta.is_null())
            weta = json{{"object", P.object_name(m.x)}};
        if (!check_monad(M2, NatMode::strict, {m.x}).passed() && wax.is_null())
            wax = json{{"object", P.object_name(m.x)}};
    }
    rep.add("inputs_are_modules", wm.is_null(), "", wm);
    rep.add("images_are_modules", wi.is_null(), "", wi);
    rep.add("mu_module_morphism", wmu.is_null(), "", wmu);
    rep.add("eta_module_morphism", weta.is_null(), "", weta);
    rep.add("monad_axioms", wax.is_null(), "", wax);
    return rep;
}

/// A module over the induced monad: an M1-module with an M2-action lambda2.
struct InducedModule {
    ModuleObject base;
    Vector lambda2;
};

/// Psi((x, l1), l2) = (x, l2 o M2(l1)).
inline ModuleObject psi(const CompatiblePair& cp, const InducedModule& m) {
    const auto& P = *cp.first.cat;
    const ObjId x = m.base.x, M1x = cp.first.apply(x), M2x = cp.second.apply(x), M21 = cp.second.apply(M1x);
    return {x, P.compose(M21, M2x, x, m.lambda2, cp.second.M.apply(M1x, x, m.base.lambda))};
}

/// (x, rho) -> ((x, rho o eta2_{M1 x}), rho o M2(eta1_x)).
inline InducedModule psi_inverse(const CompatiblePair& cp, const ModuleObject& m) {
    const auto& P = *cp.first.cat;
    const ObjId x = m.x, M1x = cp.first.apply(x), M2x = cp.second.apply(x), M21 = cp.second.apply(M1x);
    return {{x, P.compose(M1x, M21, x, m.lambda, cp.second.eta_at(M1x))},
            P.compose(M2x, M21, x, m.lambda, cp.second.M.apply(x, M1x, cp.first.eta_at(x)))};
}

inline VerdictReport check_induced_module(const CompatiblePair& cp, const InducedModule& m) {
    VerdictReport rep("induced-module", cp.first.cat->field().name());
    rep.merge(check_module(cp.first, m.base, NatMode::strict), "first.");
    rep.merge(check_module(cp.second, {m.base.x, m.lambda2}, NatMode::strict), "second.");
    rep.add("action_is_first_module_morphism",
            is_module_morphism(cp.first, induced_apply(cp, m.base), m.base, m.lambda2));
    return rep;
}

/// Per-degree dims of the hom complex between induced modules: morphisms of
/// both actions, computed as one joint kernel.
inline std::map<int, std::size_t> induced_hom_dims(const CompatiblePair& cp, const InducedModule& a,
                                                   const InducedModule& b) {
    const auto& P = *cp.first.cat;
    const Field f = P.field();
    const auto& H = P.hom(a.base.x, b.base.x);
    const ModuleObject a2{a.base.x, a.lambda2}, b2{b.base.x, b.lambda2};
    std::map<int, std::size_t> out;
    for (int n : H.support()) {
        const auto idx = H.indices_in(n);
        std::vector<Vector> cols;
        for (auto i : idx) {
            const Vector e = Vector::unit(f, H.dim(), i);
            Vector c = module_defect(cp.first, a.base, b.base, e);
            c.append(module_defect(cp.second, a2, b2, e));
            cols.push_back(std::move(c));
        }
        const std::size_t rows = cols.empty() ? 0 : cols[0].size();
        out[n] = kernel_basis(Matrix::from_columns(f, rows, cols)).size();
    }
    return out;
}

inline std::map<int, std::size_t> hom_dims(const EmHomComplex& E) {
    std::map<int, std::size_t> out;
    for (int n : E.space.support()) out[n] = E.space.dim_in(n);
    return out;
}

/// Psi and its inverse are mutually inverse on the samples, and hom dims
/// agree degreewise between the two module categories.
inline VerdictReport check_psi_equivalence(const CompatiblePair& cp, const std::vector<InducedModule>& induced,
                                           const std::vector<ModuleObject>& composite) {
    Stopwatch sw;
    const auto& P = *cp.first.cat;
    VerdictReport rep("psi-equivalence", P.field().name());
    const PretrMonad M = compose_compatible(cp);
    json w1 = nullptr, w2 = nullptr, w3 = nullptr, w4 = nullptr, wd = nullptr;
    for (const auto& m : induced) {
        if (!check_induced_module(cp, m).passed() && w1.is_null()) w1 = json{{"object", P.object_name(m.base.x)}};
        const ModuleObject p = psi(cp, m);
        if (!check_module(M, p, NatMode::strict).passed() && w2.is_null()) w2 = json{{"object", P.object_name(m.base.x)}};
        const InducedModule back = psi_inverse(cp, p);
        if ((!(back.base == m.base) || back.lambda2 != m.lambda2) && w3.is_null())
            w3 = json{{"object", P.object_name(m.base.x)}};
    }
    for (const auto& m : composite) {
        const InducedModule q = psi_inverse(cp, m);
        if ((!check_induced_module(cp, q).passed() || !(psi(cp, q) == m)) && w4.is_null())
            w4 = json{{"object", P.object_name(m.x)}};
    }
    rep.add("induced_modules_valid", w1.is_null(), "", w1);
    rep.add("psi_lands_in_composite_modules", w2.is_null(), "", w2);
    rep.add("inverse_after_psi", w3.is_null(), "", w3);
    rep.add("psi_after_inverse", w4.is_null(), "", w4);
    for (const auto& a : induced)
        for (const auto& b : induced) {
            const auto d1 = induced_hom_dims(cp, a, b);
            const auto d2 = hom_dims(em_hom_complex(M, psi(cp, a), psi(cp, b)));
            auto strip = [](std::map<int, std::size_t> m) {
                for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
                return m;
            };
            if (strip(d1) != strip(d2) && wd.is_null())
                wd = json{{"source", P.object_name(a.base.x)}, {"target", P.object_name(b.base.x)}};
        }
    rep.add("hom_dims_agree", wd.is_null(), "", wd);
    rep.seconds = sw.seconds();
    return rep;
}

}  // namespace dgm
