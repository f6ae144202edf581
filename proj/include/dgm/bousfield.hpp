#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dgm/h0.hpp"
#include "dgm/monad.hpp"

namespace dgm {

/// An endofunctor L with a transformation eta: Id => L, evaluated on a
/// finite list of objects closed under L.
struct Endofunctor {
    const DgCategory* cat = nullptr;
    std::function<ObjId(ObjId)> obj;
    std::function<Vector(ObjId, ObjId, const Vector&)> mor;
    std::function<Vector(ObjId)> eta;
    std::vector<ObjId> objects;
    std::function<VerdictReport()> eta_weakly_natural;
};

inline Endofunctor endofunctor(const FunctorPresentation& L, const NatPresentation& eta) {
    Endofunctor e;
    e.cat = L.src.get();
    e.obj = [L](ObjId a) { return L.obj[a]; };
    e.mor = [L](ObjId a, ObjId b, const Vector& f) { return L.apply(a, b, f); };
    e.eta = [eta](ObjId a) { return eta.comp[a]; };
    for (ObjId a = 0; a < L.src->size(); ++a) e.objects.push_back(a);
    e.eta_weakly_natural = [eta] { return validate_nat(eta, NatMode::weak); };
    return e;
}

/// The endofunctor of a monad on twisted complexes, closed up over the
/// samples by adding their images until L L x is reached.
inline Endofunctor endofunctor(const PretrMonad& PM, const std::vector<ObjId>& samples) {
    Endofunctor e;
    e.cat = PM.cat.get();
    e.obj = [PM](ObjId T) { return PM.apply(T); };
    e.mor = [PM](ObjId a, ObjId b, const Vector& f) { return PM.M.apply(a, b, f); };
    e.eta = [PM](ObjId T) { return PM.eta_at(T); };
    e.objects = samples;
    e.eta_weakly_natural = [PM] { return validate_pretr_nat(PM.eta, NatMode::weak, "eta"); };
    return e;
}

struct BousfieldResult {
    VerdictReport report;
    std::vector<ObjId> kernel;
    std::vector<ObjId> zero_objects;
    bool bousfield = false;
};

/// Weak Bousfield test: eta weakly natural, L(eta) invertible in H^0, and
/// L(eta) - eta_L a coboundary. The kernel lists the sample objects c with
/// L c ~ 0 that are not themselves zero in H^0.
inline BousfieldResult classify_bousfield(const Endofunctor& L, const std::string& label = "bousfield") {
    Stopwatch sw;
    const auto& C = *L.cat;
    BousfieldResult out{VerdictReport(label, C.field().name()), {}, {}, false};
    auto& rep = out.report;
    rep.merge(L.eta_weakly_natural(), "eta.");
    json wi = nullptr, we = nullptr;
    for (ObjId x : L.objects) {
        const ObjId Lx = L.obj(x), LLx = L.obj(Lx);
        const Vector Leta = L.mor(x, Lx, L.eta(x));
        if (!h0_inverse(C, Lx, LLx, Leta) && wi.is_null())
            wi = json{{"object", C.object_name(x)}, {"class", to_json(h0_class(C, Lx, LLx, Leta))}};
        const Vector r = Leta - L.eta(Lx);
        if (!detail::residual_ok(C, Lx, LLx, r, NatMode::weak) && we.is_null())
            we = json{{"object", C.object_name(x)}, {"residual", to_json(r)}};
    }
    rep.add("L_eta_invertible", wi.is_null(), "L(eta) is an isomorphism in H0", wi);
    rep.add("L_eta_equals_eta_L", we.is_null(), "L(eta) = eta_L in H0", we);
    for (ObjId x : L.objects) {
        const bool zero_self = is_null_homotopic(C, x, x, C.identity(x));
        const ObjId Lx = L.obj(x);
        if (zero_self)
            out.zero_objects.push_back(x);
        else if (is_null_homotopic(C, Lx, Lx, C.identity(Lx)))
            out.kernel.push_back(x);
    }
    out.bousfield = rep.passed();
    json k = json::array();
    for (ObjId x : out.kernel) k.push_back(C.object_name(x));
    rep.add("kernel", Status::pass, "", json{{"objects", k}});
    rep.seconds = sw.seconds();
    return out;
}

/// With mu = L(eta)^{-1} in H^0, the monad diagrams hold in H^0.
inline VerdictReport check_bousfield_monad_h0(const Endofunctor& L) {
    const auto& C = *L.cat;
    VerdictReport rep("bousfield-induced-monad", C.field().name());
    json wa = nullptr, wl = nullptr, wr = nullptr;
    auto mu = [&](ObjId x) -> std::optional<Vector> {
        const ObjId Lx = L.obj(x);
        return h0_inverse(C, Lx, L.obj(Lx), L.mor(x, Lx, L.eta(x)));
    };
    for (ObjId x : L.objects) {
        const ObjId Lx = L.obj(x), LLx = L.obj(Lx), LLLx = L.obj(LLx);
        const auto mx = mu(x), mLx = mu(Lx);
        if (!mx || !mLx) {
            rep.add("inverse_exists", false, "", json{{"object", C.object_name(x)}});
            return rep;
        }
        const Vector a = C.compose(LLLx, LLx, Lx, *mx, L.mor(LLx, Lx, *mx)) - C.compose(LLLx, LLx, Lx, *mx, *mLx);
        if (!detail::residual_ok(C, LLLx, Lx, a, NatMode::weak) && wa.is_null())
            wa = json{{"object", C.object_name(x)}};
        const Vector l = C.compose(Lx, LLx, Lx, *mx, L.mor(x, Lx, L.eta(x))) - C.identity(Lx);
        if (!detail::residual_ok(C, Lx, Lx, l, NatMode::weak) && wl.is_null())
            wl = json{{"object", C.object_name(x)}};
        const Vector r = C.compose(Lx, LLx, Lx, *mx, L.eta(Lx)) - C.identity(Lx);
        if (!detail::residual_ok(C, Lx, Lx, r, NatMode::weak) && wr.is_null())
            wr = json{{"object", C.object_name(x)}};
    }
    rep.add("associativity", wa.is_null(), "", wa);
    rep.add("left_unit", wl.is_null(), "", wl);
    rep.add("right_unit", wr.is_null(), "", wr);
    return rep;
}

}  // namespace dgm
