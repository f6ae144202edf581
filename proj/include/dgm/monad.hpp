#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgm/h0.hpp"
#include "dgm/pretr.hpp"

namespace dgm {

/// A DG monad on a twisted-complex layer, given by an extended endofunctor
/// and base components of mu: MM => M and eta: Id => M.
struct PretrMonad {
    TwistedCatPtr cat;
    PretrFunctor M;
    PretrNat mu;
    PretrNat eta;
    std::string name;

    ObjId apply(ObjId T) const { return M.apply(T); }
    Vector mu_at(ObjId T) const { return mu.component(T); }
    Vector eta_at(ObjId T) const { return eta.component(T); }
};

inline PretrMonad make_pretr_monad(const TwistedCatPtr& P, const PretrFunctor& M, PretrNat::CompFn mu0,
                                   PretrNat::CompFn eta0, std::string name) {
    PretrNat mu(compose(M, M), M, std::move(mu0));
    PretrNat eta(identity_pretr(P), M, std::move(eta0));
    return PretrMonad{P, M, std::move(mu), std::move(eta), std::move(name)};
}

inline PretrMonad identity_monad(const TwistedCatPtr& P) {
    const auto Id = identity_pretr(P);
    return make_pretr_monad(
        P, Id, [P](ObjId A) { return P->base().identity(A); }, [P](ObjId A) { return P->base().identity(A); },
        "identity");
}

/// Singles of every base object: the default sample set.
inline std::vector<ObjId> base_singles(const TwistedCategory& P) {
    std::vector<ObjId> out;
    for (ObjId A : base_objects(P)) out.push_back(P.single(A));
    return out;
}

namespace detail {

inline bool residual_ok(const DgCategory& P, ObjId a, ObjId b, const Vector& r, NatMode mode) {
    if (r.is_zero()) return true;
    if (mode == NatMode::strict) return false;
    const auto& h = P.hom(a, b);
    if (!h.is_homogeneous(r, 0) || !h.apply_d(r).is_zero()) return false;
    return is_coboundary(h, r, 0).found();
}

}  // namespace detail

/// Monad diagrams at every sample object, strictly or up to coboundaries.
inline VerdictReport check_monad(const PretrMonad& PM, NatMode mode, std::vector<ObjId> samples = {}) {
    Stopwatch sw;
    VerdictReport rep(mode == NatMode::strict ? "dg-monad " + PM.name : "weak-monad " + PM.name,
                      PM.cat->field().name());
    const auto& P = *PM.cat;
    if (samples.empty()) samples = base_singles(P);
    rep.merge(validate_pretr_functor(PM.M), "functor.");
    rep.merge(validate_pretr_nat(PM.mu, mode), "mu.");
    rep.merge(validate_pretr_nat(PM.eta, mode), "eta.");
    if (!rep.passed()) {
        rep.seconds = sw.seconds();
        return rep;
    }
    json wa = nullptr, wl = nullptr, wr = nullptr;
    for (ObjId T : samples) {
        const ObjId MT = PM.apply(T), MMT = PM.apply(MT), MMMT = PM.apply(MMT);
        if (PM.mu.source().apply(T) != MMT) throw InternalError("composite functor disagrees with iterated application");
        const Vector muT = PM.mu_at(T);
        const Vector Mmu = PM.M.apply(MMT, MT, muT);
        const Vector muM = PM.mu_at(MT);
        const Vector a = P.compose(MMMT, MMT, MT, muT, Mmu) - P.compose(MMMT, MMT, MT, muT, muM);
        if (wa.is_null() && !detail::residual_ok(P, MMMT, MT, a, mode))
            wa = json{{"object", P.object_name(T)}, {"residual", to_json(a)}};
        const Vector idM = P.identity(MT);
        const Vector l = P.compose(MT, MMT, MT, muT, PM.M.apply(T, MT, PM.eta_at(T))) - idM;
        if (wl.is_null() && !detail::residual_ok(P, MT, MT, l, mode))
            wl = json{{"object", P.object_name(T)}, {"residual", to_json(l)}};
        const Vector r = P.compose(MT, MMT, MT, muT, PM.eta_at(MT)) - idM;
        if (wr.is_null() && !detail::residual_ok(P, MT, MT, r, mode))
            wr = json{{"object", P.object_name(T)}, {"residual", to_json(r)}};
    }
    rep.add("associativity", wa.is_null(), "", wa);
    rep.add("left_unit", wl.is_null(), "mu o M(eta) = id", wl);
    rep.add("right_unit", wr.is_null(), "mu o eta_M = id", wr);
    rep.seconds = sw.seconds();
    return rep;
}

inline VerdictReport check_dg_monad(const PretrMonad& PM, const std::vector<ObjId>& samples = {}) {
    return check_monad(PM, NatMode::strict, samples);
}
inline VerdictReport check_weak_monad(const PretrMonad& PM, const std::vector<ObjId>& samples = {}) {
    return check_monad(PM, NatMode::weak, samples);
}

enum class SepMode { strict, h0 };

inline const char* to_string(SepMode m) { return m == SepMode::strict ? "strict" : "h0"; }

/// The separability equations as an affine system in the coordinates of the
/// base components sigma_A: M A -> MM A.
class SeparabilitySystem {
public:
    SeparabilitySystem(const PretrMonad& PM, SepMode mode) : pm_(PM), mode_(mode) {
        const auto& P = *PM.cat;
        for (ObjId A : base_objects(P)) {
            Slot s;
            s.A = A;
            s.MA = PM.M.base_image(A);
            s.MMA = PM.apply(s.MA);
            const auto& h = P.hom(s.MA, s.MMA);
            if (mode == SepMode::strict) {
                s.idx = h.indices_in(0);
                s.n = s.idx.size();
            } else {
                s.basis.emplace(h, 0);
                s.n = s.basis->dim();
            }
            s.offset = n_;
            n_ += s.n;
            slots_.push_back(std::move(s));
        }
    }

    std::size_t unknowns() const { return n_; }
    SepMode mode() const { return mode_; }

    /// Base components for a coordinate vector.
    std::map<ObjId, Vector> sigma(const Vector& x) const {
        const auto& P = *pm_.cat;
        std::map<ObjId, Vector> out;
        for (const auto& s : slots_) {
            const Vector loc = x.slice(s.offset, s.n);
            if (mode_ == SepMode::strict) {
                Vector v(P.field(), P.hom_dim(s.MA, s.MMA));
                for (std::size_t k = 0; k < s.n; ++k) v[s.idx[k]] = loc[k];
                out.emplace(s.A, std::move(v));
            } else {
                out.emplace(s.A, s.basis->lift(loc));
            }
        }
        return out;
    }

    Vector residual(const Vector& x) const { return evaluate(sigma(x)).first; }

    /// Residual vector and, per constraint family, the first violation.
    std::pair<Vector, json> evaluate(const std::map<ObjId, Vector>& sig) const {
        const auto& P = *pm_.cat;
        const auto& C = P.base();
        const Field f = P.field();
        const PretrFunctor MM = compose(pm_.M, pm_.M);
        const PretrNat ext(pm_.M, MM, [&sig](ObjId A) { return sig.at(A); });
        Vector out(f, 0);
        json first = nullptr;
        auto push = [&](ObjId a, ObjId b, const Vector& r, const std::string& what, ObjId A) {
            Vector c = r;
            if (mode_ == SepMode::h0) c = cls(a, b).class_of(r);
            if (!c.is_zero() && first.is_null())
                first = json{{"constraint", what}, {"object", C.object_name(A)}, {"residual", to_json(c)}};
            out.append(c);
        };
        for (const auto& s : slots_) {
            const Vector& sg = sig.at(s.A);
            const Vector mu = pm_.mu.base_component(s.A);
            const ObjId MMMA = pm_.apply(s.MMA);
            push(s.MA, s.MA, P.compose(s.MA, s.MMA, s.MA, mu, sg) - P.identity(s.MA), "mu_sigma_identity", s.A);
            const Vector smu = P.compose(s.MMA, s.MA, s.MMA, sg, mu);
            const Vector left = P.compose(s.MMA, MMMA, s.MMA, pm_.M.apply(s.MMA, s.MA, mu), ext.component(s.MA));
            push(s.MMA, s.MMA, smu - left, "bimodule_left", s.A);
            const Vector right =
                P.compose(s.MMA, MMMA, s.MMA, pm_.mu_at(s.MA), pm_.M.apply(s.MA, s.MMA, sg));
            push(s.MMA, s.MMA, smu - right, "bimodule_right", s.A);
            if (mode_ == SepMode::strict) {
                const Vector d = P.d(s.MA, s.MMA, sg);
                if (!d.is_zero() && first.is_null())
                    first = json{{"constraint", "closed"}, {"object", C.object_name(s.A)}};
                out.append(d);
            }
        }
        for (const auto& sa : slots_)
            for (const auto& sb : slots_) {
                const auto& h = C.hom(sa.A, sb.A);
                std::vector<Vector> tests;
                if (mode_ == SepMode::strict)
                    for (std::size_t i = 0; i < h.dim(); ++i) tests.push_back(Vector::unit(f, h.dim(), i));
                else
                    tests = detail::cocycles(h, 0);
                for (const auto& t : tests) {
                    const Vector Mt = pm_.M.base_map(sa.A, sb.A, t);
                    const Vector MMt = pm_.M.apply(sa.MA, sb.MA, Mt);
                    const Vector r = P.compose(sa.MA, sa.MMA, sb.MMA, MMt, sig.at(sa.A)) -
                                     P.compose(sa.MA, sb.MA, sb.MMA, sig.at(sb.A), Mt);
                    push(sa.MA, sb.MMA, r, "naturality", sa.A);
                }
            }
        return {out, first};
    }

private:
    struct Slot {
        ObjId A = 0, MA = 0, MMA = 0;
        std::vector<std::size_t> idx;
        std::optional<CohomologyBasis> basis;
        std::size_t n = 0, offset = 0;
    };

    const CohomologyBasis& cls(ObjId a, ObjId b) const {
        auto it = bases_.find({a, b});
        if (it == bases_.end()) it = bases_.emplace(std::make_pair(a, b), CohomologyBasis(pm_.cat->hom(a, b), 0)).first;
        return it->second;
    }

    const PretrMonad& pm_;
    SepMode mode_;
    std::vector<Slot> slots_;
    std::size_t n_ = 0;
    mutable std::map<std::pair<ObjId, ObjId>, CohomologyBasis> bases_;
};

struct SeparabilityResult {
    VerdictReport report;
    std::optional<std::map<ObjId, Vector>> section;
    std::optional<Vector> certificate;
    std::size_t unknowns = 0;

    bool found() const { return section.has_value(); }
};

/// Solve for a section of mu that is a bimodule map, strictly on cochains or
/// on H^0 classes; the answer is re-verified before it is returned.
inline SeparabilityResult find_separability_section(const PretrMonad& PM, SepMode mode) {
    Stopwatch sw;
    SeparabilityResult res;
    res.report = VerdictReport("separability " + PM.name + " (" + to_string(mode) + ")", PM.cat->field().name());
    const SeparabilitySystem sys(PM, mode);
    res.unknowns = sys.unknowns();
    const auto sol = solve_affine_fn(PM.cat->field(), sys.unknowns(), [&](const Vector& x) { return sys.residual(x); });
    if (!sol.feasible()) {
        res.certificate = sol.certificate;
        res.report.add("section", Status::infeasible, "no section exists",
                       json{{"unknowns", sys.unknowns()}, {"certificate", to_json(*sol.certificate)}});
    } else {
        const auto sig = sys.sigma(*sol.solution);
        const auto [r, first] = sys.evaluate(sig);
        json w = json::object();
        for (const auto& [A, v] : sig) w[PM.cat->base().object_name(A)] = to_json(v);
        res.report.add("section", r.is_zero(), r.is_zero() ? "" : "solver output failed verification",
                       r.is_zero() ? json{{"sigma", w}} : first);
        if (r.is_zero()) res.section = sig;
    }
    res.report.seconds = sw.seconds();
    return res;
}

/// A monad on a finite presentation: endofunctor with mu: MM => M, eta: Id => M.
struct FiniteMonad {
    FunctorPresentation M;
    NatPresentation mu, eta;
    std::string name = "M";
};

inline FiniteMonad identity_monad(const FiniteCatPtr& C) {
    const auto Id = identity_functor(C);
    return FiniteMonad{Id, identity_nat(Id), identity_nat(Id), "identity"};
}

inline VerdictReport check_monad(const FiniteMonad& FM, NatMode mode) {
    Stopwatch sw;
    VerdictReport rep(mode == NatMode::strict ? "dg-monad " + FM.name : "weak-monad " + FM.name,
                      FM.M.src->field().name());
    const auto& C = *FM.M.src;
    if (FM.M.src != FM.M.dst) throw InvalidInput("monad functor must be an endofunctor");
    rep.merge(validate_functor(FM.M), "functor.");
    if (!(FM.mu.source == compose(FM.M, FM.M)) || !(FM.mu.target == FM.M))
        throw InvalidInput("mu must go from M o M to M");
    if (!(FM.eta.source == identity_functor(FM.M.src)) || !(FM.eta.target == FM.M))
        throw InvalidInput("eta must go from the identity to M");
    rep.merge(validate_nat(FM.mu, mode), "mu.");
    rep.merge(validate_nat(FM.eta, mode), "eta.");
    if (!rep.passed()) {
        rep.seconds = sw.seconds();
        return rep;
    }
    json wa = nullptr, wl = nullptr, wr = nullptr;
    for (ObjId x = 0; x < C.size(); ++x) {
        const ObjId Mx = FM.M.obj[x], MMx = FM.M.obj[Mx], MMMx = FM.M.obj[MMx];
        const Vector& mux = FM.mu.comp[x];
        const Vector a = C.compose(MMMx, MMx, Mx, mux, FM.M.apply(MMx, Mx, mux)) -
                         C.compose(MMMx, MMx, Mx, mux, FM.mu.comp[Mx]);
        if (wa.is_null() && !detail::residual_ok(C, MMMx, Mx, a, mode))
            wa = json{{"object", C.object_name(x)}, {"residual", to_json(a)}};
        const Vector l = C.compose(Mx, MMx, Mx, mux, FM.M.apply(x, Mx, FM.eta.comp[x])) - C.identity(Mx);
        if (wl.is_null() && !detail::residual_ok(C, Mx, Mx, l, mode))
            wl = json{{"object", C.object_name(x)}, {"residual", to_json(l)}};
        const Vector r = C.compose(Mx, MMx, Mx, mux, FM.eta.comp[Mx]) - C.identity(Mx);
        if (wr.is_null() && !detail::residual_ok(C, Mx, Mx, r, mode))
            wr = json{{"object", C.object_name(x)}, {"residual", to_json(r)}};
    }
    rep.add("associativity", wa.is_null(), "", wa);
    rep.add("left_unit", wl.is_null(), "mu o M(eta) = id", wl);
    rep.add("right_unit", wr.is_null(), "mu o eta_M = id", wr);
    rep.seconds = sw.seconds();
    return rep;
}

/// Entrywise extension of a finite monad to twisted complexes over its category.
inline PretrMonad pretr_monad(const FiniteMonad& FM, const TwistedCatPtr& P) {
    if (&P->base() != FM.M.src.get()) throw InvalidInput("twisted layer is not over the monad's category");
    const auto M = pretr_functor(FM.M, P, P);
    return make_pretr_monad(
        P, M, [FM](ObjId A) { return FM.mu.comp[A]; }, [FM](ObjId A) { return FM.eta.comp[A]; }, FM.name);
}

/// H^0 of a finite monad: a monad on the additive H^0 presentation.
inline FiniteMonad h0_monad(const FiniteMonad& FM, const H0Category& H) {
    return FiniteMonad{h0_functor(FM.M, H, H), h0_nat(FM.mu, H, H), h0_nat(FM.eta, H, H), "H0(" + FM.name + ")"};
}

}  // namespace dgm
