#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dgm/monad.hpp"

namespace dgm {

/// An Eilenberg-Moore algebra (x, lambda) with lambda in Hom(M x, x).
struct ModuleObject {
    ObjId x = 0;
    Vector lambda;

    bool operator==(const ModuleObject& o) const { return x == o.x && lambda == o.lambda; }
};

inline ModuleObject free_module(const PretrMonad& PM, ObjId x) { return {PM.apply(x), PM.mu_at(x)}; }
inline ObjId forgetful(const ModuleObject& m) { return m.x; }

/// Module axioms: lambda closed of degree 0, lambda o M lambda = lambda o mu_x
/// and lambda o eta_x = id_x; in weak mode up to coboundaries.
inline VerdictReport check_module(const PretrMonad& PM, const ModuleObject& m, NatMode mode,
                                  const std::string& label = "module") {
    const auto& P = *PM.cat;
    VerdictReport rep(label, P.field().name());
    const ObjId x = m.x, Mx = PM.apply(x), MMx = PM.apply(Mx);
    const auto& h = P.hom(Mx, x);
    if (m.lambda.size() != h.dim()) {
        rep.add("shape", false, "structure map has the wrong length");
        return rep;
    }
    const bool closed = h.is_homogeneous(m.lambda, 0) && h.apply_d(m.lambda).is_zero();
    rep.add("closed_degree0", closed);
    if (!closed) return rep;
    const Vector a = P.compose(MMx, Mx, x, m.lambda, PM.M.apply(Mx, x, m.lambda)) -
                     P.compose(MMx, Mx, x, m.lambda, PM.mu_at(x));
    rep.add("associativity", detail::residual_ok(P, MMx, x, a, mode), "lambda o M(lambda) = lambda o mu",
            a.is_zero() ? json(nullptr) : json{{"residual", to_json(a)}});
    const Vector u = P.compose(x, Mx, x, m.lambda, PM.eta_at(x)) - P.identity(x);
    rep.add("unit", detail::residual_ok(P, x, x, u, mode), "lambda o eta = id",
            u.is_zero() ? json(nullptr) : json{{"residual", to_json(u)}});
    return rep;
}

/// The defect tau o M(phi) - phi o lambda of a candidate module morphism.
inline Vector module_defect(const PretrMonad& PM, const ModuleObject& m1, const ModuleObject& m2, const Vector& phi) {
    const auto& P = *PM.cat;
    const ObjId x = m1.x, y = m2.x, Mx = PM.apply(x), My = PM.apply(y);
    return P.compose(Mx, My, y, m2.lambda, PM.M.apply(x, y, phi)) - P.compose(Mx, x, y, phi, m1.lambda);
}

inline bool is_module_morphism(const PretrMonad& PM, const ModuleObject& m1, const ModuleObject& m2, const Vector& phi,
                               NatMode mode = NatMode::strict) {
    const Vector r = module_defect(PM, m1, m2, phi);
    if (r.is_zero()) return true;
    if (mode == NatMode::strict) return false;
    const auto& h = PM.cat->hom(PM.apply(m1.x), m2.x);
    const auto deg = degree_of(h, r);
    if (!deg || !h.apply_d(r).is_zero()) return false;
    return is_coboundary(h, r, *deg).found();
}

/// A subcomplex of Hom(x, y) with its own basis: strict module morphisms, or
/// in weak mode those whose defect is a coboundary.
struct EmHomComplex {
    DgSpace space;
    std::vector<Vector> basis;  // ambient coordinates, grouped by degree
    std::optional<Matrix> coords;
    std::size_t ambient_dim = 0;
    bool weak = false;
    std::size_t ambient_b0 = 0;  // dim of degree-0 coboundaries of the ambient hom

    Vector to_ambient(const Vector& v) const {
        Vector out(space.field, ambient_dim);
        for (std::size_t k = 0; k < basis.size(); ++k) out.axpy(v[k], basis[k]);
        return out;
    }
    Vector from_ambient(const Vector& phi) const {
        if (!coords) return Vector(space.field, 0);
        Vector c = *coords * phi;
        if (to_ambient(c) != phi) throw InvalidInput("morphism does not lie in the module hom complex");
        return c;
    }
    bool contains(const Vector& phi) const {
        if (!coords) return phi.is_zero();
        return to_ambient(*coords * phi) == phi;
    }

    /// dim H^0: cocycles modulo coboundaries of the subcomplex (strict) or of
    /// the ambient hom (weak).
    std::size_t h0_dim() const {
        if (!weak) return CohomologyBasis(space, 0).dim();
        return detail::cocycles(space, 0).size() - ambient_b0;
    }
};

namespace detail {

inline EmHomComplex assemble_subcomplex(const DgSpace& H, std::vector<Vector> basis, bool weak) {
    const Field f = H.field;
    std::vector<int> degs;
    for (const auto& b : basis) degs.push_back(*degree_of(H, b));
    EmHomComplex out{DgSpace(f, H.grading, degs), std::move(basis), std::nullopt, H.dim(), weak, 0};
    if (!out.basis.empty()) {
        out.coords = left_inverse(Matrix::from_columns(f, H.dim(), out.basis));
        Matrix d(f, out.basis.size(), out.basis.size());
        for (std::size_t k = 0; k < out.basis.size(); ++k) {
            const Vector db = H.apply_d(out.basis[k]);
            const Vector c = *out.coords * db;
            if (out.to_ambient(c) != db) throw InternalError("module hom complex is not closed under d");
            d.set_column(k, c);
        }
        out.space = DgSpace(f, H.grading, degs, d);
    }
    out.ambient_b0 = coboundaries(H, 0).size();
    return out;
}

}  // namespace detail

inline EmHomComplex em_hom_complex(const PretrMonad& PM, const ModuleObject& m1, const ModuleObject& m2,
                                   NatMode mode = NatMode::strict) {
    const auto& P = *PM.cat;
    const Field f = P.field();
    const ObjId x = m1.x, y = m2.x, Mx = PM.apply(x);
    const auto& H = P.hom(x, y);
    const auto& HM = P.hom(Mx, y);
    std::vector<Vector> basis;
    for (int n : H.support()) {
        const auto idx = H.indices_in(n);
        if (idx.empty()) continue;
        Matrix R(f, HM.dim(), idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            R.set_column(k, module_defect(PM, m1, m2, Vector::unit(f, H.dim(), idx[k])));
        if (mode == NatMode::strict) {
            for (const auto& v : kernel_basis(R)) {
                Vector full(f, H.dim());
                for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = v[k];
                basis.push_back(std::move(full));
            }
        } else {
            // R(phi) = d psi with psi of degree n - 1 in Hom(Mx, y).
            const Matrix Dm = HM.d_block(n - 1);
            const auto rows = HM.indices_in(n);
            Matrix Rn(f, rows.size(), idx.size());
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t k = 0; k < idx.size(); ++k) Rn(i, k) = R(rows[i], k);
            const Matrix sys = Matrix::hstack(Rn, Dm * Scalar(f, -1));
            std::vector<Vector> proj;
            for (const auto& v : kernel_basis(sys)) {
                Vector full(f, H.dim());
                for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = v[k];
                proj.push_back(std::move(full));
            }
            if (!proj.empty())
                for (const auto& c : column_space_basis(Matrix::from_columns(f, H.dim(), proj))) basis.push_back(c);
        }
    }
    return detail::assemble_subcomplex(H, std::move(basis), mode == NatMode::weak);
}

/// Full DG subcategory of strict modules, interned by value. Homs are the
/// strict module hom complexes in their own bases.
class EmCategory : public DgCategory {
public:
    explicit EmCategory(PretrMonad pm) : pm_(std::move(pm)) {}

    const PretrMonad& monad() const { return pm_; }
    Field field() const override { return pm_.cat->field(); }
    Grading grading() const override { return pm_.cat->grading(); }

    ObjId add(const ModuleObject& m) {
        for (std::size_t i = 0; i < mods_.size(); ++i)
            if (mods_[i] == m) return i;
        mods_.push_back(m);
        return mods_.size() - 1;
    }
    const ModuleObject& module(ObjId a) const { return mods_.at(a); }
    std::size_t size() const { return mods_.size(); }

    std::string object_name(ObjId a) const override {
        return "(" + pm_.cat->object_name(mods_.at(a).x) + ",#" + std::to_string(a) + ")";
    }

    const EmHomComplex& em_hom(ObjId a, ObjId b) const {
        std::lock_guard lock(mu_);
        auto it = homs_.find({a, b});
        if (it == homs_.end()) it = homs_.emplace(std::make_pair(a, b), em_hom_complex(pm_, mods_.at(a), mods_.at(b))).first;
        return it->second;
    }
    const DgSpace& hom(ObjId a, ObjId b) const override { return em_hom(a, b).space; }

    Vector compose(ObjId a, ObjId b, ObjId c, const Vector& g, const Vector& f) const override {
        const Vector r = pm_.cat->compose(mods_.at(a).x, mods_.at(b).x, mods_.at(c).x, em_hom(b, c).to_ambient(g),
                                          em_hom(a, b).to_ambient(f));
        return em_hom(a, c).from_ambient(r);
    }
    Vector identity(ObjId a) const override { return em_hom(a, a).from_ambient(pm_.cat->identity(mods_.at(a).x)); }

    /// Ambient morphism -> coordinates, for a strict module morphism.
    Vector lift(ObjId a, ObjId b, const Vector& phi) const { return em_hom(a, b).from_ambient(phi); }
    Vector underlying(ObjId a, ObjId b, const Vector& v) const { return em_hom(a, b).to_ambient(v); }

private:
    PretrMonad pm_;
    std::vector<ModuleObject> mods_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<ObjId, ObjId>, EmHomComplex> homs_;
};

/// Full subcategory on the free modules of the given objects.
inline std::shared_ptr<FiniteDgCategory> free_subcategory(const PretrMonad& PM, const std::vector<ObjId>& generators) {
    EmCategory E(PM);
    std::vector<ObjId> ids;
    std::vector<std::string> names;
    for (ObjId x : generators) {
        ids.push_back(E.add(free_module(PM, x)));
        names.push_back("F" + PM.cat->object_name(x));
    }
    return materialize(E, ids, names);
}

/// (x[n], lambda): M commutes with shifts on the nose, so lambda keeps its
/// coordinates.
inline ModuleObject em_shift(const PretrMonad& PM, const ModuleObject& m, int n) {
    const auto& P = *PM.cat;
    const ObjId xs = shift(P, m.x, n);
    if (PM.apply(xs) != shift(P, PM.apply(m.x), n)) throw InternalError("monad does not commute with shifts");
    return {xs, m.lambda};
}

struct EmConeResult {
    ModuleObject cone;
    ConeResult triangle;
    ModuleObject source_shifted;
};

/// Cone of a closed degree-0 module morphism with structure map diag(lambda, tau).
inline EmConeResult em_cone(const PretrMonad& PM, const ModuleObject& m1, const ModuleObject& m2, const Vector& phi) {
    const auto& P = *PM.cat;
    if (!is_module_morphism(PM, m1, m2, phi)) throw InvalidInput("cone needs a module morphism");
    const ConeResult c = cone(P, m1.x, m2.x, phi);
    const ObjId Mc = PM.apply(c.cone);
    const ObjId Mx = PM.apply(m1.x), My = PM.apply(m2.x);
    const ConeResult mc = cone(P, Mx, My, PM.M.apply(m1.x, m2.x, phi));
    if (mc.cone != Mc) throw InternalError("monad does not commute with cones");
    const std::size_t nx = P.complex(m1.x).size(), nMx = P.complex(Mx).size();
    Vector lam(P.field(), P.hom_dim(Mc, c.cone));
    const std::size_t ny = P.complex(m2.x).size(), nMy = P.complex(My).size();
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nMx; ++j) P.add_block(Mc, c.cone, lam, i, j, P.block(Mx, m1.x, m1.lambda, i, j));
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < nMy; ++j)
            P.add_block(Mc, c.cone, lam, nx + i, nMx + j, P.block(My, m2.x, m2.lambda, i, j));
    return {ModuleObject{c.cone, lam}, c, em_shift(PM, m1, 1)};
}

/// Unit and counit data of an adjunction F -| G between C and D, evaluated on
/// sample objects.
struct AdjunctionData {
    const DgCategory* C = nullptr;
    const DgCategory* D = nullptr;
    std::function<ObjId(ObjId)> F, G;
    std::function<Vector(ObjId, ObjId, const Vector&)> Fmor, Gmor;
    std::function<Vector(ObjId)> unit;    // x -> G F x
    std::function<Vector(ObjId)> counit;  // F G d -> d
    std::vector<ObjId> c_samples, d_samples;
};

/// Triangle identities G(eps) o eta_G = id and eps_F o F(eta) = id, up to coboundaries.
inline VerdictReport check_adjunction_h0(const AdjunctionData& a, const std::string& label = "adjunction") {
    Stopwatch sw;
    const auto& C = *a.C;
    const auto& D = *a.D;
    VerdictReport rep(label, C.field().name());
    json wg = nullptr, wf = nullptr;
    for (ObjId d : a.d_samples) {
        const ObjId Gd = a.G(d), FGd = a.F(Gd), GFGd = a.G(FGd);
        const Vector r = C.compose(Gd, GFGd, Gd, a.Gmor(FGd, d, a.counit(d)), a.unit(Gd)) - C.identity(Gd);
        if (!detail::residual_ok(C, Gd, Gd, r, NatMode::weak) && wg.is_null())
            wg = json{{"object", D.object_name(d)}, {"residual", to_json(r)}};
    }
    rep.add("triangle_G", wg.is_null(), "G(eps) o eta_G = id", wg);
    for (ObjId x : a.c_samples) {
        const ObjId Fx = a.F(x), GFx = a.G(Fx), FGFx = a.F(GFx);
        const Vector r = D.compose(Fx, FGFx, Fx, a.counit(Fx), a.Fmor(x, GFx, a.unit(x))) - D.identity(Fx);
        if (!detail::residual_ok(D, Fx, Fx, r, NatMode::weak) && wf.is_null())
            wf = json{{"object", C.object_name(x)}, {"residual", to_json(r)}};
    }
    rep.add("triangle_F", wf.is_null(), "eps_F o F(eta) = id", wf);
    rep.seconds = sw.seconds();
    return rep;
}

/// Free -| forgetful for a strict monad, with counit lambda at (x, lambda).
inline AdjunctionData free_forgetful(const std::shared_ptr<EmCategory>& E, const std::vector<ObjId>& c_samples,
                                     const std::vector<ObjId>& d_samples) {
    const auto& PM = E->monad();
    AdjunctionData a;
    a.C = PM.cat.get();
    a.D = E.get();
    a.F = [E](ObjId x) { return E->add(free_module(E->monad(), x)); };
    a.G = [E](ObjId m) { return E->module(m).x; };
    a.Fmor = [E](ObjId x, ObjId y, const Vector& f) {
        const auto& pm = E->monad();
        const ObjId Fx = E->add(free_module(pm, x)), Fy = E->add(free_module(pm, y));
        return E->lift(Fx, Fy, pm.M.apply(x, y, f));
    };
    a.Gmor = [E](ObjId m, ObjId n, const Vector& v) { return E->underlying(m, n, v); };
    a.unit = [E](ObjId x) { return E->monad().eta_at(x); };
    a.counit = [E](ObjId m) {
        const auto& mod = E->module(m);
        const ObjId F = E->add(free_module(E->monad(), mod.x));
        return E->lift(F, m, mod.lambda);
    };
    a.c_samples = c_samples;
    a.d_samples = d_samples;
    return a;
}

/// K(d) = (G d, G eps_d) for an adjunction whose composite G F is the monad.
struct ComparisonResult {
    VerdictReport report;
    std::vector<ModuleObject> images;
};

inline ComparisonResult comparison_functor(const PretrMonad& PM, const PretrFunctor& F, const PretrFunctor& G,
                                           const PretrNat& eps, const std::vector<ObjId>& d_samples,
                                           const std::vector<ObjId>& c_samples) {
    Stopwatch sw;
    ComparisonResult out{VerdictReport("comparison-functor " + PM.name, PM.cat->field().name()), {}};
    auto& rep = out.report;
    const bool gf = same_functor(compose(G, F), PM.M);
    rep.add("GF_equals_M", gf);
    if (!gf) throw InvalidInput("G o F does not agree with the monad on its presentation");
    json wm = nullptr;
    for (ObjId d : d_samples) {
        const ObjId Gd = G.apply(d), FGd = F.apply(Gd);
        if (G.apply(FGd) != PM.apply(Gd)) throw InternalError("G F G d differs from M G d");
        ModuleObject K{Gd, G.apply(FGd, d, eps.component(d))};
        const auto r = check_module(PM, K, NatMode::weak);
        if (!r.passed() && wm.is_null()) wm = json{{"object", F.dst().object_name(d)}};
        out.images.push_back(std::move(K));
    }
    rep.add("images_are_modules", wm.is_null(), "", wm);
    json wk = nullptr;
    for (ObjId x : c_samples) {
        const ObjId Fx = F.apply(x), GFx = G.apply(Fx);
        const ModuleObject K{GFx, G.apply(F.apply(GFx), Fx, eps.component(Fx))};
        const ModuleObject Fm = free_module(PM, x);
        const Vector id = PM.cat->identity(GFx);
        const bool ok = K.x == Fm.x && is_module_morphism(PM, K, Fm, id, NatMode::weak) &&
                        is_module_morphism(PM, Fm, K, id, NatMode::weak);
        if (!ok && wk.is_null()) wk = json{{"object", PM.cat->object_name(x)}};
    }
    rep.add("KF_isomorphic_to_free", wk.is_null(), "identity is a weak module isomorphism", wk);
    rep.seconds = sw.seconds();
    return out;
}

}  // namespace dgm
