#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dgm/twisted.hpp"

namespace dgm {

/// Base objects of a twisted category whose base is finitely presented.
inline std::vector<ObjId> base_objects(const TwistedCategory& P) {
    auto fin = dynamic_cast<const FiniteDgCategory*>(&P.base());
    if (!fin) throw InvalidInput("operation needs a finitely presented base category");
    std::vector<ObjId> out;
    for (ObjId a = 0; a < fin->size(); ++a) out.push_back(a);
    return out;
}

/// A DG functor Pretr(C) -> Pretr(D) given by its values on C: a twisted
/// complex for every base object and a twisted morphism for every base
/// morphism. The extension shifts the image of A_i by r_i, signs its inner
/// twist by (-1)^{r_i} and uses the images of the q_ij as connecting blocks.
class PretrFunctor {
public:
    using ObjFn = std::function<TwistedComplex(ObjId)>;
    using MorFn = std::function<Vector(ObjId, ObjId, const Vector&)>;

    PretrFunctor(TwistedCatPtr src, TwistedCatPtr dst, ObjFn obj0, MorFn mor0, std::string name = "F")
        : s_(std::make_shared<State>()) {
        s_->src = std::move(src);
        s_->dst = std::move(dst);
        s_->obj0 = std::move(obj0);
        s_->mor0 = std::move(mor0);
        s_->name = std::move(name);
    }

    const TwistedCategory& src() const { return *s_->src; }
    const TwistedCategory& dst() const { return *s_->dst; }
    TwistedCatPtr src_ptr() const { return s_->src; }
    TwistedCatPtr dst_ptr() const { return s_->dst; }
    const std::string& name() const { return s_->name; }

    /// Image of the base object A, interned in the target.
    ObjId base_image(ObjId A) const {
        {
            std::lock_guard lock(s_->mu);
            auto it = s_->base_cache.find(A);
            if (it != s_->base_cache.end()) return it->second;
        }
        const ObjId id = dst().add(s_->obj0(A));
        std::lock_guard lock(s_->mu);
        s_->base_cache.emplace(A, id);
        return id;
    }

    /// Image of a base morphism f: A -> B, in Hom(F A, F B).
    Vector base_map(ObjId A, ObjId B, const Vector& f) const {
        Vector v = s_->mor0(A, B, f);
        if (v.size() != dst().hom_dim(base_image(A), base_image(B)))
            throw DimensionMismatch("functor '" + name() + "' produced a morphism of the wrong length");
        return v;
    }

    ObjId apply(ObjId T) const {
        {
            std::lock_guard lock(s_->mu);
            auto it = s_->obj_cache.find(T);
            if (it != s_->obj_cache.end()) return it->second;
        }
        const ObjId id = dst().add(apply_complex(src().complex(T)));
        std::lock_guard lock(s_->mu);
        s_->obj_cache.emplace(T, id);
        return id;
    }

    TwistedComplex apply_complex(const TwistedComplex& T) const {
        const Field f = dst().field();
        TwistedComplex out;
        std::vector<std::size_t> off;
        std::vector<ObjId> imgs;
        for (const auto& [A, r] : T.entries) {
            const ObjId I = base_image(A);
            imgs.push_back(I);
            off.push_back(out.entries.size());
            const TwistedComplex E = dst().complex(I);
            const std::size_t o = out.entries.size();
            for (const auto& [B, s] : E.entries) out.entries.emplace_back(B, s + r);
            for (const auto& [kl, v] : E.q)
                out.q.insert_or_assign({o + kl.first, o + kl.second}, v * signed_one(f, r));
        }
        for (const auto& [ij, qv] : T.q) {
            const auto [i, j] = ij;
            const Vector img = base_map(T.entries[j].first, T.entries[i].first, qv);
            const auto& Ei = dst().complex(imgs[i]);
            const auto& Ej = dst().complex(imgs[j]);
            for (std::size_t l = 0; l < Ei.size(); ++l)
                for (std::size_t k = 0; k < Ej.size(); ++k) {
                    Vector blk = dst().block(imgs[j], imgs[i], img, l, k);
                    if (blk.is_zero()) continue;
                    const std::pair<std::size_t, std::size_t> key{off[i] + l, off[j] + k};
                    auto it = out.q.find(key);
                    if (it == out.q.end())
                        out.q.emplace(key, std::move(blk));
                    else
                        it->second += blk;
                }
        }
        return out;
    }

    /// Image of a morphism f: T -> T' of Pretr(C).
    Vector apply(ObjId a, ObjId b, const Vector& fv) const {
        const auto& S = src().complex(a);
        const auto& T = src().complex(b);
        const ObjId Fa = apply(a), Fb = apply(b);
        Vector out(dst().field(), dst().hom_dim(Fa, Fb));
        std::vector<std::size_t> offS, offT;
        std::size_t o = 0;
        for (const auto& e : S.entries) {
            offS.push_back(o);
            o += dst().complex(base_image(e.first)).size();
        }
        o = 0;
        for (const auto& e : T.entries) {
            offT.push_back(o);
            o += dst().complex(base_image(e.first)).size();
        }
        for (std::size_t i = 0; i < T.size(); ++i)
            for (std::size_t j = 0; j < S.size(); ++j) {
                const Vector fij = src().block(a, b, fv, i, j);
                if (fij.is_zero()) continue;
                const ObjId Aj = S.entries[j].first, Ai = T.entries[i].first;
                const ObjId Ij = base_image(Aj), Ii = base_image(Ai);
                const Vector img = base_map(Aj, Ai, fij);
                const std::size_t ni = dst().complex(Ii).size(), nj = dst().complex(Ij).size();
                for (std::size_t l = 0; l < ni; ++l)
                    for (std::size_t k = 0; k < nj; ++k) {
                        const Vector blk = dst().block(Ij, Ii, img, l, k);
                        if (!blk.is_zero()) dst().add_block(Fa, Fb, out, offT[i] + l, offS[j] + k, blk);
                    }
            }
        return out;
    }

    /// Offsets of the image of each entry of T inside F(T).
    std::vector<std::size_t> entry_offsets(ObjId T) const {
        std::vector<std::size_t> off;
        std::size_t o = 0;
        for (const auto& e : src().complex(T).entries) {
            off.push_back(o);
            o += dst().complex(base_image(e.first)).size();
        }
        return off;
    }

private:
    struct State {
        TwistedCatPtr src, dst;
        ObjFn obj0;
        MorFn mor0;
        std::string name;
        std::mutex mu;
        std::map<ObjId, ObjId> base_cache, obj_cache;
    };
    std::shared_ptr<State> s_;
};

inline PretrFunctor identity_pretr(const TwistedCatPtr& P) {
    return PretrFunctor(
        P, P, [](ObjId A) { return TwistedComplex::single(A); },
        [](ObjId, ObjId, const Vector& f) { return f; }, "Id");
}

/// G o F.
inline PretrFunctor compose(const PretrFunctor& G, const PretrFunctor& F) {
    if (F.dst_ptr() != G.src_ptr()) throw InvalidInput("functors are not composable");
    return PretrFunctor(
        F.src_ptr(), G.dst_ptr(),
        [G, F](ObjId A) { return G.dst().complex(G.apply(F.base_image(A))); },
        [G, F](ObjId A, ObjId B, const Vector& f) {
            return G.apply(F.base_image(A), F.base_image(B), F.base_map(A, B, f));
        },
        G.name() + F.name());
}

/// Entrywise extension of a functor between finite presentations.
inline PretrFunctor pretr_functor(const FunctorPresentation& F, const TwistedCatPtr& PC, const TwistedCatPtr& PD) {
    return PretrFunctor(
        PC, PD, [F](ObjId A) { return TwistedComplex::single(F.obj[A]); },
        [F](ObjId A, ObjId B, const Vector& f) { return F.apply(A, B, f); }, "Pretr(F)");
}

/// A natural transformation between extended functors, given by its
/// components at base objects; components at twisted complexes are block
/// diagonal.
class PretrNat {
public:
    using CompFn = std::function<Vector(ObjId)>;

    PretrNat(PretrFunctor source, PretrFunctor target, CompFn comp0)
        : source_(std::move(source)), target_(std::move(target)), s_(std::make_shared<State>()) {
        s_->comp0 = std::move(comp0);
    }

    const PretrFunctor& source() const { return source_; }
    const PretrFunctor& target() const { return target_; }

    Vector base_component(ObjId A) const {
        {
            std::lock_guard lock(s_->mu);
            auto it = s_->cache.find(A);
            if (it != s_->cache.end()) return it->second;
        }
        Vector v = s_->comp0(A);
        const auto& P = source_.dst();
        if (v.size() != P.hom_dim(source_.base_image(A), target_.base_image(A)))
            throw DimensionMismatch("natural transformation component has the wrong length");
        std::lock_guard lock(s_->mu);
        s_->cache.emplace(A, v);
        return v;
    }

    Vector component(ObjId T) const {
        const auto& P = source_.dst();
        const ObjId Ft = source_.apply(T), Gt = target_.apply(T);
        Vector out(P.field(), P.hom_dim(Ft, Gt));
        const auto& Tc = source_.src().complex(T);
        const auto offF = source_.entry_offsets(T);
        const auto offG = target_.entry_offsets(T);
        for (std::size_t i = 0; i < Tc.size(); ++i) {
            const ObjId A = Tc.entries[i].first;
            const Vector c = base_component(A);
            const ObjId FA = source_.base_image(A), GA = target_.base_image(A);
            const std::size_t nf = P.complex(FA).size(), ng = P.complex(GA).size();
            for (std::size_t l = 0; l < ng; ++l)
                for (std::size_t k = 0; k < nf; ++k) {
                    const Vector blk = P.block(FA, GA, c, l, k);
                    if (!blk.is_zero()) P.add_block(Ft, Gt, out, offG[i] + l, offF[i] + k, blk);
                }
        }
        return out;
    }

private:
    struct State {
        CompFn comp0;
        std::mutex mu;
        std::map<ObjId, Vector> cache;
    };
    PretrFunctor source_, target_;
    std::shared_ptr<State> s_;
};

inline PretrNat identity_nat(const PretrFunctor& F) {
    return PretrNat(F, F, [F](ObjId A) { return F.dst().identity(F.base_image(A)); });
}

/// beta . alpha.
inline PretrNat vertical(const PretrNat& beta, const PretrNat& alpha) {
    return PretrNat(alpha.source(), beta.target(), [alpha, beta](ObjId A) {
        const auto& P = alpha.source().dst();
        return P.compose(alpha.source().base_image(A), alpha.target().base_image(A), beta.target().base_image(A),
                         beta.base_component(A), alpha.base_component(A));
    });
}

/// beta * alpha: component G'(alpha_A) o beta_{F A}.
inline PretrNat horizontal(const PretrNat& beta, const PretrNat& alpha) {
    const PretrFunctor& F = alpha.source();
    const PretrFunctor& Fp = alpha.target();
    const PretrFunctor& G = beta.source();
    const PretrFunctor& Gp = beta.target();
    return PretrNat(compose(G, F), compose(Gp, Fp), [alpha, beta, F, Fp, G, Gp](ObjId A) {
        const auto& E = G.dst();
        const ObjId FA = F.base_image(A), FpA = Fp.base_image(A);
        return E.compose(G.apply(FA), Gp.apply(FA), Gp.apply(FpA), Gp.apply(FA, FpA, alpha.base_component(A)),
                         beta.component(FA));
    });
}

/// H alpha.
inline PretrNat whisker_left(const PretrFunctor& H, const PretrNat& alpha) {
    return PretrNat(compose(H, alpha.source()), compose(H, alpha.target()), [H, alpha](ObjId A) {
        return H.apply(alpha.source().base_image(A), alpha.target().base_image(A), alpha.base_component(A));
    });
}

/// alpha F.
inline PretrNat whisker_right(const PretrNat& alpha, const PretrFunctor& F) {
    return PretrNat(compose(alpha.source(), F), compose(alpha.target(), F),
                    [alpha, F](ObjId A) { return alpha.component(F.base_image(A)); });
}

inline PretrNat pretr_nat(const NatPresentation& nu, const PretrFunctor& PF, const PretrFunctor& PG) {
    return PretrNat(PF, PG, [nu](ObjId A) { return nu.comp[A]; });
}

/// Equality of the defining base data on every base object and basis morphism.
inline bool same_functor(const PretrFunctor& F, const PretrFunctor& G) {
    if (F.src_ptr() != G.src_ptr() || F.dst_ptr() != G.dst_ptr()) return false;
    const auto objs = base_objects(F.src());
    const auto& C = F.src().base();
    for (ObjId A : objs)
        if (F.base_image(A) != G.base_image(A)) return false;
    for (ObjId A : objs)
        for (ObjId B : objs)
            for (std::size_t i = 0; i < C.hom_dim(A, B); ++i) {
                const Vector e = Vector::unit(C.field(), C.hom_dim(A, B), i);
                if (F.base_map(A, B, e) != G.base_map(A, B, e)) return false;
            }
    return true;
}

inline bool same_nat(const PretrNat& a, const PretrNat& b) {
    if (!same_functor(a.source(), b.source()) || !same_functor(a.target(), b.target())) return false;
    for (ObjId A : base_objects(a.source().src()))
        if (a.base_component(A) != b.base_component(A)) return false;
    return true;
}

/// Chain-map, composition and identity checks of the base data on every
/// base basis element.
inline VerdictReport validate_pretr_functor(const PretrFunctor& F) {
    VerdictReport rep("pretr-functor " + F.name(), F.src().field().name());
    const auto& C = F.src().base();
    const auto& P = F.dst();
    const Field f = C.field();
    const auto objs = base_objects(F.src());
    json wmc = nullptr, wchain = nullptr, wcomp = nullptr, wid = nullptr, wdeg = nullptr;
    for (ObjId A : objs) {
        auto v = validate_twisted(P.base(), P.complex(F.base_image(A)));
        if (!v.passed() && wmc.is_null()) wmc = json{{"object", C.object_name(A)}};
    }
    rep.add("images_valid", wmc.is_null(), "", wmc);
    for (ObjId A : objs)
        for (ObjId B : objs) {
            const auto& h = C.hom(A, B);
            const ObjId FA = F.base_image(A), FB = F.base_image(B);
            const auto& Hd = P.hom(FA, FB);
            for (std::size_t i = 0; i < h.dim(); ++i) {
                const Vector e = Vector::unit(f, h.dim(), i);
                const Vector img = F.base_map(A, B, e);
                if (wdeg.is_null() && !Hd.is_homogeneous(img, h.degrees[i]))
                    wdeg = json{{"source", C.object_name(A)}, {"target", C.object_name(B)}, {"basis", i}};
                if (wchain.is_null() && Hd.apply_d(img) != F.base_map(A, B, h.apply_d(e)))
                    wchain = json{{"source", C.object_name(A)}, {"target", C.object_name(B)}, {"basis", i}};
            }
        }
    rep.add("degree_preserving", wdeg.is_null(), "", wdeg);
    rep.add("chain_map", wchain.is_null(), "", wchain);
    for (ObjId A : objs)
        for (ObjId B : objs)
            for (ObjId Cc : objs) {
                if (!wcomp.is_null()) break;
                const auto dab = C.hom_dim(A, B), dbc = C.hom_dim(B, Cc);
                for (std::size_t i = 0; i < dbc && wcomp.is_null(); ++i)
                    for (std::size_t j = 0; j < dab; ++j) {
                        const Vector g = Vector::unit(f, dbc, i), h = Vector::unit(f, dab, j);
                        const Vector l = F.base_map(A, Cc, C.compose(A, B, Cc, g, h));
                        const Vector r = P.compose(F.base_image(A), F.base_image(B), F.base_image(Cc),
                                                   F.base_map(B, Cc, g), F.base_map(A, B, h));
                        if (l != r) {
                            wcomp = json{{"objects", {C.object_name(A), C.object_name(B), C.object_name(Cc)}},
                                         {"g", i}, {"f", j}};
                            break;
                        }
                    }
            }
    rep.add("composition", wcomp.is_null(), "", wcomp);
    for (ObjId A : objs)
        if (wid.is_null() && F.base_map(A, A, C.identity(A)) != P.identity(F.base_image(A)))
            wid = json{{"object", C.object_name(A)}};
    rep.add("identities", wid.is_null(), "", wid);
    return rep;
}

/// Closed degree-0 components and strict naturality on base basis morphisms
/// (weak: on degree-0 cocycles, up to coboundaries).
inline VerdictReport validate_pretr_nat(const PretrNat& nu, NatMode mode, const std::string& label = "nat") {
    VerdictReport rep(label, nu.source().src().field().name());
    const auto& C = nu.source().src().base();
    const auto& P = nu.source().dst();
    const Field f = C.field();
    const auto objs = base_objects(nu.source().src());
    json wc = nullptr, wn = nullptr;
    for (ObjId A : objs) {
        const auto& h = P.hom(nu.source().base_image(A), nu.target().base_image(A));
        const Vector c = nu.base_component(A);
        if (wc.is_null() && (!h.is_homogeneous(c, 0) || !h.apply_d(c).is_zero()))
            wc = json{{"object", C.object_name(A)}};
    }
    rep.add("closed_degree0", wc.is_null(), "", wc);
    for (ObjId A : objs)
        for (ObjId B : objs) {
            if (!wn.is_null()) break;
            const auto& h = C.hom(A, B);
            std::vector<Vector> tests;
            if (mode == NatMode::strict)
                for (std::size_t i = 0; i < h.dim(); ++i) tests.push_back(Vector::unit(f, h.dim(), i));
            else
                tests = detail::cocycles(h, 0);
            const ObjId FA = nu.source().base_image(A), FB = nu.source().base_image(B);
            const ObjId GA = nu.target().base_image(A), GB = nu.target().base_image(B);
            for (const auto& t : tests) {
                const Vector r = P.compose(FA, GA, GB, nu.target().base_map(A, B, t), nu.base_component(A)) -
                                 P.compose(FA, FB, GB, nu.base_component(B), nu.source().base_map(A, B, t));
                bool ok = r.is_zero();
                if (!ok && mode == NatMode::weak) ok = is_coboundary(P.hom(FA, GB), r, 0).found();
                if (!ok) {
                    wn = json{{"source", C.object_name(A)}, {"target", C.object_name(B)},
                              {"morphism", to_json(t)}, {"residual", to_json(r)}};
                    break;
                }
            }
        }
    rep.add("naturality", wn.is_null(), "", wn);
    return rep;
}

/// Restrict an extended functor to finite full subcategories: the sample
/// objects on the source side and their images on the target side.
struct MaterializedFunctor {
    std::shared_ptr<FiniteDgCategory> src, dst;
    FunctorPresentation functor;
    std::vector<ObjId> src_objects, dst_objects;
};

inline MaterializedFunctor materialize(const PretrFunctor& F, const std::vector<ObjId>& objs) {
    MaterializedFunctor out;
    out.src_objects = objs;
    for (ObjId T : objs) {
        const ObjId FT = F.apply(T);
        if (std::find(out.dst_objects.begin(), out.dst_objects.end(), FT) == out.dst_objects.end())
            out.dst_objects.push_back(FT);
    }
    out.src = materialize(F.src(), objs);
    out.dst = materialize(F.dst(), out.dst_objects);
    out.functor = FunctorPresentation{out.src, out.dst, {}, {}};
    for (ObjId T : objs)
        out.functor.obj.push_back(static_cast<ObjId>(
            std::find(out.dst_objects.begin(), out.dst_objects.end(), F.apply(T)) - out.dst_objects.begin()));
    const Field f = F.src().field();
    for (std::size_t a = 0; a < objs.size(); ++a)
        for (std::size_t b = 0; b < objs.size(); ++b) {
            const auto& h = F.src().hom(objs[a], objs[b]);
            const std::size_t rows = F.dst().hom_dim(F.apply(objs[a]), F.apply(objs[b]));
            out.functor.mor.push_back(matrix_of(f, h.dim(), rows, [&](const Vector& v) {
                return F.apply(objs[a], objs[b], v);
            }));
        }
    return out;
}

}  // namespace dgm
