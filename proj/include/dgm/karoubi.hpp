#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgm/monad.hpp"

namespace dgm {

struct Idempotent {
    ObjId object = 0;
    Vector pi;
};

/// Karoubi envelope of an additive presentation over a supplied list of
/// idempotents. Hom((x,p),(y,r)) is the image of f -> r f p in Hom(x, y).
struct KaroubiEnvelope {
    FiniteCatPtr base;
    std::shared_ptr<FiniteDgCategory> cat;
    std::vector<Idempotent> objects;
    std::vector<std::vector<Vector>> bases;  // index a * n + b, ambient coordinates
    std::vector<std::optional<Matrix>> coords;

    std::size_t size() const { return objects.size(); }

    Vector to_ambient(ObjId a, ObjId b, const Vector& v) const {
        const auto& B = bases.at(a * size() + b);
        Vector out(base->field(), base->hom_dim(objects[a].object, objects[b].object));
        for (std::size_t k = 0; k < B.size(); ++k) out.axpy(v[k], B[k]);
        return out;
    }
    Vector from_ambient(ObjId a, ObjId b, const Vector& phi) const {
        const auto& c = coords.at(a * size() + b);
        if (!c) {
            if (!phi.is_zero()) throw InvalidInput("morphism is not in the envelope hom");
            return Vector(base->field(), 0);
        }
        Vector v = *c * phi;
        if (to_ambient(a, b, v) != phi) throw InvalidInput("morphism is not in the envelope hom");
        return v;
    }

    std::optional<ObjId> find(ObjId x, const Vector& pi) const {
        for (ObjId i = 0; i < size(); ++i)
            if (objects[i].object == x && objects[i].pi == pi) return i;
        return std::nullopt;
    }
    /// The object (x, id_x).
    ObjId whole(ObjId x) const { return *find(x, base->identity(x)); }
};

/// Homs concentrated in degree 0 with zero differential.
inline bool is_additive_presentation(const FiniteDgCategory& C) {
    for (ObjId a = 0; a < C.size(); ++a)
        for (ObjId b = 0; b < C.size(); ++b) {
            const auto& h = C.hom(a, b);
            if (!h.d.is_zero()) return false;
            for (int n : h.degrees)
                if (n != 0) return false;
        }
    return true;
}

inline KaroubiEnvelope karoubi_envelope(const FiniteCatPtr& A, const std::vector<Idempotent>& idempotents) {
    if (!is_additive_presentation(*A)) throw InvalidInput("Karoubi envelope needs homs in degree 0 with zero d");
    KaroubiEnvelope K{A, nullptr, {}, {}, {}};
    const Field f = A->field();
    for (ObjId x = 0; x < A->size(); ++x) K.objects.push_back({x, A->identity(x)});
    for (const auto& e : idempotents) {
        if (e.object >= A->size()) throw InvalidInput("idempotent on an unknown object");
        if (e.pi.size() != A->hom_dim(e.object, e.object)) throw DimensionMismatch("idempotent has wrong length");
        const Vector sq = A->compose(e.object, e.object, e.object, e.pi, e.pi);
        if (sq != e.pi)
            throw InvalidInput("not idempotent on " + A->object_name(e.object) + ": pi o pi = " + sq.to_string() +
                               " but pi = " + e.pi.to_string());
        if (!K.find(e.object, e.pi)) K.objects.push_back(e);
    }
    const std::size_t n = K.size();
    std::vector<std::string> names;
    for (ObjId i = 0; i < n; ++i) {
        const auto& o = K.objects[i];
        names.push_back(i < A->size() ? A->object_name(o.object)
                                      : "(" + A->object_name(o.object) + "," + o.pi.to_string() + ")");
    }
    K.cat = std::make_shared<FiniteDgCategory>(f, A->grading(), names);
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b) {
            const auto& p = K.objects[a];
            const auto& r = K.objects[b];
            const std::size_t dim = A->hom_dim(p.object, r.object);
            const Matrix proj = matrix_of(f, dim, dim, [&](const Vector& g) {
                const Vector gp = A->compose(p.object, p.object, r.object, g, p.pi);
                return A->compose(p.object, r.object, r.object, r.pi, gp);
            });
            auto B = column_space_basis(proj);
            std::optional<Matrix> c;
            if (!B.empty()) c = left_inverse(Matrix::from_columns(f, dim, B));
            K.cat->set_hom(a, b, DgSpace(f, A->grading(), std::vector<int>(B.size(), 0)));
            K.bases.push_back(std::move(B));
            K.coords.push_back(std::move(c));
        }
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b)
            for (ObjId c = 0; c < n; ++c) {
                const auto dab = K.cat->hom_dim(a, b), dbc = K.cat->hom_dim(b, c);
                for (std::size_t i = 0; i < dbc; ++i)
                    for (std::size_t j = 0; j < dab; ++j) {
                        const Vector r = A->compose(K.objects[a].object, K.objects[b].object, K.objects[c].object,
                                                    K.bases[b * n + c][i], K.bases[a * n + b][j]);
                        const Vector v = K.from_ambient(a, c, r);
                        if (!v.is_zero()) K.cat->set_compose(a, b, c, i, j, v);
                    }
            }
    for (ObjId a = 0; a < n; ++a) K.cat->set_identity(a, K.from_ambient(a, a, K.objects[a].pi));
    return K;
}

/// The canonical splitting of a supplied idempotent at envelope object p:
/// r = pi: (x, id) -> (x, pi) and s = pi: (x, pi) -> (x, id).
struct Splitting {
    ObjId whole, summand;
    Vector retraction, section;
};

inline Splitting splitting(const KaroubiEnvelope& K, ObjId p) {
    const auto& e = K.objects.at(p);
    const ObjId X = K.whole(e.object);
    return {X, p, K.from_ambient(X, p, e.pi), K.from_ambient(p, X, e.pi)};
}

/// r o s = id on the summand and s o r equals the idempotent on the whole object.
inline bool verify_splitting(const KaroubiEnvelope& K, const Splitting& s) {
    const auto& C = *K.cat;
    const Vector rs = C.compose(s.summand, s.whole, s.summand, s.retraction, s.section);
    const Vector sr = C.compose(s.whole, s.summand, s.whole, s.section, s.retraction);
    return rs == C.identity(s.summand) && K.to_ambient(s.whole, s.whole, sr) == K.objects[s.summand].pi;
}

/// Envelope of the target over the images (F x, F pi) of the source idempotents.
inline KaroubiEnvelope karoubi_image_envelope(const FunctorPresentation& F, const KaroubiEnvelope& KA,
                                             std::vector<Idempotent> extra = {}) {
    std::vector<Idempotent> ids;
    for (const auto& o : KA.objects) ids.push_back({F.obj[o.object], F.apply(o.object, o.object, o.pi)});
    ids.insert(ids.end(), extra.begin(), extra.end());
    return karoubi_envelope(F.dst, ids);
}

/// F(x, pi) = (F x, F pi) on envelopes.
inline FunctorPresentation extend_functor_karoubi(const FunctorPresentation& F, const KaroubiEnvelope& KA,
                                                  const KaroubiEnvelope& KB) {
    if (F.src != KA.base || F.dst != KB.base) throw InvalidInput("envelopes do not match the functor");
    FunctorPresentation out{KA.cat, KB.cat, {}, {}};
    for (const auto& o : KA.objects) {
        const Vector Fpi = F.apply(o.object, o.object, o.pi);
        const auto& D = *F.dst;
        if (D.compose(F.obj[o.object], F.obj[o.object], F.obj[o.object], Fpi, Fpi) != Fpi)
            throw InternalError("image of an idempotent is not idempotent");
        const auto id = KB.find(F.obj[o.object], Fpi);
        if (!id) throw InvalidInput("target envelope lacks the image of (" + F.src->object_name(o.object) + ", pi)");
        out.obj.push_back(*id);
    }
    const Field f = F.src->field();
    const std::size_t n = KA.size();
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b) {
            const std::size_t dim = KA.cat->hom_dim(a, b);
            out.mor.push_back(matrix_of(f, dim, KB.cat->hom_dim(out.obj[a], out.obj[b]), [&](const Vector& v) {
                const Vector img = F.apply(KA.objects[a].object, KA.objects[b].object, KA.to_ambient(a, b, v));
                return KB.from_ambient(out.obj[a], out.obj[b], img);
            }));
        }
    return out;
}

/// A finite additive monad carried to an envelope closed under M, with
/// mu_(x,pi) = mu_x o MM(pi) and eta_(x,pi) = eta_x o pi.
inline FiniteMonad extend_monad_karoubi(const FiniteMonad& FM, const KaroubiEnvelope& K) {
    const auto Mh = extend_functor_karoubi(FM.M, K, K);
    const auto& C = *K.base;
    FiniteMonad out{Mh, NatPresentation{compose(Mh, Mh), Mh, {}}, NatPresentation{identity_functor(K.cat), Mh, {}},
                    FM.name + "^"};
    for (ObjId a = 0; a < K.size(); ++a) {
        const auto& o = K.objects[a];
        const ObjId x = o.object, Mx = FM.M.obj[x], MMx = FM.M.obj[Mx];
        const Vector MMpi = FM.M.apply(Mx, Mx, FM.M.apply(x, x, o.pi));
        const Vector mu = C.compose(MMx, MMx, Mx, FM.mu.comp[x], MMpi);
        out.mu.comp.push_back(K.from_ambient(Mh.obj[Mh.obj[a]], Mh.obj[a], mu));
        const Vector eta = C.compose(x, x, Mx, FM.eta.comp[x], o.pi);
        out.eta.comp.push_back(K.from_ambient(a, Mh.obj[a], eta));
    }
    return out;
}

}  // namespace dgm
