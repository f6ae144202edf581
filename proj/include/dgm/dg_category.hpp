#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dgm/graded.hpp"

namespace dgm {

using ObjId = std::size_t;

/// A DG category over a field whose hom complexes are finite dimensional with
/// chosen homogeneous bases. Morphisms are coordinate vectors in those bases.
class DgCategory {
public:
    virtual ~DgCategory() = default;

    virtual Field field() const = 0;
    virtual Grading grading() const = 0;
    virtual std::string object_name(ObjId a) const = 0;
    virtual const DgSpace& hom(ObjId a, ObjId b) const = 0;
    virtual std::size_t hom_dim(ObjId a, ObjId b) const { return hom(a, b).dim(); }
    /// g in Hom(b, c), f in Hom(a, b); returns g o f in Hom(a, c).
    virtual Vector compose(ObjId a, ObjId b, ObjId c, const Vector& g, const Vector& f) const = 0;
    virtual Vector identity(ObjId a) const = 0;

    Vector d(ObjId a, ObjId b, const Vector& f) const { return hom(a, b).apply_d(f); }
    Vector zero(ObjId a, ObjId b) const { return Vector(field(), hom(a, b).dim()); }
};

/// A finitely presented DG category: finitely many objects, hom complexes and
/// composition structure constants on basis pairs.
class FiniteDgCategory : public DgCategory {
public:
    FiniteDgCategory(Field f, Grading g, std::vector<std::string> names)
        : f_(f), g_(g), names_(std::move(names)) {
        const std::size_t n = names_.size();
        homs_.assign(n * n, DgSpace(f_, g_, {}));
        table_.resize(n * n * n);
        ids_.assign(n, Vector(f_, 0));
    }

    /// Sets the hom complex and resets composition data touching it.
    void set_hom(ObjId a, ObjId b, DgSpace s) {
        if (s.field != f_) throw FieldMismatch();
        if (s.grading != g_) throw InvalidInput("hom grading differs from category grading");
        homs_[a * size() + b] = std::move(s);
        if (a == b) ids_[a] = Vector(f_, homs_[a * size() + a].dim());
    }

    /// Declare e_gi o e_fj = result for basis elements of Hom(b,c) and Hom(a,b).
    void set_compose(ObjId a, ObjId b, ObjId c, std::size_t gi, std::size_t fj, const Vector& result) {
        auto& t = slot(a, b, c);
        const std::size_t nf = hom(a, b).dim();
        if (gi >= hom(b, c).dim() || fj >= nf) throw InvalidInput("composition basis index out of range");
        if (result.size() != hom(a, c).dim()) throw DimensionMismatch("composition result has wrong length");
        auto& cell = t[gi * nf + fj];
        cell.clear();
        for (std::size_t k = 0; k < result.size(); ++k)
            if (!result[k].is_zero()) cell.emplace_back(static_cast<std::uint32_t>(k), result[k]);
    }

    void set_identity(ObjId a, const Vector& id) {
        if (id.size() != hom(a, a).dim()) throw DimensionMismatch("identity has wrong length");
        ids_[a] = id;
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    ObjId find(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        throw InvalidInput("unknown object '" + name + "'");
    }

    Field field() const override { return f_; }
    Grading grading() const override { return g_; }
    std::string object_name(ObjId a) const override { return names_.at(a); }
    const DgSpace& hom(ObjId a, ObjId b) const override { return homs_.at(a * size() + b); }

    Vector compose(ObjId a, ObjId b, ObjId c, const Vector& g, const Vector& f) const override {
        const std::size_t nf = hom(a, b).dim();
        if (g.size() != hom(b, c).dim() || f.size() != nf) throw DimensionMismatch("compose operand length");
        Vector out(f_, hom(a, c).dim());
        const auto& t = table_[(a * size() + b) * size() + c];
        if (t.empty()) return out;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i].is_zero()) continue;
            for (std::size_t j = 0; j < nf; ++j) {
                if (f[j].is_zero()) continue;
                const Scalar gf = g[i] * f[j];
                for (const auto& [k, v] : t[i * nf + j]) out[k] += gf * v;
            }
        }
        return out;
    }

    Vector identity(ObjId a) const override { return ids_.at(a); }

    /// Basis-level structure constant list for serialization.
    const std::vector<std::pair<std::uint32_t, Scalar>>& compose_cell(ObjId a, ObjId b, ObjId c, std::size_t gi,
                                                                       std::size_t fj) const {
        static const std::vector<std::pair<std::uint32_t, Scalar>> empty;
        const auto& t = table_[(a * size() + b) * size() + c];
        if (t.empty()) return empty;
        return t[gi * hom(a, b).dim() + fj];
    }

private:
    using Cell = std::vector<std::pair<std::uint32_t, Scalar>>;

    std::vector<Cell>& slot(ObjId a, ObjId b, ObjId c) {
        auto& t = table_[(a * size() + b) * size() + c];
        if (t.empty()) t.resize(hom(b, c).dim() * hom(a, b).dim());
        return t;
    }

    Field f_;
    Grading g_;
    std::vector<std::string> names_;
    std::vector<DgSpace> homs_;
    std::vector<std::vector<Cell>> table_;
    std::vector<Vector> ids_;
};

using FiniteCatPtr = std::shared_ptr<const FiniteDgCategory>;

/// Degree of a homogeneous element, or nullopt when v is zero or inhomogeneous.
inline std::optional<int> degree_of(const DgSpace& s, const Vector& v) {
    std::optional<int> deg;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if (v[i].is_zero()) continue;
        if (deg && *deg != s.degrees[i]) return std::nullopt;
        deg = s.degrees[i];
    }
    return deg;
}

struct CategoryCheckOptions {
    bool associativity = true;
};

/// Check every axiom of a finitely presented DG category on basis elements.
inline VerdictReport validate_dg_category(const FiniteDgCategory& C, CategoryCheckOptions opt = {}) {
    VerdictReport rep("dg-category", C.field().name());
    const std::size_t n = C.size();
    const Field f = C.field();
    auto basis = [&](ObjId a, ObjId b, std::size_t i) { return Vector::unit(f, C.hom_dim(a, b), i); };

    json w = nullptr;
    for (ObjId a = 0; a < n && w.is_null(); ++a)
        for (ObjId b = 0; b < n && w.is_null(); ++b) {
            const auto& h = C.hom(a, b);
            if (!(h.d * h.d).is_zero()) w = json{{"source", C.object_name(a)}, {"target", C.object_name(b)}};
        }
    rep.add("d_squared_zero", w.is_null(), "", w);

    // Degree additivity and Leibniz on all basis pairs.
    json wdeg = nullptr, wleib = nullptr;
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b)
            for (ObjId c = 0; c < n; ++c) {
                const auto& hab = C.hom(a, b);
                const auto& hbc = C.hom(b, c);
                const auto& hac = C.hom(a, c);
                for (std::size_t i = 0; i < hbc.dim(); ++i)
                    for (std::size_t j = 0; j < hab.dim(); ++j) {
                        const Vector g = basis(b, c, i), fv = basis(a, b, j);
                        const Vector gf = C.compose(a, b, c, g, fv);
                        const int dg = hbc.degrees[i];
                        if (wdeg.is_null() && !gf.is_zero() && !hac.is_homogeneous(gf, dg + hab.degrees[j]))
                            wdeg = json{{"objects", {C.object_name(a), C.object_name(b), C.object_name(c)}},
                                        {"g", i}, {"f", j}};
                        if (!wleib.is_null()) continue;
                        Vector lhs = hac.apply_d(gf);
                        Vector rhs = C.compose(a, b, c, hbc.apply_d(g), fv);
                        rhs.axpy(signed_one(f, dg), C.compose(a, b, c, g, hab.apply_d(fv)));
                        if (lhs != rhs)
                            wleib = json{{"objects", {C.object_name(a), C.object_name(b), C.object_name(c)}},
                                         {"g", i}, {"f", j}, {"lhs", to_json(lhs)}, {"rhs", to_json(rhs)}};
                    }
            }
    rep.add("composition_degree", wdeg.is_null(), "", wdeg);
    rep.add("leibniz", wleib.is_null(), "", wleib);

    if (opt.associativity) {
        json wa = nullptr;
        for (ObjId a = 0; a < n && wa.is_null(); ++a)
            for (ObjId b = 0; b < n && wa.is_null(); ++b)
                for (ObjId c = 0; c < n && wa.is_null(); ++c)
                    for (ObjId e = 0; e < n && wa.is_null(); ++e) {
                        const auto dab = C.hom_dim(a, b), dbc = C.hom_dim(b, c), dce = C.hom_dim(c, e);
                        for (std::size_t i = 0; i < dce && wa.is_null(); ++i)
                            for (std::size_t j = 0; j < dbc && wa.is_null(); ++j) {
                                const Vector h = basis(c, e, i), g = basis(b, c, j);
                                const Vector hg = C.compose(b, c, e, h, g);
                                for (std::size_t k = 0; k < dab; ++k) {
                                    const Vector fv = basis(a, b, k);
                                    const Vector l = C.compose(a, b, e, hg, fv);
                                    const Vector r = C.compose(a, c, e, h, C.compose(a, b, c, g, fv));
                                    if (l != r) {
                                        wa = json{{"objects", {C.object_name(a), C.object_name(b),
                                                               C.object_name(c), C.object_name(e)}},
                                                  {"h", i}, {"g", j}, {"f", k}};
                                        break;
                                    }
                                }
                            }
                    }
        rep.add("associativity", wa.is_null(), "", wa);
    }

    json wid = nullptr;
    for (ObjId a = 0; a < n && wid.is_null(); ++a) {
        const Vector id = C.identity(a);
        const auto& haa = C.hom(a, a);
        if (!id.is_zero() && !haa.is_homogeneous(id, 0)) {
            wid = json{{"object", C.object_name(a)}, {"reason", "identity not of degree 0"}};
            break;
        }
        if (!haa.apply_d(id).is_zero()) {
            wid = json{{"object", C.object_name(a)}, {"reason", "identity not closed"}};
            break;
        }
        for (ObjId b = 0; b < n && wid.is_null(); ++b) {
            for (std::size_t i = 0; i < C.hom_dim(a, b); ++i) {
                const Vector fv = basis(a, b, i);
                if (C.compose(a, a, b, fv, id) != fv) {
                    wid = json{{"object", C.object_name(a)}, {"reason", "right unit law"}, {"basis", i}};
                    break;
                }
            }
            for (std::size_t i = 0; i < C.hom_dim(b, a) && wid.is_null(); ++i) {
                const Vector fv = basis(b, a, i);
                if (C.compose(b, a, a, id, fv) != fv)
                    wid = json{{"object", C.object_name(a)}, {"reason", "left unit law"}, {"basis", i}};
            }
        }
    }
    rep.add("identities", wid.is_null(), "", wid);
    return rep;
}

/// Full finite subcategory of any DG category on a list of objects.
inline std::shared_ptr<FiniteDgCategory> materialize(const DgCategory& C, const std::vector<ObjId>& objects,
                                                     std::vector<std::string> names = {}) {
    if (names.empty())
        for (auto o : objects) names.push_back(C.object_name(o));
    auto out = std::make_shared<FiniteDgCategory>(C.field(), C.grading(), std::move(names));
    const std::size_t n = objects.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) out->set_hom(a, b, C.hom(objects[a], objects[b]));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const auto dab = out->hom_dim(a, b), dbc = out->hom_dim(b, c);
                for (std::size_t i = 0; i < dbc; ++i)
                    for (std::size_t j = 0; j < dab; ++j) {
                        const Vector r = C.compose(objects[a], objects[b], objects[c],
                                                   Vector::unit(C.field(), dbc, i), Vector::unit(C.field(), dab, j));
                        if (!r.is_zero()) out->set_compose(a, b, c, i, j, r);
                    }
            }
    for (std::size_t a = 0; a < n; ++a) out->set_identity(a, C.identity(objects[a]));
    return out;
}

/// A DG functor between finite presentations: an object map and, for each
/// pair, the matrix of Hom(a,b) -> Hom(Fa,Fb) in the chosen bases.
struct FunctorPresentation {
    FiniteCatPtr src, dst;
    std::vector<ObjId> obj;
    std::vector<Matrix> mor;  // index a * |src| + b

    const Matrix& matrix(ObjId a, ObjId b) const { return mor.at(a * src->size() + b); }
    Vector apply(ObjId a, ObjId b, const Vector& f) const { return matrix(a, b) * f; }

    bool operator==(const FunctorPresentation& o) const {
        return src == o.src && dst == o.dst && obj == o.obj && mor == o.mor;
    }
};

inline FunctorPresentation identity_functor(const FiniteCatPtr& C) {
    FunctorPresentation F{C, C, {}, {}};
    for (ObjId a = 0; a < C->size(); ++a) F.obj.push_back(a);
    for (ObjId a = 0; a < C->size(); ++a)
        for (ObjId b = 0; b < C->size(); ++b) F.mor.push_back(Matrix::identity(C->field(), C->hom_dim(a, b)));
    return F;
}

/// G o F.
inline FunctorPresentation compose(const FunctorPresentation& G, const FunctorPresentation& F) {
    if (F.dst != G.src) throw InvalidInput("functors are not composable");
    FunctorPresentation H{F.src, G.dst, {}, {}};
    for (ObjId a = 0; a < F.src->size(); ++a) H.obj.push_back(G.obj[F.obj[a]]);
    for (ObjId a = 0; a < F.src->size(); ++a)
        for (ObjId b = 0; b < F.src->size(); ++b) H.mor.push_back(G.matrix(F.obj[a], F.obj[b]) * F.matrix(a, b));
    return H;
}

inline VerdictReport validate_functor(const FunctorPresentation& F) {
    VerdictReport rep("dg-functor", F.src->field().name());
    const auto& C = *F.src;
    const auto& D = *F.dst;
    const Field f = C.field();
    const std::size_t n = C.size();
    json wshape = nullptr, wdeg = nullptr, wchain = nullptr, wcomp = nullptr, wid = nullptr;
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b) {
            const auto& M = F.matrix(a, b);
            const auto& src = C.hom(a, b);
            const auto& tgt = D.hom(F.obj[a], F.obj[b]);
            if (M.rows() != tgt.dim() || M.cols() != src.dim()) {
                if (wshape.is_null()) wshape = json{{"source", C.object_name(a)}, {"target", C.object_name(b)}};
                continue;
            }
            for (std::size_t j = 0; j < src.dim(); ++j) {
                const Vector img = M.column(j);
                if (wdeg.is_null() && !tgt.is_homogeneous(img, src.degrees[j]))
                    wdeg = json{{"source", C.object_name(a)}, {"target", C.object_name(b)}, {"basis", j}};
                if (wchain.is_null() && tgt.apply_d(img) != M * src.apply_d(Vector::unit(f, src.dim(), j)))
                    wchain = json{{"source", C.object_name(a)}, {"target", C.object_name(b)}, {"basis", j}};
            }
        }
    rep.add("shapes", wshape.is_null(), "", wshape);
    if (!wshape.is_null()) return rep;
    rep.add("degree_preserving", wdeg.is_null(), "", wdeg);
    rep.add("chain_map", wchain.is_null(), "", wchain);
    for (ObjId a = 0; a < n && wcomp.is_null(); ++a)
        for (ObjId b = 0; b < n && wcomp.is_null(); ++b)
            for (ObjId c = 0; c < n && wcomp.is_null(); ++c)
                for (std::size_t i = 0; i < C.hom_dim(b, c) && wcomp.is_null(); ++i)
                    for (std::size_t j = 0; j < C.hom_dim(a, b); ++j) {
                        const Vector g = Vector::unit(f, C.hom_dim(b, c), i);
                        const Vector fv = Vector::unit(f, C.hom_dim(a, b), j);
                        const Vector l = F.apply(a, c, C.compose(a, b, c, g, fv));
                        const Vector r = D.compose(F.obj[a], F.obj[b], F.obj[c], F.apply(b, c, g), F.apply(a, b, fv));
                        if (l != r) {
                            wcomp = json{{"objects", {C.object_name(a), C.object_name(b), C.object_name(c)}},
                                         {"g", i}, {"f", j}};
                            break;
                        }
                    }
    rep.add("composition", wcomp.is_null(), "", wcomp);
    for (ObjId a = 0; a < n && wid.is_null(); ++a)
        if (F.apply(a, a, C.identity(a)) != D.identity(F.obj[a])) wid = json{{"object", C.object_name(a)}};
    rep.add("identities", wid.is_null(), "", wid);
    return rep;
}

/// A natural transformation F => G: one degree-0 component in Hom(Fa, Ga) per object.
struct NatPresentation {
    FunctorPresentation source, target;
    std::vector<Vector> comp;
};

inline NatPresentation identity_nat(const FunctorPresentation& F) {
    NatPresentation n{F, F, {}};
    for (ObjId a = 0; a < F.src->size(); ++a) n.comp.push_back(F.dst->identity(F.obj[a]));
    return n;
}

/// beta . alpha for alpha: F => G and beta: G => H.
inline NatPresentation vertical(const NatPresentation& beta, const NatPresentation& alpha) {
    if (!(alpha.target == beta.source)) throw InvalidInput("transformations are not vertically composable");
    NatPresentation out{alpha.source, beta.target, {}};
    const auto& D = *alpha.source.dst;
    for (ObjId a = 0; a < alpha.source.src->size(); ++a)
        out.comp.push_back(D.compose(alpha.source.obj[a], alpha.target.obj[a], beta.target.obj[a], beta.comp[a],
                                     alpha.comp[a]));
    return out;
}

/// beta * alpha for alpha: F => F' (C -> D) and beta: G => G' (D -> E); the
/// component at a is G'(alpha_a) o beta_{Fa}.
inline NatPresentation horizontal(const NatPresentation& beta, const NatPresentation& alpha) {
    const auto& F = alpha.source;
    const auto& Fp = alpha.target;
    const auto& G = beta.source;
    const auto& Gp = beta.target;
    if (F.dst != G.src) throw InvalidInput("transformations are not horizontally composable");
    NatPresentation out{compose(G, F), compose(Gp, Fp), {}};
    const auto& E = *G.dst;
    for (ObjId a = 0; a < F.src->size(); ++a) {
        const ObjId fa = F.obj[a], fpa = Fp.obj[a];
        out.comp.push_back(E.compose(G.obj[fa], Gp.obj[fa], Gp.obj[fpa], Gp.apply(fa, fpa, alpha.comp[a]),
                                     beta.comp[fa]));
    }
    return out;
}

/// Whiskering helpers: H alpha and alpha F.
inline NatPresentation whisker_left(const FunctorPresentation& H, const NatPresentation& alpha) {
    return horizontal(identity_nat(H), alpha);
}
inline NatPresentation whisker_right(const NatPresentation& alpha, const FunctorPresentation& F) {
    return horizontal(alpha, identity_nat(F));
}

enum class NatMode { strict, weak };

/// Components closed of degree 0; naturality strictly on every basis morphism,
/// or up to coboundaries on a basis of degree-0 cocycles in weak mode.
inline VerdictReport validate_nat(const NatPresentation& nu, NatMode mode) {
    VerdictReport rep(mode == NatMode::strict ? "dg-natural-transformation" : "weak-natural-transformation",
                      nu.source.src->field().name());
    const auto& C = *nu.source.src;
    const auto& D = *nu.source.dst;
    const auto& F = nu.source;
    const auto& G = nu.target;
    const Field f = C.field();
    json wclosed = nullptr, wnat = nullptr;
    for (ObjId a = 0; a < C.size(); ++a) {
        const auto& h = D.hom(F.obj[a], G.obj[a]);
        const auto& c = nu.comp[a];
        if (c.size() != h.dim() || !h.is_homogeneous(c, 0) || !h.apply_d(c).is_zero()) {
            if (wclosed.is_null()) wclosed = json{{"object", C.object_name(a)}};
        }
    }
    rep.add("components_closed_degree0", wclosed.is_null(), "", wclosed);
    if (!wclosed.is_null()) return rep;
    for (ObjId a = 0; a < C.size() && wnat.is_null(); ++a)
        for (ObjId b = 0; b < C.size() && wnat.is_null(); ++b) {
            const auto& hab = C.hom(a, b);
            std::vector<Vector> tests;
            if (mode == NatMode::strict) {
                for (std::size_t i = 0; i < hab.dim(); ++i) tests.push_back(Vector::unit(f, hab.dim(), i));
            } else {
                tests = detail::cocycles(hab, 0);
            }
            const auto& tgt = D.hom(F.obj[a], G.obj[b]);
            for (std::size_t t = 0; t < tests.size(); ++t) {
                const Vector r = D.compose(F.obj[a], G.obj[a], G.obj[b], G.apply(a, b, tests[t]), nu.comp[a]) -
                                 D.compose(F.obj[a], F.obj[b], G.obj[b], nu.comp[b], F.apply(a, b, tests[t]));
                bool ok = r.is_zero();
                if (!ok && mode == NatMode::weak) ok = is_coboundary(tgt, r, 0).found();
                if (!ok) {
                    wnat = json{{"source", C.object_name(a)}, {"target", C.object_name(b)},
                                {"morphism", to_json(tests[t])}, {"residual", to_json(r)}};
                    break;
                }
            }
        }
    rep.add("naturality", wnat.is_null(), "", wnat);
    return rep;
}

}  // namespace dgm
