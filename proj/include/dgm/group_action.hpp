#pragma once

#include <string>
#include <vector>

#include "dgm/monad.hpp"

namespace dgm {

/// A finite group by its multiplication table: table[g][h] = gh.
struct FiniteGroup {
    std::vector<std::vector<std::size_t>> table;
    std::string name = "G";

    std::size_t order() const { return table.size(); }
    std::size_t mul(std::size_t g, std::size_t h) const { return table[g][h]; }

    std::size_t identity() const {
        for (std::size_t g = 0; g < order(); ++g) {
            bool ok = true;
            for (std::size_t h = 0; h < order(); ++h) ok = ok && table[g][h] == h && table[h][g] == h;
            if (ok) return g;
        }
        throw InvalidInput("group table has no identity");
    }
};

inline VerdictReport validate_group(const FiniteGroup& G) {
    VerdictReport rep("group " + G.name);
    const std::size_t n = G.order();
    bool shape = n > 0;
    for (const auto& row : G.table) {
        shape = shape && row.size() == n;
        for (auto v : row) shape = shape && v < n;
    }
    rep.add("shape", shape);
    if (!shape) return rep;
    json wa = nullptr;
    for (std::size_t a = 0; a < n && wa.is_null(); ++a)
        for (std::size_t b = 0; b < n && wa.is_null(); ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c))) {
                    wa = json{{"elements", {a, b, c}}};
                    break;
                }
    rep.add("associativity", wa.is_null(), "", wa);
    bool has_id = true;
    std::size_t e = 0;
    try {
        e = G.identity();
    } catch (const InvalidInput&) {
        has_id = false;
    }
    rep.add("identity", has_id);
    json winv = nullptr;
    if (has_id)
        for (std::size_t g = 0; g < n && winv.is_null(); ++g) {
            bool found = false;
            for (std::size_t h = 0; h < n; ++h) found = found || (G.mul(g, h) == e && G.mul(h, g) == e);
            if (!found) winv = json{{"element", g}};
        }
    rep.add("inverses", has_id && winv.is_null(), "", winv);
    return rep;
}

inline FiniteGroup cyclic_group(std::size_t n) {
    FiniteGroup G{std::vector<std::vector<std::size_t>>(n, std::vector<std::size_t>(n)), "Z/" + std::to_string(n)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) G.table[a][b] = (a + b) % n;
    return G;
}

/// Symmetric group on three letters; elements are permutations in
/// lexicographic order and gh means "apply h first".
inline FiniteGroup symmetric_group3() {
    std::vector<std::vector<int>> perms{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    FiniteGroup G{std::vector<std::vector<std::size_t>>(6, std::vector<std::size_t>(6)), "S3"};
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            std::vector<int> c(3);
            for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
            for (std::size_t k = 0; k < 6; ++k)
                if (perms[k] == c) G.table[a][b] = k;
        }
    return G;
}

inline FiniteGroup klein_four() {
    FiniteGroup G{std::vector<std::vector<std::size_t>>(4, std::vector<std::size_t>(4)), "Z/2xZ/2"};
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) G.table[a][b] = a ^ b;
    return G;
}

/// A strict action: one autofunctor g* per element with g* o h* = (gh)* and
/// e* = id on the nose.
struct GroupAction {
    FiniteCatPtr cat;
    FiniteGroup group;
    std::vector<FunctorPresentation> elements;
};

inline GroupAction trivial_action(const FiniteCatPtr& C, const FiniteGroup& G) {
    return GroupAction{C, G, std::vector<FunctorPresentation>(G.order(), identity_functor(C))};
}

inline VerdictReport validate_action(const GroupAction& act) {
    VerdictReport rep("group-action " + act.group.name, act.cat->field().name());
    rep.merge(validate_group(act.group), "group.");
    if (!rep.passed()) return rep;
    if (act.elements.size() != act.group.order()) {
        rep.add("element_count", false, "one functor per group element is required");
        return rep;
    }
    json wf = nullptr, wc = nullptr;
    for (std::size_t g = 0; g < act.elements.size(); ++g) {
        const auto& F = act.elements[g];
        if (F.src != act.cat || F.dst != act.cat || !validate_functor(F).passed()) {
            if (wf.is_null()) wf = json{{"element", g}};
        }
    }
    rep.add("functors_valid", wf.is_null(), "", wf);
    if (!wf.is_null()) return rep;
    const std::size_t e = act.group.identity();
    rep.add("identity_acts_trivially", act.elements[e] == identity_functor(act.cat));
    for (std::size_t g = 0; g < act.group.order() && wc.is_null(); ++g)
        for (std::size_t h = 0; h < act.group.order(); ++h)
            if (!(compose(act.elements[g], act.elements[h]) == act.elements[act.group.mul(g, h)])) {
                wc = json{{"g", g}, {"h", h}};
                break;
            }
    rep.add("strict_composition", wc.is_null(), "g* o h* = (gh)*", wc);
    return rep;
}

/// M_G(A) = sum over g of g* A. In MM(A) the summand (h outer, g inner) is
/// g* h* A = (gh)* A and mu maps it identically onto the summand gh; eta is
/// the inclusion of the identity summand.
inline PretrMonad group_action_monad(const GroupAction& act, const TwistedCatPtr& P) {
    if (&P->base() != act.cat.get()) throw InvalidInput("twisted layer is not over the acted-on category");
    if (!validate_action(act).passed()) throw InvalidInput("group action is not strict");
    const std::size_t n = act.group.order();
    const std::size_t e = act.group.identity();
    auto M = PretrFunctor(
        P, P,
        [act, n](ObjId A) {
            TwistedComplex T;
            for (std::size_t g = 0; g < n; ++g) T.entries.emplace_back(act.elements[g].obj[A], 0);
            return T;
        },
        [P, act, n](ObjId A, ObjId B, const Vector& f) {
            TwistedComplex SA, SB;
            for (std::size_t g = 0; g < n; ++g) {
                SA.entries.emplace_back(act.elements[g].obj[A], 0);
                SB.entries.emplace_back(act.elements[g].obj[B], 0);
            }
            const ObjId a = P->add(SA), b = P->add(SB);
            Vector out(P->field(), P->hom_dim(a, b));
            for (std::size_t g = 0; g < n; ++g) P->add_block(a, b, out, g, g, act.elements[g].apply(A, B, f));
            return out;
        },
        "M_" + act.group.name);
    return make_pretr_monad(
        P, M,
        [P, M, act, n](ObjId A) {
            const ObjId MA = M.base_image(A), MMA = M.apply(MA);
            Vector out(P->field(), P->hom_dim(MMA, MA));
            for (std::size_t h = 0; h < n; ++h)
                for (std::size_t g = 0; g < n; ++g) {
                    const std::size_t gh = act.group.mul(g, h);
                    P->add_block(MMA, MA, out, gh, h * n + g, P->base().identity(act.elements[gh].obj[A]));
                }
            return out;
        },
        [P, M, e](ObjId A) {
            const ObjId a = P->single(A), MA = M.base_image(A);
            Vector out(P->field(), P->hom_dim(a, MA));
            P->add_block(a, MA, out, e, 0, P->base().identity(A));
            return out;
        },
        "M_" + act.group.name);
}

}  // namespace dgm
