#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "dgm/algebra.hpp"
#include "dgm/corpus.hpp"
#include "dgm/em.hpp"

namespace dgm {

/// A bounded complex of left A-modules: term i sits in degree lo + i, with
/// action matrices rho[i][s] for the basis element a_s and d[i]: V_i -> V_{i+1}.
struct ModuleComplex {
    int lo = 0;
    std::vector<std::vector<Matrix>> rho;
    std::vector<Matrix> d;

    std::size_t length() const { return rho.size(); }
    std::size_t dim(std::size_t i) const { return rho[i].empty() ? 0 : rho[i][0].rows(); }
    bool operator==(const ModuleComplex& o) const { return lo == o.lo && rho == o.rho && d == o.d; }
};

/// A single A-module, as action matrices.
using ModuleRep = std::vector<Matrix>;

inline ModuleRep regular_module(const AlgebraPresentation& A) {
    ModuleRep r;
    for (std::size_t s = 0; s < A.dim; ++s) r.push_back(A.left(Vector::unit(A.field, A.dim, s)));
    return r;
}

/// The regular module and the distinct proper principal left ideals A a_s.
inline std::vector<ModuleRep> fixture_modules(const AlgebraPresentation& A) {
    const Field f = A.field;
    std::vector<ModuleRep> out{regular_module(A)};
    std::vector<std::size_t> seen{A.dim};
    for (std::size_t s = 0; s < A.dim; ++s) {
        const auto B = column_space_basis(A.right(Vector::unit(f, A.dim, s)));
        if (B.empty() || std::find(seen.begin(), seen.end(), B.size()) != seen.end()) continue;
        seen.push_back(B.size());
        const Matrix E = Matrix::from_columns(f, A.dim, B);
        const Matrix Einv = left_inverse(E);
        ModuleRep r;
        for (std::size_t t = 0; t < A.dim; ++t) r.push_back(Einv * A.left(Vector::unit(f, A.dim, t)) * E);
        out.push_back(std::move(r));
    }
    return out;
}

/// Plain checks: module axioms for every term, A-linearity of d and d^2 = 0.
inline VerdictReport validate_module_complex(const AlgebraPresentation& A, const ModuleComplex& C) {
    const Field f = A.field;
    VerdictReport rep("module-complex", f.name());
    json wm = nullptr, wl = nullptr, wd = nullptr;
    for (std::size_t i = 0; i < C.length(); ++i) {
        const auto& r = C.rho[i];
        const std::size_t m = C.dim(i);
        if (r.size() != A.dim) {
            rep.add("shape", false, "", json{{"term", i}});
            return rep;
        }
        auto act = [&](const Vector& a) {
            Matrix out(f, m, m);
            for (std::size_t s = 0; s < A.dim; ++s)
                if (!a[s].is_zero()) out = out + r[s] * a[s];
            return out;
        };
        if (act(A.unit) != Matrix::identity(f, m) && wm.is_null()) wm = json{{"term", i}, {"axiom", "unit"}};
        for (std::size_t s = 0; s < A.dim && wm.is_null(); ++s)
            for (std::size_t t = 0; t < A.dim; ++t)
                if (r[s] * r[t] != act(A.mult[s][t])) {
                    wm = json{{"term", i}, {"axiom", "associativity"}, {"s", s}, {"t", t}};
                    break;
                }
    }
    for (std::size_t i = 0; i + 1 < C.length(); ++i) {
        for (std::size_t s = 0; s < A.dim; ++s)
            if (C.d[i] * C.rho[i][s] != C.rho[i + 1][s] * C.d[i] && wl.is_null()) wl = json{{"term", i}, {"s", s}};
        if (i + 2 < C.length() && !(C.d[i + 1] * C.d[i]).is_zero() && wd.is_null()) wd = json{{"term", i}};
    }
    rep.add("modules", wm.is_null(), "", wm);
    rep.add("d_linear", wl.is_null(), "", wl);
    rep.add("d_squared_zero", wd.is_null(), "", wd);
    return rep;
}

/// (x, lambda) with one entry (k, -(lo + i)) per basis vector of each term.
inline ModuleObject to_em(const PretrMonad& PM, const ModuleComplex& C) {
    const auto& P = *PM.cat;
    const Field f = P.field();
    TwistedComplex T;
    std::vector<std::size_t> off;
    for (std::size_t i = 0; i < C.length(); ++i) {
        off.push_back(T.size());
        for (std::size_t b = 0; b < C.dim(i); ++b) T.entries.emplace_back(0, -(C.lo + int(i)));
    }
    for (std::size_t i = 0; i + 1 < C.length(); ++i)
        for (std::size_t r = 0; r < C.dim(i + 1); ++r)
            for (std::size_t c = 0; c < C.dim(i); ++c)
                if (!C.d[i](r, c).is_zero()) T.q.emplace(std::make_pair(off[i + 1] + r, off[i] + c), Vector(f, {C.d[i](r, c)}));
    const ObjId x = P.add(T);
    const std::size_t n = C.rho.empty() ? 0 : C.rho[0].size();
    std::vector<Matrix> rho(n, Matrix(f, T.size(), T.size()));
    for (std::size_t i = 0; i < C.length(); ++i)
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t r = 0; r < C.dim(i); ++r)
                for (std::size_t c = 0; c < C.dim(i); ++c) rho[s](off[i] + r, off[i] + c) = C.rho[i][s](r, c);
    return {x, corpus::action_lambda(PM, x, rho)};
}

struct FromEm {
    ModuleComplex complex;
    std::vector<std::size_t> position;  // entry of x -> entry of to_em(complex).x
};

/// Reads off the complex of A-modules from a module over A (x) - on
/// complexes over k. Entries are grouped by degree, keeping their order.
inline FromEm from_em(const PretrMonad& PM, std::size_t n, const ModuleObject& m) {
    const auto& P = *PM.cat;
    const Field f = P.field();
    const auto& T = P.complex(m.x);
    const ObjId Mx = PM.apply(m.x);
    FromEm out;
    if (T.size() == 0) return out;
    int lo = -T.entries[0].second, hi = lo;
    for (const auto& e : T.entries) {
        lo = std::min(lo, -e.second);
        hi = std::max(hi, -e.second);
    }
    const std::size_t L = std::size_t(hi - lo + 1);
    std::vector<std::size_t> dims(L, 0), pos(T.size());
    for (std::size_t e = 0; e < T.size(); ++e) pos[e] = dims[std::size_t(-T.entries[e].second - lo)]++;
    std::vector<std::size_t> off(L, 0);
    for (std::size_t i = 1; i < L; ++i) off[i] = off[i - 1] + dims[i - 1];
    auto& C = out.complex;
    C.lo = lo;
    for (std::size_t i = 0; i < L; ++i) C.rho.push_back(ModuleRep(n, Matrix(f, dims[i], dims[i])));
    for (std::size_t i = 0; i + 1 < L; ++i) C.d.emplace_back(f, dims[i + 1], dims[i]);
    for (std::size_t e = 0; e < T.size(); ++e) {
        const std::size_t ie = std::size_t(-T.entries[e].second - lo);
        out.position.push_back(off[ie] + pos[e]);
    }
    for (const auto& [key, v] : T.q) {
        const auto [a, b] = key;
        const std::size_t ia = std::size_t(-T.entries[a].second - lo), ib = std::size_t(-T.entries[b].second - lo);
        if (ia != ib + 1) throw InvalidInput("twist does not raise the degree by one");
        C.d[ib](pos[a], pos[b]) = v[0];
    }
    for (std::size_t a = 0; a < T.size(); ++a)
        for (std::size_t b = 0; b < T.size(); ++b)
            for (std::size_t s = 0; s < n; ++s) {
                const Vector blk = P.block(Mx, m.x, m.lambda, a, b * n + s);
                if (blk.is_zero()) continue;
                if (T.entries[a].second != T.entries[b].second) throw InvalidInput("action does not preserve degrees");
                C.rho[std::size_t(-T.entries[a].second - lo)][s](pos[a], pos[b]) = blk[0];
            }
    return out;
}

/// Dimensions of Hom_A(C1, C2)^n = prod_i Hom_A(V1_i, V2_{i+n}), from plain
/// A-linearity kernels, together with the cohomology dimensions of that
/// complex under D f = d2 f - (-1)^n f d1.
struct PlainHomDims {
    std::map<int, std::size_t> dims, cohomology;
};

inline PlainHomDims plain_hom_dims(const AlgebraPresentation& A, const ModuleComplex& C1, const ModuleComplex& C2) {
    const Field f = A.field;
    // Basis of Hom_A(V1_i, V2_j) as flattened matrices (row-major).
    auto hom_basis = [&](std::size_t i, std::size_t j) {
        const std::size_t r = C2.dim(j), c = C1.dim(i);
        std::vector<Vector> cols;
        for (std::size_t u = 0; u < r * c; ++u) {
            Matrix e(f, r, c);
            e(u / c, u % c) = Scalar::one(f);
            std::vector<Scalar> col;
            for (std::size_t s = 0; s < A.dim; ++s) {
                const Matrix def = e * C1.rho[i][s] - C2.rho[j][s] * e;
                for (std::size_t a = 0; a < r; ++a)
                    for (std::size_t b = 0; b < c; ++b) col.push_back(def(a, b));
            }
            cols.emplace_back(f, std::move(col));
        }
        return kernel_basis(Matrix::from_columns(f, A.dim * r * c, cols));
    };
    struct Piece {
        std::size_t i, j;
        std::vector<Vector> basis;
    };
    std::map<int, std::vector<Piece>> pieces;
    for (std::size_t i = 0; i < C1.length(); ++i)
        for (std::size_t j = 0; j < C2.length(); ++j) {
            const int n = (C2.lo + int(j)) - (C1.lo + int(i));
            auto B = hom_basis(i, j);
            if (!B.empty()) pieces[n].push_back({i, j, std::move(B)});
        }
    PlainHomDims out;
    for (const auto& [n, ps] : pieces) {
        std::size_t t = 0;
        for (const auto& p : ps) t += p.basis.size();
        out.dims[n] = t;
    }
    // D from degree n to n + 1, written in flattened coordinates of the
    // full product, then restricted to the A-linear bases.
    auto flat_index = [&](std::size_t i, std::size_t j) {
        std::size_t o = 0;
        for (std::size_t a = 0; a < C1.length(); ++a)
            for (std::size_t b = 0; b < C2.length(); ++b) {
                if (a == i && b == j) return o;
                o += C1.dim(a) * C2.dim(b);
            }
        return o;
    };
    std::size_t total = 0;
    for (std::size_t a = 0; a < C1.length(); ++a)
        for (std::size_t b = 0; b < C2.length(); ++b) total += C1.dim(a) * C2.dim(b);
    auto embed = [&](const Piece& p, const Vector& v) {
        Vector out(f, total);
        const std::size_t o = flat_index(p.i, p.j);
        for (std::size_t k = 0; k < v.size(); ++k) out[o + k] = v[k];
        return out;
    };
    auto unflat = [&](const Vector& v, std::size_t i, std::size_t j) {
        Matrix m(f, C2.dim(j), C1.dim(i));
        const std::size_t o = flat_index(i, j);
        for (std::size_t a = 0; a < m.rows(); ++a)
            for (std::size_t b = 0; b < m.cols(); ++b) m(a, b) = v[o + a * m.cols() + b];
        return m;
    };
    auto D = [&](const Vector& v, int n) {
        Vector out(f, total);
        const Scalar sign = (n % 2 == 0) ? Scalar::one(f) : -Scalar::one(f);
        for (std::size_t i = 0; i < C1.length(); ++i)
            for (std::size_t j = 0; j < C2.length(); ++j) {
                if ((C2.lo + int(j)) - (C1.lo + int(i)) != n) continue;
                const Matrix g = unflat(v, i, j);
                if (j + 1 < C2.length()) {
                    const Matrix h = C2.d[j] * g;
                    const std::size_t o = flat_index(i, j + 1);
                    for (std::size_t a = 0; a < h.rows(); ++a)
                        for (std::size_t b = 0; b < h.cols(); ++b) out[o + a * h.cols() + b] += h(a, b);
                }
                if (i > 0) {
                    const Matrix h = g * C1.d[i - 1] * sign;
                    const std::size_t o = flat_index(i - 1, j);
                    for (std::size_t a = 0; a < h.rows(); ++a)
                        for (std::size_t b = 0; b < h.cols(); ++b) out[o + a * h.cols() + b] -= h(a, b);
                }
            }
        return out;
    };
    auto rank_of = [&](int n) -> std::size_t {
        auto it = pieces.find(n);
        if (it == pieces.end()) return 0;
        std::vector<Vector> cols;
        for (const auto& p : it->second)
            for (const auto& v : p.basis) cols.push_back(D(embed(p, v), n));
        return rank(Matrix::from_columns(f, total, cols));
    };
    for (const auto& [n, t] : out.dims) out.cohomology[n] = t - rank_of(n) - rank_of(n - 1);
    return out;
}

/// Random complex of fixture modules with at most max_len terms.
inline ModuleComplex random_module_complex(const AlgebraPresentation& A, const std::vector<ModuleRep>& mods,
                                           std::size_t max_len, std::mt19937& rng) {
    const Field f = A.field;
    ModuleComplex C;
    C.lo = int(rng() % 3) - 1;
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) C.rho.push_back(mods[rng() % mods.size()]);
    for (std::size_t i = 0; i + 1 < len; ++i) {
        const std::size_t r = C.dim(i + 1), c = C.dim(i);
        std::vector<Vector> cols;
        for (std::size_t u = 0; u < r * c; ++u) {
            Matrix e(f, r, c);
            e(u / c, u % c) = Scalar::one(f);
            std::vector<Scalar> col;
            for (std::size_t s = 0; s < A.dim; ++s) {
                const Matrix def = e * C.rho[i][s] - C.rho[i + 1][s] * e;
                for (std::size_t a = 0; a < r; ++a)
                    for (std::size_t b = 0; b < c; ++b) col.push_back(def(a, b));
            }
            if (i > 0) {
                const Matrix dd = e * C.d[i - 1];
                for (std::size_t a = 0; a < dd.rows(); ++a)
                    for (std::size_t b = 0; b < dd.cols(); ++b) col.push_back(dd(a, b));
            }
            cols.emplace_back(f, std::move(col));
        }
        const std::size_t rows = cols.empty() ? 0 : cols[0].size();
        Matrix d(f, r, c);
        for (const auto& v : kernel_basis(Matrix::from_columns(f, rows, cols))) {
            const Scalar a(f, static_cast<long long>(rng() % 5) - 2);
            for (std::size_t u = 0; u < r * c; ++u) d(u / c, u % c) += a * v[u];
        }
        C.d.push_back(std::move(d));
    }
    return C;
}

/// Checks that to_em and from_em are mutually inverse on samples from both
/// sides, and that hom complexes have the same dimensions and cohomology.
inline VerdictReport check_complexes_commute(const AlgebraPresentation& A, std::size_t bound,
                                             std::size_t samples = 6, unsigned seed = 1) {
    Stopwatch sw;
    const Field f = A.field;
    VerdictReport rep("complexes-commute " + A.name, f.name());
    if (bound == 0 || bound > 4) throw InvalidInput("length bound must be between 1 and 4");
    auto P = std::make_shared<TwistedCategory>(field_category(f));
    const auto PM = algebra_monad(A, P);
    const auto mods = fixture_modules(A);
    std::mt19937 rng(seed);
    std::vector<ModuleComplex> cs;
    for (std::size_t k = 0; k < samples; ++k) cs.push_back(random_module_complex(A, mods, bound, rng));

    json wv = nullptr, wr = nullptr, wm = nullptr, wb = nullptr, wd = nullptr;
    std::vector<ModuleObject> ems;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (!validate_module_complex(A, cs[k]).passed()) {
            if (wv.is_null()) wv = json{{"sample", k}};
            continue;
        }
        const auto m = to_em(PM, cs[k]);
        if (!check_module(PM, m, NatMode::strict).passed() && wm.is_null()) wm = json{{"sample", k}};
        if (!(from_em(PM, A.dim, m).complex == cs[k]) && wr.is_null()) wr = json{{"sample", k}};
        ems.push_back(m);
    }
    rep.add("fixtures_valid", wv.is_null(), "", wv);
    rep.add("images_are_modules", wm.is_null(), "", wm);
    rep.add("round_trip_complexes", wr.is_null(), "from_em(to_em(C)) = C", wr);

    // Module side: free modules on small complexes over k and cones between images.
    std::vector<ModuleObject> side;
    for (std::size_t k = 0; k < samples; ++k) {
        TwistedComplex y;
        const std::size_t len = 1 + rng() % bound;
        for (std::size_t i = 0; i < len; ++i) y.entries.emplace_back(0, -int(i));
        for (std::size_t i = 0; i + 1 < len; i += 2)
            if (rng() % 2) y.q.emplace(std::make_pair(i + 1, i), Vector::unit(f, 1, 0));
        side.push_back(free_module(PM, P->add(y)));
    }
    for (std::size_t k = 0; k + 1 < ems.size() && k < 3; ++k) {
        const auto H = em_hom_complex(PM, ems[k], ems[k + 1], NatMode::strict);
        const auto z = detail::cocycles(H.space, 0);
        if (!z.empty()) side.push_back(em_cone(PM, ems[k], ems[k + 1], H.to_ambient(z.back())).cone);
    }
    for (std::size_t k = 0; k < side.size(); ++k) {
        const auto& m = side[k];
        const auto back = from_em(PM, A.dim, m);
        bool ok = validate_module_complex(A, back.complex).passed();
        if (ok) {
            const auto m2 = to_em(PM, back.complex);
            Vector pi(f, P->hom_dim(m.x, m2.x)), inv(f, P->hom_dim(m2.x, m.x));
            for (std::size_t e = 0; e < back.position.size(); ++e) {
                P->add_block(m.x, m2.x, pi, back.position[e], e, Vector::unit(f, 1, 0));
                P->add_block(m2.x, m.x, inv, e, back.position[e], Vector::unit(f, 1, 0));
            }
            ok = P->hom(m.x, m2.x).apply_d(pi).is_zero() && is_module_morphism(PM, m, m2, pi) &&
                 P->compose(m.x, m2.x, m.x, inv, pi) == P->identity(m.x) &&
                 P->compose(m2.x, m.x, m2.x, pi, inv) == P->identity(m2.x);
        }
        if (!ok && wb.is_null()) wb = json{{"sample", k}, {"object", P->object_name(m.x)}};
    }
    rep.add("round_trip_modules", wb.is_null(), "to_em(from_em(m)) is isomorphic to m by reordering", wb);

    std::size_t compared = 0;
    for (std::size_t a = 0; a < ems.size(); ++a)
        for (std::size_t b = 0; b < ems.size(); ++b) {
            const auto H = em_hom_complex(PM, ems[a], ems[b], NatMode::strict);
            std::map<int, std::size_t> em_dims, em_h;
            for (int n : H.space.support()) {
                if (H.space.dim_in(n) == 0) continue;
                em_dims[n] = H.space.dim_in(n);
                const std::size_t h = CohomologyBasis(H.space, n).dim();
                if (h) em_h[n] = h;
            }
            auto plain = plain_hom_dims(A, from_em(PM, A.dim, ems[a]).complex, from_em(PM, A.dim, ems[b]).complex);
            std::erase_if(plain.cohomology, [](const auto& kv) { return kv.second == 0; });
            ++compared;
            if ((em_dims != plain.dims || em_h != plain.cohomology) && wd.is_null())
                wd = json{{"source", a}, {"target", b}, {"em", em_dims}, {"plain", plain.dims}};
        }
    rep.add("hom_dims_agree", wd.is_null(), std::to_string(compared) + " pairs", wd);
    rep.seconds = sw.seconds();
    return rep;
}

}  // namespace dgm
