#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dgm/dg_category.hpp"

namespace dgm {

/// A one-sided twisted complex: entries A_i[r_i] and a strictly lower
/// triangular twist with q_ij in Hom(A_j, A_i) of degree 1 + r_i - r_j.
struct TwistedComplex {
    std::vector<std::pair<ObjId, int>> entries;
    std::map<std::pair<std::size_t, std::size_t>, Vector> q;

    std::size_t size() const { return entries.size(); }
    bool operator==(const TwistedComplex& o) const { return entries == o.entries && q == o.q; }

    static TwistedComplex single(ObjId a, int shift = 0) { return TwistedComplex{{{a, shift}}, {}}; }
};

/// Block layout of Hom(T, T'): blocks (i, j) with i a target entry and j a
/// source entry, stored target-major.
struct HomLayout {
    std::size_t src_size = 0, tgt_size = 0;
    std::vector<std::size_t> offset, dim;
    std::size_t total = 0;

    std::size_t idx(std::size_t i, std::size_t j) const { return i * src_size + j; }
};

/// The DG category of one-sided twisted complexes over a base DG category.
/// Objects are interned on first use, so structurally equal complexes share
/// one id.
class TwistedCategory : public DgCategory {
public:
    explicit TwistedCategory(std::shared_ptr<const DgCategory> base) : base_(std::move(base)) {}

    const DgCategory& base() const { return *base_; }
    std::shared_ptr<const DgCategory> base_ptr() const { return base_; }

    Field field() const override { return base_->field(); }
    Grading grading() const override { return base_->grading(); }

    /// Intern a complex. Degrees and triangularity are checked here; the
    /// Maurer-Cartan equation is left to validate_twisted.
    ObjId add(TwistedComplex T) const {
        normalize(T);
        check_shape(T);
        const std::string key = key_of(T);
        std::lock_guard lock(mu_);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        objects_.push_back(std::move(T));
        const ObjId id = objects_.size() - 1;
        index_.emplace(key, id);
        return id;
    }

    ObjId single(ObjId base_obj, int shift = 0) const { return add(TwistedComplex::single(base_obj, shift)); }
    ObjId empty() const { return add(TwistedComplex{}); }

    const TwistedComplex& complex(ObjId a) const {
        std::lock_guard lock(mu_);
        return objects_.at(a);
    }
    std::size_t object_count() const {
        std::lock_guard lock(mu_);
        return objects_.size();
    }

    std::string object_name(ObjId a) const override {
        const auto& T = complex(a);
        std::string s = "[";
        for (std::size_t i = 0; i < T.size(); ++i) {
            if (i) s += ",";
            s += base_->object_name(T.entries[i].first);
            if (T.entries[i].second) s += "[" + std::to_string(T.entries[i].second) + "]";
        }
        s += "]";
        if (!T.q.empty()) s += "~" + std::to_string(T.q.size());
        return s;
    }

    const HomLayout& layout(ObjId a, ObjId b) const { return data(a, b).layout; }
    std::size_t hom_dim(ObjId a, ObjId b) const override { return layout(a, b).total; }
    const DgSpace& hom(ObjId a, ObjId b) const override {
        const auto& hd = data(a, b);
        std::lock_guard lock(space_mu_);
        if (!hd.space) hd.space = build_space(a, b, hd);
        return *hd.space;
    }

    Vector block(ObjId a, ObjId b, const Vector& f, std::size_t i, std::size_t j) const {
        const auto& L = layout(a, b);
        return f.slice(L.offset[L.idx(i, j)], L.dim[L.idx(i, j)]);
    }
    void add_block(ObjId a, ObjId b, Vector& f, std::size_t i, std::size_t j, const Vector& blk) const {
        const auto& L = layout(a, b);
        const std::size_t o = L.offset[L.idx(i, j)];
        for (std::size_t k = 0; k < blk.size(); ++k)
            if (!blk[k].is_zero()) f[o + k] += blk[k];
    }

    Vector compose(ObjId a, ObjId b, ObjId c, const Vector& g, const Vector& f) const override {
        const auto& A = complex(a);
        const auto& B = complex(b);
        const auto& Cc = complex(c);
        const auto& Lab = layout(a, b);
        const auto& Lbc = layout(b, c);
        Vector out(field(), layout(a, c).total);
        for (std::size_t i = 0; i < Cc.size(); ++i)
            for (std::size_t j = 0; j < B.size(); ++j) {
                const Vector gij = g.slice(Lbc.offset[Lbc.idx(i, j)], Lbc.dim[Lbc.idx(i, j)]);
                if (gij.is_zero()) continue;
                for (std::size_t k = 0; k < A.size(); ++k) {
                    const Vector fjk = f.slice(Lab.offset[Lab.idx(j, k)], Lab.dim[Lab.idx(j, k)]);
                    if (fjk.is_zero()) continue;
                    add_block(a, c, out, i, k,
                              base_->compose(A.entries[k].first, B.entries[j].first, Cc.entries[i].first, gij, fjk));
                }
            }
        return out;
    }

    Vector identity(ObjId a) const override {
        const auto& T = complex(a);
        Vector out(field(), layout(a, a).total);
        for (std::size_t i = 0; i < T.size(); ++i) add_block(a, a, out, i, i, base_->identity(T.entries[i].first));
        return out;
    }

    /// Degree of a block element of base degree e in Hom(T, T').
    int block_degree(ObjId a, ObjId b, std::size_t i, std::size_t j, int e) const {
        return reduce_degree(grading(), e - complex(b).entries[i].second + complex(a).entries[j].second);
    }

private:
    struct HomData {
        HomLayout layout;
        std::vector<int> degrees;
        mutable std::unique_ptr<DgSpace> space;
    };

    void normalize(TwistedComplex& T) const {
        for (auto& e : T.entries) e.second = reduce_degree(grading(), e.second);
        for (auto it = T.q.begin(); it != T.q.end();)
            it = it->second.is_zero() ? T.q.erase(it) : std::next(it);
    }

    void check_shape(const TwistedComplex& T) const {
        for (const auto& [ij, v] : T.q) {
            const auto [i, j] = ij;
            if (i >= T.size() || j >= T.size()) throw InvalidInput("twist index out of range");
            if (i <= j) throw InvalidInput("twist must be strictly lower triangular");
            const auto& h = base_->hom(T.entries[j].first, T.entries[i].first);
            if (v.size() != h.dim()) throw DimensionMismatch("twist block has wrong length");
        }
    }

    std::string key_of(const TwistedComplex& T) const {
        std::string k;
        for (const auto& [o, r] : T.entries) k += std::to_string(o) + ":" + std::to_string(r) + ";";
        k += "|";
        for (const auto& [ij, v] : T.q) {
            k += std::to_string(ij.first) + "," + std::to_string(ij.second) + "=";
            for (const auto& s : v.entries()) k += s.to_string() + " ";
            k += ";";
        }
        return k;
    }

    const HomData& data(ObjId a, ObjId b) const {
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        {
            std::lock_guard lock(mu_);
            auto it = homs_.find(key);
            if (it != homs_.end()) return *it->second;
        }
        auto hd = build(a, b);
        std::lock_guard lock(mu_);
        auto [it, inserted] = homs_.emplace(key, std::move(hd));
        return *it->second;
    }

    std::unique_ptr<HomData> build(ObjId a, ObjId b) const {
        const TwistedComplex S = complex(a);
        const TwistedComplex T = complex(b);
        HomLayout L;
        L.src_size = S.size();
        L.tgt_size = T.size();
        std::vector<int> degs;
        for (std::size_t i = 0; i < T.size(); ++i)
            for (std::size_t j = 0; j < S.size(); ++j) {
                const auto& h = base_->hom(S.entries[j].first, T.entries[i].first);
                L.offset.push_back(L.total);
                L.dim.push_back(h.dim());
                L.total += h.dim();
                for (int e : h.degrees) degs.push_back(e - T.entries[i].second + S.entries[j].second);
            }
        return std::unique_ptr<HomData>(new HomData{std::move(L), std::move(degs), nullptr});
    }

    std::unique_ptr<DgSpace> build_space(ObjId a, ObjId b, const HomData& hd0) const {
        const TwistedComplex& S = complex(a);
        const TwistedComplex& T = complex(b);
        const HomLayout& L = hd0.layout;
        auto space = std::make_unique<DgSpace>(field(), grading(), hd0.degrees);
        const Field f = field();
        // D f = delta f + q' f - (-1)^n f q, with (delta f)_ij = (-1)^{r'_i} d f_ij.
        Matrix D(f, L.total, L.total);
        for (std::size_t i = 0; i < T.size(); ++i)
            for (std::size_t j = 0; j < S.size(); ++j) {
                const ObjId Aj = S.entries[j].first, Ai = T.entries[i].first;
                const auto& h = base_->hom(Aj, Ai);
                const std::size_t off = L.offset[L.idx(i, j)];
                for (std::size_t k = 0; k < h.dim(); ++k) {
                    const std::size_t col = off + k;
                    const int n = space->degrees[col];
                    const Vector e = Vector::unit(f, h.dim(), k);
                    const Vector de = h.apply_d(e) * signed_one(f, T.entries[i].second);
                    for (std::size_t t = 0; t < de.size(); ++t)
                        if (!de[t].is_zero()) D(off + t, col) += de[t];
                    for (const auto& [ij2, qv] : T.q) {
                        if (ij2.second != i) continue;
                        const std::size_t i2 = ij2.first;
                        const Vector r = base_->compose(Aj, Ai, T.entries[i2].first, qv, e);
                        const std::size_t o2 = L.offset[L.idx(i2, j)];
                        for (std::size_t t = 0; t < r.size(); ++t)
                            if (!r[t].is_zero()) D(o2 + t, col) += r[t];
                    }
                    const Scalar sgn = -signed_one(f, n);
                    for (const auto& [ij2, qv] : S.q) {
                        if (ij2.first != j) continue;
                        const std::size_t j2 = ij2.second;
                        const Vector r = base_->compose(S.entries[j2].first, Aj, Ai, e, qv);
                        const std::size_t o2 = L.offset[L.idx(i, j2)];
                        for (std::size_t t = 0; t < r.size(); ++t)
                            if (!r[t].is_zero()) D(o2 + t, col) += sgn * r[t];
                    }
                }
            }
        space->d = std::move(D);
        return space;
    }

    std::shared_ptr<const DgCategory> base_;
    mutable std::mutex mu_;
    mutable std::mutex space_mu_;
    mutable std::deque<TwistedComplex> objects_;
    mutable std::unordered_map<std::string, ObjId> index_;
    mutable std::unordered_map<std::uint64_t, std::unique_ptr<HomData>> homs_;
};

using TwistedCatPtr = std::shared_ptr<const TwistedCategory>;

/// Degree, triangularity and Maurer-Cartan verdicts for a complex over C.
inline VerdictReport validate_twisted(const DgCategory& C, const TwistedComplex& T) {
    VerdictReport rep("twisted-complex", C.field().name());
    const Field f = C.field();
    const Grading g = C.grading();
    json wdeg = nullptr, wtri = nullptr, wmc = nullptr;
    for (const auto& [ij, v] : T.q) {
        const auto [i, j] = ij;
        if (i >= T.size() || j >= T.size() || i <= j) {
            if (wtri.is_null()) wtri = json{{"i", i}, {"j", j}};
            continue;
        }
        const auto& h = C.hom(T.entries[j].first, T.entries[i].first);
        if (v.size() != h.dim() || !h.is_homogeneous(v, 1 + T.entries[i].second - T.entries[j].second)) {
            if (wdeg.is_null()) wdeg = json{{"i", i}, {"j", j}};
        }
    }
    rep.add("triangular", wtri.is_null(), "", wtri);
    rep.add("twist_degrees", wdeg.is_null(), "", wdeg);
    if (!wtri.is_null() || !wdeg.is_null()) return rep;
    auto qv = [&](std::size_t i, std::size_t j) -> const Vector* {
        auto it = T.q.find({i, j});
        return it == T.q.end() ? nullptr : &it->second;
    };
    for (std::size_t i = 0; i < T.size() && wmc.is_null(); ++i)
        for (std::size_t j = 0; j < i && wmc.is_null(); ++j) {
            const ObjId Ai = T.entries[i].first, Aj = T.entries[j].first;
            Vector s(f, C.hom_dim(Aj, Ai));
            if (auto p = qv(i, j)) s = C.d(Aj, Ai, *p) * signed_one(f, T.entries[i].second);
            for (std::size_t k = j + 1; k < i; ++k) {
                auto a = qv(i, k), b = qv(k, j);
                if (a && b) s += C.compose(Aj, T.entries[k].first, Ai, *a, *b);
            }
            if (!s.is_zero()) wmc = json{{"i", i}, {"j", j}, {"residual", to_json(s)}};
        }
    (void)g;
    rep.add("maurer_cartan", wmc.is_null(), "", wmc);
    return rep;
}

inline TwistedComplex shift(const TwistedComplex& T, int n) {
    TwistedComplex out = T;
    for (auto& e : out.entries) e.second += n;
    if (n % 2 != 0)
        for (auto& [ij, v] : out.q) v = -v;
    return out;
}

inline ObjId shift(const TwistedCategory& P, ObjId a, int n) { return P.add(shift(P.complex(a), n)); }

/// Shift of a morphism: same blocks, reinterpreted between shifted objects.
inline Vector shift_morphism(const Vector& f) { return f; }

struct ConeResult {
    ObjId cone;
    Vector inclusion;   // T' -> cone
    Vector projection;  // cone -> T[1]
    ObjId source_shifted;
};

/// Cone of a closed degree-0 morphism phi: T -> T'. Entries of T[1] come
/// first, then entries of T'; phi is the connecting block of the twist.
inline ConeResult cone(const TwistedCategory& P, ObjId a, ObjId b, const Vector& phi) {
    const auto& H = P.hom(a, b);
    if (phi.size() != H.dim()) throw DimensionMismatch("morphism has wrong length");
    if (!H.is_homogeneous(phi, 0)) throw InvalidInput("cone needs a degree-0 morphism");
    if (!H.apply_d(phi).is_zero()) throw InvalidInput("cone needs a closed morphism");
    const TwistedComplex S = P.complex(a);
    const TwistedComplex T = P.complex(b);
    const TwistedComplex S1 = shift(S, 1);
    TwistedComplex C;
    C.entries = S1.entries;
    C.entries.insert(C.entries.end(), T.entries.begin(), T.entries.end());
    const std::size_t n = S.size();
    for (const auto& [ij, v] : S1.q) C.q.insert_or_assign(ij, v);
    for (const auto& [ij, v] : T.q) C.q.insert_or_assign({ij.first + n, ij.second + n}, v);
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Vector blk = P.block(a, b, phi, i, j);
            if (!blk.is_zero()) C.q.insert_or_assign({n + i, j}, std::move(blk));
        }
    ConeResult out{P.add(C), Vector(P.field(), 0), Vector(P.field(), 0), P.add(S1)};
    out.inclusion = Vector(P.field(), P.hom_dim(b, out.cone));
    for (std::size_t i = 0; i < T.size(); ++i)
        P.add_block(b, out.cone, out.inclusion, n + i, i, P.base().identity(T.entries[i].first));
    out.projection = Vector(P.field(), P.hom_dim(out.cone, out.source_shifted));
    for (std::size_t j = 0; j < n; ++j)
        P.add_block(out.cone, out.source_shifted, out.projection, j, j, P.base().identity(S.entries[j].first));
    return out;
}

/// The contracting homotopy of cone(id_T): the block identity from the T
/// part back to the T[1] part. D h = id.
inline Vector cone_identity_contraction(const TwistedCategory& P, ObjId a, ObjId c) {
    const auto& T = P.complex(a);
    const std::size_t n = T.size();
    Vector h(P.field(), P.hom_dim(c, c));
    for (std::size_t i = 0; i < n; ++i) P.add_block(c, c, h, i, n + i, P.base().identity(T.entries[i].first));
    return h;
}

/// Direct sum with zero twist between the summands.
inline TwistedComplex direct_sum(const TwistedComplex& A, const TwistedComplex& B) {
    TwistedComplex C = A;
    const std::size_t n = A.size();
    C.entries.insert(C.entries.end(), B.entries.begin(), B.entries.end());
    for (const auto& [ij, v] : B.q) C.q.insert_or_assign({ij.first + n, ij.second + n}, v);
    return C;
}

}  // namespace dgm
