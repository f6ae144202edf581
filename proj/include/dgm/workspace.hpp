#pragma once

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dgm/algebra.hpp"
#include "dgm/compatible.hpp"
#include "dgm/group_action.hpp"
#include "dgm/monad.hpp"

namespace dgm::io {

inline constexpr int kFormatVersion = 1;

/// Where a workspace failed to load. kind is "io", "syntax" or "validation".
class WorkspaceError : public InvalidInput {
public:
    WorkspaceError(std::string kind, const std::string& msg, std::string pointer = {}, std::size_t line = 0)
        : InvalidInput(msg), kind_(std::move(kind)), pointer_(std::move(pointer)), line_(line) {}

    const std::string& kind() const { return kind_; }
    const std::string& pointer() const { return pointer_; }
    std::size_t line() const { return line_; }

    json to_json() const {
        json j{{"kind", kind_}, {"message", what()}};
        if (!pointer_.empty()) j["location"] = pointer_;
        if (line_) j["line"] = line_;
        return j;
    }

private:
    std::string kind_, pointer_;
    std::size_t line_;
};

struct FunctorEntry {
    std::string source, target;
    FunctorPresentation F;
};

struct NaturalEntry {
    std::string source, target;  // functor names
    NatPresentation nu;
};

struct MonadEntry {
    std::string kind;  // explicit, algebra, group_action, compatible
    // explicit
    std::string functor;
    std::vector<Vector> mu, eta;
    // algebra
    std::string category;
    std::optional<AlgebraPresentation> algebra;
    // group_action
    std::string action;
    // compatible
    std::string first, second;
    std::vector<Vector> exchange;
};

struct TwistedEntry {
    std::string category;
    TwistedComplex T;
};

struct ModuleEntry {
    std::string monad, object;
    bool free = false;
    Vector lambda{Field::rationals(), 0};
};

struct ActionEntry {
    std::string category;
    FiniteGroup group;
    std::vector<std::string> elements;  // functor names
};

struct Workspace {
    Field field = Field::rationals();
    std::map<std::string, std::shared_ptr<FiniteDgCategory>> categories;
    std::map<std::string, FunctorEntry> functors;
    std::map<std::string, NaturalEntry> naturals;
    std::map<std::string, MonadEntry> monads;
    std::map<std::string, TwistedEntry> twisted;
    std::map<std::string, ModuleEntry> modules;
    std::map<std::string, ActionEntry> actions;
};

// ---------------------------------------------------------------- emit

inline json emit_vector(const Vector& v) {
    json a = json::array();
    for (const auto& s : v.entries()) a.push_back(s.to_string());
    return a;
}

inline json emit_matrix(const Matrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(emit_vector(m.row(i)));
    return a;
}

inline json emit_category(const FiniteDgCategory& C) {
    json j;
    j["grading"] = to_string(C.grading());
    j["objects"] = C.names();
    json homs = json::array(), comp = json::array(), ids = json::object();
    const std::size_t n = C.size();
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b) {
            const auto& h = C.hom(a, b);
            if (h.dim() == 0) continue;
            json e{{"source", C.object_name(a)}, {"target", C.object_name(b)}, {"degrees", h.degrees}};
            if (!h.d.is_zero()) e["d"] = emit_matrix(h.d);
            homs.push_back(std::move(e));
        }
    for (ObjId a = 0; a < n; ++a)
        for (ObjId b = 0; b < n; ++b)
            for (ObjId c = 0; c < n; ++c) {
                const std::size_t dab = C.hom_dim(a, b), dbc = C.hom_dim(b, c), dac = C.hom_dim(a, c);
                for (std::size_t g = 0; g < dbc; ++g)
                    for (std::size_t f = 0; f < dab; ++f) {
                        const auto& cell = C.compose_cell(a, b, c, g, f);
                        if (cell.empty()) continue;
                        Vector v(C.field(), dac);
                        for (const auto& [k, s] : cell) v[k] = s;
                        comp.push_back(json{{"objects", {C.object_name(a), C.object_name(b), C.object_name(c)}},
                                            {"g", g},
                                            {"f", f},
                                            {"value", emit_vector(v)}});
                    }
            }
    for (ObjId a = 0; a < n; ++a)
        if (C.hom_dim(a, a)) ids[C.object_name(a)] = emit_vector(C.identity(a));
    j["homs"] = std::move(homs);
    j["compose"] = std::move(comp);
    j["identities"] = std::move(ids);
    return j;
}

inline json emit_functor(const FunctorEntry& e) {
    const auto& F = e.F;
    json objs = json::object(), maps = json::array();
    for (ObjId a = 0; a < F.src->size(); ++a) objs[F.src->object_name(a)] = F.dst->object_name(F.obj[a]);
    for (ObjId a = 0; a < F.src->size(); ++a)
        for (ObjId b = 0; b < F.src->size(); ++b) {
            const Matrix& m = F.matrix(a, b);
            if (m.is_zero()) continue;
            maps.push_back(json{{"source", F.src->object_name(a)}, {"target", F.src->object_name(b)},
                                {"matrix", emit_matrix(m)}});
        }
    return json{{"source", e.source}, {"target", e.target}, {"objects", objs}, {"maps", maps}};
}

inline json emit_components(const FiniteDgCategory& C, const std::vector<Vector>& comps) {
    json j = json::object();
    for (ObjId a = 0; a < comps.size(); ++a) j[C.object_name(a)] = emit_vector(comps[a]);
    return j;
}

inline json emit_algebra(const AlgebraPresentation& A) {
    json prods = json::array();
    for (std::size_t s = 0; s < A.dim; ++s)
        for (std::size_t t = 0; t < A.dim; ++t)
            if (!A.mult[s][t].is_zero()) prods.push_back(json{{"s", s}, {"t", t}, {"value", emit_vector(A.mult[s][t])}});
    return json{{"name", A.name}, {"dim", A.dim}, {"unit", emit_vector(A.unit)}, {"products", prods}};
}

inline std::string emit(const Workspace& w) {
    json j;
    j["version"] = kFormatVersion;
    j["field"] = w.field.name();
    json cats = json::object(), funs = json::object(), nats = json::object(), mons = json::object(),
         tws = json::object(), mods = json::object(), acts = json::object();
    for (const auto& [n, C] : w.categories) cats[n] = emit_category(*C);
    for (const auto& [n, F] : w.functors) funs[n] = emit_functor(F);
    for (const auto& [n, N] : w.naturals)
        nats[n] = json{{"source", N.source}, {"target", N.target}, {"components", emit_components(*N.nu.source.src, N.nu.comp)}};
    for (const auto& [n, M] : w.monads) {
        json m{{"kind", M.kind}};
        if (M.kind == "explicit") {
            const auto& C = *w.functors.at(M.functor).F.src;
            m["functor"] = M.functor;
            m["mu"] = emit_components(C, M.mu);
            m["eta"] = emit_components(C, M.eta);
        } else if (M.kind == "algebra") {
            m["category"] = M.category;
            m["algebra"] = emit_algebra(*M.algebra);
        } else if (M.kind == "group_action") {
            m["action"] = M.action;
        } else {
            m["first"] = M.first;
            m["second"] = M.second;
            json ex = json::object();
            const std::string cat = [&] {
                const auto& f = w.monads.at(M.first);
                if (f.kind == "explicit") return w.functors.at(f.functor).source;
                if (f.kind == "algebra") return f.category;
                return w.actions.at(f.action).category;
            }();
            m["exchange"] = emit_components(*w.categories.at(cat), M.exchange);
        }
        mons[n] = std::move(m);
    }
    for (const auto& [n, T] : w.twisted) {
        const auto& C = *w.categories.at(T.category);
        json ents = json::array(), q = json::array();
        for (const auto& [o, r] : T.T.entries) ents.push_back(json{{"object", C.object_name(o)}, {"shift", r}});
        for (const auto& [ij, v] : T.T.q)
            q.push_back(json{{"target", ij.first}, {"source", ij.second}, {"value", emit_vector(v)}});
        tws[n] = json{{"category", T.category}, {"entries", ents}, {"q", q}};
    }
    for (const auto& [n, M] : w.modules) {
        json m{{"monad", M.monad}, {"object", M.object}};
        if (M.free)
            m["free"] = true;
        else
            m["lambda"] = emit_vector(M.lambda);
        mods[n] = std::move(m);
    }
    for (const auto& [n, A] : w.actions)
        acts[n] = json{{"category", A.category},
                       {"group", json{{"name", A.group.name}, {"table", A.group.table}}},
                       {"elements", A.elements}};
    j["categories"] = std::move(cats);
    j["functors"] = std::move(funs);
    j["naturals"] = std::move(nats);
    j["monads"] = std::move(mons);
    j["twisted"] = std::move(tws);
    j["modules"] = std::move(mods);
    j["actions"] = std::move(acts);
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- locate

namespace detail {

/// Line of the value at a JSON pointer in the source text, or 0.
class PointerLocator {
public:
    PointerLocator(const std::string& text, std::string target) : s_(text), target_(std::move(target)) {}

    std::size_t find() {
        try {
            skip();
            value("");
        } catch (...) {
        }
        return found_;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            if (s_[i_] == '\n') ++line_;
            ++i_;
        }
    }
    std::string string_token() {
        std::string out;
        ++i_;
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\') ++i_;
            out += s_[i_++];
        }
        ++i_;
        return out;
    }
    static std::string escape(const std::string& k) {
        std::string o;
        for (char c : k) o += c == '~' ? "~0" : c == '/' ? "~1" : std::string(1, c);
        return o;
    }
    void value(const std::string& path) {
        skip();
        if (path == target_) {
            found_ = line_;
            throw Found{};
        }
        if (i_ >= s_.size()) return;
        if (s_[i_] == '{') {
            ++i_;
            skip();
            while (i_ < s_.size() && s_[i_] != '}') {
                const std::string k = string_token();
                skip();
                ++i_;  // ':'
                skip();
                value(path + "/" + escape(k));
                skip();
                if (s_[i_] == ',') ++i_;
                skip();
            }
            ++i_;
        } else if (s_[i_] == '[') {
            ++i_;
            skip();
            std::size_t k = 0;
            while (i_ < s_.size() && s_[i_] != ']') {
                value(path + "/" + std::to_string(k++));
                skip();
                if (s_[i_] == ',') ++i_;
                skip();
            }
            ++i_;
        } else if (s_[i_] == '"') {
            string_token();
        } else {
            while (i_ < s_.size() && std::string(",]} \n\t\r").find(s_[i_]) == std::string::npos) ++i_;
        }
    }

    struct Found {};

    const std::string& s_;
    std::string target_;
    std::size_t i_ = 0, line_ = 1, found_ = 0;
};

}  // namespace detail

// ---------------------------------------------------------------- ingest

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    Workspace read() {
        json j;
        try {
            j = json::parse(text_);
        } catch (const json::parse_error& e) {
            std::size_t line = 1;
            for (std::size_t k = 0; k < e.byte && k < text_.size(); ++k)
                if (text_[k] == '\n') ++line;
            throw WorkspaceError("syntax", e.what(), {}, line);
        }
        if (!j.is_object()) fail("", "workspace must be a JSON object");
        if (!j.contains("version")) fail("", "missing 'version'");
        if (!j["version"].is_number_integer() || j["version"].get<int>() != kFormatVersion)
            fail("/version", "unsupported format version");
        Workspace w;
        if (j.contains("field")) {
            try {
                w.field = parse_field(str(j["field"], "/field"));
            } catch (const WorkspaceError&) {
                throw;
            } catch (const std::exception& e) {
                fail("/field", e.what());
            }
        }
        f_ = w.field;
        for (const auto& key : j.items())
            if (!std::set<std::string>{"version", "field", "categories", "functors", "naturals", "monads", "modules",
                                       "twisted", "actions"}
                     .count(key.key()))
                fail("/" + key.key(), "unknown top-level field");
        section(j, "categories", [&](const std::string& n, const json& v, const std::string& p) {
            w.categories[n] = category(v, p);
        });
        section(j, "functors", [&](const std::string& n, const json& v, const std::string& p) {
            w.functors.emplace(n, functor(w, v, p));
        });
        section(j, "naturals", [&](const std::string& n, const json& v, const std::string& p) {
            w.naturals.emplace(n, natural(w, v, p));
        });
        section(j, "actions", [&](const std::string& n, const json& v, const std::string& p) {
            w.actions.emplace(n, action(w, v, p));
        });
        // Compatible monads refer to other monads, so read them last.
        if (j.contains("monads")) {
            obj(j["monads"], "/monads");
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& [n, v] : j["monads"].items()) {
                    const std::string p = "/monads/" + n;
                    obj(v, p);
                    const bool comp = v.contains("kind") && v["kind"] == "compatible";
                    if (comp == (pass == 1)) w.monads.emplace(n, monad(w, v, p));
                }
        }
        section(j, "twisted", [&](const std::string& n, const json& v, const std::string& p) {
            w.twisted.emplace(n, twisted(w, v, p));
        });
        section(j, "modules", [&](const std::string& n, const json& v, const std::string& p) {
            w.modules.emplace(n, module(w, v, p));
        });
        return w;
    }

private:
    [[noreturn]] void fail(const std::string& pointer, const std::string& msg, const std::string& kind = "validation") const {
        const std::size_t line = detail::PointerLocator(text_, pointer).find();
        throw WorkspaceError(kind, msg + (pointer.empty() ? "" : " at " + pointer), pointer, line);
    }

    template <class Fn>
    void section(const json& j, const std::string& key, Fn fn) {
        if (!j.contains(key)) return;
        obj(j[key], "/" + key);
        for (const auto& [n, v] : j[key].items()) {
            const std::string p = "/" + key + "/" + n;
            obj(v, p);
            try {
                fn(n, v, p);
            } catch (const WorkspaceError&) {
                throw;
            } catch (const InvalidInput& e) {
                fail(p, e.what());
            }
        }
    }

    void obj(const json& v, const std::string& p) const {
        if (!v.is_object()) fail(p, "expected an object");
    }
    const json& at(const json& v, const std::string& key, const std::string& p) const {
        if (!v.contains(key)) fail(p, "missing '" + key + "'");
        return v[key];
    }
    std::string str(const json& v, const std::string& p) const {
        if (!v.is_string()) fail(p, "expected a string");
        return v.get<std::string>();
    }
    std::size_t index(const json& v, const std::string& p) const {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            fail(p, "expected a non-negative integer");
        return v.get<std::size_t>();
    }
    int integer(const json& v, const std::string& p) const {
        if (!v.is_number_integer()) fail(p, "expected an integer");
        return v.get<int>();
    }
    Scalar scalar(const json& v, const std::string& p) const {
        if (!v.is_string()) fail(p, "scalars are strings", "syntax");
        try {
            return Scalar::parse(f_, v.get<std::string>());
        } catch (const std::exception& e) {
            fail(p, std::string("malformed scalar: ") + e.what(), "syntax");
        }
    }
    Vector vector(const json& v, const std::string& p, std::optional<std::size_t> len = std::nullopt) const {
        if (!v.is_array()) fail(p, "expected an array of scalars");
        std::vector<Scalar> out;
        for (std::size_t k = 0; k < v.size(); ++k) out.push_back(scalar(v[k], p + "/" + std::to_string(k)));
        if (len && out.size() != *len)
            fail(p, "expected " + std::to_string(*len) + " coordinates, got " + std::to_string(out.size()));
        return Vector(f_, std::move(out));
    }
    Matrix matrix(const json& v, const std::string& p, std::size_t rows, std::size_t cols) const {
        if (!v.is_array() || v.size() != rows)
            fail(p, "expected " + std::to_string(rows) + " rows");
        Matrix m(f_, rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            const Vector r = vector(v[i], p + "/" + std::to_string(i), cols);
            for (std::size_t k = 0; k < cols; ++k) m(i, k) = r[k];
        }
        return m;
    }
    Grading grading(const json& v, const std::string& p) const {
        const auto s = str(v, p);
        if (s == "Z") return Grading::Z;
        if (s == "Z2") return Grading::Z2;
        fail(p, "grading must be \"Z\" or \"Z2\"");
    }
    ObjId object(const FiniteDgCategory& C, const json& v, const std::string& p) const {
        const auto s = str(v, p);
        for (ObjId a = 0; a < C.size(); ++a)
            if (C.object_name(a) == s) return a;
        fail(p, "unknown object '" + s + "'");
    }
    template <class Map>
    const typename Map::mapped_type& ref(const Map& m, const json& v, const std::string& p, const char* what) const {
        const auto s = str(v, p);
        auto it = m.find(s);
        if (it == m.end()) fail(p, std::string("unknown ") + what + " '" + s + "'");
        return it->second;
    }

    std::shared_ptr<FiniteDgCategory> category(const json& v, const std::string& p) {
        const Grading g = v.contains("grading") ? grading(v["grading"], p + "/grading") : Grading::Z;
        const auto& objs = at(v, "objects", p);
        if (!objs.is_array()) fail(p + "/objects", "expected an array of names");
        std::vector<std::string> names;
        for (std::size_t k = 0; k < objs.size(); ++k) {
            names.push_back(str(objs[k], p + "/objects/" + std::to_string(k)));
            if (std::count(names.begin(), names.end(), names.back()) > 1)
                fail(p + "/objects/" + std::to_string(k), "duplicate object name");
        }
        auto C = std::make_shared<FiniteDgCategory>(f_, g, names);
        if (v.contains("homs")) {
            const auto& hs = v["homs"];
            for (std::size_t k = 0; k < hs.size(); ++k) {
                const std::string q = p + "/homs/" + std::to_string(k);
                const ObjId a = object(*C, at(hs[k], "source", q), q + "/source");
                const ObjId b = object(*C, at(hs[k], "target", q), q + "/target");
                const auto& dj = at(hs[k], "degrees", q);
                if (!dj.is_array()) fail(q + "/degrees", "expected an array of integers");
                std::vector<int> degs;
                for (std::size_t i = 0; i < dj.size(); ++i) degs.push_back(integer(dj[i], q + "/degrees/" + std::to_string(i)));
                Matrix d(f_, degs.size(), degs.size());
                if (hs[k].contains("d")) d = matrix(hs[k]["d"], q + "/d", degs.size(), degs.size());
                try {
                    C->set_hom(a, b, DgSpace(f_, g, degs, d));
                } catch (const InvalidInput& e) {
                    fail(q, e.what());
                }
            }
        }
        if (v.contains("compose")) {
            const auto& cs = v["compose"];
            for (std::size_t k = 0; k < cs.size(); ++k) {
                const std::string q = p + "/compose/" + std::to_string(k);
                const auto& os = at(cs[k], "objects", q);
                if (!os.is_array() || os.size() != 3) fail(q + "/objects", "expected three object names");
                const ObjId a = object(*C, os[0], q + "/objects/0"), b = object(*C, os[1], q + "/objects/1"),
                            c = object(*C, os[2], q + "/objects/2");
                const std::size_t gi = index(at(cs[k], "g", q), q + "/g"), fj = index(at(cs[k], "f", q), q + "/f");
                const Vector val = vector(at(cs[k], "value", q), q + "/value", C->hom_dim(a, c));
                try {
                    C->set_compose(a, b, c, gi, fj, val);
                } catch (const InvalidInput& e) {
                    fail(q, e.what());
                }
            }
        }
        if (v.contains("identities"))
            for (const auto& [n, val] : v["identities"].items()) {
                const std::string q = p + "/identities/" + n;
                const ObjId a = object(*C, json(n), q);
                C->set_identity(a, vector(val, q, C->hom_dim(a, a)));
            }
        const auto rep = validate_dg_category(*C);
        if (!rep.passed()) fail(p, "category fails validation: " + first_failure(rep));
        return C;
    }

    static std::string first_failure(const VerdictReport& r) {
        for (const auto& c : r.checks)
            if (c.status != Status::pass) return c.name + (c.witness.is_null() ? "" : " " + c.witness.dump());
        return {};
    }

    FunctorEntry functor(const Workspace& w, const json& v, const std::string& p) {
        FunctorEntry e;
        e.source = str(at(v, "source", p), p + "/source");
        e.target = str(at(v, "target", p), p + "/target");
        const auto src = ref(w.categories, json(e.source), p + "/source", "category");
        const auto dst = ref(w.categories, json(e.target), p + "/target", "category");
        e.F.src = src;
        e.F.dst = dst;
        e.F.obj.assign(src->size(), 0);
        const auto& objs = at(v, "objects", p);
        std::vector<bool> seen(src->size(), false);
        for (const auto& [n, t] : objs.items()) {
            const ObjId a = object(*src, json(n), p + "/objects");
            e.F.obj[a] = object(*dst, t, p + "/objects/" + n);
            seen[a] = true;
        }
        for (ObjId a = 0; a < src->size(); ++a)
            if (!seen[a]) fail(p + "/objects", "no image for object '" + src->object_name(a) + "'");
        for (ObjId a = 0; a < src->size(); ++a)
            for (ObjId b = 0; b < src->size(); ++b)
                e.F.mor.emplace_back(f_, dst->hom_dim(e.F.obj[a], e.F.obj[b]), src->hom_dim(a, b));
        if (v.contains("maps")) {
            const auto& ms = v["maps"];
            for (std::size_t k = 0; k < ms.size(); ++k) {
                const std::string q = p + "/maps/" + std::to_string(k);
                const ObjId a = object(*src, at(ms[k], "source", q), q + "/source");
                const ObjId b = object(*src, at(ms[k], "target", q), q + "/target");
                e.F.mor[a * src->size() + b] = matrix(at(ms[k], "matrix", q), q + "/matrix",
                                                      dst->hom_dim(e.F.obj[a], e.F.obj[b]), src->hom_dim(a, b));
            }
        }
        const auto rep = validate_functor(e.F);
        if (!rep.passed()) fail(p, "functor fails validation: " + first_failure(rep));
        return e;
    }

    std::vector<Vector> components(const json& v, const std::string& p, const FiniteDgCategory& C,
                                   const std::function<std::optional<std::size_t>(ObjId)>& len) const {
        if (!v.is_object()) fail(p, "expected components keyed by object");
        std::vector<std::optional<Vector>> out(C.size());
        for (const auto& [n, c] : v.items()) {
            const ObjId a = object(C, json(n), p);
            out[a] = vector(c, p + "/" + n, len(a));
        }
        std::vector<Vector> r;
        for (ObjId a = 0; a < C.size(); ++a) {
            if (!out[a]) {
                if (len(a).value_or(1) != 0) fail(p, "missing component at '" + C.object_name(a) + "'");
                out[a] = Vector(f_, 0);
            }
            r.push_back(*out[a]);
        }
        return r;
    }

    NaturalEntry natural(const Workspace& w, const json& v, const std::string& p) {
        NaturalEntry e;
        e.source = str(at(v, "source", p), p + "/source");
        e.target = str(at(v, "target", p), p + "/target");
        const auto& F = ref(w.functors, json(e.source), p + "/source", "functor").F;
        const auto& G = ref(w.functors, json(e.target), p + "/target", "functor").F;
        if (F.src != G.src || F.dst != G.dst) fail(p, "source and target functors are not parallel");
        e.nu = NatPresentation{F, G, components(at(v, "components", p), p + "/components", *F.src, [&](ObjId a) {
                                   return F.dst->hom_dim(F.obj[a], G.obj[a]);
                               })};
        const auto rep = validate_nat(e.nu, NatMode::weak);
        if (!rep.passed()) fail(p, "transformation fails validation: " + first_failure(rep));
        return e;
    }

    ActionEntry action(const Workspace& w, const json& v, const std::string& p) {
        ActionEntry e;
        e.category = str(at(v, "category", p), p + "/category");
        const auto C = ref(w.categories, json(e.category), p + "/category", "category");
        const auto& g = at(v, "group", p);
        e.group.name = g.contains("name") ? str(g["name"], p + "/group/name") : "G";
        const auto& t = at(g, "table", p + "/group");
        if (!t.is_array()) fail(p + "/group/table", "expected a square table");
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::vector<std::size_t> row;
            if (!t[i].is_array() || t[i].size() != t.size()) fail(p + "/group/table/" + std::to_string(i), "row has the wrong length");
            for (std::size_t k = 0; k < t[i].size(); ++k)
                row.push_back(index(t[i][k], p + "/group/table/" + std::to_string(i) + "/" + std::to_string(k)));
            e.group.table.push_back(std::move(row));
        }
        const auto& el = at(v, "elements", p);
        if (!el.is_array() || el.size() != e.group.order()) fail(p + "/elements", "need one functor per group element");
        GroupAction act{C, e.group, {}};
        for (std::size_t k = 0; k < el.size(); ++k) {
            const std::string q = p + "/elements/" + std::to_string(k);
            e.elements.push_back(str(el[k], q));
            const auto& F = ref(w.functors, el[k], q, "functor").F;
            if (F.src != C || F.dst != C) fail(q, "element functor is not an endofunctor of the category");
            act.elements.push_back(F);
        }
        const auto rep = validate_action(act);
        if (!rep.passed()) fail(p, "action fails validation: " + first_failure(rep));
        return e;
    }

    MonadEntry monad(const Workspace& w, const json& v, const std::string& p) {
        MonadEntry e;
        e.kind = str(at(v, "kind", p), p + "/kind");
        if (e.kind == "explicit") {
            e.functor = str(at(v, "functor", p), p + "/functor");
            const auto& F = ref(w.functors, json(e.functor), p + "/functor", "functor").F;
            if (F.src != F.dst) fail(p + "/functor", "monad functor must be an endofunctor");
            const auto& C = *F.src;
            e.mu = components(at(v, "mu", p), p + "/mu", C,
                              [&](ObjId a) { return C.hom_dim(F.obj[F.obj[a]], F.obj[a]); });
            e.eta = components(at(v, "eta", p), p + "/eta", C, [&](ObjId a) { return C.hom_dim(a, F.obj[a]); });
            for (ObjId a = 0; a < C.size(); ++a) {
                const auto& hm = C.hom(F.obj[F.obj[a]], F.obj[a]);
                const auto& he = C.hom(a, F.obj[a]);
                if (!hm.is_homogeneous(e.mu[a], 0) || !hm.apply_d(e.mu[a]).is_zero())
                    fail(p + "/mu/" + C.object_name(a), "component is not closed of degree 0");
                if (!he.is_homogeneous(e.eta[a], 0) || !he.apply_d(e.eta[a]).is_zero())
                    fail(p + "/eta/" + C.object_name(a), "component is not closed of degree 0");
            }
        } else if (e.kind == "algebra") {
            e.category = str(at(v, "category", p), p + "/category");
            const auto C = ref(w.categories, json(e.category), p + "/category", "category");
            if (C->size() != 1 || C->hom_dim(0, 0) != 1 || C->hom(0, 0).degrees[0] != 0)
                fail(p + "/category", "algebra monads need a one-object category with End = k");
            const auto& a = at(v, "algebra", p);
            const std::string q = p + "/algebra";
            const std::size_t n = index(at(a, "dim", q), q + "/dim");
            AlgebraPresentation A(f_, n, a.contains("name") ? str(a["name"], q + "/name") : "A");
            A.unit = vector(at(a, "unit", q), q + "/unit", n);
            if (a.contains("products")) {
                const auto& ps = a["products"];
                for (std::size_t k = 0; k < ps.size(); ++k) {
                    const std::string r = q + "/products/" + std::to_string(k);
                    const std::size_t s = index(at(ps[k], "s", r), r + "/s"), t = index(at(ps[k], "t", r), r + "/t");
                    if (s >= n || t >= n) fail(r, "basis index out of range");
                    A.mult[s][t] = vector(at(ps[k], "value", r), r + "/value", n);
                }
            }
            const auto rep = validate_algebra(A);
            if (!rep.passed()) fail(q, "algebra fails validation: " + first_failure(rep));
            e.algebra = std::move(A);
        } else if (e.kind == "group_action") {
            e.action = str(at(v, "action", p), p + "/action");
            ref(w.actions, json(e.action), p + "/action", "action");
        } else if (e.kind == "compatible") {
            e.first = str(at(v, "first", p), p + "/first");
            e.second = str(at(v, "second", p), p + "/second");
            const auto& m1 = ref(w.monads, json(e.first), p + "/first", "monad");
            const auto& m2 = ref(w.monads, json(e.second), p + "/second", "monad");
            if (m1.kind == "compatible" || m2.kind == "compatible") fail(p, "nested compatible pairs are not supported");
            const std::string c1 = monad_category(w, m1), c2 = monad_category(w, m2);
            if (c1 != c2) fail(p, "the two monads live on different categories");
            const auto& C = *w.categories.at(c1);
            // Lengths are checked once the twisted layer exists.
            e.exchange = components(at(v, "exchange", p), p + "/exchange", C, [](ObjId) { return std::optional<std::size_t>(); });
        } else {
            fail(p + "/kind", "unknown monad kind '" + e.kind + "'");
        }
        return e;
    }

public:
    static std::string monad_category(const Workspace& w, const MonadEntry& m) {
        if (m.kind == "explicit") return w.functors.at(m.functor).source;
        if (m.kind == "algebra") return m.category;
        if (m.kind == "group_action") return w.actions.at(m.action).category;
        return monad_category(w, w.monads.at(m.first));
    }

private:
    TwistedEntry twisted(const Workspace& w, const json& v, const std::string& p) {
        TwistedEntry e;
        e.category = str(at(v, "category", p), p + "/category");
        const auto C = ref(w.categories, json(e.category), p + "/category", "category");
        const auto& ents = at(v, "entries", p);
        if (!ents.is_array()) fail(p + "/entries", "expected an array");
        for (std::size_t k = 0; k < ents.size(); ++k) {
            const std::string q = p + "/entries/" + std::to_string(k);
            e.T.entries.emplace_back(object(*C, at(ents[k], "object", q), q + "/object"),
                                     ents[k].contains("shift") ? integer(ents[k]["shift"], q + "/shift") : 0);
        }
        if (v.contains("q")) {
            const auto& qs = v["q"];
            for (std::size_t k = 0; k < qs.size(); ++k) {
                const std::string q = p + "/q/" + std::to_string(k);
                const std::size_t i = index(at(qs[k], "target", q), q + "/target");
                const std::size_t j = index(at(qs[k], "source", q), q + "/source");
                if (i >= e.T.size() || j >= i) fail(q, "twist must be strictly lower triangular");
                const auto& h = C->hom(e.T.entries[j].first, e.T.entries[i].first);
                e.T.q.insert_or_assign({i, j}, vector(at(qs[k], "value", q), q + "/value", h.dim()));
            }
        }
        const auto rep = validate_twisted(*C, e.T);
        if (!rep.passed()) fail(p, "twisted complex fails validation: " + first_failure(rep));
        return e;
    }

    ModuleEntry module(const Workspace& w, const json& v, const std::string& p) {
        ModuleEntry e;
        e.monad = str(at(v, "monad", p), p + "/monad");
        e.object = str(at(v, "object", p), p + "/object");
        const auto& m = ref(w.monads, json(e.monad), p + "/monad", "monad");
        const auto& t = ref(w.twisted, json(e.object), p + "/object", "twisted complex");
        if (t.category != monad_category(w, m)) fail(p + "/object", "complex lives over a different category");
        e.free = v.contains("free") && v["free"].is_boolean() && v["free"].get<bool>();
        if (!e.free) e.lambda = vector(at(v, "lambda", p), p + "/lambda");
        return e;
    }

    const std::string& text_;
    Field f_ = Field::rationals();
};

inline Workspace ingest_text(const std::string& text) { return Reader(text).read(); }

inline Workspace ingest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WorkspaceError("io", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ingest_text(ss.str());
}

// ---------------------------------------------------------------- runtime

/// Live objects behind a workspace: one twisted layer per category, with
/// monads, complexes and modules resolved on demand.
class Runtime {
public:
    explicit Runtime(const Workspace& w) : w_(w) {}

    const Workspace& workspace() const { return w_; }

    TwistedCatPtr layer(const std::string& cat) {
        auto it = layers_.find(cat);
        if (it != layers_.end()) return it->second;
        auto c = w_.categories.find(cat);
        if (c == w_.categories.end()) throw InvalidInput("unknown category '" + cat + "'");
        return layers_[cat] = std::make_shared<TwistedCategory>(c->second);
    }

    std::string monad_category(const std::string& name) const {
        return Reader::monad_category(w_, monad_entry(name));
    }

    const MonadEntry& monad_entry(const std::string& name) const {
        auto it = w_.monads.find(name);
        if (it == w_.monads.end()) throw InvalidInput("unknown monad '" + name + "'");
        return it->second;
    }

    FiniteMonad finite_monad(const std::string& name) const {
        const auto& m = monad_entry(name);
        if (m.kind != "explicit") throw InvalidInput("monad '" + name + "' is not given explicitly");
        const auto& F = w_.functors.at(m.functor).F;
        return FiniteMonad{F, NatPresentation{compose(F, F), F, m.mu}, NatPresentation{identity_functor(F.src), F, m.eta},
                           name};
    }

    PretrMonad monad(const std::string& name) {
        auto it = monads_.find(name);
        if (it != monads_.end()) return it->second;
        const auto& m = monad_entry(name);
        const auto P = layer(monad_category(name));
        PretrMonad out = [&] {
            if (m.kind == "explicit") return pretr_monad(finite_monad(name), P);
            if (m.kind == "algebra") return algebra_monad(*m.algebra, P);
            if (m.kind == "group_action") return group_action_monad(action(m.action), P);
            return compose_compatible(pair(name));
        }();
        out.name = name;
        return monads_.emplace(name, out).first->second;
    }

    CompatiblePair pair(const std::string& name) {
        const auto& m = monad_entry(name);
        if (m.kind != "compatible") throw InvalidInput("monad '" + name + "' is not a compatible pair");
        auto M1 = monad(m.first), M2 = monad(m.second);
        const auto P = M1.cat;
        std::vector<Vector> ex = m.exchange;
        for (ObjId A = 0; A < ex.size(); ++A) {
            const ObjId a = P->single(A);
            const std::size_t len = P->hom_dim(M1.apply(M2.apply(a)), M2.apply(M1.apply(a)));
            if (ex[A].size() != len)
                throw InvalidInput("exchange component at '" + P->base().object_name(A) + "' needs " +
                                   std::to_string(len) + " coordinates");
        }
        return CompatiblePair{M1, M2, make_exchange(M1, M2, [ex](ObjId A) { return ex.at(A); })};
    }

    GroupAction action(const std::string& name) const {
        auto it = w_.actions.find(name);
        if (it == w_.actions.end()) throw InvalidInput("unknown action '" + name + "'");
        GroupAction act{w_.categories.at(it->second.category), it->second.group, {}};
        for (const auto& e : it->second.elements) act.elements.push_back(w_.functors.at(e).F);
        return act;
    }

    /// Twisted complex by name, or a base object name of the given category.
    ObjId twisted(const std::string& name, const std::string& cat = {}) {
        auto it = w_.twisted.find(name);
        if (it != w_.twisted.end()) {
            if (!cat.empty() && it->second.category != cat)
                throw InvalidInput("complex '" + name + "' lives over a different category");
            return layer(it->second.category)->add(it->second.T);
        }
        if (!cat.empty()) {
            const auto& C = *w_.categories.at(cat);
            for (ObjId a = 0; a < C.size(); ++a)
                if (C.object_name(a) == name) return layer(cat)->single(a);
        }
        throw InvalidInput("unknown twisted complex '" + name + "'");
    }

    std::string twisted_category(const std::string& name) const {
        auto it = w_.twisted.find(name);
        if (it == w_.twisted.end()) throw InvalidInput("unknown twisted complex '" + name + "'");
        return it->second.category;
    }

    ModuleObject module(const std::string& name) {
        auto it = w_.modules.find(name);
        if (it == w_.modules.end()) throw InvalidInput("unknown module '" + name + "'");
        const auto& e = it->second;
        const auto PM = monad(e.monad);
        const ObjId x = twisted(e.object, monad_category(e.monad));
        if (e.free) return free_module(PM, x);
        if (e.lambda.size() != PM.cat->hom_dim(PM.apply(x), x))
            throw InvalidInput("module '" + name + "' has a structure map of the wrong length");
        return {x, e.lambda};
    }

    const FunctorEntry& functor(const std::string& name) const {
        auto it = w_.functors.find(name);
        if (it == w_.functors.end()) throw InvalidInput("unknown functor '" + name + "'");
        return it->second;
    }
    const NaturalEntry& natural(const std::string& name) const {
        auto it = w_.naturals.find(name);
        if (it == w_.naturals.end()) throw InvalidInput("unknown transformation '" + name + "'");
        return it->second;
    }
    FiniteCatPtr category(const std::string& name) const {
        auto it = w_.categories.find(name);
        if (it == w_.categories.end()) throw InvalidInput("unknown category '" + name + "'");
        return it->second;
    }

private:
    const Workspace& w_;
    std::map<std::string, TwistedCatPtr> layers_;
    std::map<std::string, PretrMonad> monads_;
};

}  // namespace dgm::io
