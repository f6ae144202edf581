#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dgm/bousfield.hpp"
#include "dgm/bundles.hpp"
#include "dgm/complexes.hpp"
#include "dgm/exactadj.hpp"
#include "dgm/h0.hpp"
#include "dgm/karoubi.hpp"
#include "dgm/workspace.hpp"

namespace dgm::cli {

enum ExitCode { kPass = 0, kCheckFailed = 1, kInvalidInput = 2, kInternal = 3 };

namespace detail {

inline std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

inline Vector parse_coords(Field f, const std::string& s, std::size_t len) {
    std::vector<Scalar> v;
    for (const auto& t : split_top(s)) v.push_back(Scalar::parse(f, t));
    if (v.size() != len)
        throw InvalidInput("expected " + std::to_string(len) + " coordinates, got " + std::to_string(v.size()));
    return Vector(f, std::move(v));
}

inline json dims_json(const DgSpace& V) {
    json d = json::object();
    for (int n : V.support()) d[std::to_string(n)] = V.dim_in(n);
    return d;
}

inline json cohomology_json(const DgSpace& V) {
    json d = json::object();
    for (int n : V.support()) {
        const std::size_t h = CohomologyBasis(V, n).dim();
        if (h) d[std::to_string(n)] = h;
    }
    return d;
}

}  // namespace detail

/// Arguments shared by the command handlers.
struct Args {
    std::vector<std::string> names;
    std::vector<std::string> modules;
    std::vector<std::string> idempotents;
    std::string mode = "strict";
    std::string morphism;
    std::string monad;
    std::string field;
    std::string group = "Z2";
    std::string first = "k", second = "dual";
    std::string emit_dir;
    int degree = 2;
    int by = 1;
    int bound = 2;
    bool weak = false;
};

class Dispatcher {
public:
    Dispatcher(io::Runtime& rt, const Args& a) : rt_(rt), a_(a) {}

    VerdictReport run(const std::string& cmd) {
        VerdictReport r = dispatch(cmd);
        static const std::set<std::string> signed_cmds{"em-hom", "free-sub", "cone", "shift", "pretr", "exactadj"};
        if (signed_cmds.count(cmd)) r.conventions = sign_conventions();
        return r;
    }

    static std::map<std::string, std::string> sign_conventions() {
        return {{"differential", "cohomological: d raises degree by 1"},
                {"leibniz", "d(g f) = dg f + (-1)^|g| g df"},
                {"shift", "entry (A, r) sits in degree -r; shifting by n adds n to every r and signs q by (-1)^n"},
                {"twisted_hom", "D f = delta f + q' f - (-1)^|f| f q with (delta f)_ij = (-1)^{r'_i} d f_ij; q strictly lower triangular"}};
    }

private:
    VerdictReport dispatch(const std::string& cmd) {
        if (cmd == "validate") return validate();
        if (cmd == "h0") return h0();
        if (cmd == "check-monad") return check_monad_cmd(false);
        if (cmd == "check-weak-monad") return check_monad_cmd(true);
        if (cmd == "separable") return separable();
        if (cmd == "em-hom") return em_hom();
        if (cmd == "free-sub") return free_sub();
        if (cmd == "cone") return cone_cmd();
        if (cmd == "shift") return shift_cmd();
        if (cmd == "pretr") return pretr();
        if (cmd == "karoubi") return karoubi();
        if (cmd == "compose-compatible") return compose_compat();
        if (cmd == "psi-check") return psi_check();
        if (cmd == "bousfield") return bousfield();
        if (cmd == "exactadj") return exactadj();
        if (cmd == "complexes-commute") return complexes_commute();
        throw InvalidInput("unknown command '" + cmd + "'");
    }

    const std::string& name(std::size_t i, const char* what) const {
        if (a_.names.size() <= i) throw InvalidInput(std::string("missing ") + what);
        return a_.names[i];
    }

    VerdictReport validate() {
        const auto& w = rt_.workspace();
        VerdictReport rep("workspace", w.field.name());
        for (const auto& [n, C] : w.categories) rep.merge(validate_dg_category(*C), "category:" + n + ".");
        for (const auto& [n, F] : w.functors) rep.merge(validate_functor(F.F), "functor:" + n + ".");
        for (const auto& [n, N] : w.naturals) rep.merge(validate_nat(N.nu, NatMode::weak), "natural:" + n + ".");
        for (const auto& [n, T] : w.twisted)
            rep.merge(validate_twisted(*w.categories.at(T.category), T.T), "twisted:" + n + ".");
        for (const auto& [n, A] : w.actions) rep.merge(validate_action(rt_.action(n)), "action:" + n + ".");
        for (const auto& [n, M] : w.monads) {
            if (M.kind == "algebra") rep.merge(validate_algebra(*M.algebra), "monad:" + n + ".");
            if (M.kind == "compatible") rt_.pair(n);
        }
        for (const auto& [n, M] : w.modules) {
            const auto m = rt_.module(n);
            rep.merge(check_module(rt_.monad(M.monad), m, NatMode::strict), "module:" + n + ".");
        }
        return rep;
    }

    VerdictReport h0() {
        const auto C = rt_.category(name(0, "category"));
        const auto H = h0_category(C);
        VerdictReport rep("h0 " + a_.names[0], C->field().name());
        rep.merge(validate_dg_category(*H.cat), "h0.");
        json homs = json::array();
        for (ObjId a = 0; a < C->size(); ++a)
            for (ObjId b = 0; b < C->size(); ++b) {
                const auto& B = H.basis(a, b);
                if (!B.dim()) continue;
                json reps = json::array();
                for (const auto& r : B.representatives()) reps.push_back(to_json(r));
                homs.push_back(json{{"source", C->object_name(a)}, {"target", C->object_name(b)}, {"dim", B.dim()},
                                    {"representatives", reps}});
            }
        rep.add("tables", Status::pass, "", json{{"homs", homs}});
        return rep;
    }

    VerdictReport check_monad_cmd(bool weak) {
        const auto PM = rt_.monad(name(0, "monad"));
        auto rep = weak ? check_weak_monad(PM) : check_dg_monad(PM);
        rep.subject = (weak ? "weak-monad " : "monad ") + a_.names[0];
        return rep;
    }

    VerdictReport separable() {
        const auto PM = rt_.monad(name(0, "monad"));
        if (a_.mode != "strict" && a_.mode != "h0") throw InvalidInput("mode must be strict or h0");
        return find_separability_section(PM, a_.mode == "h0" ? SepMode::h0 : SepMode::strict).report;
    }

    VerdictReport em_hom() {
        const auto m1 = rt_.module(name(0, "source module")), m2 = rt_.module(name(1, "target module"));
        const auto& e1 = rt_.workspace().modules.at(a_.names[0]);
        const auto& e2 = rt_.workspace().modules.at(a_.names[1]);
        if (e1.monad != e2.monad) throw InvalidInput("modules are over different monads");
        const auto PM = rt_.monad(e1.monad);
        const auto& P = *PM.cat;
        const auto H = em_hom_complex(PM, m1, m2, a_.weak ? NatMode::weak : NatMode::strict);
        VerdictReport rep("em-hom " + a_.names[0] + " -> " + a_.names[1], P.field().name());
        json basis = json::array();
        for (std::size_t k = 0; k < H.basis.size(); ++k)
            basis.push_back(json{{"degree", H.space.degrees[k]}, {"coordinates", to_json(H.basis[k])}});
        rep.add("hom_complex", Status::pass, a_.weak ? "weak" : "strict",
                json{{"degrees", detail::dims_json(H.space)}, {"h0", H.h0_dim()}, {"basis", basis},
                     {"source", {{"object", P.object_name(m1.x)}, {"lambda", to_json(m1.lambda)}}},
                     {"target", {{"object", P.object_name(m2.x)}, {"lambda", to_json(m2.lambda)}}}});
        if (m1 == m2) {
            const Vector id = P.identity(m1.x);
            const auto under = is_coboundary(P.hom(m1.x, m1.x), id, 0);
            bool in_module = false;
            if (H.contains(id)) {
                if (a_.weak)
                    in_module = under.found() && H.h0_dim() == 0;
                else
                    in_module = is_coboundary(H.space, H.from_ambient(id), 0).found();
            }
            json w{{"null_homotopic_underlying", under.found()}, {"null_homotopic_module", in_module}};
            if (under.primitive) w["homotopy"] = to_json(*under.primitive);
            rep.add("identity", Status::pass, "", w);
        }
        return rep;
    }

    VerdictReport free_sub() {
        const auto PM = rt_.monad(name(0, "monad"));
        const std::string cat = rt_.monad_category(a_.names[0]);
        std::vector<ObjId> gens;
        for (std::size_t i = 1; i < a_.names.size(); ++i) gens.push_back(rt_.twisted(a_.names[i], cat));
        if (gens.empty()) gens = base_singles(*PM.cat);
        const auto S = free_subcategory(PM, gens);
        VerdictReport rep("free-sub " + a_.names[0], S->field().name());
        rep.merge(validate_dg_category(*S), "category.");
        json homs = json::array();
        for (ObjId a = 0; a < S->size(); ++a)
            for (ObjId b = 0; b < S->size(); ++b)
                homs.push_back(json{{"source", S->object_name(a)}, {"target", S->object_name(b)},
                                    {"degrees", detail::dims_json(S->hom(a, b))},
                                    {"cohomology", detail::cohomology_json(S->hom(a, b))}});
        rep.add("homs", Status::pass, "", json{{"homs", homs}});
        return rep;
    }

    VerdictReport cone_cmd() {
        const std::string s = name(0, "source complex"), t = name(1, "target complex");
        const std::string cat = rt_.twisted_category(s);
        const auto P = rt_.layer(cat);
        const ObjId a = rt_.twisted(s, cat), b = rt_.twisted(t, cat);
        const auto& h = P->hom(a, b);
        Vector phi(P->field(), h.dim());
        const bool ident = a_.morphism.empty();
        if (ident) {
            if (a != b) throw InvalidInput("give --morphism when source and target differ");
            phi = P->identity(a);
        } else {
            phi = detail::parse_coords(P->field(), a_.morphism, h.dim());
        }
        VerdictReport rep("cone " + s + " -> " + t, P->field().name());
        const bool closed = h.is_homogeneous(phi, 0) && h.apply_d(phi).is_zero();
        rep.add("closed_degree0", closed);
        if (!closed) return rep;
        const auto c = cone(*P, a, b, phi);
        rep.merge(validate_twisted(P->base(), P->complex(c.cone)), "cone.");
        rep.add("inclusion_closed", P->hom(b, c.cone).apply_d(c.inclusion).is_zero());
        rep.add("projection_closed", P->hom(c.cone, c.source_shifted).apply_d(c.projection).is_zero());
        if (ident || phi == P->identity(a)) {
            const auto r = is_coboundary(P->hom(c.cone, c.cone), P->identity(c.cone), 0);
            rep.add("identity_contractible", r.found(), "id of cone(id) is a coboundary",
                    r.primitive ? json{{"homotopy", to_json(*r.primitive)}} : json(nullptr));
        }
        rep.add("cone_object", Status::pass, "", json{{"name", P->object_name(c.cone)}});
        return rep;
    }

    VerdictReport shift_cmd() {
        const std::string s = name(0, "complex");
        const std::string cat = rt_.twisted_category(s);
        const auto P = rt_.layer(cat);
        const ObjId a = rt_.twisted(s, cat);
        const ObjId sa = shift(*P, a, a_.by);
        VerdictReport rep("shift " + s + " by " + std::to_string(a_.by), P->field().name());
        rep.merge(validate_twisted(P->base(), P->complex(sa)), "shifted.");
        rep.add("end_cohomology_preserved",
                detail::cohomology_json(P->hom(a, a)) == detail::cohomology_json(P->hom(sa, sa)));
        rep.add("inverse", shift(*P, sa, -a_.by) == a);
        return rep;
    }

    VerdictReport pretr() {
        const auto& F = rt_.functor(name(0, "functor"));
        const auto PC = rt_.layer(F.source), PD = rt_.layer(F.target);
        const auto PF = pretr_functor(F.F, PC, PD);
        VerdictReport rep("pretr " + a_.names[0], PC->field().name());
        rep.merge(validate_pretr_functor(PF), "base.");
        std::vector<ObjId> objs;
        for (std::size_t i = 1; i < a_.names.size(); ++i) objs.push_back(rt_.twisted(a_.names[i], F.source));
        json wv = nullptr, wi = nullptr, wc = nullptr;
        for (ObjId T : objs) {
            const ObjId FT = PF.apply(T);
            if (!validate_twisted(PD->base(), PD->complex(FT)).passed() && wv.is_null())
                wv = json{{"object", PC->object_name(T)}};
            if (PF.apply(T, T, PC->identity(T)) != PD->identity(FT) && wi.is_null())
                wi = json{{"object", PC->object_name(T)}};
            for (ObjId U : objs) {
                const auto& h = PC->hom(T, U);
                for (std::size_t k = 0; k < h.dim() && wc.is_null(); ++k) {
                    const Vector e = Vector::unit(PC->field(), h.dim(), k);
                    if (PD->hom(FT, PF.apply(U)).apply_d(PF.apply(T, U, e)) != PF.apply(T, U, h.apply_d(e)))
                        wc = json{{"source", PC->object_name(T)}, {"target", PC->object_name(U)}, {"basis", k}};
                }
            }
        }
        rep.add("images_valid", wv.is_null(), "", wv);
        rep.add("identities", wi.is_null(), "", wi);
        rep.add("chain_map", wc.is_null(), "", wc);
        return rep;
    }

    VerdictReport karoubi() {
        const auto C = rt_.category(name(0, "category"));
        std::vector<Idempotent> ids;
        for (const auto& s : a_.idempotents) {
            const auto colon = s.find(':');
            if (colon == std::string::npos) throw InvalidInput("idempotent must look like object:c0,c1,...");
            const ObjId x = C->find(s.substr(0, colon));
            ids.push_back({x, detail::parse_coords(C->field(), s.substr(colon + 1), C->hom_dim(x, x))});
        }
        const auto K = karoubi_envelope(C, ids);
        VerdictReport rep("karoubi " + a_.names[0], C->field().name());
        rep.merge(validate_dg_category(*K.cat), "envelope.");
        for (const auto& e : ids) {
            const ObjId p = *K.find(e.object, e.pi);
            const auto s = splitting(K, p);
            rep.add("split@" + K.cat->object_name(p), verify_splitting(K, s), "r o s = id, s o r = pi",
                    json{{"retraction", to_json(K.to_ambient(s.whole, s.summand, s.retraction))},
                         {"section", to_json(K.to_ambient(s.summand, s.whole, s.section))}});
        }
        return rep;
    }

    VerdictReport compose_compat() {
        const auto cp = rt_.pair(name(0, "compatible monad"));
        VerdictReport rep("compose-compatible " + a_.names[0], cp.first.cat->field().name());
        const auto c = check_compatible(cp);
        rep.merge(c, "pair.");
        if (c.passed()) rep.merge(check_dg_monad(compose_compatible(cp)), "composite.");
        return rep;
    }

    VerdictReport psi_check() {
        const std::string n = name(0, "compatible monad");
        const auto cp = rt_.pair(n);
        const auto M = rt_.monad(n);
        std::vector<ModuleObject> comp;
        for (ObjId x : base_singles(*M.cat)) comp.push_back(free_module(M, x));
        for (const auto& m : a_.modules) {
            if (rt_.workspace().modules.at(m).monad != n) throw InvalidInput("module '" + m + "' is not over " + n);
            comp.push_back(rt_.module(m));
        }
        std::vector<InducedModule> ind;
        for (const auto& m : comp) ind.push_back(psi_inverse(cp, m));
        auto rep = check_psi_equivalence(cp, ind, comp);
        rep.subject = "psi-check " + n;
        return rep;
    }

    VerdictReport bousfield() {
        if (!a_.monad.empty()) {
            const auto PM = rt_.monad(a_.monad);
            const auto L = endofunctor(PM, base_singles(*PM.cat));
            auto r = classify_bousfield(L, "bousfield " + a_.monad);
            if (r.bousfield) r.report.merge(check_bousfield_monad_h0(L), "induced_monad.");
            return r.report;
        }
        const auto& F = rt_.functor(name(0, "functor"));
        const auto& eta = rt_.natural(name(1, "transformation"));
        if (F.source != F.target) throw InvalidInput("bousfield needs an endofunctor");
        if (!(eta.nu.target == F.F) || !(eta.nu.source == identity_functor(F.F.src)))
            throw InvalidInput("transformation must go from the identity to the functor");
        const auto L = endofunctor(F.F, eta.nu);
        auto r = classify_bousfield(L, "bousfield " + a_.names[0]);
        if (r.bousfield) r.report.merge(check_bousfield_monad_h0(L), "induced_monad.");
        json z = json::array();
        for (ObjId x : r.zero_objects) z.push_back(F.F.src->object_name(x));
        r.report.add("zero_objects", Status::pass, "objects zero in H0, excluded from the kernel", json{{"objects", z}});
        return r.report;
    }

    VerdictReport exactadj() {
        const auto PM = rt_.monad(name(0, "monad"));
        std::vector<ModuleObject> extra;
        for (const auto& m : a_.modules) {
            if (rt_.workspace().modules.at(m).monad != a_.names[0])
                throw InvalidInput("module '" + m + "' is not over " + a_.names[0]);
            extra.push_back(rt_.module(m));
        }
        auto r = exactadj_pipeline(PM, {}, extra);
        if (r.report.passed())
            r.report.add("forgetful_h0_faithful", Status::pass, "on the sampled modules",
                         json{{"faithful", !forgetful_unfaithful(r.report)}});
        return r.report;
    }

    VerdictReport complexes_commute() {
        const auto& m = rt_.monad_entry(name(0, "monad"));
        if (m.kind != "algebra") throw InvalidInput("complexes-commute needs an algebra monad");
        if (a_.bound < 1 || a_.bound > 4) throw InvalidInput("bound must be between 1 and 4");
        return check_complexes_commute(*m.algebra, std::size_t(a_.bound));
    }

    io::Runtime& rt_;
    const Args& a_;
};

inline VerdictReport run_example(const Args& a) {
    if (a.names.empty()) throw InvalidInput("missing example name");
    const std::string& n = a.names[0];
    auto field_or = [&](const char* def) { return parse_field(a.field.empty() ? def : a.field); };
    corpus::FixtureBundle b = [&] {
        if (n == "dual-numbers") return corpus::example_dual_numbers(field_or("F2"));
        if (n == "field-extension") {
            const Field f = field_or("F2");
            if (f.kind() != FieldKind::prime) throw InvalidInput("field-extension needs a prime field F<p>");
            return corpus::example_field_extension(static_cast<long long>(f.characteristic()), a.degree);
        }
        if (n == "group-action") return corpus::example_group_action(corpus::named_group(a.group), field_or("F3"));
        if (n == "collapse") return corpus::example_collapse(field_or("F2"));
        if (n == "compatible") return corpus::example_compatible(a.first, a.second, field_or("F2"));
        throw InvalidInput("unknown example '" + n + "'");
    }();
    if (a.emit_dir.empty()) throw InvalidInput("example needs --emit <dir>");
    const auto files = corpus::emit_bundle(b, a.emit_dir);
    VerdictReport rep("example " + n, b.workspace.field.name());
    rep.add("emitted", Status::pass, "", json{{"files", files}});
    return rep;
}

/// Runs one command line (without the program name). Reports go to out,
/// usage errors to err. Returns the exit code.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact checks for DG monads, module categories and twisted complexes.", "dgm"};
    app.fallthrough();
    app.require_subcommand(1);
    std::string ws_path;
    bool human = false;
    Args a;
    app.add_option("-w,--workspace", ws_path, "workspace JSON file");
    app.add_flag("--human", human, "render tables instead of JSON");

    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("names", a.names, "entity names");
        return s;
    };
    sub("validate", "validate every entity of the workspace");
    sub("h0", "H0 category of a named category");
    sub("check-monad", "strict DG monad axioms");
    sub("check-weak-monad", "monad axioms up to coboundaries");
    sub("separable", "solve for a separability section")
        ->add_option("--mode", a.mode, "strict or h0")
        ->check(CLI::IsMember({"strict", "h0"}));
    sub("em-hom", "module hom complex between two modules")->add_flag("--weak", a.weak, "weak module morphisms");
    sub("free-sub", "full subcategory of free modules on complexes");
    sub("cone", "cone of a closed degree-0 morphism")->add_option("--morphism", a.morphism, "coordinates, comma separated");
    sub("shift", "shift a twisted complex")->add_option("--by", a.by, "shift amount");
    sub("pretr", "extend a functor to twisted complexes");
    sub("karoubi", "Karoubi envelope over supplied idempotents")
        ->add_option("--idempotent", a.idempotents, "object:c0,c1,...");
    sub("compose-compatible", "composite of a compatible pair");
    sub("psi-check", "induced modules versus composite modules")->add_option("--module", a.modules, "module names");
    sub("bousfield", "weak Bousfield classification")->add_option("--monad", a.monad, "use the endofunctor of a monad");
    sub("exactadj", "free-forgetful adjunction and closure witnesses")->add_option("--module", a.modules, "extra modules");
    sub("complexes-commute", "complexes of modules versus modules on complexes")
        ->add_option("--bound", a.bound, "maximal length");
    auto* ex = sub("example", "emit a fixture bundle");
    ex->add_option("--field", a.field, "field, e.g. F2, F3, Q");
    ex->add_option("--group", a.group, "Z1..Z6, V4 or S3");
    ex->add_option("--degree", a.degree, "extension degree");
    ex->add_option("--first", a.first, "first algebra: k, dual or F4");
    ex->add_option("--second", a.second, "second algebra: k, dual or F4");
    ex->add_option("--emit", a.emit_dir, "output directory");

    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        out << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump(2) << "\n";
        return kInvalidInput;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    auto print = [&](const VerdictReport& r) {
        if (human)
            out << r.to_human();
        else
            out << r.to_json().dump(2) << "\n";
        return r.passed() ? kPass : kCheckFailed;
    };
    auto error = [&](const std::string& kind, const std::string& msg, json extra = json::object()) {
        json e{{"kind", kind}, {"message", msg}};
        e.update(extra);
        if (human)
            out << "error (" << kind << "): " << msg << "\n";
        else
            out << json{{"error", e}}.dump(2) << "\n";
    };
    try {
        Stopwatch sw;
        if (cmd == "example") return print(run_example(a));
        io::Workspace w;
        if (!ws_path.empty()) w = io::ingest(ws_path);
        io::Runtime rt(w);
        Dispatcher d(rt, a);
        VerdictReport r = d.run(cmd);
        r.seconds = sw.seconds();
        return print(r);
    } catch (const io::WorkspaceError& e) {
        error(e.kind(), e.what(), e.to_json());
        return kInvalidInput;
    } catch (const InvalidInput& e) {
        error("invalid_input", e.what());
        return kInvalidInput;
    } catch (const std::exception& e) {
        error("internal", e.what());
        return kInternal;
    }
}

}  // namespace dgm::cli
