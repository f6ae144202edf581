#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dgm/corpus.hpp"
#include "dgm/workspace.hpp"

namespace dgm::corpus {

/// A workspace plus the commands that replay its expected verdicts. Each
/// expectation lists CLI arguments (without the workspace flag), the exit
/// code, and per-check statuses with witness fields that must match.
struct FixtureBundle {
    std::string name;
    io::Workspace workspace;
    json expected;
};

namespace detail {

inline json expect(std::vector<std::string> args, int exit, json checks = json::array()) {
    return json{{"args", std::move(args)}, {"exit", exit}, {"checks", std::move(checks)}};
}

inline json check(const std::string& name, const std::string& status, json witness = nullptr) {
    json c{{"name", name}, {"status", status}};
    if (!witness.is_null()) c["witness"] = std::move(witness);
    return c;
}

inline FixtureBundle start(const std::string& name, Field f) {
    FixtureBundle b{name, io::Workspace{}, json::object()};
    b.workspace.field = f;
    b.expected["name"] = name;
    b.expected["field"] = f.name();
    b.expected["commands"] = json::array();
    return b;
}

inline void add_algebra_monad(io::Workspace& w, const std::string& name, const std::string& cat,
                              const AlgebraPresentation& A) {
    io::MonadEntry m;
    m.kind = "algebra";
    m.category = cat;
    m.algebra = A;
    w.monads.emplace(name, std::move(m));
}

inline void add_identity_functor(io::Workspace& w, const std::string& name, const std::string& cat) {
    w.functors.emplace(name, io::FunctorEntry{cat, cat, identity_functor(w.categories.at(cat))});
}

inline AlgebraPresentation named_algebra(const std::string& name, Field f) {
    if (name == "k") return ground_algebra(f);
    if (name == "dual") return dual_numbers(f);
    if (name == "F4") {
        if (f != Field::prime(2)) throw InvalidInput("F4 is an algebra over F2 only");
        return field_extension_algebra(2, 2);
    }
    throw InvalidInput("unknown algebra '" + name + "' (expected k, dual or F4)");
}

}  // namespace detail

/// The 2-periodic complex B with the dual numbers acting by multiplication.
inline FixtureBundle example_dual_numbers(Field f) {
    auto b = detail::start("dual-numbers", f);
    auto& w = b.workspace;
    w.categories["k"] = field_category(f, Grading::Z2);
    const auto A = dual_numbers(f);
    detail::add_algebra_monad(w, "dual", "k", A);
    w.twisted["B"] = io::TwistedEntry{"k", b_bullet(f)};
    w.twisted["k0"] = io::TwistedEntry{"k", TwistedComplex::single(0)};
    auto P = std::make_shared<TwistedCategory>(w.categories["k"]);
    const auto PM = algebra_monad(A, P);
    w.modules["B"] = io::ModuleEntry{"dual", "B", false, b_bullet_module(PM, P->add(b_bullet(f))).lambda};
    w.modules["free"] = io::ModuleEntry{"dual", "k0", true, Vector(f, 0)};
    auto& c = b.expected["commands"];
    c.push_back(detail::expect({"validate"}, 0));
    c.push_back(detail::expect({"check-monad", "dual"}, 0));
    c.push_back(detail::expect(
        {"em-hom", "B", "B"}, 0,
        json::array({detail::check("identity", "pass",
                                   json{{"null_homotopic_underlying", true}, {"null_homotopic_module", false}})})));
    c.push_back(detail::expect({"exactadj", "dual", "--module", "B"}, 0,
                               json::array({detail::check("forgetful_h0_faithful", "pass", json{{"faithful", false}})})));
    c.push_back(detail::expect({"separable", "dual", "--mode", "h0"}, 1,
                               json::array({detail::check("section", "infeasible")})));
    c.push_back(detail::expect({"separable", "dual", "--mode", "strict"}, 1,
                               json::array({detail::check("section", "infeasible")})));
    c.push_back(detail::expect({"cone", "B", "B"}, 0, json::array({detail::check("identity_contractible", "pass")})));
    c.push_back(detail::expect({"bousfield", "--monad", "dual"}, 1));
    b.expected["metadata"] = json{
        {"not_triangulated",
         {{"sequence", "0 -> k -> k[X]/(X^2) -> k -> 0"},
          {"claim", "non-split short exact sequence of modules; recorded, not checked"}}}};
    return b;
}

/// F_{p^n} as an algebra over F_p.
inline FixtureBundle example_field_extension(long long p, int n) {
    const Field f = Field::prime(static_cast<std::uint64_t>(p));
    auto b = detail::start("field-extension", f);
    b.expected["degree"] = n;
    auto& w = b.workspace;
    w.categories["k"] = field_category(f);
    detail::add_algebra_monad(w, "ext", "k", field_extension_algebra(p, n));
    w.twisted["k0"] = io::TwistedEntry{"k", TwistedComplex::single(0)};
    TwistedComplex pair;
    pair.entries = {{0, 0}, {0, -1}};
    pair.q.emplace(std::make_pair(std::size_t{1}, std::size_t{0}), Vector::unit(f, 1, 0));
    w.twisted["pair"] = io::TwistedEntry{"k", pair};
    w.modules["free"] = io::ModuleEntry{"ext", "k0", true, Vector(f, 0)};
    w.modules["free_pair"] = io::ModuleEntry{"ext", "pair", true, Vector(f, 0)};
    auto& c = b.expected["commands"];
    c.push_back(detail::expect({"validate"}, 0));
    c.push_back(detail::expect({"check-monad", "ext"}, 0));
    c.push_back(detail::expect({"separable", "ext", "--mode", "strict"}, 0,
                               json::array({detail::check("section", "pass")})));
    c.push_back(detail::expect({"separable", "ext", "--mode", "h0"}, 0, json::array({detail::check("section", "pass")})));
    c.push_back(detail::expect({"complexes-commute", "ext", "--bound", "2"}, 0,
                               json::array({detail::check("hom_dims_agree", "pass")})));
    c.push_back(detail::expect({"exactadj", "ext", "--module", "free_pair"}, 0,
                               json::array({detail::check("forgetful_h0_faithful", "pass", json{{"faithful", true}})})));
    return b;
}

inline FiniteGroup named_group(const std::string& name) {
    if (name == "S3") return symmetric_group3();
    if (name == "V4" || name == "Z2xZ2") return klein_four();
    std::string s = name;
    if (s.rfind("Z/", 0) == 0) s = "Z" + s.substr(2);
    if (s.size() >= 2 && s[0] == 'Z') {
        std::size_t n = 0;
        try {
            n = std::stoul(s.substr(1));
        } catch (...) {
            throw InvalidInput("unknown group '" + name + "'");
        }
        if (n == 0) throw InvalidInput("group order must be positive");
        if (n > 6) throw InvalidInput("group order " + std::to_string(n) + " exceeds 6");
        return cyclic_group(n);
    }
    throw InvalidInput("unknown group '" + name + "' (expected Z1..Z6, V4 or S3)");
}

/// Trivial action of G on the one-object field category and its monad M_G.
inline FixtureBundle example_group_action(const FiniteGroup& G, Field f) {
    if (G.order() > 6) throw InvalidInput("group order exceeds 6");
    auto b = detail::start("group-action", f);
    b.expected["group"] = G.name;
    auto& w = b.workspace;
    w.categories["k"] = field_category(f);
    detail::add_identity_functor(w, "id", "k");
    w.actions["G"] = io::ActionEntry{"k", G, std::vector<std::string>(G.order(), "id")};
    io::MonadEntry m;
    m.kind = "group_action";
    m.action = "G";
    w.monads.emplace("MG", std::move(m));
    const bool invertible = f.kind() == FieldKind::rationals || G.order() % f.characteristic() != 0;
    b.expected["order_invertible"] = invertible;
    auto& c = b.expected["commands"];
    c.push_back(detail::expect({"validate"}, 0));
    c.push_back(detail::expect({"check-monad", "MG"}, 0));
    for (const char* mode : {"h0", "strict"})
        c.push_back(detail::expect({"separable", "MG", "--mode", mode}, invertible ? 0 : 1,
                                   json::array({detail::check("section", invertible ? "pass" : "infeasible")})));
    return b;
}

/// Objects a, b, 0 with L collapsing b to the zero object.
inline FixtureBundle example_collapse(Field f) {
    auto b = detail::start("collapse", f);
    auto& w = b.workspace;
    w.categories["C"] = collapse_category(f);
    const auto C = w.categories["C"];
    detail::add_identity_functor(w, "id", "C");
    const auto L = collapse_functor(C);
    w.functors.emplace("L", io::FunctorEntry{"C", "C", L});
    w.naturals.emplace("eta", io::NaturalEntry{"id", "L", collapse_unit(L)});
    const auto M = collapse_monad(C);
    io::MonadEntry m;
    m.kind = "explicit";
    m.functor = "L";
    m.mu = M.mu.comp;
    m.eta = M.eta.comp;
    w.monads.emplace("collapse", std::move(m));
    auto& c = b.expected["commands"];
    c.push_back(detail::expect({"validate"}, 0));
    c.push_back(detail::expect({"check-monad", "collapse"}, 0));
    c.push_back(detail::expect({"bousfield", "L", "eta"}, 0,
                               json::array({detail::check("kernel", "pass", json{{"objects", {"b"}}})})));
    c.push_back(detail::expect({"karoubi", "C", "--idempotent", "a:0"}, 0,
                               json::array({detail::check("split@(a,(0))", "pass")})));
    return b;
}

/// Two commuting algebra monads with the swap exchange.
inline FixtureBundle example_compatible(const std::string& first, const std::string& second, Field f) {
    auto b = detail::start("compatible", f);
    auto& w = b.workspace;
    w.categories["k"] = field_category(f);
    const auto A1 = detail::named_algebra(first, f), A2 = detail::named_algebra(second, f);
    detail::add_algebra_monad(w, "first", "k", A1);
    detail::add_algebra_monad(w, "second", "k", A2);
    auto P = std::make_shared<TwistedCategory>(w.categories["k"]);
    const auto cp = algebra_pair(A1, A2, P);
    io::MonadEntry m;
    m.kind = "compatible";
    m.first = "first";
    m.second = "second";
    m.exchange = {cp.exchange.base_component(0)};
    w.monads.emplace("pair", std::move(m));
    w.twisted["k0"] = io::TwistedEntry{"k", TwistedComplex::single(0)};
    w.modules["free"] = io::ModuleEntry{"pair", "k0", true, Vector(f, 0)};
    auto& c = b.expected["commands"];
    c.push_back(detail::expect({"validate"}, 0));
    c.push_back(detail::expect({"compose-compatible", "pair"}, 0));
    c.push_back(detail::expect({"psi-check", "pair", "--module", "free"}, 0));
    return b;
}

inline std::vector<std::string> example_names() {
    return {"dual-numbers", "field-extension", "group-action", "collapse", "compatible"};
}

/// Writes workspace.json and expected.json into dir.
inline std::vector<std::string> emit_bundle(const FixtureBundle& b, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto ws = dir / "workspace.json", ex = dir / "expected.json";
    std::ofstream(ws, std::ios::binary) << io::emit(b.workspace);
    std::ofstream(ex, std::ios::binary) << b.expected.dump(2) << "\n";
    return {ws.string(), ex.string()};
}

}  // namespace dgm::corpus
