#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <unistd.h>

#include "dgm/bousfield.hpp"
#include "dgm/cli.hpp"
#include "dgm/complexes.hpp"
#include "dgm/exactadj.hpp"
#include "dgm/karoubi.hpp"
#include "support.hpp"

using namespace dgm;
using namespace dgm::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

struct Criterion {
    int number;
    double limit;
    std::function<Outcome()> run;
};

std::size_t power(std::size_t p, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= p;
    return r;
}

std::size_t log_p(std::size_t count, std::size_t p) {
    std::size_t e = 0;
    while (count > 1) {
        count /= p;
        ++e;
    }
    return e;
}

Outcome group_action_dichotomy() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / ("dgm_acceptance_" + std::to_string(::getpid()));
    struct Case {
        const char *group, *field;
        bool separable;
    };
    const std::vector<Case> cases{
        {"Z2", "F3", true}, {"Z3", "F2", true}, {"Z2", "Q", true}, {"Z2", "F2", false}, {"Z3", "F3", false}};
    for (const auto& c : cases) {
        const std::string tag = std::string(c.group) + "/" + c.field;
        Stopwatch sw;
        const fs::path dir = root / (std::string(c.group) + c.field);
        std::ostringstream out, err;
        if (cli::run({"example", "group-action", "--group", c.group, "--field", c.field, "--emit", dir.string()}, out,
                     err) != 0) {
            o.require(false, tag + ": example failed");
            continue;
        }
        std::ostringstream rep;
        const int code =
            cli::run({"-w", (dir / "workspace.json").string(), "separable", "MG", "--mode", "h0"}, rep, err);
        const json j = json::parse(rep.str());
        std::string status;
        json witness;
        for (const auto& ch : j["checks"])
            if (ch["name"] == "section") {
                status = ch["status"];
                witness = ch.value("witness", json());
            }
        if (c.separable)
            o.require(code == 0 && status == "pass" && witness.contains("sigma"), tag + ": expected a section");
        else
            o.require(code == 1 && status == "infeasible" && witness.contains("certificate"),
                      tag + ": expected an infeasibility certificate");
        o.require(sw.seconds() < 1.0, tag + ": slower than 1 s");
    }
    fs::remove_all(root);
    if (o.ok) o.detail = "3 sections, 2 certificates";
    return o;
}

Outcome dual_numbers_counterexample() {
    Outcome o;
    for (const Field& f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        Stopwatch sw;
        auto P = std::make_shared<TwistedCategory>(field_category(f, Grading::Z2));
        const auto PM = algebra_monad(dual_numbers(f), P);
        const ObjId B = P->add(corpus::b_bullet(f));
        const auto Bm = corpus::b_bullet_module(PM, B);
        const Vector id = P->identity(B);
        o.require(is_coboundary(P->hom(B, B), id, 0).found(), f.name() + ": id_B not null-homotopic over k");
        const auto em = em_hom_complex(PM, Bm, Bm);
        o.require(!is_coboundary(em.space, em.from_ambient(id), 0).found(),
                  f.name() + ": id_B null-homotopic as a module map");
        const auto ea = exactadj_pipeline(PM, {}, {Bm});
        o.require(ea.report.passed() && forgetful_unfaithful(ea.report), f.name() + ": report misses unfaithfulness");
        o.require(sw.seconds() < 1.0, f.name() + ": slower than 1 s");
    }
    if (o.ok) o.detail = "F2, F3, Q";
    return o;
}

Outcome adjunction_law() {
    Outcome o;
    Rng rng(3003);
    int n = 0;
    for (int it = 0; it < 24; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const auto A = random_small_algebra(f, rng);
        auto P = std::make_shared<TwistedCategory>(field_category(f));
        const auto PM = algebra_monad(A, P);
        const ObjId x = random_twisted(*P, rng, 2);
        ModuleObject m = free_module(PM, random_twisted(*P, rng, 2));
        if (it % 3 == 1) m = em_shift(PM, m, 1);
        if (it % 3 == 2) {
            const ModuleObject s = free_module(PM, random_twisted(*P, rng, 2));
            const auto H = em_hom_complex(PM, s, m);
            Vector phi(f, H.ambient_dim);
            for (const auto& z : dgm::detail::cocycles(H.space, 0)) phi.axpy(random_scalar(f, rng), H.to_ambient(z));
            m = em_cone(PM, s, m, phi).cone;
        }
        const std::size_t lhs = em_hom_complex(PM, free_module(PM, x), m).h0_dim();
        const std::size_t rhs = CohomologyBasis(P->hom(x, m.x), 0).dim();
        o.require(lhs == rhs, "instance " + std::to_string(it) + ": " + std::to_string(lhs) + " != " +
                                  std::to_string(rhs));
        ++n;
    }
    if (o.ok) o.detail = std::to_string(n) + " instances";
    return o;
}

Outcome two_functor_suites() {
    Outcome o;
    Rng rng(4004);
    for (int it = 0; it < 100; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const auto t = random_two_cells(f, rng);
        const std::string tag = "instance " + std::to_string(it);
        const auto HC = h0_category(t.C), HD = h0_category(t.D), HE = h0_category(t.E);
        const auto hF = h0_functor(t.F, HC, HD), hG = h0_functor(t.G, HD, HE);
        o.require(h0_functor(identity_functor(t.C), HC, HC) == identity_functor(HC.cat), tag + ": H0 identity");
        o.require(h0_functor(compose(t.G, t.F), HC, HE) == compose(hG, hF), tag + ": H0 composite");
        o.require(same(h0_nat(identity_nat(t.F), HC, HD), identity_nat(hF)), tag + ": H0 identity nat");
        o.require(same(h0_nat(vertical(t.alpha1, t.alpha), HC, HD),
                       vertical(h0_nat(t.alpha1, HC, HD), h0_nat(t.alpha, HC, HD))),
                  tag + ": H0 vertical");
        o.require(same(h0_nat(horizontal(t.beta, t.alpha), HC, HE),
                       horizontal(h0_nat(t.beta, HD, HE), h0_nat(t.alpha, HC, HD))),
                  tag + ": H0 horizontal");

        auto PC = std::make_shared<TwistedCategory>(t.C);
        auto PD = std::make_shared<TwistedCategory>(t.D);
        auto PE = std::make_shared<TwistedCategory>(t.E);
        const auto pF = pretr_functor(t.F, PC, PD), pF1 = pretr_functor(t.F1, PC, PD),
                   pF2 = pretr_functor(t.F2, PC, PD);
        const auto pG = pretr_functor(t.G, PD, PE), pG1 = pretr_functor(t.G1, PD, PE);
        o.require(same_functor(pretr_functor(identity_functor(t.C), PC, PC), identity_pretr(PC)),
                  tag + ": Pretr identity");
        const auto pGF = pretr_functor(compose(t.G, t.F), PC, PE);
        o.require(same_functor(pGF, compose(pG, pF)), tag + ": Pretr composite");
        const auto pa = pretr_nat(t.alpha, pF, pF1), pa1 = pretr_nat(t.alpha1, pF1, pF2);
        o.require(same_nat(pretr_nat(identity_nat(t.F), pF, pF), identity_nat(pF)), tag + ": Pretr identity nat");
        o.require(same_nat(pretr_nat(vertical(t.alpha1, t.alpha), pF, pF2), vertical(pa1, pa)),
                  tag + ": Pretr vertical");
        o.require(same_nat(pretr_nat(horizontal(t.beta, t.alpha), pGF, pretr_functor(compose(t.G1, t.F1), PC, PE)),
                           horizontal(pretr_nat(t.beta, pG, pG1), pa)),
                  tag + ": Pretr horizontal");
    }
    if (o.ok) o.detail = "100 presentations, H0 and Pretr";
    return o;
}

Outcome twisted_engine() {
    Outcome o;
    Rng rng(5005);
    int n = 0, twisted = 0;
    for (int it = 0; it < 110; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        FiniteCatPtr base;
        switch (it % 3) {
            case 0: base = field_category(f); break;
            case 1: base = algebra_category(dual_numbers(f)); break;
            default: {
                auto P0 = std::make_shared<TwistedCategory>(field_category(f));
                base = materialize(*P0, distinct({random_twisted(*P0, rng, 2), random_twisted(*P0, rng, 2)}));
            }
        }
        auto P = std::make_shared<TwistedCategory>(base);
        const ObjId T = random_twisted(*P, rng, 3), U = random_twisted(*P, rng, 3);
        const std::string tag = "instance " + std::to_string(it);
        twisted += !P->complex(T).q.empty();
        o.require(validate_twisted(*base, P->complex(T)).passed() && validate_twisted(*base, P->complex(U)).passed(),
                  tag + ": Maurer-Cartan fails");
        for (auto [a, b] : {std::pair{T, U}, std::pair{U, T}, std::pair{T, T}}) {
            const auto& H = P->hom(a, b);
            o.require((H.d * H.d).is_zero(), tag + ": D^2 != 0");
        }
        const auto c = cone(*P, T, T, P->identity(T));
        const auto& HC = P->hom(c.cone, c.cone);
        o.require(HC.apply_d(cone_identity_contraction(*P, T, c.cone)) == P->identity(c.cone),
                  tag + ": contraction fails");
        o.require(is_coboundary(HC, P->identity(c.cone), 0).found(), tag + ": id of cone not a coboundary");
        ++n;
    }
    o.require(twisted >= 30, "too few instances with a nonzero twist");
    if (o.ok) o.detail = std::to_string(n) + " complexes, " + std::to_string(twisted) + " twisted";
    return o;
}

Outcome karoubi_splitting() {
    Outcome o;
    const Field f = Field::prime(2);
    std::vector<FiniteCatPtr> cats;
    for (const auto& A : {dual_numbers(f), split_algebra(f), field_extension_algebra(2, 2), upper_triangular_algebra(f),
                          group_algebra(f, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}),
                          tensor_algebra(split_algebra(f), split_algebra(f))})
        cats.push_back(algebra_category(A));
    cats.push_back(corpus::collapse_category(f));
    std::size_t split = 0;
    for (const auto& C : cats) {
        std::size_t total = 0;
        for (ObjId a = 0; a < C->size(); ++a)
            for (ObjId b = 0; b < C->size(); ++b) total += C->hom_dim(a, b);
        o.require(total <= 8, "fixture too large");
        std::vector<Idempotent> ids;
        for (ObjId x = 0; x < C->size(); ++x)
            enumerate(f, C->hom_dim(x, x), [&](const Vector& e) {
                if (C->compose(x, x, x, e, e) == e) ids.push_back({x, e});
                return false;
            });
        const auto K = karoubi_envelope(C, ids);
        o.require(validate_dg_category(*K.cat).passed(), "envelope fails its axioms");
        for (const auto& e : ids) {
            const auto p = K.find(e.object, e.pi);
            o.require(p && verify_splitting(K, splitting(K, *p)), "idempotent " + e.pi.to_string() + " does not split");
            ++split;
        }
        for (ObjId a = 0; a < K.size(); ++a)
            for (ObjId b = 0; b < K.size(); ++b) {
                const auto& p = K.objects[a];
                const auto& r = K.objects[b];
                std::size_t count = 0;
                enumerate(f, C->hom_dim(p.object, r.object), [&](const Vector& g) {
                    if (C->compose(p.object, r.object, r.object, r.pi,
                                   C->compose(p.object, p.object, r.object, g, p.pi)) == g)
                        ++count;
                    return false;
                });
                o.require(K.cat->hom_dim(a, b) == log_p(count, 2), "envelope hom dim disagrees with enumeration");
            }
    }
    if (o.ok) o.detail = std::to_string(split) + " idempotents split";
    return o;
}

Outcome compatible_monads() {
    Outcome o;
    const Field f = Field::prime(2);
    Rng rng(7007);
    int pairs = 0;
    for (const char* n1 : {"k", "dual", "F4"})
        for (const char* n2 : {"k", "dual", "F4"}) {
            const std::string tag = std::string(n1) + "/" + n2;
            auto P = std::make_shared<TwistedCategory>(field_category(f));
            const auto cp = corpus::algebra_pair(corpus::detail::named_algebra(n1, f),
                                                 corpus::detail::named_algebra(n2, f), P);
            o.require(check_compatible(cp).passed(), tag + ": exchange fails");
            const auto M = compose_compatible(cp);
            std::vector<ModuleObject> comp;
            for (ObjId x : {P->single(0), random_twisted(*P, rng, 2)}) comp.push_back(free_module(M, x));
            comp.push_back(em_shift(M, comp.back(), -1));
            std::vector<InducedModule> ind;
            for (const auto& m : comp) ind.push_back(psi_inverse(cp, m));
            o.require(check_psi_equivalence(cp, ind, comp).passed(), tag + ": psi check fails");
            ++pairs;
        }
    if (o.ok) o.detail = std::to_string(pairs) + " pairs";
    return o;
}

Outcome bousfield_classifier() {
    Outcome o;
    const Field f = Field::prime(2);
    const auto C = corpus::collapse_category(f);
    const auto L = corpus::collapse_functor(C);
    const auto r = classify_bousfield(endofunctor(L, corpus::collapse_unit(L)));
    o.require(r.bousfield, "collapse is not classified as weak Bousfield");
    o.require(r.kernel.size() == 1 && C->object_name(r.kernel[0]) == "b", "kernel is not {b}");
    auto P = std::make_shared<TwistedCategory>(field_category(f));
    const auto PM = algebra_monad(dual_numbers(f), P);
    o.require(!classify_bousfield(endofunctor(PM, base_singles(*P))).bousfield, "dual numbers classified as Bousfield");
    if (o.ok) o.detail = "collapse: kernel {b}; dual numbers: not Bousfield";
    return o;
}

Outcome solver_oracles() {
    Outcome o;
    Rng rng(9009);
    int affine = 0, sep = 0;
    for (int it = 0; it < 60; ++it) {
        const Field f = it % 3 == 2 ? Field::prime(3) : Field::prime(2);
        const std::size_t n = 1 + rng() % (f.characteristic() == 2 ? 12 : 8);
        const std::size_t m = 1 + rng() % 8;
        const Matrix A = random_matrix(f, m, n, rng);
        const Vector b = rng() % 2 ? A * random_vector(f, n, rng) : random_vector(f, m, rng);
        std::size_t count = 0;
        enumerate(f, n, [&](const Vector& x) {
            count += A * x == b;
            return false;
        });
        const auto s = solve_affine(A, b);
        o.require(s.feasible() == (count > 0), "solve_affine disagrees on feasibility");
        if (s.feasible()) o.require(count == power(f.characteristic(), s.kernel.size()), "wrong solution count");
        ++affine;
    }
    for (int it = 0; it < 120 && sep < 60; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const SepMode mode = (it / 2) % 2 ? SepMode::h0 : SepMode::strict;
        std::optional<PretrMonad> PM;
        if (rng() % 2) {
            PM = algebra_monad(random_small_algebra(f, rng), std::make_shared<TwistedCategory>(field_category(f)));
        } else {
            auto P0 = std::make_shared<TwistedCategory>(field_category(f));
            auto C = materialize(*P0, {random_twisted(*P0, rng, 2)});
            PM = group_action_monad(trivial_action(C, cyclic_group(2)), std::make_shared<TwistedCategory>(C));
        }
        const SeparabilitySystem sys(*PM, mode);
        if (sys.unknowns() > 12) continue;
        o.require(find_separability_section(*PM, mode).found() == separability_by_enumeration(*PM, mode),
                  "find_separability_section disagrees with enumeration");
        ++sep;
    }
    o.require(affine >= 50 && sep >= 50, "too few instances");
    if (o.ok) o.detail = std::to_string(affine) + " affine systems, " + std::to_string(sep) + " separability systems";
    return o;
}

Outcome complexes_commute() {
    Outcome o;
    const Field f = Field::prime(2);
    for (const auto& A : {ground_algebra(f), dual_numbers(f), field_extension_algebra(2, 2)})
        o.require(check_complexes_commute(A, 2).passed(), A.name + " fails");
    if (o.ok) o.detail = "k, k[X]/(X^2), F4 at bound 2";
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, 5.0, group_action_dichotomy}, {2, 3.0, dual_numbers_counterexample},
        {3, 10.0, adjunction_law},        {4, 30.0, two_functor_suites},
        {5, 30.0, twisted_engine},        {6, 10.0, karoubi_splitting},
        {7, 10.0, compatible_monads},     {8, 1.0, bousfield_classifier},
        {9, 60.0, solver_oracles},        {10, 10.0, complexes_commute}};
    int failed = 0;
    for (const auto& c : criteria) {
        Stopwatch sw;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double t = sw.seconds();
        if (o.ok && t >= c.limit) o = {false, "exceeded " + std::to_string(c.limit) + " s"};
        if (!o.ok) ++failed;
        std::printf("criterion %d: %s (%.2f s) %s\n", c.number, o.ok ? "PASS" : "FAIL", t, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
