#include <catch2/catch_amalgamated.hpp>

#include "dgm/bousfield.hpp"
#include "dgm/complexes.hpp"
#include "dgm/bundles.hpp"
#include "dgm/karoubi.hpp"
#include "support.hpp"

using namespace dgm;
using namespace dgm::testing;

namespace {

std::size_t total_hom_dim(const FiniteDgCategory& C) {
    std::size_t t = 0;
    for (ObjId a = 0; a < C.size(); ++a)
        for (ObjId b = 0; b < C.size(); ++b) t += C.hom_dim(a, b);
    return t;
}

std::size_t log_p(std::size_t count, std::size_t p) {
    std::size_t e = 0;
    while (count > 1) {
        count /= p;
        ++e;
    }
    return e;
}

std::vector<FiniteCatPtr> additive_fixtures() {
    const Field f = Field::prime(2);
    std::vector<FiniteCatPtr> out;
    for (const auto& A : {ground_algebra(f), dual_numbers(f), split_algebra(f), field_extension_algebra(2, 2),
                          upper_triangular_algebra(f), group_algebra(f, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}),
                          tensor_algebra(split_algebra(f), split_algebra(f)),
                          tensor_algebra(split_algebra(f), dual_numbers(f))})
        out.push_back(algebra_category(A));
    auto P = std::make_shared<TwistedCategory>(field_category(f));
    TwistedComplex two;
    two.entries = {{0, 0}, {0, 0}};
    out.push_back(materialize(*P, {P->add(two)}));
    out.push_back(corpus::collapse_category(f));
    return out;
}

}  // namespace

TEST_CASE("Karoubi envelope splits every idempotent, checked by enumeration", "[karoubi][oracle]") {
    const Field f = Field::prime(2);
    std::size_t nontrivial = 0;
    for (const auto& C : additive_fixtures()) {
        INFO(C->object_name(0) << " total hom dim " << total_hom_dim(*C));
        REQUIRE(total_hom_dim(*C) <= 8);
        REQUIRE(is_additive_presentation(*C));
        std::vector<Idempotent> ids;
        for (ObjId x = 0; x < C->size(); ++x)
            enumerate(f, C->hom_dim(x, x), [&](const Vector& e) {
                if (C->compose(x, x, x, e, e) == e) ids.push_back({x, e});
                return false;
            });
        const auto K = karoubi_envelope(C, ids);
        REQUIRE(validate_dg_category(*K.cat).passed());
        for (const auto& e : ids) {
            const auto p = K.find(e.object, e.pi);
            REQUIRE(p);
            CHECK(verify_splitting(K, splitting(K, *p)));
            if (!e.pi.is_zero() && e.pi != C->identity(e.object)) ++nontrivial;
        }
        // Envelope hom dims against a count of the morphisms r f p = f.
        for (ObjId a = 0; a < K.size(); ++a)
            for (ObjId b = 0; b < K.size(); ++b) {
                const auto& p = K.objects[a];
                const auto& r = K.objects[b];
                std::size_t count = 0;
                enumerate(f, C->hom_dim(p.object, r.object), [&](const Vector& g) {
                    const Vector rgp = C->compose(p.object, r.object, r.object, r.pi,
                                                  C->compose(p.object, p.object, r.object, g, p.pi));
                    if (rgp == g) ++count;
                    return false;
                });
                CHECK(K.cat->hom_dim(a, b) == log_p(count, 2));
            }
    }
    CHECK(nontrivial >= 8);
}

TEST_CASE("Karoubi envelope rejects non-idempotents and non-additive input", "[karoubi]") {
    const Field f = Field::prime(3);
    auto C = algebra_category(split_algebra(f));
    CHECK_THROWS_AS(karoubi_envelope(C, {{0, Vector(f, {Scalar(f, 2), Scalar(f, 0)})}}), InvalidInput);
    auto P = std::make_shared<TwistedCategory>(field_category(f));
    TwistedComplex T;
    T.entries = {{0, 0}, {0, 1}};
    CHECK_THROWS_AS(karoubi_envelope(materialize(*P, {P->add(T)}), {}), InvalidInput);
}

TEST_CASE("collapse is weak Bousfield with kernel {b}", "[bousfield]") {
    for (const Field& f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        const auto C = corpus::collapse_category(f);
        const auto L = corpus::collapse_functor(C);
        const auto E = endofunctor(L, corpus::collapse_unit(L));
        const auto r = classify_bousfield(E);
        CHECK(r.bousfield);
        CHECK(r.kernel == std::vector<ObjId>{1});
        CHECK(r.zero_objects == std::vector<ObjId>{2});
        CHECK(check_bousfield_monad_h0(E).passed());
        CHECK(check_monad(corpus::collapse_monad(C), NatMode::strict).passed());
    }
}

TEST_CASE("the dual-numbers monad is not Bousfield; the identity monad is", "[bousfield]") {
    for (const Field& f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        auto P = std::make_shared<TwistedCategory>(field_category(f));
        const auto dual = algebra_monad(dual_numbers(f), P);
        const auto r = classify_bousfield(endofunctor(dual, base_singles(*P)));
        CHECK_FALSE(r.bousfield);
        CHECK(r.report.find("L_eta_invertible")->status == Status::fail);
        const auto id = classify_bousfield(endofunctor(identity_monad(P), base_singles(*P)));
        CHECK(id.bousfield);
        CHECK(id.kernel.empty());
    }
}

TEST_CASE("compatible algebra monads: psi is an equivalence", "[compatible][oracle]") {
    Rng rng(3);
    const std::vector<std::string> names{"k", "dual", "F4"};
    for (const Field& f : {Field::prime(2), Field::prime(3)}) {
        for (const auto& n1 : names)
            for (const auto& n2 : names) {
                if (f != Field::prime(2) && (n1 == "F4" || n2 == "F4")) continue;
                INFO(n1 << " and " << n2 << " over " << f.name());
                const auto A1 = corpus::detail::named_algebra(n1, f), A2 = corpus::detail::named_algebra(n2, f);
                auto P = std::make_shared<TwistedCategory>(field_category(f));
                const auto cp = corpus::algebra_pair(A1, A2, P);
                REQUIRE(check_compatible(cp).passed());
                const auto M = compose_compatible(cp);
                REQUIRE(check_dg_monad(M).passed());
                std::vector<ModuleObject> comp;
                for (ObjId x : {P->single(0), random_twisted(*P, rng, 2)}) comp.push_back(free_module(M, x));
                comp.push_back(em_shift(M, comp.back(), 1));
                std::vector<InducedModule> ind;
                for (const auto& m : comp) ind.push_back(psi_inverse(cp, m));
                CHECK(check_psi_equivalence(cp, ind, comp).passed());

                // Independent side: free modules over the algebra A1 (x) A2.
                const auto T = algebra_monad(tensor_algebra(A1, A2), P);
                const std::vector<ObjId> xs{P->single(0),
                                            random_twisted(*P, rng, 2)};
                for (ObjId x : xs)
                    for (ObjId y : xs) {
                        const auto lhs = hom_dims(em_hom_complex(M, free_module(M, x), free_module(M, y)));
                        const auto rhs = hom_dims(em_hom_complex(T, free_module(T, x), free_module(T, y)));
                        CHECK(lhs == rhs);
                        const auto ind = induced_hom_dims(cp, psi_inverse(cp, free_module(M, x)),
                                                          psi_inverse(cp, free_module(M, y)));
                        for (const auto& [deg, d] : lhs) CHECK(ind.at(deg) == d);
                    }
            }
    }
}

TEST_CASE("complexes of modules commute with Mod", "[complexes]") {
    const Field F2 = Field::prime(2), F3 = Field::prime(3);
    for (const auto& A : {ground_algebra(F2), dual_numbers(F2), field_extension_algebra(2, 2), ground_algebra(F3),
                          dual_numbers(F3)}) {
        INFO(A.name << " over " << A.field.name());
        const auto rep = check_complexes_commute(A, 2);
        CHECK(rep.passed());
    }
    CHECK(check_complexes_commute(dual_numbers(F2), 3, 4, 7).passed());
    CHECK_THROWS_AS(check_complexes_commute(dual_numbers(F2), 5), InvalidInput);
}
