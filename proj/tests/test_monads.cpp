#include <catch2/catch_amalgamated.hpp>

#include <chrono>

#include "dgm/group_action.hpp"
#include "dgm/monad.hpp"
#include "support.hpp"

using namespace dgm;
using namespace dgm::testing;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("M_G is separable exactly when |G| is invertible", "[monad][separable]") {
    struct Case {
        std::size_t n;
        Field f;
        bool separable;
    };
    const std::vector<Case> cases{{2, Field::prime(3), true},  {3, Field::prime(2), true},
                                  {2, Field::rationals(), true}, {2, Field::prime(2), false},
                                  {3, Field::prime(3), false},   {4, Field::prime(3), true},
                                  {5, Field::prime(5), false}};
    for (const auto& c : cases) {
        INFO("Z" << c.n << " over " << c.f.name());
        const auto t0 = std::chrono::steady_clock::now();
        auto C = field_category(c.f);
        const auto M = group_action_monad(trivial_action(C, cyclic_group(c.n)), std::make_shared<TwistedCategory>(C));
        for (SepMode mode : {SepMode::h0, SepMode::strict}) {
            const auto r = find_separability_section(M, mode);
            CHECK(r.found() == c.separable);
            CHECK(r.report.passed() == c.separable);
            if (!c.separable) {
                REQUIRE(r.certificate);
                CHECK(r.report.find("section")->status == Status::infeasible);
            }
        }
        if (c.n <= 3) CHECK(seconds_since(t0) < 1.0);
    }
}

TEST_CASE("separability agrees with exhaustive enumeration", "[monad][separable][oracle]") {
    Rng rng(99);
    int instances = 0, feasible = 0, infeasible = 0;
    for (int it = 0; it < 120 && instances < 80; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const SepMode mode = (it / 2) % 2 ? SepMode::h0 : SepMode::strict;
        std::optional<PretrMonad> PM;
        std::optional<AlgebraPresentation> A;
        switch (rng() % 3) {
            case 0: {
                A = random_small_algebra(f, rng);
                PM = algebra_monad(*A, std::make_shared<TwistedCategory>(field_category(f)));
                break;
            }
            case 1: {
                auto P0 = std::make_shared<TwistedCategory>(field_category(f));
                auto C = materialize(*P0, {random_twisted(*P0, rng, 2)});
                PM = group_action_monad(trivial_action(C, cyclic_group(2)), std::make_shared<TwistedCategory>(C));
                break;
            }
            default: {
                auto P0 = std::make_shared<TwistedCategory>(field_category(f));
                auto C = materialize(*P0, distinct({random_twisted(*P0, rng, 2), random_twisted(*P0, rng, 2)}));
                PM = identity_monad(std::make_shared<TwistedCategory>(C));
            }
        }
        const SeparabilitySystem sys(*PM, mode);
        if (sys.unknowns() > 12) continue;
        INFO("instance " << it << " " << PM->name << " over " << f.name() << " mode " << to_string(mode));
        const bool oracle = separability_by_enumeration(*PM, mode);
        const auto r = find_separability_section(*PM, mode);
        CHECK(r.found() == oracle);
        CHECK(r.unknowns == sys.unknowns());
        if (r.found()) {
            for (const auto& [X, sigma] : *r.section) CHECK(sigma.size() > 0);
        } else {
            REQUIRE(r.certificate);
        }
        if (A && mode == SepMode::strict) CHECK(oracle == has_separability_idempotent(*A));
        (oracle ? feasible : infeasible)++;
        ++instances;
    }
    CHECK(instances >= 50);
    CHECK(feasible >= 5);
    CHECK(infeasible >= 5);
}

TEST_CASE("identity, algebra and group-action monads satisfy the DG monad laws", "[monad]") {
    Rng rng(31);
    for (int it = 0; it < 20; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        auto P = std::make_shared<TwistedCategory>(field_category(f));
        const std::vector<ObjId> samples{random_twisted(*P, rng, 2), P->single(0)};
        CHECK(check_dg_monad(identity_monad(P), samples).passed());
        CHECK(check_dg_monad(algebra_monad(random_small_algebra(f, rng), P), samples).passed());
        CHECK(check_weak_monad(algebra_monad(random_small_algebra(f, rng), P), samples).passed());
    }
    for (const auto& G : {cyclic_group(3), klein_four(), symmetric_group3()}) {
        auto C = field_category(Field::prime(5));
        CHECK(check_dg_monad(group_action_monad(trivial_action(C, G), std::make_shared<TwistedCategory>(C))).passed());
    }
}

TEST_CASE("a perturbed multiplication breaks the unit law", "[monad]") {
    const Field f = Field::prime(3);
    auto P = std::make_shared<TwistedCategory>(field_category(f));
    const auto good = algebra_monad(dual_numbers(f), P);
    const auto bad = make_pretr_monad(
        P, good.M, [good](ObjId A) { return good.mu.base_component(A) * Scalar(good.cat->field(), 2); },
        [good](ObjId A) { return good.eta.base_component(A); }, "bad");
    const auto rep = check_dg_monad(bad);
    CHECK_FALSE(rep.passed());
    CHECK(check_dg_monad(good).passed());
}

TEST_CASE("the dual numbers are not separable, a split extension is", "[monad][separable]") {
    for (const Field& f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        auto P = std::make_shared<TwistedCategory>(field_category(f));
        CHECK_FALSE(find_separability_section(algebra_monad(dual_numbers(f), P), SepMode::strict).found());
        CHECK_FALSE(find_separability_section(algebra_monad(dual_numbers(f), P), SepMode::h0).found());
        CHECK(find_separability_section(algebra_monad(split_algebra(f), P), SepMode::strict).found());
    }
    auto P = std::make_shared<TwistedCategory>(field_category(Field::prime(2)));
    CHECK(find_separability_section(algebra_monad(field_extension_algebra(2, 2), P), SepMode::strict).found());
}
