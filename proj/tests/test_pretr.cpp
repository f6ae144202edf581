#include <catch2/catch_amalgamated.hpp>

#include "dgm/pretr.hpp"
#include "support.hpp"

using namespace dgm;
using namespace dgm::testing;

TEST_CASE("Pretr is a strict 2-functor on random presentations", "[pretr][two-functor]") {
    Rng rng(808);
    int checked = 0;
    for (int it = 0; it < 100; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const auto t = random_two_cells(f, rng);
        INFO("instance " << it);
        auto PC = std::make_shared<TwistedCategory>(t.C);
        auto PD = std::make_shared<TwistedCategory>(t.D);
        auto PE = std::make_shared<TwistedCategory>(t.E);
        const auto pF = pretr_functor(t.F, PC, PD), pF1 = pretr_functor(t.F1, PC, PD),
                   pF2 = pretr_functor(t.F2, PC, PD);
        const auto pG = pretr_functor(t.G, PD, PE), pG1 = pretr_functor(t.G1, PD, PE);
        REQUIRE(validate_pretr_functor(pF).passed());
        REQUIRE(validate_pretr_functor(pG).passed());

        CHECK(same_functor(pretr_functor(identity_functor(t.C), PC, PC), identity_pretr(PC)));
        const auto pGF = pretr_functor(compose(t.G, t.F), PC, PE);
        const auto GpF = compose(pG, pF);
        CHECK(same_functor(pGF, GpF));

        const auto pa = pretr_nat(t.alpha, pF, pF1), pa1 = pretr_nat(t.alpha1, pF1, pF2);
        const auto pb = pretr_nat(t.beta, pG, pG1);
        CHECK(validate_pretr_nat(pa, NatMode::strict).passed());
        CHECK(same_nat(pretr_nat(identity_nat(t.F), pF, pF), identity_nat(pF)));
        CHECK(same_nat(pretr_nat(vertical(t.alpha1, t.alpha), pF, pF2), vertical(pa1, pa)));
        CHECK(same_nat(pretr_nat(horizontal(t.beta, t.alpha), pGF, pretr_functor(compose(t.G1, t.F1), PC, PE)),
                       horizontal(pb, pa)));

        // Agreement on twisted complexes over C, not only on base objects.
        const ObjId T = random_twisted(*PC, rng, 2), U = random_twisted(*PC, rng, 2);
        REQUIRE(validate_twisted(*t.C, PC->complex(T)).passed());
        CHECK(pGF.apply(T) == GpF.apply(T));
        const auto& H = PC->hom(T, U);
        const Vector m = random_vector(f, H.dim(), rng);
        CHECK(pGF.apply(T, U, m) == GpF.apply(T, U, m));
        const auto& HT = PE->hom(pGF.apply(T), pGF.apply(T));
        CHECK((HT.d * HT.d).is_zero());
        CHECK(pGF.apply(T, T, PC->identity(T)) == PE->identity(pGF.apply(T)));
        CHECK(vertical(pa1, pa).component(T) ==
              PD->compose(pF.apply(T), pF1.apply(T), pF2.apply(T), pa1.component(T), pa.component(T)));
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("extended functors are DG functors on twisted homs", "[pretr]") {
    Rng rng(909);
    for (int it = 0; it < 30; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const auto t = random_two_cells(f, rng);
        auto PC = std::make_shared<TwistedCategory>(t.C);
        auto PD = std::make_shared<TwistedCategory>(t.D);
        const auto pF = pretr_functor(t.F, PC, PD);
        const ObjId T = random_twisted(*PC, rng, 2), U = random_twisted(*PC, rng, 2), V = random_twisted(*PC, rng, 2);
        const auto& HTU = PC->hom(T, U);
        const auto& HUV = PC->hom(U, V);
        const Vector x = random_vector(f, HTU.dim(), rng), y = random_vector(f, HUV.dim(), rng);
        const ObjId FT = pF.apply(T), FU = pF.apply(U), FV = pF.apply(V);
        CHECK(pF.apply(T, U, HTU.apply_d(x)) == PD->hom(FT, FU).apply_d(pF.apply(T, U, x)));
        CHECK(pF.apply(T, V, PC->compose(T, U, V, y, x)) ==
              PD->compose(FT, FU, FV, pF.apply(U, V, y), pF.apply(T, U, x)));
    }
}
