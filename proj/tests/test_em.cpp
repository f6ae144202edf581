#include <catch2/catch_amalgamated.hpp>

#include "dgm/corpus.hpp"
#include "dgm/exactadj.hpp"
#include "support.hpp"

using namespace dgm;
using namespace dgm::testing;

namespace {

struct DualFixture {
    TwistedCatPtr P;
    PretrMonad PM;
    ObjId B;
    ModuleObject Bm;
};

DualFixture dual_fixture(Field f) {
    auto P = std::make_shared<TwistedCategory>(field_category(f, Grading::Z2));
    auto PM = algebra_monad(dual_numbers(f), P);
    const ObjId B = P->add(corpus::b_bullet(f));
    return {P, PM, B, corpus::b_bullet_module(PM, B)};
}

// Entry matrix of an endomorphism of B: every base hom of k is one-dimensional.
Matrix entry_matrix(const TwistedCategory& P, ObjId B, const Vector& s) {
    const std::size_t n = P.complex(B).size();
    Matrix S(P.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) S(i, j) = P.block(B, B, s, i, j)[0];
    return S;
}

std::size_t power(std::size_t p, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= p;
    return r;
}

}  // namespace

TEST_CASE("dual numbers: id_B is null-homotopic over k but not over the monad", "[em][dual][oracle]") {
    for (const Field& f : {Field::prime(2), Field::prime(3)}) {
        INFO(f.name());
        const auto fx = dual_fixture(f);
        const auto& P = *fx.P;
        REQUIRE(check_module(fx.PM, fx.Bm, NatMode::strict).passed());
        const auto& H = P.hom(fx.B, fx.B);
        const Vector id = P.identity(fx.B);
        Matrix X(f, 4, 4);
        X(2, 0) = Scalar::one(f);
        X(3, 1) = Scalar::one(f);

        // Every odd endomorphism s, by its eight entry coefficients.
        std::vector<std::pair<std::size_t, std::size_t>> odd;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i % 2 != j % 2) odd.emplace_back(i, j);
        REQUIRE(odd.size() == 8);
        std::size_t homotopies = 0, commuting = 0, both = 0;
        enumerate(f, odd.size(), [&](const Vector& c) {
            Vector s(f, H.dim());
            for (std::size_t k = 0; k < odd.size(); ++k)
                if (!c[k].is_zero()) P.add_block(fx.B, fx.B, s, odd[k].first, odd[k].second, Vector(f, {c[k]}));
            const Matrix S = entry_matrix(P, fx.B, s);
            const bool h = H.apply_d(s) == id;
            const bool x = S * X == X * S;
            homotopies += h;
            commuting += x;
            both += h && x;
            return false;
        });
        CHECK(homotopies > 0);
        CHECK(both == 0);
        CHECK(is_coboundary(H, id, 0).found());

        const auto em = em_hom_complex(fx.PM, fx.Bm, fx.Bm);
        CHECK(commuting == power(f.characteristic(), em.space.dim_in(1)));
        CHECK_FALSE(is_coboundary(em.space, em.from_ambient(id), 0).found());
        CHECK(em.h0_dim() > 0);
    }
}

TEST_CASE("dual numbers over Q: the module homotopy system is infeasible", "[em][dual]") {
    const auto fx = dual_fixture(Field::rationals());
    const auto& H = fx.P->hom(fx.B, fx.B);
    const auto r = is_coboundary(H, fx.P->identity(fx.B), 0);
    REQUIRE(r.found());
    CHECK(H.apply_d(*r.primitive) == fx.P->identity(fx.B));
    const auto em = em_hom_complex(fx.PM, fx.Bm, fx.Bm);
    const auto s = is_coboundary(em.space, em.from_ambient(fx.P->identity(fx.B)), 0);
    CHECK_FALSE(s.found());
    CHECK(s.certificate);
}

TEST_CASE("exactadj reports the forgetful functor as unfaithful on B", "[em][exactadj]") {
    for (const Field& f : {Field::prime(2), Field::prime(3), Field::rationals()}) {
        INFO(f.name());
        const auto fx = dual_fixture(f);
        const auto res = exactadj_pipeline(fx.PM, {}, {fx.Bm});
        CHECK(res.report.passed());
        CHECK(forgetful_unfaithful(res.report));
    }
    auto P = std::make_shared<TwistedCategory>(field_category(Field::prime(2)));
    const auto ext = exactadj_pipeline(algebra_monad(field_extension_algebra(2, 2), P));
    CHECK(ext.report.passed());
    CHECK_FALSE(forgetful_unfaithful(ext.report));
}

TEST_CASE("free -| forgetful: H0 of module homs out of a free module", "[em][adjunction][oracle]") {
    Rng rng(77);
    int instances = 0, nonzero = 0;
    for (int it = 0; it < 30; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const auto A = random_small_algebra(f, rng);
        auto P = std::make_shared<TwistedCategory>(field_category(f));
        const auto PM = algebra_monad(A, P);
        const ObjId x = random_twisted(*P, rng, 2), y = random_twisted(*P, rng, 2);
        ModuleObject m = free_module(PM, y);
        switch (rng() % 3) {
            case 0: m = em_shift(PM, m, rng() % 2 ? 1 : -1); break;
            case 1: {
                const ModuleObject src = free_module(PM, random_twisted(*P, rng, 2));
                const auto H = em_hom_complex(PM, src, m);
                Vector phi(f, H.ambient_dim);
                for (const auto& z : dgm::detail::cocycles(H.space, 0)) phi.axpy(random_scalar(f, rng), H.to_ambient(z));
                m = em_cone(PM, src, m, phi).cone;
                break;
            }
            default: break;
        }
        INFO("instance " << it << " A=" << A.name << " over " << f.name());
        REQUIRE(check_module(PM, m, NatMode::strict).passed());
        const std::size_t lhs = em_hom_complex(PM, free_module(PM, x), m).h0_dim();
        const std::size_t rhs = CohomologyBasis(P->hom(x, m.x), 0).dim();
        CHECK(lhs == rhs);
        nonzero += rhs > 0;
        ++instances;
    }
    CHECK(instances >= 20);
    CHECK(nonzero >= 5);
}

TEST_CASE("adjunction triangles and the comparison functor", "[em][adjunction]") {
    Rng rng(5150);
    for (int it = 0; it < 12; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const auto A = random_small_algebra(f, rng);
        auto P = std::make_shared<TwistedCategory>(field_category(f));
        const auto PM = algebra_monad(A, P);
        auto E = std::make_shared<EmCategory>(PM);
        const std::vector<ObjId> xs{P->single(0), random_twisted(*P, rng, 2)};
        std::vector<ObjId> ms;
        for (ObjId x : xs) ms.push_back(E->add(free_module(PM, x)));
        CHECK(check_adjunction_h0(free_forgetful(E, xs, ms)).passed());

        const auto cf = corpus::algebra_comparison(A);
        const std::vector<ObjId> ds{cf.PD->single(0), random_twisted(*cf.PD, rng, 2)};
        const std::vector<ObjId> cs{cf.PC->single(0), random_twisted(*cf.PC, rng, 2)};
        const auto res = comparison_functor(cf.M, cf.F, cf.G, cf.eps, ds, cs);
        INFO(res.report.to_json().dump());
        CHECK(res.report.passed());
    }
}
