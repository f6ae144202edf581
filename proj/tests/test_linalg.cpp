#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dgm/linalg.hpp"
#include "support.hpp"

using namespace dgm;
using dgm::testing::enumerate;
using dgm::testing::random_matrix;
using dgm::testing::Rng;

namespace {

std::vector<Field> finite_fields() {
    return {Field::prime(2), Field::prime(3), Field::prime(5), Field::extension(2, {1, 1, 1}),
            Field::extension(3, {1, 0, 1})};
}

// Monic polynomials of degree n over F_p, lowest coefficient first.
std::vector<std::vector<std::uint64_t>> monic(std::uint64_t p, std::size_t n) {
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> c(n, 0);
    while (true) {
        auto f = c;
        f.push_back(1);
        out.push_back(f);
        std::size_t k = 0;
        while (k < n && ++c[k] == p) c[k++] = 0;
        if (k == n) return out;
    }
}

std::vector<std::uint64_t> multiply(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                    std::uint64_t p) {
    std::vector<std::uint64_t> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return r;
}

}  // namespace

TEST_CASE("finite fields satisfy the field axioms exhaustively", "[scalar]") {
    for (const Field& f : finite_fields()) {
        INFO(f.name());
        const auto els = field_elements(f);
        REQUIRE(els.size() == f.order());
        REQUIRE(std::set<std::string>([&] {
                    std::set<std::string> s;
                    for (const auto& x : els) s.insert(x.to_string());
                    return s;
                }())
                    .size() == els.size());
        const Scalar zero = Scalar::zero(f), one = Scalar::one(f);
        for (const auto& a : els) {
            CHECK(a + zero == a);
            CHECK(a * one == a);
            CHECK(a + (-a) == zero);
            if (!a.is_zero()) CHECK(a * a.inverse() == one);
            for (const auto& b : els) {
                CHECK(a + b == b + a);
                CHECK(a * b == b * a);
                for (const auto& c : els) {
                    if (f.order() > 5 && (c != one && c != zero)) continue;
                    CHECK((a + b) + c == a + (b + c));
                    CHECK((a * b) * c == a * (b * c));
                    CHECK(a * (b + c) == a * b + a * c);
                }
            }
        }
    }
}

TEST_CASE("irreducibility agrees with exhaustive factorisation", "[scalar]") {
    for (std::uint64_t p : {2u, 3u}) {
        for (std::size_t n = 2; n <= 4; ++n) {
            std::set<std::vector<std::uint64_t>> reducible;
            for (std::size_t d = 1; d < n; ++d)
                for (const auto& a : monic(p, d))
                    for (const auto& b : monic(p, n - d)) reducible.insert(multiply(a, b, p));
            for (const auto& f : monic(p, n)) {
                INFO("p=" << p << " degree " << n);
                const bool irreducible = !reducible.count(f);
                if (irreducible) {
                    CHECK_NOTHROW(Field::extension(p, f));
                } else {
                    CHECK_THROWS_AS(Field::extension(p, f), InvalidInput);
                }
            }
        }
    }
}

TEST_CASE("scalar wire form", "[scalar]") {
    const Field Q = Field::rationals();
    CHECK(Scalar::parse(Q, "3/6").to_string() == "1/2");
    CHECK(Scalar::parse(Q, "-4/2").to_string() == "-2");
    CHECK_THROWS_AS(Scalar::parse(Q, "1/0"), InvalidInput);
    CHECK_THROWS_AS(Scalar::parse(Q, "x"), InvalidInput);
    const Field F3 = Field::prime(3);
    CHECK(Scalar::parse(F3, "2") == Scalar(F3, -1));
    CHECK_THROWS_AS(Scalar::parse(F3, "5"), InvalidInput);
    CHECK_THROWS_AS(Scalar::parse(F3, "-1"), InvalidInput);
    const Field F4 = Field::extension(2, {1, 1, 1});
    const Scalar w = Scalar::parse(F4, "[0,1]");
    CHECK(w * w == w + Scalar::one(F4));
    CHECK(Scalar::parse(F4, w.to_string()) == w);
    CHECK_THROWS_AS(Field::prime(4), InvalidInput);
    CHECK_THROWS_AS(parse_field("F4"), InvalidInput);
    CHECK(parse_field("F2[1,1,1]").order() == 4);
}

TEST_CASE("rank and kernel agree with exhaustive counting", "[linalg]") {
    Rng rng(7);
    for (int it = 0; it < 40; ++it) {
        const Field f = it % 2 ? Field::prime(3) : Field::prime(2);
        const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6;
        const Matrix A = random_matrix(f, r, c, rng);
        const auto K = kernel_basis(A);
        CHECK(K.size() + rank(A) == c);
        for (const auto& v : K) CHECK((A * v).is_zero());
        std::size_t count = 0;
        enumerate(f, c, [&](const Vector& x) {
            if ((A * x).is_zero()) ++count;
            return false;
        });
        std::size_t expected = 1;
        for (std::size_t k = 0; k < K.size(); ++k) expected *= f.characteristic();
        CHECK(count == expected);
    }
}

TEST_CASE("rational row reduction", "[linalg]") {
    const Field Q = Field::rationals();
    const Matrix A = Matrix::from_ints(Q, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
    CHECK(rank(A) == 2);
    const auto K = kernel_basis(A);
    REQUIRE(K.size() == 1);
    CHECK((A * K[0]).is_zero());
    const Matrix B = Matrix::from_ints(Q, {{2, 1}, {1, 1}});
    const Matrix L = left_inverse(B);
    CHECK(L * B == Matrix::identity(Q, 2));
}

TEST_CASE("solve_affine agrees with exhaustive enumeration", "[linalg][oracle]") {
    Rng rng(2024);
    int feasible = 0, infeasible = 0;
    for (int it = 0; it < 60; ++it) {
        const Field f = it % 3 == 2 ? Field::prime(3) : Field::prime(2);
        const std::size_t n = f.characteristic() == 2 ? 1 + rng() % 12 : 1 + rng() % 8;
        const std::size_t m = 1 + rng() % 8;
        const Matrix A = random_matrix(f, m, n, rng);
        Vector b = rng() % 2 ? A * dgm::testing::random_vector(f, n, rng) : dgm::testing::random_vector(f, m, rng);
        std::size_t solutions = 0;
        enumerate(f, n, [&](const Vector& x) {
            if (A * x == b) ++solutions;
            return false;
        });
        const auto sol = solve_affine(A, b);
        INFO("instance " << it << " n=" << n << " m=" << m << " over " << f.name());
        REQUIRE(sol.feasible() == (solutions > 0));
        if (sol.feasible()) {
            ++feasible;
            CHECK(A * *sol.solution == b);
            std::size_t expected = 1;
            for (std::size_t k = 0; k < sol.kernel.size(); ++k) expected *= f.characteristic();
            CHECK(solutions == expected);
            for (const auto& v : sol.kernel) CHECK((A * v).is_zero());
        } else {
            ++infeasible;
            REQUIRE(sol.certificate);
            const Vector& y = *sol.certificate;
            CHECK((A.transpose() * y).is_zero());
            Scalar yb = Scalar::zero(f);
            for (std::size_t i = 0; i < m; ++i) yb += y[i] * b[i];
            CHECK(!yb.is_zero());
        }
    }
    CHECK(feasible > 10);
    CHECK(infeasible > 10);
}
