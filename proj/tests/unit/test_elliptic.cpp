#include <catch2/catch_amalgamated.hpp>

#include "caplift/eigenform.hpp"

using namespace caplift;

TEST_CASE("generator expansions") {
    auto th = generator_theta2(12);
    REQUIRE(th.a(0).rational_value() == 1);
    REQUIRE(th.a(1).rational_value() == 4);
    REQUIRE(th.a(2).rational_value() == 4);
    REQUIRE(th.a(3).rational_value() == 0);
    REQUIRE(th.a(4).rational_value() == 4);
    REQUIRE(th.a(5).rational_value() == 8);

    auto f = generator_F2(12);
    REQUIRE(f.a(0).rational_value() == 0);
    REQUIRE(f.a(1).rational_value() == 1);
    REQUIRE(f.a(2).rational_value() == 0);
    REQUIRE(f.a(3).rational_value() == 4);
    REQUIRE(f.a(5).rational_value() == 6);
}

TEST_CASE("space basis dimensions and independence") {
    REQUIRE(space_basis(1, 10).size() == 1);
    REQUIRE(space_basis(7, 10).size() == 4);
    REQUIRE(monomial_rank(7, 40) == 4);
    REQUIRE(monomial_rank(11, 40) == 6);
}

TEST_CASE("dimension oracle") {
    REQUIRE(dim_cusp_oracle(3) == 0);
    REQUIRE(dim_cusp_oracle(5) == 1);
    REQUIRE(dim_cusp_oracle(7) == 2);
    REQUIRE(dim_cusp_oracle(9) == 3);
    REQUIRE(dim_cusp_oracle(11) == 4);
    REQUIRE(dim_cusp_oracle(19) == 8);
}

TEST_CASE("cusp basis matches oracle and vanishes at infinity") {
    for (int m : {3, 5, 7, 9, 11}) {
        auto cb = cusp_basis(m, 60);
        REQUIRE(static_cast<long>(cb.size()) == dim_cusp_oracle(m));
        for (auto& b : cb) REQUIRE(b.a(0).is_zero());
    }
    REQUIRE_THROWS_AS(cusp_basis(7, 2), std::domain_error);
}

TEST_CASE("hecke operator basics") {
    auto cb = cusp_basis(7, 120);
    // T_1 = identity
    auto t1 = hecke_Tn(cb[0], 1);
    for (long n = 0; n <= t1.trunc; ++n) REQUIRE(t1.a(n) == cb[0].a(n));
    // T_2: a(m) -> a(2m)
    auto t2 = hecke_Tn(cb[0], 2);
    for (long n = 0; n <= t2.trunc; ++n) REQUIRE(t2.a(n) == cb[0].a(2 * n));
}

TEST_CASE("hecke commutativity and multiplicativity on the basis") {
    long trunc = 450;
    auto cb = cusp_basis(7, trunc);
    for (auto [p, q] : {std::pair<long, long>{3, 5}, {3, 7}, {5, 7}}) {
        long t = trunc / (p * q);
        for (auto& b : cb) {
            auto pq1 = hecke_Tn(hecke_Tn(b, p, trunc / p), q, t);
            auto pq2 = hecke_Tn(hecke_Tn(b, q, trunc / q), p, t);
            auto pq3 = hecke_Tn(b, p * q, t);
            for (long n = 0; n <= t; ++n) {
                REQUIRE(pq1.a(n) == pq2.a(n));
                REQUIRE(pq1.a(n) == pq3.a(n));
            }
        }
    }
}

TEST_CASE("eigenforms at weight 7") {
    long trunc = 600;
    auto efs = eigenforms(7, trunc);
    REQUIRE(static_cast<long>(efs.size()) == dim_cusp_oracle(7));
    REQUIRE(efs.size() == 2);
    // both embeddings of one quadratic orbit
    REQUIRE(efs[0].field == efs[1].field);
    REQUIRE(Fields::instance().get(efs[0].field).degree() == 2);

    const auto& f = efs[0];
    REQUIRE(f.a(1) == NFElem::one(f.field));

    SECTION("Fact 1: a(p) = chi(p) * rho(a(p)) for odd p <= 200") {
        auto rho = rho_automorphism(f);
        for (long p = 3; p <= 200; p += 2) {
            bool isprime = true;
            for (long q = 2; q * q <= p; ++q)
                if (p % q == 0) isprime = false;
            if (!isprime) continue;
            REQUIRE(rho.apply(f.a(p)) == f.a(p).scaled(Rat(chi_m4(p))));
        }
    }

    SECTION("|a(2)|^2 = 2^(m-1)") {
        auto rho = rho_automorphism(f);
        NFElem n2 = f.a(2) * rho.apply(f.a(2));
        REQUIRE(n2 == NFElem::make_rational(f.field, Rat(64)));
    }

    SECTION("multiplicativity and a(p^2) relation") {
        for (long pr : {3L, 5L, 7L, 11L, 13L}) {
            for (long n = 2; pr * n <= 300; ++n) {
                if (std::gcd(pr, n) != 1) continue;
                REQUIRE(f.a(pr * n) == f.a(pr) * f.a(n));
            }
            // a(p^2) = a(p)^2 - chi(p) p^(w-1)
            Int pw = 1;
            for (int j = 0; j < 6; ++j) pw *= pr;
            NFElem want = f.a(pr) * f.a(pr) -
                          NFElem::make_rational(f.field, Rat(chi_m4(pr)) * Rat(pw));
            REQUIRE(f.a(pr * pr) == want);
        }
    }

    SECTION("rho conjugate is an involution and acts as expected") {
        auto fr = rho_conjugate(f);
        REQUIRE(fr.a(5) == f.a(5));
        REQUIRE(fr.a(3) == -f.a(3));
        auto frr = rho_conjugate(fr);
        for (long n = 0; n <= 50; ++n) REQUIRE(frr.a(n) == f.a(n));
        // f != f^rho at this weight
        bool differs = false;
        for (long n = 0; n <= 50; ++n) differs |= !(fr.a(n) == f.a(n));
        REQUIRE(differs);
    }
}

TEST_CASE("weight 5 has a single rational CM eigenform") {
    auto efs = eigenforms(5, 300);
    REQUIRE(efs.size() == 1);
    REQUIRE(Fields::instance().get(efs[0].field).degree() == 1);
    // CM: a(p) = 0 at inert primes
    for (long p : {3L, 7L, 11L, 19L, 23L}) REQUIRE(efs[0].a(p).is_zero());
    // f = f^rho
    auto fr = rho_conjugate(efs[0]);
    for (long n = 0; n <= 100; ++n) REQUIRE(fr.a(n) == efs[0].a(n));
}
