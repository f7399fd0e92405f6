#include "pell/modular.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace pell;

TEST_CASE("enumerate_points examples") {
    auto p3 = enumerate_points(ModRing(3), 5);
    CHECK(p3.size() == 4);  // x^2 + y^2 = 1 mod 3
    std::set<std::pair<Int, Int>> got;
    for (auto& P : p3) got.insert({P.x, P.y});
    std::set<std::pair<Int, Int>> expect{{0, 1}, {0, 2}, {1, 0}, {2, 0}};
    CHECK(got == expect);

    CHECK(enumerate_points(ModRing(11), 5).size() == 10);

    auto F9 = ExtField::make(3, 2);
    CHECK(enumerate_points(F9, 5).size() == 8);
}

TEST_CASE("count_points = q - (D/p)^f") {
    CHECK(count_points(5, 3, 1) == 4);
    CHECK(count_points(5, 11, 1) == 10);
    CHECK(count_points(5, 3, 2) == 8);
    CHECK_THROWS_AS(count_points(5, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(count_points(12, 2, 1), std::invalid_argument);
}

TEST_CASE("count_points matches enumeration over prime fields and quadratic extensions") {
    for (Int disc : {Int(5), Int(8), Int(12), Int(13), Int(40), Int(-4), Int(-3), Int(-8)}) {
        for (uint32_t p : small_primes()) {
            if (p > 50) break;
            if (p == 2 || disc % p == 0) continue;
            CHECK(Int(enumerate_points(ModRing(p), disc).size()) == count_points(disc, p, 1));
            auto Fq = ExtField::make(p, 2);
            CHECK(Int(enumerate_points(Fq, disc).size()) == count_points(disc, p, 2));
        }
    }
}

TEST_CASE("abelian invariants examples") {
    CHECK(abelian_invariants(ModRing(3), 5, enumerate_points(ModRing(3), 5)) == std::vector<Int>{4});
    CHECK(abelian_invariants(ModRing(11), 5, enumerate_points(ModRing(11), 5)) == std::vector<Int>{10});
    // C(Z/9) for D = 5: Z/4 + Z/3 in invariant-factor form is Z/12 (cyclic)
    CHECK(abelian_invariants(ModRing(9), 5, enumerate_points(ModRing(9), 5)) == std::vector<Int>{12});
}

TEST_CASE("abelian_invariants signals non-closure") {
    auto pts = enumerate_points(ModRing(11), 5);
    pts.pop_back();
    CHECK_THROWS_AS(abelian_invariants(ModRing(11), 5, pts), std::invalid_argument);
}

TEST_CASE("structure_mod_pk matches the four-case table") {
    CHECK(structure_mod_pk(5, 3, 2) == std::vector<Int>{12});       // (5/3) = -1: Z/4 + Z/3
    CHECK(structure_mod_pk(5, 5, 1) == std::vector<Int>{10});       // p | D: Z/2 + Z/5
    CHECK(structure_mod_pk(-3, 3, 1) == std::vector<Int>{6});       // D = -3 special case
    CHECK(structure_mod_pk(-3, 3, 3) == std::vector<Int>{18, 3});   // Z/6 + Z/9
    CHECK(structure_mod_pk(13, 3, 1) == std::vector<Int>{2});       // (13/3) = +1: Z/(p-1)
    CHECK(structure_mod_pk(5, 11, 2) == std::vector<Int>{110});     // (5/11) = +1: Z/10 + Z/11
    CHECK_THROWS_AS(structure_mod_pk(5, 2, 1), std::invalid_argument);
}

TEST_CASE("structure_mod_pk equals invariants by enumeration") {
    for (Int disc : {Int(5), Int(8), Int(12), Int(13), Int(40), Int(-4), Int(-3), Int(-8)}) {
        for (Int p : {Int(3), Int(5), Int(7)}) {
            for (int k = 1; k <= 3; ++k) {
                Int m = pow(p, unsigned(k));
                ModRing R(m);
                auto inv = abelian_invariants(R, disc, enumerate_points(R, disc));
                CHECK(inv == structure_mod_pk(disc, p, k));
            }
        }
    }
}

TEST_CASE("C(F_q) is cyclic for prime fields and F_9, F_25") {
    for (Int disc : {Int(5), Int(8), Int(12), Int(13), Int(-4), Int(-3)}) {
        for (uint32_t p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
            if (disc % p == 0) continue;
            ModRing R(p);
            auto inv = abelian_invariants(R, disc, enumerate_points(R, disc));
            CHECK(inv.size() <= 1);
        }
        for (uint32_t p : {3u, 5u}) {
            if (disc % p == 0) continue;
            auto Fq = ExtField::make(p, 2);
            auto inv = abelian_invariants(Fq, disc, enumerate_points(Fq, disc));
            CHECK(inv.size() <= 1);
        }
    }
}

TEST_CASE("local_zeta matches enumerated N_r for r <= 3") {
    for (Int p : {Int(3), Int(7), Int(11)}) {
        auto z = local_zeta(5, p);
        auto counts = z.point_counts(3);
        for (int f = 1; f <= 3; ++f) {
            auto Fq = ExtField::make(p.convert_to<int64_t>(), f);
            CHECK(counts[size_t(f - 1)] == Int(enumerate_points(Fq, 5).size()));
        }
    }
}

TEST_CASE("local_zeta coefficient examples") {
    auto z3 = local_zeta(5, 3);  // (1 + T)/(1 - 3T)
    CHECK(z3.num == std::vector<Int>{1, 1});
    CHECK(z3.den == std::vector<Int>{1, -3});
    CHECK(z3.point_counts(2) == std::vector<Int>{4, 8});

    auto z11 = local_zeta(5, 11);  // (1 - T)/(1 - 11T)
    CHECK(z11.num == std::vector<Int>{1, -1});
    CHECK(z11.den == std::vector<Int>{1, -11});
    CHECK(z11.point_counts(1) == std::vector<Int>{10});

    auto par = local_zeta_parabola(5);  // 1/(1 - 5T)
    CHECK(par.num == std::vector<Int>{1});
    CHECK(par.den == std::vector<Int>{1, -5});
    CHECK(par.point_counts(3) == std::vector<Int>{5, 25, 125});
}

TEST_CASE("enumeration is independent of ring representation for F_p vs f = 1 extension") {
    auto Fp = ExtField::make(7, 1);
    CHECK(enumerate_points(Fp, 5).size() == enumerate_points(ModRing(7), 5).size());
}

TEST_CASE("enumerate_points rejects even modulus") {
    CHECK_THROWS_AS(ModRing(8), std::invalid_argument);
}

TEST_CASE("normalize_invariants") {
    CHECK(normalize_invariants({4, 3}) == std::vector<Int>{12});
    CHECK(normalize_invariants({2, 5}) == std::vector<Int>{10});
    CHECK(normalize_invariants({6, 9}) == std::vector<Int>{18, 3});
    CHECK(normalize_invariants({2, 1}) == std::vector<Int>{2});
    CHECK(normalize_invariants({4, 6}) == std::vector<Int>{12, 2});
}
