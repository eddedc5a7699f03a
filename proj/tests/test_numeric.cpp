#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbitlab/cyclotomic.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/rational.hpp"

#include <cmath>
#include <random>

using namespace orbitlab;

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Q(3, 4));
    CHECK(parse_rational("-1/2") == Q(-1, 2));
    CHECK(parse_rational("0.25") == Q(1, 4));
    CHECK(parse_rational("-1.5") == Q(-3, 2));
    CHECK(parse_vector("1, -1/3,2") == Vec{Q(1), Q(-1, 3), Q(2)});
    CHECK_THROWS_AS(parse_rational("x"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
}

TEST_CASE("matrix inverse and nullspace") {
    Mat c = Mat::from_rows({{2, -1}, {-1, 2}});
    Mat ci = inverse(c);
    CHECK(c * ci == Mat::identity(2));
    Mat s = Mat::from_rows({{1, 1, 0}, {0, 0, 0}});
    auto ns = nullspace(s);
    CHECK(ns.size() == 2);
    for (const auto& v : ns) CHECK(is_zero(s * v));
}

TEST_CASE("angle windows") {
    CHECK(reduce_angle(Q(0)) == 0);
    CHECK(reduce_angle(Q(1)) == -1);
    CHECK(reduce_angle(Q(-2)) == 0);
    CHECK(reduce_angle(Q(5, 2)) == Q(-3, 2));
    CHECK(sin_sign(Q(1, 2)) == 1);
    CHECK(sin_sign(Q(-1, 2)) == -1);
    CHECK(sin_sign(Q(3)) == 0);
    CHECK(in_two_pi_z(Q(-4)));
    CHECK_FALSE(in_two_pi_z(Q(1)));
}

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_poly(1) == std::vector<long>{-1, 1});
    CHECK(cyclotomic_poly(4) == std::vector<long>{1, 0, 1});
    CHECK(cyclotomic_poly(12) == std::vector<long>{1, 0, -1, 0, 1});
    for (int n = 1; n <= 60; ++n)
        CHECK(static_cast<int>(cyclotomic_poly(n).size()) - 1 == euler_phi(n));
}

TEST_CASE("cyclotomic arithmetic agrees with floating evaluation") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> den(1, 12), num(-30, 30);
    for (int trial = 0; trial < 300; ++trial) {
        Q a = frac(num(rng), den(rng)), b = frac(num(rng), den(rng));
        Cyc x = Cyc::exp_i_pi(a) * frac(num(rng), 7) + Cyc::exp_i_pi(b);
        Cyc y = Cyc::exp_i_pi(b) - Cyc(Q(1, 3));
        auto cx = x.to_complex(), cy = y.to_complex();
        CHECK(std::abs((x * y).to_complex() - cx * cy) < 1e-9);
        CHECK(std::abs((x + y).to_complex() - (cx + cy)) < 1e-9);
        CHECK(std::abs(x.conj().to_complex() - std::conj(cx)) < 1e-9);
        if (!y.is_zero()) {
            CHECK((x / y) * y == x);
        }
        CHECK(std::abs(Cyc::exp_i_pi(a).to_complex() - std::polar(1.0, M_PI * a.get_d())) < 1e-12);
    }
}

TEST_CASE("exact identities in cyclotomic fields") {
    Cyc i = Cyc::i();
    CHECK(i * i == Cyc(-1));
    CHECK(Cyc::exp_i_pi(Q(1)) == Cyc(-1));
    CHECK(Cyc::exp_i_pi(Q(1, 2)) == i);
    Cyc z = Cyc::exp_i_pi(Q(1, 6));
    CHECK(z * z * z == i);
    CHECK((z * z.conj()).is_rational());
    CHECK((z * z.conj()).rational_value() == 1);
    // 2 cos(pi/3) = 1 in a lifted field
    CHECK(Cyc::exp_i_pi(Q(1, 3)) + Cyc::exp_i_pi(Q(-1, 3)) == Cyc(1));
}
