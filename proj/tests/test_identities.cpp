#include "doctest.h"
#include "kvol/identities.hpp"

#include <cmath>

using namespace kvol;

TEST_CASE("Laurent polynomial arithmetic")
{
    LaurentPoly d = x_minus_inv();
    LaurentPoly sq = d * d; // X^2 - 2 + X^-2
    CHECK(sq.coeff(2) == 1);
    CHECK(sq.coeff(0) == -2);
    CHECK(sq.coeff(-2) == 1);
    CHECK(d.pow(3) == sq * d);
    CHECK((d - d).is_zero());
}

TEST_CASE("binomials")
{
    CHECK(binom(10, 3) == 120);
    CHECK(binom(60, 30) == mpz_class("118264581564861424"));
    CHECK(binom(5, 7) == 0);
}

TEST_CASE("exact identities")
{
    for (int k = 1; k <= 12; ++k) {
        CHECK(lemma_a2_check(k));
        CHECK(lemma_a3_check(k));
        CHECK(lemma_a3_via_a2(k));
    }
}

TEST_CASE("truncated alternating identity")
{
    for (int k : {1, 4, 10}) {
        auto r = lemma_a1_check(k, std::exp(0.25), 400);
        CHECK(r.residual < 1e-8);
        CHECK(r.residual <= r.tail_bound + 1e-13);
    }
    CHECK_THROWS(lemma_a1_check(3, 0.5, 400));
}

TEST_CASE("alternating sum with skip")
{
    // sum_{i>=1} (-1)^i / i = -log 2
    double err = 0;
    double s = alternating_sum(200, 0, [](int i) { return 1.0 / i; }, &err);
    CHECK(s == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}
