#include "doctest.h"
#include "kvol/chi1.hpp"

using namespace kvol;

namespace {
const double kPi2 = kvol::pi_v<double>() * kvol::pi_v<double>();
}

TEST_CASE("V+ at chi=-1")
{
    CHECK(v_plus_chi1(Topology(0, 3), {1, 2, 3}) == 1.0);
    CHECK(v_plus_chi1(Topology(2, 1), {0}) == doctest::Approx(kPi2 / 12));
    for (double L : {0.5, 2.0, 7.0})
        CHECK(v_plus_chi1(Topology(2, 1), {L}) - L * L / 48 == doctest::Approx(kPi2 / 12).epsilon(1e-14));
    CHECK_THROWS_AS(v_plus_chi1(Topology(0, 4), {1, 1, 1, 1}), DomainError);
}

TEST_CASE("V-(1/2,2)")
{
    RegEps e(0.5);
    CHECK(v_minus_half_2(0, 0, e) == doctest::Approx(-2 * std::log(std::sinh(0.25))).epsilon(1e-15));
    CHECK(v_minus_half_2(3, 1, e) == v_minus_half_2(1, 3, e));
    // mpmath: int_eps^{l*} dl / tanh(l/2)
    CHECK(v_minus_half_2(2, 1, e) == doctest::Approx(3.040994521297236234).epsilon(1e-14));
    auto o = v_minus_half_2_oracle(2, 1, e);
    CHECK(std::abs(o.fundamental_domain - o.teichmuller_half) < 1e-9);
    double ls = o.ell_star;
    CHECK(std::abs(2 * std::sinh(ls / 2) * std::sinh(ls / 2) - std::cosh(1.0) - std::cosh(0.5)) < 1e-12);
    auto z = v_minus_half_2_oracle(0, 0, e);
    CHECK(z.fundamental_domain == doctest::Approx(-2 * std::log(std::sinh(0.25))).epsilon(1e-10));
}

TEST_CASE("V-(1,1)")
{
    RegEps e(0.5);
    // mpmath: nested double integral over the fundamental domain
    CHECK(v_minus_1_1(3, e) == doctest::Approx(6.948213632768101767).epsilon(1e-14));
    CHECK(v_minus_1_1(0.5, e) == doctest::Approx(5.412272640474271458).epsilon(1e-14));
    CHECK(v_minus_1_1_reflected(3, e) == doctest::Approx(v_minus_1_1(3, e)).epsilon(1e-13));
    CHECK(v_minus_1_1_oracle(3, e).value == doctest::Approx(v_minus_1_1(3, e)).epsilon(1e-10));
    CHECK(v_minus_1_1_oracle(0, e).value == doctest::Approx(v_minus_1_1(0, e)).epsilon(1e-10));
    for (double L = 0.1; L <= 10; L += 0.7) CHECK(v_minus_1_1(L, e) > 0);
    for (double s0 : {0.3, 1.0, 10.0, 1e3}) CHECK(v_minus_1_1_oracle_integrand(s0, 3) >= 0);
}

TEST_CASE("expansion of V-(1,1)")
{
    RegEps e(0.5);
    for (double L : {1.2, 3.0, 6.0}) {
        auto x = v_minus_1_1_expansion(L, e, 40);
        CHECK(std::abs(x.value - v_minus_1_1(L, e)) <= x.tail_bound + 1e-14 * v_minus_1_1(L, e));
    }
    CHECK_THROWS_AS(v_minus_1_1_expansion(0.9, e, 40), DomainError);
}

TEST_CASE("Klein bottle trace identities")
{
    RegEps e(0.5);
    double c = std::cosh(0.5);
    KBState sym(c, c, 2.0, e);
    CHECK(std::cosh(kb_two_sided_length(sym) / 2) == doctest::Approx(1.5).epsilon(1e-14));

    KBState st(1.2, 1.5, 2.0, e);
    auto seq = kb_sequence(st, -5, 5);
    double c2 = c * c;
    double l = kb_two_sided_length(st), ch = std::cosh(l / 2);
    for (int i = -4; i <= 4; ++i) {
        double a = seq.at(i - 1), b = seq.at(i), d = seq.at(i + 1);
        CHECK(a * d == doctest::Approx(b * b + c2).epsilon(1e-10));
        CHECK(b * b + d * d - 2 * b * d * ch == doctest::Approx(-c2).epsilon(1e-9));
    }
    CHECK_THROWS_AS(KBState(0.1, 1.0, 1.0, e), DomainError);
}

TEST_CASE("Klein bottle length identity")
{
    KBState st(0.6, 0.9, 1.0, RegEps(0.5));
    auto r = kb_mcshane_norbury_residual(st, 12);
    CHECK(r.residual < 1e-8);
    CHECK(r.min_F > 0);
}

TEST_CASE("total volumes at chi=-1")
{
    RegEps e(0.5);
    // mpmath: L^2/48 + pi^2/12 + double integral
    CHECK(total_chi1(Topology(2, 1), {3}, e, 1) == doctest::Approx(7.958180666192214986).epsilon(1e-14));
    CHECK(total_chi1(Topology(2, 1), {3}, e, 0) == doctest::Approx(9.0 / 48 + kPi2 / 12));
    CHECK(total_chi1(Topology(1, 2), {3, 2}, e, 1) == doctest::Approx(v_minus_half_2(3, 2, e)).epsilon(1e-14));
    CHECK(total_chi1(Topology(1, 2), {3, 2}, e, 0) == 0.0);
    CHECK(total_chi1(Topology(0, 3), {1, 2, 3}, e, 0.3) == 1.0);
    CHECK_THROWS_AS(total_chi1(Topology(0, 4), {1, 1, 1, 1}, e, 1), DomainError);
}

TEST_CASE("U coefficients")
{
    // 2 C_k = (-1)^k U_k, C_1 = -2 log(2 sinh(eps/2)) + 1 - cosh(eps)
    RegEps e(0.5);
    double c1 = -2 * e.log_two_sinh_half() + 1 - std::cosh(0.5);
    CHECK(-u_coeff(1, e) == doctest::Approx(2 * c1).epsilon(1e-14));
}
