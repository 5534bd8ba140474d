#include "doctest.h"
#include "kvol/rtr.hpp"

using namespace kvol;

TEST_CASE("omega(1/2,1) value")
{
    RefinedParams p(1.0, RegEps(0.5), 200);
    // mpmath with the infinite k-sum
    CHECK(omega_half_1_value(0.3, p).real() == doctest::Approx(1.117232820528732292).epsilon(1e-12));
    CHECK(std::abs(omega_half_1_value(0.3, p) - omega_half_1_via_varpi(0.3, p)) < 1e-10);
}

TEST_CASE("omega(1/2,1) residues")
{
    RefinedParams p(1.0, RegEps(0.5), 6);
    for (auto& r : omega_half_1_residues(p)) {
        double want = r.twice_center == 0 ? -p.bb / 2 : (r.twice_center < 0 ? -p.bb : 0.0);
        CHECK(std::abs(r.residue - want) < 1e-10);
    }
}

TEST_CASE("omega(1/2,2) closed form")
{
    RefinedParams p(1.0, RegEps(0.5), 200);
    cplx a = omega_half_2_closed(0.31, 0.47, p), b = omega_half_2_closed(0.47, 0.31, p);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
    // no diagonal pole, no pole at z1 = 1/2
    CHECK(std::isfinite(std::abs(omega_half_2_closed(0.31, 0.31 + 1e-6, p))));
    double far = std::abs(omega_half_2_closed(0.5 + 1e-6, 0.31, p));
    CHECK(far < 1e6);
    auto rc = recompute_half_2(0.31, 0.47, p);
    CHECK(std::abs(rc.total - a) < 1e-6 * std::abs(a));
}

TEST_CASE("C_k")
{
    RegEps e(0.5);
    CHECK(c_coeff(1, e) == doctest::Approx(-2 * e.log_two_sinh_half() + 1 - std::cosh(0.5)).epsilon(1e-15));
    // mpmath of the finite closed form
    CHECK(c_coeff(2, e) == doctest::Approx(0.5806439943430031580).epsilon(1e-14));
    CHECK(c_coeff(5, e) == doctest::Approx(-1.381731424879402527).epsilon(1e-14));
    for (int k = 1; k <= 20; ++k) {
        auto t = ctilde_coeff(k, e, 400);
        CHECK(std::abs(t.value - c_coeff(k, e)) <= t.tail + 1e-12);
    }
    for (int k = 1; k <= 50; ++k) {
        double u = (k % 2 ? -1.0 : 1.0) * u_coeff(k, e);
        CHECK(2 * c_coeff(k, e) == doctest::Approx(u).epsilon(1e-10));
    }
}

TEST_CASE("omega(1,1)")
{
    RefinedParams p(1.0, RegEps(0.5), 40);
    DifferentialSum w = omega_1_1_closed(p);
    for (int k = 1; k <= 10; ++k) {
        auto pp = w.principal_part(-k, 4);
        CHECK(std::abs(pp[0]) < 1e-8); // no residue at -k/2
    }
    RefinedParams p0(0.0, RegEps(0.5), 10);
    cplx z = 0.31;
    cplx want = (1.0 / std::pow(z, 4) + 2 * kvol::pi_v<double>() * kvol::pi_v<double>() / 3 / (z * z)) / 8.0;
    CHECK(std::abs(omega_1_1_closed(p0).value(z) - want) < 1e-12 * std::abs(want));

    RefinedParams q(1.0, RegEps(0.5), 200);
    cplx c = omega_1_1_closed(q).value(0.31);
    CHECK(std::abs(recompute_1_1(0.31, q).total - c) < 1e-6 * std::abs(c));
}

TEST_CASE("eta projection")
{
    for (int k = 0; k <= 3; ++k) {
        cplx z1(0.23, 0.11);
        CHECK(std::abs(eta_projection_numeric(0.5, k, z1) - eta_projection_closed(0.5, k, z1)) < 1e-10);
    }
}

TEST_CASE("termwise inverse Laplace rules")
{
    DifferentialSum d;
    d.K = 2;
    d.poles.push_back({0, 2, 1.0, "z^-2"});
    d.poles.push_back({-2, 2, 1.0, "(z+1)^-2"});
    LaplaceSum l = termwise_inverse_laplace(d);
    double L = 1.7;
    CHECK(l.eval({L}) == doctest::Approx(L + L * std::exp(-L)).epsilon(1e-14));
    DifferentialSum bad;
    bad.K = 2;
    bad.poles.push_back({2, 2, 1.0, "(z-1)^-2"});
    CHECK_THROWS(termwise_inverse_laplace(bad));
}

TEST_CASE("dictionary at chi=-1")
{
    RegEps e(0.5);
    CHECK(check_dictionary_chi1(Topology(1, 2), {3, 2}, e, 1).residual < 1e-8);
    CHECK(check_dictionary_chi1(Topology(1, 2), {2, 3}, e, 1).residual < 1e-8);
    CHECK(check_dictionary_chi1(Topology(2, 1), {3}, e, 1).residual < 1e-8);
    CHECK(check_dictionary_chi1(Topology(2, 1), {3}, e, 0.5).residual < 1e-8);
    CHECK_THROWS(check_dictionary_chi1(Topology(2, 1), {0.8}, e, 1));
}

TEST_CASE("toy anti-diagonal bidifferential")
{
    LaplaceSum t = double_inverse_laplace(toy_antidiagonal, 0, 6);
    CHECK(t.eval({3, 2}) == doctest::Approx(3.0 * 2 * 3 / 4).epsilon(1e-12));
    CHECK(t.eval({1.5, 1.5}) == doctest::Approx(1.5 * 1.5 * 1.5 / 4).epsilon(1e-12));
}
