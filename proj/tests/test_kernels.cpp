#include "doctest.h"
#include "kvol/kernels.hpp"

#include <random>

using namespace kvol;

// frozen with mpmath at 40 digits from the defining log/atanh formulas
TEST_CASE("kernel values")
{
    CHECK(kernel_R(2.0, 1.0, 1.0) == doctest::Approx(1.566219169516972813).epsilon(1e-14));
    CHECK(kernel_D(2.0, 1.0, 1.0) == doctest::Approx(1.132438339033945626).epsilon(1e-14));
    CHECK(kernel_E(2.0, 1.0, 1.0) == doctest::Approx(0.6225235436902027862).epsilon(1e-14));
    CHECK(kernel_F(2.0, 1.0, 1.0) == doctest::Approx(1.343610398967325315).epsilon(1e-14));
    CHECK(lambda_upper(3.0, 2.0, RegEps(0.5)) == doctest::Approx(5.479795499827725193).epsilon(1e-15));
}

TEST_CASE("kernel limits")
{
    CHECK(kernel_R(3.0, 1.0, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(std::abs(kernel_R(1.0, 1.0, 60.0)) < 1e-10);
    CHECK(kernel_D(2.0, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(kernel_E(0.0, 1.0, 1.0) == 0.0);
    CHECK(kernel_E(2.0, 20.0, 1.0) < 0);
    CHECK(kernel_F(0.0, 1.0, 2.0) == 0.0);
}

TEST_CASE("D and F are bitwise symmetric")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0, 30);
    for (int i = 0; i < 200; ++i) {
        double x = U(rng), y = U(rng), z = U(rng);
        CHECK(kernel_D(x, y, z) == kernel_D(x, z, y));
        CHECK(kernel_F(x, y, z) == kernel_F(x, z, y));
    }
}

TEST_CASE("D agrees with R(x,y,z)+R(x,z,y)-x")
{
    for (double x : {0.5, 3.0, 9.0})
        for (double y : {0.2, 2.0})
            for (double z : {0.7, 4.0})
                CHECK(kernel_D(x, y, z) ==
                      doctest::Approx(kernel_R(x, y, z) + kernel_R(x, z, y) - x).epsilon(1e-12));
}

TEST_CASE("R decays in z beyond x+10")
{
    double prev = kernel_R(2.0, 1.0, 12.0);
    for (double z = 13; z < 80; z += 1) {
        double r = kernel_R(2.0, 1.0, z);
        CHECK(r <= prev);
        CHECK(r >= 0);
        prev = r;
    }
}

TEST_CASE("kernels reject negative lengths")
{
    CHECK_THROWS_AS(kernel_R(-1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(RegEps(0.0), DomainError);
    CHECK_THROWS_AS(RegEps(2.0), DomainError); // sinh(1) > 1
}

TEST_CASE("Lambda")
{
    RegEps e(0.5);
    CHECK(lambda_upper(0.0, 0.0, e) == doctest::Approx(2 * std::asinh(1 / std::sinh(0.25))).epsilon(1e-15));
    CHECK(lambda_upper(1.0, 1.0, RegEps(0.3)) > lambda_upper(1.0, 1.0, RegEps(0.6)));
    double L = lambda_upper(3.0, 2.0, e);
    double lhs = std::cosh(1.5) + std::cosh(1.0);
    CHECK(std::abs(lhs - 2 * std::sinh(0.25) * std::sinh(L / 2)) < 1e-12 * lhs);
}

TEST_CASE("Ecal closed form")
{
    RegEps e(0.5);
    // mpmath quadrature of E(x,y,z)/tanh(z/2) over [eps, Lambda]
    CHECK(kernel_Ecal(2.0, 1.0, e) == doctest::Approx(4.699332194702743468).epsilon(1e-13));
    CHECK(kernel_Ecal(5.0, 3.0, RegEps(1.0)) == doctest::Approx(7.119907738148946134).epsilon(1e-13));
    CHECK(kernel_Ecal(0.0, 2.0, e) == 0.0);
    CHECK(std::abs(kernel_Ecal(1.0, 40.0, e)) < 1e-6);
    CHECK(kernel_Ecal(2.0, 1.0, e) == doctest::Approx(kernel_Ecal_literal(2.0, 1.0, 0.5)).epsilon(1e-13));
}

TEST_CASE("Ecal antiderivative differentiates to E/tanh")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.2, 5);
    for (int i = 0; i < 20; ++i) {
        double x = U(rng), y = U(rng), z = U(rng), h = 1e-4;
        double fd = (ecal_antiderivative(x, y, z + h) - ecal_antiderivative(x, y, z - h)) / (2 * h);
        double want = kernel_E(x, y, z) / std::tanh(z / 2);
        CHECK(std::abs(fd - want) <= 1e-6 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("kernels in 213 bits match double")
{
    HP x(2), y(1), z(1);
    CHECK(static_cast<double>(kernel_R(x, y, z)) == doctest::Approx(kernel_R(2.0, 1.0, 1.0)).epsilon(1e-15));
    HP want("1.566219169516972812973505315099872136641");
    CHECK(abs(kernel_R(x, y, z) - want) < HP("1e-38"));
}
