#include "doctest.h"
#include "kvol/specfun.hpp"

using namespace kvol;

TEST_CASE("dilog special values")
{
    CHECK(dilog(0.0) == 0.0);
    CHECK(dilog(-1.0) == doctest::Approx(-kvol::pi_v<double>() * kvol::pi_v<double>() / 12).epsilon(1e-15));
    // mpmath polylog(2, x), 40 digits
    CHECK(dilog(-3.0) == doctest::Approx(-1.939375420766708953).epsilon(1e-15));
    CHECK(dilog(0.7) == doctest::Approx(0.8893776242860387386).epsilon(1e-15));
    CHECK(dilog(-50.0) == doctest::Approx(-9.276995185332621840).epsilon(1e-15));
}

TEST_CASE("dilog reflection at -1 is exact")
{
    double r = dilog(-1.0) + dilog(-1.0) + kvol::pi_v<double>() * kvol::pi_v<double>() / 6;
    CHECK(std::abs(r) < 1e-15);
}

TEST_CASE("dilog in 213 bits")
{
    HP x("-3");
    HP want("-1.939375420766708953077271719177891441223");
    CHECK(abs(dilog(x) - want) < HP("1e-38"));
}

TEST_CASE("log(2 sinh(eps/2))")
{
    double e = 2 * std::asinh(0.5);
    CHECK(std::abs(log_two_sinh_half(e)) < 1e-16);
    CHECK(log_two_sinh_half(1.0) == doctest::Approx(0.04132485461291810897).epsilon(4e-16));
    double tiny = 1e-7;
    CHECK(log_two_sinh_half(tiny) == doctest::Approx(std::log(tiny)).epsilon(1e-14));
}

TEST_CASE("log_add_exp and log_cosh stay finite for large arguments")
{
    CHECK(log_add_exp(1000.0, 1000.0) == doctest::Approx(1000 + std::log(2.0)));
    CHECK(log_cosh(2000.0) == doctest::Approx(2000 - std::log(2.0)));
    CHECK(std::isfinite(log_sinh(900.0)));
}

TEST_CASE("adaptive quadrature")
{
    double err = 0;
    double v = integrate([](double x) { return std::exp(-x) * x * x; }, 0, 40, 1e-13, &err);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
    double w = integrate_to_inf([](double x) { return 1 / (1 + x * x); }, 0, 1e-12);
    CHECK(w == doctest::Approx(kvol::pi_v<double>() / 2).epsilon(1e-11));
}
