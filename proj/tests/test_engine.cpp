#include "doctest.h"
#include "kvol/volume_engine.hpp"
#include "kvol/wp_symbolic.hpp"

#include <filesystem>
#include <random>

using namespace kvol;

namespace {

VolumeQuery make(int tg, std::vector<double> L, double b, double tol = 1e-9, double eps = 0.5)
{
    VolumeQuery q;
    q.top = Topology(tg, static_cast<int>(L.size()));
    q.lengths = std::move(L);
    q.eps = RegEps(eps);
    q.b = b;
    q.tol = tol;
    return q;
}

EngineConfig no_cache()
{
    EngineConfig c;
    c.use_cache = false;
    return c;
}

} // namespace

TEST_CASE("kernel-weighted integrals against constant 1")
{
    auto one = [](double) { return 1.0; };
    // mpmath, 60 digits, cut at p=250
    double pm = truncation_radius(2, 1, 0, 1e-12);
    CHECK(integrate_R(2, 1, one, pm, 1e-12) == doctest::Approx(15.49280586811914483).epsilon(1e-10));
    CHECK(integrate_D_constant(2, 1, truncation_radius(2, 0, 3, 1e-12), 1e-12) ==
          doctest::Approx(69.64974944434761305).epsilon(1e-10));
    RegEps e(0.5);
    CHECK(integrate_Ecal(2, one, e, truncation_radius(2, 0, 2, 1e-12), 1e-12) ==
          doctest::Approx(59.15674252716196397).epsilon(1e-10));
    CHECK(integrate_Ecal(0, one, e, 60, 1e-10) == 0.0);
}

TEST_CASE("tensor rule symmetric in the two slots")
{
    auto F = [](double p, double q) { return 1 + p * p * q + q * q * p; };
    auto G = [](double p, double q) { return 1 + q * q * p + p * p * q; };
    double pm = truncation_radius(3, 0, 6, 1e-10);
    CHECK(integrate_D(3, F, pm, 1e-10) == integrate_D(3, G, pm, 1e-10));
}

TEST_CASE("surrogates")
{
    VolumeEngine eng(no_cache());
    auto s03 = eng.build_surrogate(make(0, {1, 2, 3}, 1), 0);
    for (double p : {0.0, 3.3, 17.0}) CHECK(s03->eval(p) == doctest::Approx(1.0).epsilon(1e-14));
    auto s11 = eng.build_surrogate(make(2, {1}, 0), 0, Sector::Plus);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0, s11->pmax);
    double pi2 = kvol::pi_v<double>() * kvol::pi_v<double>();
    for (int i = 0; i < 20; ++i) {
        double p = U(rng);
        CHECK(std::abs(s11->eval(p) - (p * p / 48 + pi2 / 12)) <= 1e-10 * (p * p / 48 + pi2 / 12));
    }
    auto f = eng.build_surrogate(make(2, {1.0, 0.5}, 1), 1, Sector::Minus);
    CHECK(f->residual <= 1e-9);
}

TEST_CASE("chi=-1 dispatch is the closed form")
{
    VolumeEngine eng(no_cache());
    RegEps e(0.5);
    CHECK(eng.total_volume(make(2, {3}, 1)).value == total_chi1(Topology(2, 1), {3}, e, 1));
    CHECK(eng.total_volume(make(1, {3, 2}, 0.5)).value == total_chi1(Topology(1, 2), {3, 2}, e, 0.5));
}

TEST_CASE("b=0 reproduces WP")
{
    VolumeEngine eng(no_cache());
    auto r = eng.total_volume(make(2, {1, 1}, 0));
    CHECK(r.path == "recursion");
    CHECK(r.value == doctest::Approx(wp_eval(wp_volume(Topology(2, 2)), {1, 1})).epsilon(1e-8));
    auto z = eng.total_volume(make(0, {0, 0, 0, 0}, 0));
    CHECK(z.value == doctest::Approx(2 * kvol::pi_v<double>() * kvol::pi_v<double>()).epsilon(1e-8));
}

TEST_CASE("b=1 (1/2,3) is permutation symmetric")
{
    VolumeEngine eng(no_cache());
    double a = eng.total_volume(make(1, {1, 2, 3}, 1)).value;
    double b = eng.total_volume(make(1, {3, 1, 2}, 1)).value;
    double c = eng.total_volume(make(1, {2, 3, 1}, 1)).value;
    CHECK(std::abs(a - b) < 1e-6 * a);
    CHECK(std::abs(a - c) < 1e-6 * a);
}

TEST_CASE("total = V+ + V- at b=1")
{
    VolumeEngine eng(no_cache());
    auto q = make(2, {1, 1}, 1);
    double t = eng.total_volume(q).value;
    CHECK(eng.v_plus(q).value + eng.v_minus(q).value == doctest::Approx(t).epsilon(1e-6));
    CHECK(eng.v_plus(make(1, {1, 2, 3}, 1)).value == 0.0);
}

TEST_CASE("V- decreases in eps")
{
    VolumeEngine eng(no_cache());
    double a = eng.v_minus(make(2, {1, 1}, 1, 1e-9, 0.3)).value;
    double b = eng.v_minus(make(2, {1, 1}, 1, 1e-9, 0.6)).value;
    CHECK(a > b);
}

TEST_CASE("b-polynomiality probe")
{
    // degree <= 2g: linear for (1/2,3), quadratic for (1,2)
    VolumeEngine eng(no_cache());
    std::vector<double> bs{0, 0.25, 0.5, 0.75, 1}, v3, v2;
    for (double b : bs) {
        v3.push_back(eng.total_volume(make(1, {1, 2, 3}, b)).value);
        v2.push_back(eng.total_volume(make(2, {1, 2}, b)).value);
    }
    // second differences vanish for a line, third for a quadratic
    double d2 = v3[0] - 2 * v3[1] + v3[2], d2b = v3[2] - 2 * v3[3] + v3[4];
    CHECK(std::abs(d2) < 1e-5 * std::abs(v3[4]));
    CHECK(std::abs(d2b) < 1e-5 * std::abs(v3[4]));
    double d3 = -v2[0] + 3 * v2[1] - 3 * v2[2] + v2[3], d3b = -v2[1] + 3 * v2[2] - 3 * v2[3] + v2[4];
    CHECK(std::abs(d3) < 1e-5 * std::abs(v2[4]));
    CHECK(std::abs(d3b) < 1e-5 * std::abs(v2[4]));
}

TEST_CASE("halving tol stays within the reported error")
{
    VolumeEngine eng(no_cache());
    auto a = eng.total_volume(make(3, {1.5}, 1, 1e-7));
    auto b = eng.total_volume(make(3, {1.5}, 1, 5e-8));
    CHECK(std::abs(a.value - b.value) <= a.error);
}

TEST_CASE("disk cache round trip and on/off equivalence")
{
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "kleinvol_test_cache";
    fs::remove_all(dir);
    EngineConfig c;
    c.cache_dir = dir.string();
    double first, second;
    {
        VolumeEngine eng(c);
        first = eng.total_volume(make(0, {1.1, 0.6, 0.9, 1.7, 0.3}, 0)).value;
        CHECK(eng.surrogates_built() > 0);
    }
    CHECK(!fs::is_empty(dir));
    {
        VolumeEngine eng(c);
        second = eng.total_volume(make(0, {1.1, 0.6, 0.9, 1.7, 0.3}, 0)).value;
        CHECK(eng.cache_hits() > 0);
    }
    VolumeEngine off(no_cache());
    CHECK(first == second);
    CHECK(off.total_volume(make(0, {1.1, 0.6, 0.9, 1.7, 0.3}, 0)).value == doctest::Approx(first).epsilon(1e-8));
    fs::remove_all(dir);
}

TEST_CASE("query validation")
{
    VolumeEngine eng(no_cache());
    CHECK_THROWS_AS(eng.total_volume(make(0, {1, 1}, 1)), DomainError);
    CHECK_THROWS_AS(eng.total_volume(make(2, {1, -1}, 1)), DomainError);
    CHECK_THROWS_AS(eng.total_volume(make(2, {1, 1}, -0.5)), DomainError);
    VolumeQuery q = make(2, {1, 1}, 1);
    q.lengths.push_back(2);
    CHECK_THROWS_AS(eng.total_volume(q), DomainError);
}

TEST_CASE("L0 = 0 is supported")
{
    VolumeEngine eng(no_cache());
    double v = eng.total_volume(make(0, {0, 1, 1, 1}, 0)).value;
    CHECK(v == doctest::Approx(wp_eval(wp_volume(Topology(0, 4)), {0, 1, 1, 1})).epsilon(1e-7));
}
