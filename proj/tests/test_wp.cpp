#include "doctest.h"
#include "kvol/wp_symbolic.hpp"

using namespace kvol;

namespace {
const double kPi2 = kvol::pi_v<double>() * kvol::pi_v<double>();
}

TEST_CASE("wp renders")
{
    CHECK(wp_volume(Topology(0, 3)).render() == "1");
    CHECK(wp_volume(Topology(2, 1)).render() == "L1^2/48 + pi^2/12");
    CHECK(wp_volume(Topology(0, 4)).render() == "1/2·(L1^2+L2^2+L3^2+L4^2) + 2·pi^2");
}

TEST_CASE("wp (1,1) is reconstructed exactly")
{
    ReconstructionReport rep;
    const PiPoly& p = wp_volume(Topology(2, 1), &rep);
    CHECK(p.leading() == mpq_class(1, 48));
    CHECK(rep.verify_residual < 1e-30);
    p.check_invariants();
}

TEST_CASE("wp (1,2) against the known polynomial")
{
    const PiPoly& p = wp_volume(Topology(2, 2));
    p.check_invariants();
    // (4 pi^2 + L1^2 + L2^2)(12 pi^2 + L1^2 + L2^2)/192
    CHECK(wp_eval(p, {1, 1}) == doctest::Approx(26.01804015868216908).epsilon(1e-14));
    CHECK(wp_eval(p, {0.8, 2.6}) == doctest::Approx(30.72373713917238118).epsilon(1e-14));
}

TEST_CASE("wp is symmetric")
{
    const PiPoly& p = wp_volume(Topology(0, 4));
    CHECK(wp_eval(p, {1, 2, 3, 4}) == wp_eval(p, {4, 3, 2, 1}));
    CHECK(wp_eval(p, {0, 0, 0, 0}) == doctest::Approx(2 * kPi2));
}

TEST_CASE("wp one recursion step in 213 bits")
{
    const PiPoly& p = wp_volume(Topology(0, 4));
    std::vector<HP> L{HP("1.3"), HP("0.7"), HP("2.1"), HP("0.4")};
    HP d = wp_recursion_hp(Topology(0, 4), L) - wp_eval_hp(p, L);
    CHECK(abs(d) < HP("1e-40"));
}

TEST_CASE("rationalize")
{
    mpq_class q;
    CHECK(rationalize(HP(29) / HP(138240), q, 1e12, HP("1e-40")));
    CHECK(q == mpq_class(29, 138240));
    CHECK_FALSE(rationalize(kvol::pi_v<HP>(), q, 1e6, HP("1e-40")));
}

TEST_CASE("half-integer genus is rejected")
{
    CHECK_THROWS_AS(wp_volume(Topology(1, 2)), DomainError);
}
