#include <doctest.h>

#include "momentbounds/errors.hpp"
#include "momentbounds/moments.hpp"
#include "momentbounds/pade.hpp"

using namespace momentbounds;

TEST_CASE("[0|0] of a unit series is one")
{
    CHECK(pade_value<double>({1.0}, 0, 0, 0.7) == doctest::Approx(1.0));
}

TEST_CASE("[1|1] reproduces a geometric series exactly")
{
    // sum (-1)^k u_k s^k with u_k = a^k equals 1 / (1 + a s).
    const double a = 0.5, s = 0.3;
    const std::vector<double> u{1, a, a * a};
    CHECK(pade_value(u, 1, 1, s) == doctest::Approx(1 / (1 + a * s)));
    CHECK(pade_value(u, 0, 1, s) == doctest::Approx(1 / (1 + a * s)));
}

TEST_CASE("singular denominator is reported")
{
    const std::vector<double> u{1, 0, 0};
    CHECK_THROWS_AS(pade_value(u, 1, 1, 1.0), PadeSingular);
}

TEST_CASE("nesting chain at the exact energy")
{
    for (int Q = 3; Q <= 12; ++Q) {
        const auto table = pade_table(1.0, Q);
        const auto n = check_nesting(table);
        CHECK_MESSAGE(n.holds, "Q = ", Q, ": ", n.violation);
    }
    CHECK(pade_feasible(1.0, 12));
}

TEST_CASE("nesting fails away from the ground state")
{
    CHECK_FALSE(pade_feasible(3.0, 12));
    CHECK_FALSE(pade_feasible(0.3, 12));
}

TEST_CASE("feasibility intervals shrink and contain E = 1")
{
    PadeInterval prev;
    for (int Q = 3; Q <= 10; ++Q) {
        const auto iv = pade_energy_interval(Q, 1e-4);
        CHECK(iv.lower <= 1.0);
        CHECK(1.0 <= iv.upper);
        if (Q > 3) {
            CHECK(iv.lower >= prev.lower - 1e-4);
            CHECK(iv.upper <= prev.upper + 1e-4);
            CHECK((iv.lower > prev.lower + 1e-6 || iv.upper < prev.upper - 1e-6));
        }
        prev = iv;
    }
}

TEST_CASE("order check")
{
    CHECK_THROWS_AS(pade_energy_interval(2, 1e-4), ConfigError);
}
