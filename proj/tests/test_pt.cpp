#include <doctest.h>

#include "momentbounds/gep.hpp"
#include "momentbounds/pt_oracle.hpp"

using namespace momentbounds;

namespace {
constexpr double kCalE = 1.1562670719881133;
}

TEST_CASE("PT oracle missing moments and consistency")
{
    const auto r = solve_pt_missing_moments<double>(kCalE);
    CHECK(r.mu2 == doctest::Approx(0.518015379410521).epsilon(1e-9));
    CHECK(r.mu4 == doctest::Approx(0.7651830316).epsilon(1e-3));
    CHECK(r.mu8_relative_residual < 1e-10);
    REQUIRE(r.quadrature_moments.size() >= 9);
    CHECK(r.quadrature_moments[0] == doctest::Approx(1.0));
}

TEST_CASE("PT series starts at mu4 and is nonincreasing")
{
    const auto r = solve_pt_missing_moments<double>(kCalE);
    const auto seq = generate_pt_density_moments(r.calE, r.mu2, r.mu4, r.mu6, 20);
    const auto s = bound_series(seq, 8);
    CHECK(s.entries.front().lambda_min == doctest::Approx(0.7651830316).epsilon(1e-3));
    for (std::size_t i = 1; i < s.entries.size(); ++i)
        CHECK(s.entries[i].lambda_min <= s.entries[i - 1].lambda_min + 1e-12);
}

TEST_CASE("Barta scan infimum is a lower bound")
{
    const auto sol = integrate_pt<double>(kCalE);
    const auto scan = pt_barta_scan(sol, 4.0, 2001);
    CHECK(scan.infimum < kCalE);
    CHECK(std::abs(scan.argmin) <= 4.0);
}

TEST_CASE("oracle options are validated")
{
    PtOracleOptions o;
    o.rel_tol = 0.5;
    CHECK_THROWS(integrate_pt<double>(kCalE, o));
}
