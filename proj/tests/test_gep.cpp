#include <doctest.h>

#include "momentbounds/errors.hpp"
#include "momentbounds/gep.hpp"

#include <random>

using namespace momentbounds;

TEST_CASE("gaussian trial lambda_min, dimensions 1 to 8")
{
    const double expected[] = {0.75, -0.25, -0.25, -0.45810, -0.82522, -0.82522, -1.06261, -1.06261};
    const auto series = bound_series(generate_gaussian_moments<double>(18), 7);
    REQUIRE(series.entries.size() == 8);
    for (int i = 0; i < 8; ++i)
        CHECK(series.entries[i].lambda_min == doctest::Approx(expected[i]).epsilon(1e-4));
}

TEST_CASE("dimension 1 pair is the scalar Rayleigh quotient")
{
    const auto seq = generate_quartic_sequence(1.3, 1.0, 0.4, 8);
    const auto pair = build_pair(seq, 0);
    CHECK(pair.H(0, 0) == doctest::Approx(seq[4]));
    CHECK(pair.U(0, 0) == doctest::Approx(seq[0]));
    const auto ex = extremal_eigenvalues(pair);
    CHECK(ex.lambda_min == doctest::Approx(1.3));
    CHECK(ex.lambda_max == doctest::Approx(1.3));
}

TEST_CASE("high precision agrees with double on the gaussian trial")
{
    PrecisionScope scope(50);
    const auto hp = bound_series(generate_gaussian_moments<HighPrecision>(18), 7);
    const auto d = bound_series(generate_gaussian_moments<double>(18), 7);
    for (std::size_t i = 0; i < d.entries.size(); ++i)
        CHECK(static_cast<double>(hp.entries[i].lambda_min) == doctest::Approx(d.entries[i].lambda_min));
}

TEST_CASE("moment-equation sequence collapses the spectrum")
{
    const auto rep = verify_theorem2<double>(1.060362090484, 1.0, 0.6, 3, 1e-10);
    CHECK(rep.degenerate);
    CHECK(rep.max_deviation < 1e-10);
}

TEST_CASE("non-positive U is rejected")
{
    auto seq = generate_gaussian_moments<double>(10);
    seq.values[2] = -1;
    CHECK_THROWS_AS(build_pair(seq, 1), Error);
}

TEST_CASE("property: lambda_min nonincreasing and lambda_max nondecreasing in N")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> var(0.3, 3.0);
    for (int t = 0; t < 10; ++t) {
        const double v = var(rng);
        auto seq = generate_gaussian_moments<double>(16);
        double f = 1;
        for (int p = 0; p <= 16; p += 2, f *= v)
            seq.values[p] *= f;
        const auto s = bound_series(seq, 6);
        for (std::size_t i = 1; i < s.entries.size(); ++i) {
            CHECK(s.entries[i].lambda_min <= s.entries[i - 1].lambda_min + 1e-12);
            CHECK(s.entries[i].lambda_max >= s.entries[i - 1].lambda_max - 1e-12);
        }
    }
}

TEST_CASE("property: quasi-convexity along segments")
{
    const auto a = generate_gaussian_moments<double>(8);
    auto b = a;
    for (int p = 0; p <= 8; p += 2)
        b.values[p] *= std::pow(2.0, p / 2);
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i)
        grid.push_back(i / 10.0);
    const auto rep = quasiconvexity_probe<double>(a, b, 2, grid, 1e-9);
    CHECK(rep.holds);
}
