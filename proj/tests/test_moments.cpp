#include <doctest.h>

#include "momentbounds/errors.hpp"
#include "momentbounds/moments.hpp"

#include <cmath>
#include <filesystem>

using namespace momentbounds;

TEST_CASE("gaussian moments follow (2n-1)!!/2^n")
{
    const auto seq = generate_gaussian_moments<double>(10);
    double expected = 1;
    for (int p = 0; p <= 10; p += 2) {
        CHECK(seq[p] == doctest::Approx(expected));
        expected *= (p + 1) / 2.0;
    }
    CHECK(seq.parity_even);
    CHECK_THROWS_AS(generate_gaussian_moments<double>(7), ConfigError);
}

TEST_CASE("quartic recursion reproduces the moment equation")
{
    const double E = 1.06, mu2 = 0.36;
    const auto seq = generate_quartic_sequence(E, 1.0, mu2, 20);
    CHECK(seq[4] == doctest::Approx(E));
    for (int p = 2; p + 4 <= 20; p += 2)
        CHECK(seq[p + 4] == doctest::Approx(E * seq[p] + p * (p - 1) * seq[p - 2]));
    CHECK_THROWS_AS(generate_quartic_sequence(E, 0.0, mu2, 8), ConfigError);
}

TEST_CASE("harmonic Stieltjes sequence at E = 1 equals (2r-1)!!")
{
    const auto seq = generate_harmonic_stieltjes<double>(1.0, 8);
    double expected = 1;
    for (int r = 0; r <= 8; ++r) {
        CHECK(seq[r] == doctest::Approx(expected));
        expected *= 2.0 * r + 1;
    }
}

TEST_CASE("PT density recursion")
{
    const double calE = 1.1562670719881133, mu2 = 0.518, mu4 = 0.765, mu6 = 1.808;
    const auto seq = generate_pt_density_moments(calE, mu2, mu4, mu6, 20);
    for (int p = 3; p + 7 <= 20; ++p)
        CHECK(4 * seq[p + 7]
              == doctest::Approx((p + 4.0) * p * (p - 1) * (p - 2) * seq.at_or_zero(p - 3)
                                 + 4 * calE * p * (p + 4.0) * seq[p - 1]));
    CHECK(seq[8] == doctest::Approx(5 * calE));
}

TEST_CASE("scaling and truncation")
{
    const auto seq = generate_gaussian_moments<double>(12);
    const auto s = scaled(seq, 1e3);
    for (int p = 0; p <= 12; ++p)
        CHECK(s[p] == doctest::Approx(1e3 * seq[p]));
    CHECK(truncated(seq, 6).max_order() == 6);
    CHECK_THROWS(truncated(seq, 14));
}

TEST_CASE("moment files round trip")
{
    const auto seq = generate_quartic_sequence(1.06036209048, 1.0, 0.36, 18);
    const auto path = (std::filesystem::temp_directory_path() / "mb_roundtrip.moments").string();
    save_moments(seq, path);
    const auto back = load_moments<double>(path);
    REQUIRE(back.max_order() == seq.max_order());
    for (int p = 0; p <= seq.max_order(); ++p)
        CHECK(back[p] == seq[p]);
    CHECK(back.parity_even == seq.parity_even);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(parse_moments<double>("not a moment file"), Error);
}
