#include <doctest.h>

#include "momentbounds/hankel.hpp"

using namespace momentbounds;

TEST_CASE("hankel entries and stride")
{
    std::vector<double> mu{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const auto h = hankel_from_values(mu, 0, 2);
    CHECK(h.entries(1, 2) == 4);
    CHECK(h.entries(2, 2) == 5);
    const auto s = hankel_from_values(mu, 2, 1, 2);
    CHECK(s.entries(0, 0) == 3);
    CHECK(s.entries(0, 1) == 5);
    CHECK(s.entries(1, 1) == 7);
    CHECK(s.source_max_moment() == 6);
    CHECK_THROWS(hankel_from_values(mu, 2, 4));
}

TEST_CASE("gaussian Hankel matrices are positive definite")
{
    const auto seq = generate_gaussian_moments<double>(16);
    for (int N = 0; N <= 4; ++N) {
        const auto rep = check_positivity(build_hankel(seq, 0, N, 2));
        CHECK(rep.is_positive_definite);
        CHECK(rep.minors_positive());
    }
}

TEST_CASE("indefinite matrix yields a witness")
{
    std::vector<double> mu{1, 0, 0.5, 0, 0.1};
    const auto rep = check_positivity(hankel_from_values(mu, 0, 1, 2));
    CHECK_FALSE(rep.is_positive_definite);
    REQUIRE(rep.witness_vector.size() == 2);
    const auto H = hankel_from_values(mu, 0, 1, 2).entries;
    CHECK(rep.witness_vector.dot(H * rep.witness_vector) < 0);
}

TEST_CASE("scaled check is invariant under diagonal scaling")
{
    Eigen::MatrixXd M(2, 2);
    M << 1e6, 1e2, 1e2, 1e-2;
    const auto a = check_positivity_scaled(M, 1e-12);
    Eigen::MatrixXd D = Eigen::Vector2d(1e-3, 1e1).asDiagonal();
    const auto b = check_positivity_scaled(Eigen::MatrixXd(D * M * D), 1e-12);
    CHECK(a.is_positive_definite == b.is_positive_definite);
    CHECK(a.min_eigenvalue == doctest::Approx(b.min_eigenvalue));
}
