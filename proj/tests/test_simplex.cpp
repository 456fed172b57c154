#include <doctest.h>

#include "momentbounds/simplex.hpp"

#include <random>

using namespace momentbounds;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Vertex enumeration over box corners and row intersections in two variables.
double brute_force_2d(const LinearProgram<double>& lp, bool& feasible)
{
    std::vector<Eigen::Vector3d> lines; // a x + b y = c
    for (int i = 0; i < lp.A.rows(); ++i)
        lines.emplace_back(lp.A(i, 0), lp.A(i, 1), lp.b(i));
    lines.emplace_back(1, 0, lp.lower(0));
    lines.emplace_back(1, 0, lp.upper(0));
    lines.emplace_back(0, 1, lp.lower(1));
    lines.emplace_back(0, 1, lp.upper(1));
    double best = -std::numeric_limits<double>::infinity();
    feasible = false;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            Eigen::Matrix2d M;
            M << lines[i](0), lines[i](1), lines[j](0), lines[j](1);
            if (std::abs(M.determinant()) < 1e-12)
                continue;
            const Eigen::Vector2d x = M.partialPivLu().solve(Eigen::Vector2d(lines[i](2), lines[j](2)));
            if ((x.array() < lp.lower.array() - 1e-9).any() || (x.array() > lp.upper.array() + 1e-9).any())
                continue;
            if (((lp.A * x - lp.b).array() > 1e-9).any())
                continue;
            feasible = true;
            best = std::max(best, lp.c.dot(x));
        }
    return best;
}

} // namespace

TEST_CASE("small LP")
{
    LinearProgram<double> lp;
    lp.A.resize(2, 2);
    lp.A << 1, 1, 1, -1;
    lp.b = VectorXd::Constant(2, 1);
    lp.c = Eigen::Vector2d(1, 2);
    lp.lower = VectorXd::Zero(2);
    lp.upper = VectorXd::Constant(2, 10);
    const auto r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(2));
}

TEST_CASE("infeasible and unbounded")
{
    LinearProgram<double> lp;
    lp.A.resize(1, 1);
    lp.A << 1;
    lp.b = VectorXd::Constant(1, -1);
    lp.c = VectorXd::Constant(1, 1);
    lp.lower = VectorXd::Zero(1);
    lp.upper = VectorXd::Constant(1, 5);
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);

    lp.A << -1;
    lp.b << 0;
    lp.upper << std::numeric_limits<double>::infinity();
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("Beale's cycling example terminates at the optimum")
{
    LinearProgram<double> lp;
    lp.A.resize(3, 4);
    lp.A << 0.25, -60, -1.0 / 25, 9, 0.5, -90, -1.0 / 50, 3, 0, 0, 1, 0;
    lp.b = Eigen::Vector3d(0, 0, 1);
    lp.c = Eigen::Vector4d(0.75, -150, 1.0 / 50, -6);
    lp.lower = VectorXd::Zero(4);
    lp.upper = VectorXd::Constant(4, std::numeric_limits<double>::infinity());
    const auto r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(0.05));
}

TEST_CASE("property: agrees with vertex enumeration on random 2D boxes")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 200; ++t) {
        LinearProgram<double> lp;
        const int m = 1 + t % 5;
        lp.A.resize(m, 2);
        lp.b.resize(m);
        for (int i = 0; i < m; ++i) {
            lp.A(i, 0) = u(rng);
            lp.A(i, 1) = u(rng);
            lp.b(i) = u(rng);
        }
        lp.c = Eigen::Vector2d(u(rng), u(rng));
        lp.lower = Eigen::Vector2d(-1 - std::abs(u(rng)), -1 - std::abs(u(rng)));
        lp.upper = Eigen::Vector2d(1 + std::abs(u(rng)), 1 + std::abs(u(rng)));
        bool feasible = false;
        const double best = brute_force_2d(lp, feasible);
        const auto r = solve_lp(lp);
        if (!feasible) {
            CHECK(r.status == LpStatus::Infeasible);
            continue;
        }
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(best).epsilon(1e-7));
        CHECK(((lp.A * r.x - lp.b).array() <= 1e-8).all());
    }
}
