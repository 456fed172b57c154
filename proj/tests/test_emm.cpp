#include <doctest.h>

#include "momentbounds/emm.hpp"
#include "momentbounds/errors.hpp"
#include "momentbounds/gep.hpp"

using namespace momentbounds;

TEST_CASE("polytope shape")
{
    const auto poly = build_polytope(12, 2.0);
    CHECK(poly.max_order == 12);
    CHECK(poly.parameter_count() >= 1);
    CHECK(poly.moment_scale.size() == 13);
    CHECK_THROWS_AS(build_polytope(4, 2.0), ConfigError);
    const auto emm = build_emm_polytope(12, 1.06);
    CHECK(emm.moment_equation);
    CHECK(emm.parameter_count() == 2);
    CHECK(build_emm_polytope(12, 1.06, {true, 1e-8}).parameter_count() == 4);
}

TEST_CASE("lower-cut verdicts at Q = 12")
{
    const auto poly = build_polytope(12, 2.0);
    CutPool pool;
    const auto a = feasible_point(poly, 0.9, CutMode::LowerCut, &pool);
    CHECK(a.verdict == Verdict::Feasible);
    CHECK(certificate_margin(poly, a.witness, 0.9, CutMode::LowerCut) >= poly.epsilon / 2);
    CHECK(a.witness_hash == hash_moments(a.witness));
    CHECK(feasible_point(poly, 1.2, CutMode::LowerCut, &pool).verdict == Verdict::Infeasible);
    CHECK(feasible_point(poly, -1e6, CutMode::LowerCut, &pool).verdict == Verdict::Feasible);
}

TEST_CASE("feasible witness is a valid trial for the pair")
{
    const auto poly = build_polytope(12, 2.0);
    const auto r = feasible_point(poly, 0.8, CutMode::LowerCut);
    REQUIRE(r.verdict == Verdict::Feasible);
    MomentSequence<double> seq;
    seq.values.assign(r.witness.data(), r.witness.data() + r.witness.size());
    seq.parity_even = true;
    const auto ex = extremal_eigenvalues(build_pair(seq, 4));
    CHECK(ex.lambda_min >= 0.8 - 1e-6);
}

TEST_CASE("moments-only verdicts of classic EMM")
{
    const auto lo = build_emm_polytope(12, 0.5);
    const auto mid = build_emm_polytope(12, 1.06);
    CHECK(feasible_point(lo, 0, CutMode::MomentsOnly).verdict == Verdict::Infeasible);
    const auto r = feasible_point(mid, 0, CutMode::MomentsOnly);
    REQUIRE(r.verdict == Verdict::Feasible);
    CHECK(certificate_margin(mid, r.witness, 0, CutMode::MomentsOnly) >= mid.epsilon / 2);
}

TEST_CASE("bisection rejects a bracket with wrong endpoint verdicts")
{
    const auto poly = build_polytope(12, 2.0);
    CHECK_THROWS_AS(bisect_sup_lambda_min(poly, {1.2, 1.5}, 1e-3), ConfigError);
}

TEST_CASE("interval record enforces ordering")
{
    FeasibilityInterval iv;
    iv.target = IntervalTarget::SupLambdaMin;
    ProbeRecord f, i;
    f.verdict = Verdict::Feasible;
    f.at = 1.0;
    i.verdict = Verdict::Infeasible;
    i.at = 0.5;
    iv.record(f);
    CHECK_THROWS_AS(iv.record(i), InvariantViolation);
}

TEST_CASE("bounds at Q = 12 bracket the ground state and nest")
{
    const double E = 1.060362090484;
    const auto t4 = theorem4_bounds(12, 2.0, 1e-4);
    const auto emm = emm_energy_bounds(12, 1e-4);
    CHECK(t4.lower() <= E);
    CHECK(E <= t4.upper());
    CHECK(emm.first <= E);
    CHECK(E <= emm.second);
    CHECK(t4.inf_lambda_max.lo <= emm.first + 1e-3);
    CHECK(emm.second <= t4.sup_lambda_min.hi + 1e-3);
}

TEST_CASE("property: certificate soundness over a lambda sweep")
{
    const auto poly = build_polytope(10, 2.0);
    CutPool lower, upper;
    for (double lam = 0.0; lam <= 1.5; lam += 0.1) {
        for (auto mode : {CutMode::LowerCut, CutMode::UpperCut}) {
            const auto r = feasible_point(poly, lam, mode, mode == CutMode::LowerCut ? &lower : &upper);
            if (r.verdict == Verdict::Feasible)
                CHECK(certificate_margin(poly, r.witness, lam, mode) >= poly.epsilon / 2);
        }
    }
}
