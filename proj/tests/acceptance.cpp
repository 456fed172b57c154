// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.
#include "config.hpp"
#include "run.hpp"

#include "momentbounds/emm.hpp"
#include "momentbounds/errors.hpp"
#include "momentbounds/gep.hpp"
#include "momentbounds/pade.hpp"
#include "momentbounds/pt_oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace momentbounds;
using namespace momentbounds::cli;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            pass = false;
            detail << " [" << what << "]";
        }
    }
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::vector<double> lambda_column(const Table& t)
{
    std::vector<double> v;
    for (const auto& row : t.rows)
        v.push_back(std::stod(row.back()));
    return v;
}

bool nonincreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + 1e-12)
            return false;
    return true;
}

void criterion1(Outcome& o)
{
    const double expected[] = {0.75000, -0.25000, -0.25000, -0.45810, -0.82522, -0.82522, -1.06261, -1.06261};
    RunConfig c;
    c.command = Command::BartaSeries;
    c.max_dim = 8;
    std::ostringstream log;
    const auto t0 = Clock::now();
    const auto lam = lambda_column(build_table(c, log));
    const double dt = seconds_since(t0);
    double worst = 0;
    o.require(lam.size() == 8, "8 rows");
    for (std::size_t i = 0; i < lam.size() && i < 8; ++i)
        worst = std::max(worst, std::abs(lam[i] - expected[i]));
    o.require(worst <= 1e-4, "max error " + fmt(worst, 7));
    o.require(dt < 1, "runtime " + fmt(dt, 2) + " s");
    o.detail << " max error " << fmt(worst, 7) << ", " << fmt(dt, 3) << " s";
}

void criterion2(Outcome& o)
{
    RunConfig c;
    c.command = Command::BartaSeries;
    c.max_dim = 30;
    c.precision = 50;
    std::ostringstream log;
    const auto t0 = Clock::now();
    const auto lam = lambda_column(build_table(c, log));
    const double dt = seconds_since(t0);
    o.require(lam.size() == 30, "30 rows");
    if (lam.size() == 30) {
        const double e21 = std::abs(lam[20] + 1.56786), e30 = std::abs(lam[29] + 1.68637);
        o.require(e21 <= 1e-4, "dim 21 error " + fmt(e21, 7));
        o.require(e30 <= 1e-4, "dim 30 error " + fmt(e30, 7));
        o.detail << " dim 21 " << fmt(lam[20]) << ", dim 30 " << fmt(lam[29]);
    }
    o.require(std::all_of(lam.begin(), lam.end(), [](double x) { return x >= -2; }), "values >= -2");
    o.require(nonincreasing(lam), "nonincreasing");
    o.require(dt < 120, "runtime " + fmt(dt, 1) + " s");
    o.detail << ", " << fmt(dt, 2) << " s";
}

void criterion3(Outcome& o)
{
    const double E = kQuarticGroundState;
    const auto t0 = Clock::now();
    const auto choices = pd_compatible_mu2(E, 3, 3);
    double worst = 0;
    for (double mu2 : choices) {
        const auto rep = verify_theorem2<double>(E, 1.0, mu2, 3, 1e-10);
        worst = std::max(worst, rep.max_deviation);
        o.require(rep.degenerate, "mu2 = " + fmt(mu2));
    }
    const double dt = seconds_since(t0);
    o.require(choices.size() == 3, "three choices");
    o.require(worst <= 1e-10, "deviation " + std::to_string(worst));
    o.require(dt < 1, "runtime");
    o.detail << " max deviation " << worst << ", " << fmt(dt, 3) << " s";
}

void criterion4(Outcome& o)
{
    const int pstar[] = {6, 8, 12};
    const double reference[][2] = {{0.934, 1.170}, {1.027, 1.080}, {1.0602, 1.0613}};
    const auto t0 = Clock::now();
    const auto emm = emm_energy_sequence(24, 1e-4);
    for (int i = 0; i < 3; ++i) {
        const auto t4 = theorem4_bounds(2 * pstar[i], 2.0, 1e-4);
        const double dl = std::abs(t4.lower() - reference[i][0]), du = std::abs(t4.upper() - reference[i][1]);
        o.require(dl <= 0.002, "P*=" + std::to_string(pstar[i]) + " lower " + fmt(t4.lower(), 4) + " vs "
                                   + fmt(reference[i][0], 4));
        o.require(du <= 0.002, "P*=" + std::to_string(pstar[i]) + " upper " + fmt(t4.upper(), 4) + " vs "
                                   + fmt(reference[i][1], 4));
        std::string detail = "missing EMM order";
        bool ok = false;
        for (const auto& e : emm)
            if (e.Q == 2 * pstar[i])
                ok = sandwich_holds(t4, e, kQuarticGroundState, detail);
        o.require(ok, "sandwich P*=" + std::to_string(pstar[i]) + ": " + detail);
        o.detail << " P*=" << pstar[i] << " (" << fmt(t4.lower(), 4) << ", " << fmt(t4.upper(), 4) << ")";
    }
    const double dt = seconds_since(t0);
    o.require(dt < 600, "runtime");
    o.detail << ", " << fmt(dt, 2) << " s";
}

void criterion5(Outcome& o)
{
    const auto seq = emm_energy_sequence(24, 1e-4);
    const std::pair<int, std::pair<double, double>> reference[] = {{12, {0.934, 1.150}}, {24, {1.0602, 1.0610}}};
    for (const auto& [Q, bounds] : reference) {
        bool found = false;
        for (const auto& e : seq) {
            if (e.Q != Q)
                continue;
            found = true;
            o.require(std::abs(e.lower() - bounds.first) <= 0.002, "P*=" + std::to_string(Q / 2) + " lower");
            o.require(std::abs(e.upper() - bounds.second) <= 0.002, "P*=" + std::to_string(Q / 2) + " upper");
            o.detail << " P*=" << Q / 2 << " (" << fmt(e.lower(), 4) << ", " << fmt(e.upper(), 4) << ")";
        }
        o.require(found, "order " + std::to_string(Q));
    }
}

void criterion6(Outcome& o)
{
    RunConfig c;
    c.command = Command::PtSeries;
    c.max_q = 60;
    c.precision = 50;
    std::ostringstream log;
    const Table t = build_table(c, log);
    const auto lam = lambda_column(t);
    o.require(lam.size() == 29, "29 rows");
    if (!lam.empty()) {
        const double e4 = std::abs(lam.front() - 0.7651830316), e60 = std::abs(lam.back() + 1.5882508326);
        o.require(e4 <= 1e-3, "Q=4 error " + fmt(e4, 7));
        o.require(e60 <= 5e-2, "Q=60 error " + fmt(e60, 7));
        o.detail << " Q=4 error " << e4 << ", Q=60 error " << e60;
    }
    o.require(nonincreasing(lam), "nonincreasing");
    const double inf = std::stod(t.meta["barta_infimum"].get<std::string>());
    o.require(std::abs(inf + 1.782) <= 0.01, "Barta infimum " + fmt(inf, 5) + " vs -1.782");
    o.detail << ", Barta infimum " << fmt(inf, 5);
}

void criterion7(Outcome& o)
{
    for (const char* name : {"quasiconvexity", "root-equivalence", "scale-invariance", "certificates"}) {
        const SuiteResult r = run_suite(name, 1);
        o.require(r.passed, std::string(name) + ": " + r.detail);
        o.detail << " " << name << " " << (r.passed ? "ok" : "failed") << ";";
    }
}

void criterion8(Outcome& o)
{
    PadeInterval prev;
    for (int Q = 3; Q <= 12; ++Q) {
        const auto iv = pade_energy_interval(Q, 1e-5);
        o.require(iv.lower <= 1 && 1 <= iv.upper, "Q=" + std::to_string(Q) + " excludes E=1");
        if (Q > 3) {
            const bool inside = iv.lower >= prev.lower && iv.upper <= prev.upper;
            const bool smaller = iv.lower > prev.lower || iv.upper < prev.upper;
            o.require(inside && smaller, "Q=" + std::to_string(Q) + " does not shrink");
        }
        const auto n = check_nesting(pade_table(1.0, Q));
        o.require(n.holds, "nesting at Q=" + std::to_string(Q) + ": " + n.violation);
        prev = iv;
    }
    o.detail << " Q=12 interval [" << fmt(prev.lower) << ", " << fmt(prev.upper) << "]";
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"1 gaussian lambda_min, 64-bit", criterion1},
        {"2 gaussian lambda_min, extended precision", criterion2},
        {"3 degeneracy at the ground state", criterion3},
        {"4 lambda-cut bounds and sandwich", criterion4},
        {"5 EMM bounds", criterion5},
        {"6 PT series and Barta infimum", criterion6},
        {"7 property suites", criterion7},
        {"8 Pade intervals and nesting", criterion8},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failed += !o.pass;
        std::printf("%s criterion %s:%s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
