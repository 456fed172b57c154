#include "run.hpp"

#include "momentbounds/errors.hpp"
#include "momentbounds/gep.hpp"
#include "momentbounds/io.hpp"
#include "momentbounds/pade.hpp"
#include "momentbounds/pt_oracle.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace momentbounds::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string short_num(double x)
{
    std::ostringstream os;
    os.precision(8);
    os << x;
    return os.str();
}

bool cache_present(const RunConfig& c)
{
    return !c.moments_cache.empty() && std::filesystem::exists(c.moments_cache);
}

template <class S>
MomentSequence<S> from_cache(const RunConfig& c, int Q, std::ostream& log)
{
    MomentSequence<S> seq = load_moments<S>(c.moments_cache);
    if (seq.max_order() < Q)
        throw ConfigError("moment cache " + c.moments_cache + " holds order " + std::to_string(seq.max_order())
                          + ", need " + std::to_string(Q));
    log << "loaded moments from " << c.moments_cache << "\n";
    return truncated(seq, Q);
}

template <class S>
void to_cache(const RunConfig& c, const MomentSequence<S>& seq, std::ostream& log)
{
    if (c.moments_cache.empty())
        return;
    save_moments(seq, c.moments_cache);
    log << "wrote moments to " << c.moments_cache << "\n";
}

template <class S>
Table barta_table(const RunConfig& c, std::ostream& log)
{
    const int N_max = c.max_dim - 1;
    const int Q = 2 * N_max + 4;
    MomentSequence<S> seq;
    if (cache_present(c)) {
        seq = from_cache<S>(c, Q, log);
    } else {
        seq = c.trial == Trial::Gaussian
                  ? generate_gaussian_moments<S>(Q)
                  : generate_quartic_sequence<S>(S(c.energy), S(1), S(c.mu2), Q);
        to_cache(c, seq, log);
    }
    const BoundSeries<S> series = bound_series(seq, N_max, GepOptions{}, to_string(c.trial));

    Table t{"barta-series", kBartaColumns};
    t.meta["trial"] = to_string(c.trial);
    t.meta["precision"] = c.precision;
    Json escalated = Json::array();
    for (const auto& e : series.entries) {
        t.add_row({std::to_string(e.dimension()), std::to_string(e.max_moment()),
                   cell(static_cast<double>(e.lambda_min))});
        if (e.escalated)
            escalated.push_back(e.dimension());
    }
    t.meta["escalated_dims"] = escalated;
    if (!escalated.empty())
        log << "note: " << escalated.size() << " dimension(s) escalated to extended precision\n";
    return t;
}

template <class S>
Table pt_table(const RunConfig& c, std::ostream& log)
{
    Table t{"pt-series", kPtColumns};
    t.meta["cal_e"] = c.cal_e;
    t.meta["precision"] = c.precision;
    const int Q = std::max(c.max_q, 8);
    MomentSequence<S> seq;
    if (cache_present(c)) {
        seq = from_cache<S>(c, Q, log);
    } else {
        PtOracleOptions o;
        o.rel_tol = std::max(c.ode_tolerance, 100 * static_cast<double>(machine_epsilon<S>()));
        o.taylor_order = c.taylor_order;
        const PtOracleResult<S> r = solve_pt_missing_moments<S>(S(c.cal_e), o);
        const int digits = std::min<int>(static_cast<int>(c.precision), 40);
        t.meta["mu2"] = format_decimal(r.mu2, digits);
        t.meta["mu4"] = format_decimal(r.mu4, digits);
        t.meta["mu6"] = format_decimal(r.mu6, digits);
        t.meta["mu8_relative_residual"] = short_num(static_cast<double>(r.mu8_relative_residual));
        t.meta["oracle_grid_points"] = r.grid_points;
        log << "PT oracle: mu2 = " << format_decimal(r.mu2, 16) << ", mu4 = " << format_decimal(r.mu4, 16)
            << ", mu6 = " << format_decimal(r.mu6, 16) << ", mu8 residual "
            << short_num(static_cast<double>(r.mu8_relative_residual)) << "\n";
        seq = generate_pt_density_moments<S>(r.calE, r.mu2, r.mu4, r.mu6, Q);
        to_cache(c, seq, log);
    }
    const BoundSeries<S> series = bound_series(truncated(seq, c.max_q), (c.max_q - 4) / 2, GepOptions{}, "pt-density");
    for (const auto& e : series.entries)
        t.add_row({std::to_string(e.max_moment()), cell(static_cast<double>(e.lambda_min))});

    PtOracleOptions scan_opts;
    scan_opts.rel_tol = std::max(c.ode_tolerance, 100 * machine_epsilon<double>());
    scan_opts.taylor_order = c.taylor_order;
    const PtSolution<double> sol = integrate_pt<double>(c.cal_e, scan_opts);
    const BartaScan<double> scan = pt_barta_scan(sol, c.barta_half_width, c.barta_points);
    t.meta["barta_infimum"] = short_num(scan.infimum);
    t.meta["barta_argmin"] = short_num(scan.argmin);
    log << "Barta scan: infimum " << short_num(scan.infimum) << " at x = " << short_num(scan.argmin) << "\n";
    return t;
}

struct AuditLog {
    std::ostringstream lines;

    std::function<void(const ProbeRecord&)> hook(const std::string& kind)
    {
        return [this, kind](const ProbeRecord& r) {
            Json j;
            j["kind"] = kind;
            j["Q"] = r.order;
            j["mode"] = to_string(r.mode);
            j["at"] = r.at;
            j["verdict"] = to_string(r.verdict);
            j["cuts"] = r.cuts_added;
            j["lp_solves"] = r.lp_solves;
            if (r.verdict == Verdict::Feasible) {
                j["witness_hash"] = hex64(r.witness_hash);
                j["min_scaled_eigenvalue"] = r.min_scaled_eigenvalue;
                j["witness"] = std::vector<double>(r.witness.data(), r.witness.data() + r.witness.size());
            }
            lines << j.dump() << "\n";
        };
    }
};

Table theorem4_table(const RunConfig& c, AuditLog& audit, std::ostream& log)
{
    Table t{"theorem4-bounds", kBoundsColumns};
    t.meta["epub"] = c.epub;
    t.meta["epsilon"] = c.epsilon;
    Json detail = Json::array();
    CuttingOptions co;
    co.max_cuts = c.max_cuts;
    co.audit = audit.hook("theorem4");
    PolytopeOptions po;
    po.epsilon = c.epsilon;
    for (int p : c.pstar) {
        const Theorem4Bounds b = theorem4_bounds(2 * p, c.epub, c.tolerance, co, po);
        t.add_row({std::to_string(p), cell(b.lower()), cell(b.upper())});
        Json d;
        d["pstar"] = p;
        d["Q"] = b.Q;
        d["inf_lambda_max"] = {b.inf_lambda_max.lo, b.inf_lambda_max.hi};
        d["sup_lambda_min"] = {b.sup_lambda_min.lo, b.sup_lambda_min.hi};
        d["cuts"] = b.total_cuts;
        detail.push_back(d);
        log << "P*=" << p << ": [" << cell(b.lower(), 6) << ", " << cell(b.upper(), 6) << "] with "
            << b.total_cuts << " cuts\n";
    }
    t.meta["orders"] = detail;
    return t;
}

Table emm_table(const RunConfig& c, AuditLog& audit, std::ostream& log)
{
    Table t{"emm-bounds", kBoundsColumns};
    t.meta["epsilon"] = c.epsilon;
    EmmOptions eo;
    eo.cutting.max_cuts = c.max_cuts;
    eo.cutting.audit = audit.hook("emm");
    eo.polytope.epsilon = c.epsilon;
    const int q_max = 2 * *std::max_element(c.pstar.begin(), c.pstar.end());
    const int q_min = 2 * *std::min_element(c.pstar.begin(), c.pstar.end());
    eo.start_order = std::min(eo.start_order, q_min);
    const std::vector<EmmOrderResult> seq = emm_energy_sequence(q_max, c.tolerance, eo);
    Json detail = Json::array();
    for (int p : c.pstar) {
        auto it = std::find_if(seq.begin(), seq.end(), [&](const EmmOrderResult& r) { return r.Q == 2 * p; });
        if (it == seq.end())
            throw NumericalError("EMM continuation did not reach Q = " + std::to_string(2 * p));
        t.add_row({std::to_string(p), cell(it->lower()), cell(it->upper())});
        Json d;
        d["pstar"] = p;
        d["Q"] = it->Q;
        d["lower_edge"] = {it->lower_edge.lo, it->lower_edge.hi};
        d["upper_edge"] = {it->upper_edge.lo, it->unbounded_above ? "inf" : Json(it->upper_edge.hi)};
        detail.push_back(d);
        log << "P*=" << p << ": [" << cell(it->lower(), 6) << ", " << cell(it->upper(), 6) << "]\n";
    }
    t.meta["orders"] = detail;
    return t;
}

Table pade_table_for(const RunConfig& c, std::ostream& log)
{
    Table t{"pade-bounds", kPadeColumns};
    Json skipped = Json::object();
    for (int q = c.pade_min_q; q <= c.pade_max_q; ++q) {
        const PadeInterval iv = pade_energy_interval(q, c.tolerance);
        t.add_row({std::to_string(q), cell(iv.lower), cell(iv.upper)});
        if (iv.skipped_probes > 0)
            skipped[std::to_string(q)] = iv.skipped_probes;
        if (iv.upper_open)
            log << "Q=" << q << ": upper edge lies beyond the scanned range\n";
    }
    t.meta["skipped_probes"] = skipped;
    return t;
}

Table verify_table(const RunConfig& c, std::ostream& log)
{
    std::vector<std::string> names;
    if (c.suite == "all") {
        names = suite_names();
    } else {
        const auto all = suite_names();
        if (std::find(all.begin(), all.end(), c.suite) == all.end()) {
            std::string list;
            for (const auto& n : all)
                list += " " + n;
            throw ConfigError("unknown suite '" + c.suite + "'; available:" + list);
        }
        names = {c.suite};
    }
    Table t{"verify", kVerifyColumns};
    t.meta["seed"] = c.seed;
    for (const auto& n : names) {
        const SuiteResult r = run_suite(n, c.seed);
        t.add_row({r.name, r.passed ? "pass" : "fail", r.detail});
        log << (r.passed ? "pass " : "FAIL ") << r.name << ": " << r.detail << "\n";
    }
    return t;
}

// ---------------------------------------------------------------------------
// Suites

SuiteResult suite_monotonicity(std::uint64_t seed)
{
    SuiteResult r{"monotonicity", true, ""};
    try {
        const auto g = bound_series(generate_gaussian_moments<double>(18), 7);
        std::mt19937_64 rng(seed);
        int trials = 0;
        for (; trials < 20; ++trials)
            bound_series(random_positive_trial(rng, 14), 5);
        r.detail = "gaussian to dim 8 and " + std::to_string(trials) + " random trials monotone";
    } catch (const Error& e) {
        r.passed = false;
        r.detail = e.what();
    }
    return r;
}

SuiteResult suite_degeneracy(std::uint64_t)
{
    SuiteResult r{"degeneracy", true, ""};
    const double E = kQuarticGroundState;
    double worst = 0;
    for (double mu2 : pd_compatible_mu2(E, 3, 3)) {
        const auto rep = verify_theorem2<double>(E, 1.0, mu2, 3, 1e-10);
        worst = std::max(worst, rep.max_deviation);
        if (!rep.degenerate) {
            r.passed = false;
            r.detail = "mu2 = " + short_num(mu2) + " deviates by " + short_num(rep.max_deviation);
            return r;
        }
    }
    r.detail = "max deviation " + short_num(worst);
    return r;
}

SuiteResult suite_quasiconvexity(std::uint64_t seed)
{
    SuiteResult r{"quasiconvexity", true, ""};
    std::mt19937_64 rng(seed);
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i)
        grid.push_back(i / 20.0);
    int pairs = 0, gaps = 0;
    for (; pairs < 100; ++pairs) {
        const auto a = random_positive_trial(rng, 8);
        const auto b = random_positive_trial(rng, 8);
        const auto rep = quasiconvexity_probe<double>(a, b, 2, grid, 1e-9);
        gaps += rep.domain_gaps;
        if (!rep.holds) {
            r.passed = false;
            r.detail = "pair " + std::to_string(pairs) + " violates the envelope";
            return r;
        }
    }
    r.detail = std::to_string(pairs) + " pairs, " + std::to_string(gaps) + " domain gaps";
    return r;
}

SuiteResult suite_scale_invariance(std::uint64_t seed)
{
    SuiteResult r{"scale-invariance", true, ""};
    std::mt19937_64 rng(seed);
    std::vector<MomentSequence<double>> seqs{generate_gaussian_moments<double>(10)};
    for (int i = 0; i < 5; ++i)
        seqs.push_back(random_positive_trial(rng, 10));
    double worst = 0;
    for (const auto& s : seqs) {
        const auto base = extremal_eigenvalues(build_pair(s, 3));
        for (double c : {1e-3, 1.0, 1e3}) {
            const auto e = extremal_eigenvalues(build_pair(scaled(s, c), 3));
            worst = std::max({worst,
                              std::abs(e.lambda_min - base.lambda_min) / (1 + std::abs(base.lambda_min)),
                              std::abs(e.lambda_max - base.lambda_max) / (1 + std::abs(base.lambda_max))});
        }
    }
    r.passed = worst <= 1e-10;
    r.detail = "max relative change " + short_num(worst);
    return r;
}

SuiteResult suite_root_equivalence(std::uint64_t seed)
{
    SuiteResult r{"root-equivalence", true, ""};
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int N = 0; N <= 4; ++N)
        for (int i = 0; i < 4; ++i) {
            const auto seq = i == 0 ? generate_gaussian_moments<double>(2 * N + 4)
                                    : random_positive_trial(rng, 2 * N + 4);
            const RootCheck rc = compare_determinant_roots(seq, N);
            worst = std::max(worst, rc.max_relative_error);
            if (rc.roots_found < 2 && N > 0) {
                r.passed = false;
                r.detail = "too few sign changes at N = " + std::to_string(N);
                return r;
            }
        }
    r.passed = worst <= 1e-9;
    r.detail = "max relative error " + short_num(worst);
    return r;
}

SuiteResult suite_certificates(std::uint64_t seed)
{
    SuiteResult r{"certificates", true, ""};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lam(0.0, 1.4);
    const LinearConstraintSet poly = build_polytope(12, 2.0);
    double worst = std::numeric_limits<double>::infinity();
    int feasible = 0, probes = 0;
    auto check = [&](const LinearConstraintSet& p, const ProbeRecord& rec, double lambda, CutMode mode) {
        ++probes;
        if (rec.verdict != Verdict::Feasible)
            return;
        ++feasible;
        worst = std::min(worst, certificate_margin(p, rec.witness, lambda, mode));
    };
    CutPool lower, upper, emm;
    for (int i = 0; i < 8; ++i) {
        const double a = lam(rng), b = lam(rng);
        check(poly, feasible_point(poly, a, CutMode::LowerCut, &lower), a, CutMode::LowerCut);
        check(poly, feasible_point(poly, b, CutMode::UpperCut, &upper), b, CutMode::UpperCut);
        const double E = 0.8 + 0.5 * i / 7.0;
        const LinearConstraintSet ep = build_emm_polytope(12, E);
        check(ep, feasible_point(ep, 0, CutMode::MomentsOnly, &emm), 0, CutMode::MomentsOnly);
    }
    r.passed = feasible == 0 || worst >= poly.epsilon / 2;
    r.detail = std::to_string(feasible) + "/" + std::to_string(probes) + " feasible, min margin "
               + short_num(feasible ? worst : 0.0);
    if (feasible == 0) {
        r.passed = false;
        r.detail = "no feasible probes to certify";
    }
    return r;
}

SuiteResult suite_pade_nesting(std::uint64_t)
{
    SuiteResult r{"pade-nesting", true, ""};
    for (int q = 3; q <= 14; ++q) {
        const NestingCheck n = check_nesting(pade_table(1.0, q));
        if (!n.holds) {
            r.passed = false;
            r.detail = "E = 1, Q = " + std::to_string(q) + ": " + n.violation;
            return r;
        }
    }
    if (pade_feasible(3.0, 12)) {
        r.passed = false;
        r.detail = "E = 3 passes the nesting test at Q = 12";
        return r;
    }
    r.detail = "nesting holds at E = 1 for Q = 3..14 and fails at E = 3";
    return r;
}

SuiteResult suite_sandwich(std::uint64_t)
{
    SuiteResult r{"sandwich", true, ""};
    const auto emm = emm_energy_sequence(16, 1e-4);
    for (int q : {12, 16}) {
        const Theorem4Bounds t4 = theorem4_bounds(q, 2.0, 1e-4);
        auto it = std::find_if(emm.begin(), emm.end(), [&](const EmmOrderResult& e) { return e.Q == q; });
        std::string detail;
        if (it == emm.end() || !sandwich_holds(t4, *it, kQuarticGroundState, detail)) {
            r.passed = false;
            r.detail = "Q = " + std::to_string(q) + ": " + detail;
            return r;
        }
    }
    r.detail = "ordering holds at Q = 12, 16";
    return r;
}

const std::map<std::string, std::function<SuiteResult(std::uint64_t)>>& suites()
{
    static const std::map<std::string, std::function<SuiteResult(std::uint64_t)>> m{
        {"monotonicity", suite_monotonicity},
        {"degeneracy", suite_degeneracy},
        {"quasiconvexity", suite_quasiconvexity},
        {"scale-invariance", suite_scale_invariance},
        {"root-equivalence", suite_root_equivalence},
        {"certificates", suite_certificates},
        {"pade-nesting", suite_pade_nesting},
        {"sandwich", suite_sandwich},
    };
    return m;
}

} // namespace

Table build_table(const RunConfig& c, std::ostream& log)
{
    AuditLog audit;
    Table t;
    switch (c.command) {
    case Command::BartaSeries:
        if (c.extended()) {
            PrecisionScope scope(c.precision);
            t = barta_table<HighPrecision>(c, log);
        } else {
            t = barta_table<double>(c, log);
        }
        break;
    case Command::PtSeries:
        if (c.extended()) {
            PrecisionScope scope(c.precision);
            t = pt_table<HighPrecision>(c, log);
        } else {
            t = pt_table<double>(c, log);
        }
        break;
    case Command::Theorem4Bounds:
        t = theorem4_table(c, audit, log);
        break;
    case Command::EmmBounds:
        t = emm_table(c, audit, log);
        break;
    case Command::PadeBounds:
        t = pade_table_for(c, log);
        break;
    case Command::Verify:
        t = verify_table(c, log);
        break;
    }
    if (!c.audit_path.empty())
        atomic_write_file(c.audit_path, audit.lines.str());
    return t;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& log)
{
    for (const auto& w : validate(c))
        log << "warning: " << w << "\n";
    const Table t = build_table(c, log);
    const std::string text = c.output == OutputFormat::Csv ? to_csv(t) : to_json(t);
    if (c.output_path.empty())
        out << text;
    else
        atomic_write_file(c.output_path, text);
    if (c.command == Command::Verify)
        for (const auto& row : t.rows)
            if (row[1] != "pass")
                return InvariantViolation("").exit_code();
    return 0;
}

std::vector<std::string> suite_names()
{
    std::vector<std::string> names;
    for (const auto& [name, fn] : suites())
        names.push_back(name);
    return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed)
{
    auto it = suites().find(name);
    if (it == suites().end())
        throw ConfigError("unknown suite '" + name + "'");
    return it->second(seed);
}

MomentSequence<double> random_positive_trial(std::mt19937_64& rng, int max_order)
{
    std::uniform_real_distribution<double> var(0.3, 3.0), weight(0.1, 1.0);
    std::uniform_int_distribution<int> count(1, 3);
    const int k = count(rng);
    std::vector<double> v(k), w(k);
    double total = 0;
    for (int i = 0; i < k; ++i) {
        v[i] = var(rng);
        w[i] = weight(rng);
        total += w[i];
    }
    MomentSequence<double> seq;
    seq.values.assign(static_cast<std::size_t>(max_order + 1), 0.0);
    for (int i = 0; i < k; ++i) {
        // Moments of exp(-x^2 / (2 v)) normalized: v^n (2n-1)!!.
        double m = w[i] / total;
        for (int p = 0; p <= max_order; p += 2) {
            seq.values[p] += m;
            m *= v[i] * (p + 1);
        }
    }
    seq.parity_even = true;
    seq.normalization = Normalization::Mu0EqualsOne;
    seq.positive_function = true;
    return seq;
}

std::vector<double> pd_compatible_mu2(double E, int N, int count)
{
    const int samples = 4000;
    const double top = 4.0;
    int best_lo = -1, best_hi = -1, run_lo = -1;
    for (int i = 1; i <= samples; ++i) {
        const double mu2 = top * i / samples;
        bool pd = true;
        try {
            GepOptions o;
            o.allow_escalation = false;
            build_pair(generate_quartic_sequence<double>(E, 1.0, mu2, 2 * N + 4), N, o);
        } catch (const Error&) {
            pd = false;
        }
        if (pd && run_lo < 0)
            run_lo = i;
        if ((!pd || i == samples) && run_lo >= 0) {
            const int run_hi = pd ? i : i - 1;
            if (run_hi - run_lo > best_hi - best_lo) {
                best_lo = run_lo;
                best_hi = run_hi;
            }
            run_lo = -1;
        }
    }
    if (best_lo < 0)
        throw NumericalError("no mu_2 gives a positive definite U at E = " + short_num(E));
    std::vector<double> out;
    const double a = top * best_lo / samples, b = top * best_hi / samples;
    for (int j = 1; j <= count; ++j)
        out.push_back(a + (b - a) * j / (count + 1));
    return out;
}

RootCheck compare_determinant_roots(const MomentSequence<double>& seq, int N)
{
    GepOptions o;
    o.allow_escalation = false;
    const SymmetricPair<double> pair = build_pair(seq, N, o);
    const Vector<double> eig = generalized_eigenvalues(pair);

    // |lambda| <= ||U^{-1} H||_F bounds the spectrum without using the Cholesky route.
    const Matrix<double> UinvH = pair.U.partialPivLu().solve(pair.H);
    const double bound = 1.01 * UinvH.norm() + 1;
    const double det_u = pair.U.determinant();
    auto f = [&](double lambda) { return (pair.H - lambda * pair.U).determinant() / det_u; };

    std::vector<double> roots;
    const int steps = 200000;
    double x0 = -bound, f0 = f(x0);
    for (int i = 1; i <= steps; ++i) {
        const double x1 = -bound + 2 * bound * i / steps;
        const double f1 = f(x1);
        if (f0 == 0) {
            roots.push_back(x0);
        } else if ((f0 < 0) != (f1 < 0) && f1 != 0) {
            std::uintmax_t iters = 200;
            const auto bracket = boost::math::tools::toms748_solve(
                f, x0, x1, f0, f1, boost::math::tools::eps_tolerance<double>(50), iters);
            roots.push_back(0.5 * (bracket.first + bracket.second));
        }
        x0 = x1;
        f0 = f1;
    }

    RootCheck rc;
    rc.roots_found = static_cast<int>(roots.size());
    rc.eigenvalues = static_cast<int>(eig.size());
    if (roots.empty())
        return rc;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    rc.max_relative_error = std::max(rel(roots.front(), eig(0)), rel(roots.back(), eig(eig.size() - 1)));
    if (rc.roots_found == rc.eigenvalues)
        for (int i = 0; i < rc.eigenvalues; ++i)
            rc.max_relative_error = std::max(rc.max_relative_error, rel(roots[i], eig(i)));
    return rc;
}

bool sandwich_holds(const Theorem4Bounds& t4, const EmmOrderResult& emm, double E, std::string& detail)
{
    std::ostringstream os;
    bool ok = true;
    auto need = [&](bool cond, const std::string& what) {
        if (!cond && ok) {
            os << what;
            ok = false;
        }
    };
    need(t4.inf_lambda_max.lo <= emm.lower_edge.hi, "inf lambda_max " + short_num(t4.inf_lambda_max.lo)
                                                         + " exceeds E_L " + short_num(emm.lower_edge.hi));
    need(emm.lower_edge.lo <= E, "E_L " + short_num(emm.lower_edge.lo) + " exceeds E");
    need(E <= emm.upper(), "E exceeds E_U " + short_num(emm.upper()));
    need(emm.upper_edge.lo <= t4.sup_lambda_min.hi, "E_U " + short_num(emm.upper_edge.lo)
                                                         + " exceeds sup lambda_min "
                                                         + short_num(t4.sup_lambda_min.hi));
    detail = ok ? "holds" : os.str();
    return ok;
}

} // namespace momentbounds::cli
