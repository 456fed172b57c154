#include "momentbounds/pt_oracle.hpp"

#include "momentbounds/hankel.hpp"

#include <algorithm>
#include <cmath>

namespace momentbounds {

namespace {

template <class Scalar>
struct Cx {
    Scalar re, im;
};

template <class Scalar>
Cx<Scalar> cmul(const Cx<Scalar>& a, const Cx<Scalar>& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class Scalar>
Cx<Scalar> cdiv(const Cx<Scalar>& a, const Cx<Scalar>& b)
{
    Scalar d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

template <class Scalar>
Scalar cabs(const Cx<Scalar>& a)
{
    using std::sqrt;
    return sqrt(a.re * a.re + a.im * a.im);
}

// Principal square root, non-negative real part.
template <class Scalar>
Cx<Scalar> csqrt(const Cx<Scalar>& z)
{
    using std::abs;
    using std::sqrt;
    Scalar r = cabs(z);
    Scalar re = sqrt((r + z.re) / 2);
    Scalar im = sqrt(abs(r - z.re) / 2);
    if (z.im < 0)
        im = -im;
    return {re, im};
}

template <class Scalar>
struct RawSegment {
    Scalar x0, h;
    std::vector<Scalar> a, b;
    Scalar log_gain;
};

template <class Scalar>
struct SideRun {
    std::vector<RawSegment<Scalar>> segments;
    Cx<Scalar> phi, dphi; // state at x = 0 in final units
    Scalar log_gain;
};

void check_options(const PtOracleOptions& o)
{
    if (!(o.half_width > 0))
        throw ConfigError("integration half-width must be positive");
    if (!(o.max_step > 0))
        throw ConfigError("integration max_step must be positive");
    if (o.max_step >= o.half_width)
        throw ConfigError("degenerate integration grid: max_step >= half-width leaves only the "
                          "two endpoints");
    if (!(o.rel_tol > 0 && o.rel_tol < 1e-2))
        throw ConfigError("integration rel_tol must lie in (0, 1e-2)");
    if (o.taylor_order < 8 || o.taylor_order > 400)
        throw ConfigError("Taylor order must lie in [8, 400]");
}

// Taylor coefficients of Phi about x0 for Phi'' = (i x^3 - calE) Phi.
template <class Scalar>
void taylor_coefficients(const Scalar& x0, const Scalar& calE, const Cx<Scalar>& phi,
                         const Cx<Scalar>& dphi, int K, std::vector<Scalar>& a, std::vector<Scalar>& b)
{
    a.assign(static_cast<std::size_t>(K) + 1, Scalar(0));
    b.assign(static_cast<std::size_t>(K) + 1, Scalar(0));
    a[0] = phi.re;
    b[0] = phi.im;
    a[1] = dphi.re;
    b[1] = dphi.im;
    const Scalar w[4] = {x0 * x0 * x0, 3 * x0 * x0, 3 * x0, Scalar(1)};
    for (int n = 0; n + 2 <= K; ++n) {
        Scalar ra = -calE * a[n];
        Scalar rb = -calE * b[n];
        for (int k = 0; k <= 3 && k <= n; ++k) {
            ra -= w[k] * b[n - k];
            rb += w[k] * a[n - k];
        }
        const Scalar denom((n + 2) * (n + 1));
        a[n + 2] = ra / denom;
        b[n + 2] = rb / denom;
    }
}

template <class Scalar>
SideRun<Scalar> integrate_side(const Scalar& calE, int sign, const PtOracleOptions& o)
{
    using std::abs;
    using std::log;
    using std::max;
    using std::min;
    using std::pow;
    const int K = o.taylor_order;
    const Scalar L(o.half_width);
    const Scalar tol(o.rel_tol);
    const Scalar max_step(o.max_step);

    Scalar x = sign > 0 ? L : Scalar(-L);
    // WKB decay: Phi'/Phi = -sign sqrt(V) - V'/(4V), V = i x^3 - calE.
    Cx<Scalar> V{-calE, x * x * x};
    Cx<Scalar> dV{Scalar(0), 3 * x * x};
    Cx<Scalar> k = csqrt(V);
    Cx<Scalar> corr = cdiv(dV, Cx<Scalar>{4 * V.re, 4 * V.im});
    Cx<Scalar> phi{Scalar(1), Scalar(0)};
    Cx<Scalar> dphi{Scalar(-sign) * k.re - corr.re, Scalar(-sign) * k.im - corr.im};

    SideRun<Scalar> run;
    run.log_gain = Scalar(0);
    std::vector<Scalar> a, b;
    const long max_steps = 10000000;
    for (long step = 0; x != 0; ++step) {
        if (step > max_steps)
            throw NumericalError("PT integration exceeded the step budget");
        taylor_coefficients(x, calE, phi, dphi, K, a, b);
        Scalar scale = max(max(abs(a[0]), abs(b[0])), max(abs(a[1]), abs(b[1])));
        Scalar h_abs = max_step;
        for (int n = K - 1; n <= K; ++n) {
            Scalar c = max(abs(a[n]), abs(b[n]));
            if (c > 0)
                h_abs = min(h_abs, Scalar(0.9) * pow(tol * scale / c, Scalar(1) / Scalar(n)));
        }
        bool landing = false;
        if (abs(x) <= h_abs * Scalar(1.0001)) {
            h_abs = abs(x);
            landing = true;
        }
        const Scalar h = sign > 0 ? Scalar(-h_abs) : h_abs;
        run.segments.push_back({x, h, a, b, run.log_gain});

        Scalar pa(0), pb(0), da(0), db(0);
        for (int n = K; n >= 1; --n) {
            pa = pa * h + a[n];
            pb = pb * h + b[n];
            da = da * h + Scalar(n) * a[n];
            db = db * h + Scalar(n) * b[n];
        }
        pa = pa * h + a[0];
        pb = pb * h + b[0];
        phi = {pa, pb};
        dphi = {da, db};
        x = landing ? Scalar(0) : Scalar(x + h);

        Scalar m = max(max(abs(phi.re), abs(phi.im)), max(abs(dphi.re), abs(dphi.im)));
        if (!(m > 0) || !(m < std::numeric_limits<double>::max()))
            throw NumericalError("PT integration lost the solution (zero or non-finite state)");
        if (m > Scalar(1e20) || m < Scalar(1e-20)) {
            Scalar f = 1 / m;
            phi = {phi.re * f, phi.im * f};
            dphi = {dphi.re * f, dphi.im * f};
            run.log_gain += log(f);
        }
    }
    run.phi = phi;
    run.dphi = dphi;
    return run;
}

template <class Scalar>
std::vector<PtSegment<Scalar>> finish_side(const SideRun<Scalar>& run)
{
    using std::exp;
    std::vector<PtSegment<Scalar>> out;
    out.reserve(run.segments.size());
    for (const auto& s : run.segments)
        out.push_back({s.x0, s.h, s.a, s.b, exp(run.log_gain - s.log_gain)});
    return out;
}

// Integral of x^p |poly|^2 over each segment, p = 0..pmax, times weight^2, oriented toward +x.
template <class Scalar>
std::vector<Scalar> side_moments(const std::vector<PtSegment<Scalar>>& segs, int pmax)
{
    std::vector<Scalar> total(static_cast<std::size_t>(pmax) + 1, Scalar(0));
    std::vector<Scalar> P, J;
    for (const auto& s : segs) {
        if (s.weight == 0)
            continue;
        const int K = static_cast<int>(s.re.size()) - 1;
        P.assign(static_cast<std::size_t>(2 * K) + 1, Scalar(0));
        for (int i = 0; i <= K; ++i)
            for (int j = 0; j <= K; ++j)
                P[i + j] += s.re[i] * s.re[j] + s.im[i] * s.im[j];
        const int nmax = 2 * K + pmax;
        J.assign(static_cast<std::size_t>(nmax) + 1, Scalar(0));
        Scalar hp = s.h;
        for (int n = 0; n <= nmax; ++n) {
            J[n] = hp / Scalar(n + 1);
            hp *= s.h;
        }
        // Q_m = int_0^h tau^m |poly(tau)|^2 d tau
        std::vector<Scalar> Qm(static_cast<std::size_t>(pmax) + 1, Scalar(0));
        for (int m = 0; m <= pmax; ++m)
            for (int k = 0; k <= 2 * K; ++k)
                Qm[m] += P[k] * J[k + m];
        const Scalar w2 = s.weight * s.weight * (s.h > 0 ? Scalar(1) : Scalar(-1));
        for (int p = 0; p <= pmax; ++p) {
            // x^p = sum_m C(p, m) x0^{p-m} tau^m
            Scalar acc(0), binom(1), x0pow(1);
            std::vector<Scalar> x0pows(static_cast<std::size_t>(p) + 1);
            for (int e = 0; e <= p; ++e) {
                x0pows[e] = x0pow;
                x0pow *= s.x0;
            }
            for (int m = 0; m <= p; ++m) {
                acc += binom * x0pows[p - m] * Qm[m];
                binom = binom * Scalar(p - m) / Scalar(m + 1);
            }
            total[p] += w2 * acc;
        }
    }
    return total;
}

template <class Scalar>
bool eval_segments(const std::vector<PtSegment<Scalar>>& segs, const Scalar& x, Cx<Scalar>& phi,
                   Cx<Scalar>& dphi)
{
    using std::max;
    using std::min;
    for (const auto& s : segs) {
        Scalar lo = min(s.x0, Scalar(s.x0 + s.h)), hi = max(s.x0, Scalar(s.x0 + s.h));
        if (x < lo || x > hi)
            continue;
        const Scalar t = x - s.x0;
        const int K = static_cast<int>(s.re.size()) - 1;
        Scalar pa(0), pb(0), da(0), db(0);
        for (int n = K; n >= 1; --n) {
            pa = pa * t + s.re[n];
            pb = pb * t + s.im[n];
            da = da * t + Scalar(n) * s.re[n];
            db = db * t + Scalar(n) * s.im[n];
        }
        pa = pa * t + s.re[0];
        pb = pb * t + s.im[0];
        phi = {pa * s.weight, pb * s.weight};
        dphi = {da * s.weight, db * s.weight};
        return true;
    }
    return false;
}

template <class Scalar>
Cx<Scalar> log_derivative(const SideRun<Scalar>& run)
{
    return cdiv(run.dphi, run.phi);
}

template <class Scalar>
int default_positivity_order()
{
    return working_digits<Scalar>() >= 30 ? 60 : 20;
}

} // namespace

template <class Scalar>
void PtSolution<Scalar>::evaluate(const Scalar& x, Scalar& phi_re, Scalar& phi_im, Scalar& dphi_re,
                                  Scalar& dphi_im) const
{
    Cx<Scalar> phi{}, dphi{};
    const bool on_right = x >= 0;
    const auto& segs = on_right ? right : left;
    if (!eval_segments(segs, x, phi, dphi))
        throw ConfigError("evaluation point outside the integration interval");
    Cx<Scalar> p0 = on_right ? Cx<Scalar>{right_phi0_re, right_phi0_im}
                             : Cx<Scalar>{left_phi0_re, left_phi0_im};
    phi = cdiv(phi, p0);
    dphi = cdiv(dphi, p0);
    phi_re = phi.re;
    phi_im = phi.im;
    dphi_re = dphi.re;
    dphi_im = dphi.im;
}

template <class Scalar>
PtSolution<Scalar> integrate_pt(const Scalar& calE, const PtOracleOptions& options)
{
    using std::abs;
    check_options(options);
    Scalar E = calE;
    auto run_r = integrate_side(E, +1, options);
    auto run_l = integrate_side(E, -1, options);
    auto mismatch = [&]() {
        Cx<Scalar> gr = log_derivative(run_r), gl = log_derivative(run_l);
        return Cx<Scalar>{gr.re - gl.re, gr.im - gl.im};
    };
    if (options.refine_energy) {
        // Secant on the real part of the log-derivative jump.
        Scalar E0 = E, f0 = mismatch().re;
        Scalar E1 = E * (1 + Scalar(1e-9)) + Scalar(1e-12);
        auto rr = integrate_side(E1, +1, options);
        auto rl = integrate_side(E1, -1, options);
        Scalar f1 = log_derivative(rr).re - log_derivative(rl).re;
        const Scalar stop = Scalar(100) * machine_epsilon<Scalar>() * (1 + abs(E));
        bool converged = false;
        for (int it = 0; it < options.max_refinements; ++it) {
            if (f1 == f0)
                break;
            Scalar E2 = E1 - f1 * (E1 - E0) / (f1 - f0);
            E0 = E1;
            f0 = f1;
            E1 = E2;
            rr = integrate_side(E1, +1, options);
            rl = integrate_side(E1, -1, options);
            f1 = log_derivative(rr).re - log_derivative(rl).re;
            if (abs(E1 - E0) <= stop) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NumericalError("PT energy refinement did not converge");
        E = E1;
        run_r = std::move(rr);
        run_l = std::move(rl);
    }
    Cx<Scalar> jump = mismatch();
    Cx<Scalar> gr = log_derivative(run_r);
    Scalar mis = cabs(jump);
    if (!(mis <= Scalar(options.matching_tolerance) * (1 + cabs(gr))))
        throw NumericalError("PT boundary-value matching did not converge: log-derivative jump " +
                             format_decimal(mis, 3) + " at x = 0");

    PtSolution<Scalar> sol;
    sol.calE = E;
    sol.right = finish_side(run_r);
    sol.left = finish_side(run_l);
    sol.right_phi0_re = run_r.phi.re;
    sol.right_phi0_im = run_r.phi.im;
    sol.left_phi0_re = run_l.phi.re;
    sol.left_phi0_im = run_l.phi.im;
    sol.mismatch = mis;
    sol.grid_points = static_cast<int>(sol.right.size() + sol.left.size()) + 1;
    return sol;
}

template <class Scalar>
PtOracleResult<Scalar> solve_pt_missing_moments(const Scalar& calE, const PtOracleOptions& options)
{
    using std::abs;
    auto sol = integrate_pt(calE, options);
    const int pmax = 8;
    auto mr = side_moments(sol.right, pmax);
    auto ml = side_moments(sol.left, pmax);
    const Scalar nr = sol.right_phi0_re * sol.right_phi0_re + sol.right_phi0_im * sol.right_phi0_im;
    const Scalar nl = sol.left_phi0_re * sol.left_phi0_re + sol.left_phi0_im * sol.left_phi0_im;
    std::vector<Scalar> mu(static_cast<std::size_t>(pmax) + 1);
    for (int p = 0; p <= pmax; ++p)
        mu[p] = mr[p] / nr + ml[p] / nl;
    if (!(mu[0] > 0))
        throw NumericalError("PT density has non-positive norm");
    const Scalar mu0 = mu[0];
    for (auto& v : mu)
        v /= mu0;

    PtOracleResult<Scalar> res;
    res.calE = sol.calE;
    res.quadrature_moments = mu;
    res.mu2 = mu[2];
    res.mu4 = mu[4];
    res.mu6 = mu[6];
    res.mu8_relative_residual = abs(mu[8] - 5 * sol.calE) / (5 * sol.calE);
    res.mismatch = sol.mismatch;
    res.grid_points = sol.grid_points;

    const int qmax = options.positivity_check_order > 0 ? options.positivity_check_order
                                                        : default_positivity_order<Scalar>();
    if (!(res.mu2 > 0 && res.mu4 > 0 && res.mu6 > 0))
        throw NumericalError("PT oracle produced non-positive missing moments");
    auto seq = generate_pt_density_moments<Scalar>(sol.calE, res.mu2, res.mu4, res.mu6,
                                                   std::max(qmax, 8));
    const Scalar tol = Scalar(16) * machine_epsilon<Scalar>();
    for (int Q = 4; Q <= qmax; Q += 2) {
        for (int off : {0, 2}) {
            const int n = (Q - off) / 4;
            auto blk = build_hankel(seq, off, n, 2);
            auto rep = check_positivity_scaled<Scalar>(blk.entries, tol * Scalar(n + 1));
            if (!rep.is_positive_definite)
                throw NumericalError("PT oracle moments lose positivity at Q=" + std::to_string(Q) +
                                     " (scaled min eigenvalue " +
                                     format_decimal(rep.min_eigenvalue, 3) +
                                     "); integration accuracy is insufficient");
        }
        res.positivity_checked_to = Q;
    }
    return res;
}

template <class Scalar>
BartaScan<Scalar> pt_barta_scan(const PtSolution<Scalar>& solution, double half_width, int points)
{
    using std::abs;
    if (points < 3)
        throw ConfigError("Barta scan needs at least 3 grid points");
    if (!(half_width > 0))
        throw ConfigError("Barta scan half-width must be positive");
    auto ratio = [&](const Scalar& x) {
        Scalar pr, pi, dr, di;
        solution.evaluate(x, pr, pi, dr, di);
        Scalar q = (dr * dr + di * di) / (pr * pr + pi * pi);
        Scalar x2 = x * x;
        return 2 * solution.calE - 2 * q + x2 * x2;
    };
    const Scalar W(half_width);
    BartaScan<Scalar> scan;
    scan.points = points;
    bool first = true;
    int best = 0;
    for (int i = 0; i < points; ++i) {
        Scalar x = -W + 2 * W * Scalar(i) / Scalar(points - 1);
        Scalar r = ratio(x);
        if (first || r < scan.infimum) {
            scan.infimum = r;
            scan.argmin = x;
            best = i;
            first = false;
        }
    }
    // Golden-section refinement inside the neighbouring grid cells.
    const Scalar dx = 2 * W / Scalar(points - 1);
    Scalar a = best > 0 ? Scalar(scan.argmin - dx) : scan.argmin;
    Scalar b = best < points - 1 ? Scalar(scan.argmin + dx) : scan.argmin;
    const Scalar g = (std::sqrt(5.0) - 1) / 2;
    Scalar c = b - g * (b - a), d = a + g * (b - a);
    Scalar fc = ratio(c), fd = ratio(d);
    for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = ratio(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = ratio(d);
        }
    }
    Scalar xm = (a + b) / 2;
    Scalar fm = ratio(xm);
    if (fm < scan.infimum) {
        scan.infimum = fm;
        scan.argmin = xm;
    }
    return scan;
}

template struct PtSolution<double>;
template struct PtSolution<HighPrecision>;
template PtSolution<double> integrate_pt<double>(const double&, const PtOracleOptions&);
template PtSolution<HighPrecision> integrate_pt<HighPrecision>(const HighPrecision&,
                                                               const PtOracleOptions&);
template PtOracleResult<double> solve_pt_missing_moments<double>(const double&,
                                                                 const PtOracleOptions&);
template PtOracleResult<HighPrecision>
solve_pt_missing_moments<HighPrecision>(const HighPrecision&, const PtOracleOptions&);
template BartaScan<double> pt_barta_scan<double>(const PtSolution<double>&, double, int);
template BartaScan<HighPrecision> pt_barta_scan<HighPrecision>(const PtSolution<HighPrecision>&,
                                                               double, int);

} // namespace momentbounds
