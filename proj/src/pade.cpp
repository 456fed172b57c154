#include "momentbounds/pade.hpp"

#include "momentbounds/hankel.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>

namespace momentbounds {

namespace {

std::string num(double x)
{
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

std::string approximant(int M, int N) { return "[" + std::to_string(M) + "|" + std::to_string(N) + "]"; }

} // namespace

template <class Scalar>
Scalar pade_value(const std::vector<Scalar>& u, int M, int N, const Scalar& s)
{
    using std::abs;
    if (M < 0 || N < 0)
        throw ConfigError("Pade orders must be nonnegative");
    if (static_cast<int>(u.size()) < M + N + 1)
        throw ConfigError(approximant(M, N) + " needs " + std::to_string(M + N + 1) + " moments, have "
                          + std::to_string(u.size()));
    if (!(s > 0))
        throw ConfigError("Pade probe point must be positive");

    // Series coefficients c_k = (-1)^k u_k.
    auto c = [&](int k) -> Scalar {
        if (k < 0)
            return Scalar(0);
        return k % 2 == 0 ? u[k] : Scalar(-u[k]);
    };

    // Denominator 1 + b_1 s + ... + b_N s^N from sum_j b_j c_{M+i-j} = 0, i = 1..N.
    Vector<Scalar> b = Vector<Scalar>::Zero(N + 1);
    b(0) = 1;
    if (N > 0) {
        Matrix<Scalar> A(N, N);
        Vector<Scalar> rhs(N);
        for (int i = 1; i <= N; ++i) {
            rhs(i - 1) = -c(M + i);
            for (int j = 1; j <= N; ++j)
                A(i - 1, j - 1) = c(M + i - j);
        }
        Eigen::FullPivLU<Matrix<Scalar>> lu(A);
        lu.setThreshold(Scalar(64) * machine_epsilon<Scalar>());
        if (!lu.isInvertible())
            throw PadeSingular(approximant(M, N) + " denominator system is singular");
        b.tail(N) = lu.solve(rhs);
    }

    Scalar num_s(0), den_s(0), pw(1);
    for (int i = 0; i <= std::max(M, N); ++i) {
        if (i <= M) {
            Scalar a(0);
            for (int j = 0; j <= std::min(i, N); ++j)
                a += b(j) * c(i - j);
            num_s += a * pw;
        }
        if (i <= N)
            den_s += b(i) * pw;
        pw *= s;
    }
    Scalar scale(0);
    pw = 1;
    for (int i = 0; i <= N; ++i) {
        scale += abs(b(i)) * pw;
        pw *= s;
    }
    if (!(abs(den_s) > Scalar(64) * machine_epsilon<Scalar>() * scale))
        throw PadeSingular(approximant(M, N) + " denominator vanishes at s = "
                           + num(static_cast<double>(s)));
    return num_s / den_s;
}

template double pade_value<double>(const std::vector<double>&, int, int, const double&);
template HighPrecision pade_value<HighPrecision>(const std::vector<HighPrecision>&, int, int,
                                                 const HighPrecision&);

PadeTable pade_table(double E, int Q, const PadeOptions& options)
{
    if (Q < 1)
        throw ConfigError("Pade table needs Q >= 1");
    if (options.probe_points.empty())
        throw ConfigError("no Pade probe points");
    PrecisionScope scope(options.digits);
    PadeTable t;
    t.moments = generate_harmonic_stieltjes<HighPrecision>(HighPrecision(E), Q);
    t.probe_points = options.probe_points;
    for (double s : options.probe_points) {
        if (!(s > 0))
            throw ConfigError("Pade probe points must be positive, got " + num(s));
        PadeProbe p;
        p.s = s;
        const HighPrecision hs(s);
        try {
            for (int k = 1; 2 * k - 1 <= Q; ++k)
                p.lower.push_back(pade_value<HighPrecision>(t.moments.values, k - 1, k, hs));
            for (int k = 0; 2 * k <= Q; ++k)
                p.upper.push_back(pade_value<HighPrecision>(t.moments.values, k, k, hs));
        } catch (const PadeSingular& e) {
            p.skipped = true;
            p.reason = e.what();
            p.lower.clear();
            p.upper.clear();
        }
        t.probes.push_back(std::move(p));
    }
    return t;
}

NestingCheck check_nesting(const PadeTable& table, double tolerance)
{
    NestingCheck out;
    auto fails = [&](const HighPrecision& a, const HighPrecision& b) {
        using std::abs;
        return a > b + HighPrecision(tolerance) * (abs(a) + abs(b));
    };
    for (const PadeProbe& p : table.probes) {
        if (p.skipped) {
            ++out.probes_skipped;
            continue;
        }
        ++out.probes_used;
        auto fail = [&](const std::string& what) {
            if (out.holds)
                out.violation = what + " at s = " + num(p.s);
            out.holds = false;
        };
        for (std::size_t k = 1; k < p.lower.size(); ++k)
            if (fails(p.lower[k - 1], p.lower[k]))
                fail(approximant(int(k) - 1, int(k)) + " > " + approximant(int(k), int(k) + 1));
        for (std::size_t k = 1; k < p.upper.size(); ++k)
            if (fails(p.upper[k], p.upper[k - 1]))
                fail(approximant(int(k), int(k)) + " > " + approximant(int(k) - 1, int(k) - 1));
        if (!p.lower.empty() && !p.upper.empty() && fails(p.lower.back(), p.upper.back())) {
            const int kl = static_cast<int>(p.lower.size());
            const int ku = static_cast<int>(p.upper.size()) - 1;
            fail(approximant(kl - 1, kl) + " > " + approximant(ku, ku));
        }
    }
    if (out.probes_used == 0) {
        out.holds = false;
        out.violation = "every probe point was skipped";
    }
    return out;
}

bool pade_feasible(double E, int Q, const PadeOptions& options)
{
    return check_nesting(pade_table(E, Q, options), options.tolerance).holds;
}

PadeInterval pade_energy_interval(int Q, double tol, const PadeScanOptions& options)
{
    if (Q < 3)
        throw ConfigError("Pade energy bounds need Q >= 3, got " + std::to_string(Q));
    if (!(tol > 0))
        throw ConfigError("bisection tolerance must be positive");
    if (!(options.grid_step > 0) || !(options.grid_max > options.grid_min))
        throw ConfigError("invalid Pade energy grid");

    PadeInterval out;
    out.Q = Q;
    auto feasible = [&](double E) {
        const NestingCheck c = check_nesting(pade_table(E, Q, options.pade), options.pade.tolerance);
        out.skipped_probes += c.probes_skipped;
        return c.holds;
    };

    const int n = static_cast<int>(std::floor((options.grid_max - options.grid_min) / options.grid_step + 0.5)) + 1;
    std::vector<char> grid(static_cast<std::size_t>(n));
    int first = -1, last = -1;
    for (int i = 0; i < n; ++i) {
        grid[i] = feasible(options.grid_min + i * options.grid_step);
        if (grid[i]) {
            if (first < 0)
                first = i;
            last = i;
        }
    }
    out.grid_points = n;
    if (first < 0)
        throw NumericalError("no feasible energy on [" + num(options.grid_min) + ", " + num(options.grid_max)
                             + "] at Q=" + std::to_string(Q));
    for (int i = first; i <= last; ++i) {
        if (!grid[i])
            throw InvariantViolation("Pade feasible set at Q=" + std::to_string(Q)
                                     + " is not an interval: infeasible at E = "
                                     + num(options.grid_min + i * options.grid_step));
        ++out.feasible_points;
    }

    auto E_at = [&](int i) { return options.grid_min + i * options.grid_step; };
    // Lower edge: infeasible below, feasible above.
    if (first == 0) {
        out.lower = E_at(0);
    } else {
        double lo = E_at(first - 1), hi = E_at(first);
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? hi : lo) = mid;
        }
        out.lower = lo;
    }
    if (last == n - 1) {
        out.upper = std::numeric_limits<double>::infinity();
        out.upper_open = true;
    } else {
        double lo = E_at(last), hi = E_at(last + 1);
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? lo : hi) = mid;
        }
        out.upper = hi;
    }
    return out;
}

std::pair<double, double> pade_energy_bounds(int Q, double tol, const PadeScanOptions& options)
{
    const PadeInterval iv = pade_energy_interval(Q, tol, options);
    return {iv.lower, iv.upper};
}

} // namespace momentbounds
