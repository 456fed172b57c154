#include "momentbounds/emm.hpp"

#include "momentbounds/errors.hpp"
#include "momentbounds/gep.hpp"
#include "momentbounds/hankel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace momentbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWitnessLambda = 1e6;

std::string num(double x)
{
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

void require_order(int Q, int minimum)
{
    if (Q < minimum || Q % 2 != 0)
        throw ConfigError("moment order Q must be even and at least " + std::to_string(minimum) + ", got "
                          + std::to_string(Q));
}

// Moments of the E-recursion started from mu_0 = 1, mu_2 = sqrt(E), rescaled so mu_0 + mu_Q = 1.
std::vector<double> envelope(int Q, double E)
{
    const double e = std::max(std::abs(E), 1e-3);
    std::vector<double> m(static_cast<std::size_t>(Q + 1), 0.0);
    m[0] = 1;
    m[2] = std::sqrt(e);
    for (int p = 0; p + 4 <= Q; p += 2)
        m[p + 4] = e * m[p] + (p >= 2 ? double(p) * (p - 1) * m[p - 2] : 0.0);
    for (int p = 1; p < Q; p += 2)
        m[p] = std::sqrt(m[p - 1] * m[p + 1]);
    const double norm = m[0] + m[Q];
    for (double& v : m)
        v /= norm;
    return m;
}

void add_cube_bounds(LinearConstraintSet& s)
{
    const int Q = s.max_order;
    s.moment_bounds.assign(static_cast<std::size_t>(Q + 1), {0.0, 1.0});
    for (int p = 1; p <= Q; p += 2)
        s.moment_bounds[p] = s.stieltjes ? std::pair{0.0, 0.0} : std::pair{-1.0, 1.0};
}

LinearConstraint normalization_row(int Q)
{
    LinearConstraint c;
    c.coefficients = Eigen::VectorXd::Zero(Q + 1);
    c.coefficients(0) = 1;
    c.coefficients(Q) = 1;
    c.relation = Relation::Equal;
    c.rhs = 1;
    c.soft = false;
    c.label = "normalization mu_0 + mu_Q = 1";
    return c;
}

struct Block {
    bool nu;
    int offset;
    int stride;
    int size;
};

std::vector<Block> blocks_for(const LinearConstraintSet& poly, CutMode mode)
{
    const int Q = poly.max_order;
    std::vector<Block> out;
    auto add = [&](bool nu, int top) {
        if (poly.stieltjes) {
            for (int off : {0, 2})
                if (top >= off)
                    out.push_back({nu, off, 2, (top - off) / 4 + 1});
        } else {
            out.push_back({nu, 0, 1, top / 2 + 1});
        }
    };
    add(false, Q);
    if (mode != CutMode::MomentsOnly)
        add(true, Q - 4);
    return out;
}

double sign_of(CutMode mode) { return mode == CutMode::UpperCut ? -1.0 : 1.0; }

// Linear form over mu_0..mu_Q of the block element with index p.
void accumulate_form(Eigen::VectorXd& g, bool nu, int p, double weight, double lambda, CutMode mode)
{
    if (!nu) {
        g(p) += weight;
        return;
    }
    const double s = sign_of(mode) * weight;
    g(p + 4) += s;
    g(p) -= s * lambda;
    if (p >= 2)
        g(p - 2) -= s * double(p) * (p - 1);
}

double element(const Eigen::VectorXd& mu, bool nu, int p, double lambda, CutMode mode)
{
    if (!nu)
        return mu(p);
    double v = mu(p + 4) - lambda * mu(p);
    if (p >= 2)
        v -= double(p) * (p - 1) * mu(p - 2);
    return sign_of(mode) * v;
}

Eigen::MatrixXd block_matrix(const Block& b, const Eigen::VectorXd& mu, double lambda, CutMode mode)
{
    Eigen::MatrixXd M(b.size, b.size);
    for (int i = 0; i < b.size; ++i)
        for (int j = 0; j < b.size; ++j)
            M(i, j) = element(mu, b.nu, b.offset + b.stride * (i + j), lambda, mode);
    return M;
}

Eigen::VectorXd cut_form(const StoredCut& cut, int Q, double lambda)
{
    Eigen::VectorXd g = Eigen::VectorXd::Zero(Q + 1);
    const int n = static_cast<int>(cut.c.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            accumulate_form(g, cut.nu_block, cut.offset + cut.stride * (i + j), cut.c(i) * cut.c(j),
                            lambda, cut.mode);
    return g;
}

// Rescales c so that sum_i c_i^2 scale(p_ii) = 1, independent of lambda and of the current point.
void normalize_cut(StoredCut& cut, const Eigen::VectorXd& scale)
{
    double acc = 0;
    for (Eigen::Index i = 0; i < cut.c.size(); ++i) {
        const int p = cut.offset + 2 * cut.stride * static_cast<int>(i) + (cut.nu_block ? 4 : 0);
        acc += cut.c(i) * cut.c(i) * scale(p);
    }
    if (acc > 0)
        cut.c /= std::sqrt(acc);
}

bool cut_applies(const StoredCut& cut, const LinearConstraintSet& poly, CutMode mode)
{
    if (cut.nu_block && (mode == CutMode::MomentsOnly || cut.mode != mode))
        return false;
    const int top = cut.nu_block ? poly.max_order - 4 : poly.max_order;
    const int n = static_cast<int>(cut.c.size());
    if (poly.stieltjes != (cut.stride == 2))
        return false;
    return cut.offset + cut.stride * 2 * (n - 1) <= top;
}

// LP over scaled parameters x (z = reference .* x) with the normalization equality eliminated.
// Every row reads a . x >= beta (+ t for soft rows) with a unit normalized.
class Assembly {
public:
    explicit Assembly(const LinearConstraintSet& poly) : poly_(poly)
    {
        const int k = poly.parameter_count();
        if (k < 1)
            throw ConfigError("constraint set has no free parameters");
        if (poly.reference.size() != k)
            throw ConfigError("constraint set reference has the wrong size");
        sigma_ = poly.reference;
        for (int j = 0; j < k; ++j)
            if (!(sigma_(j) > 0))
                sigma_(j) = 1;
        lo_ = Eigen::VectorXd::Constant(k, -kInf);
        up_ = Eigen::VectorXd::Constant(k, kInf);

        for (const LinearConstraint& c : poly.constraints) {
            if (c.relation != Relation::Equal)
                continue;
            Eigen::VectorXd a = map(c.coefficients);
            if (a.cwiseAbs().maxCoeff() <= 1e-14 * (c.coefficients.cwiseAbs().maxCoeff() + 1e-300)) {
                if (std::abs(c.rhs) > 1e-12)
                    infeasible_ = true;
                continue;
            }
            if (jstar_ >= 0)
                throw ConfigError("at most one independent equality is supported (" + c.label + ")");
            e_ = a;
            r_ = c.rhs;
            a.cwiseAbs().maxCoeff(&jstar_);
        }

        std::vector<std::pair<Eigen::VectorXd, double>> hard;
        for (int p = 0; p <= poly.max_order; ++p) {
            const auto [lo, up] = poly.moment_bounds.at(static_cast<std::size_t>(p));
            Eigen::VectorXd row = poly.basis.row(p).transpose().cwiseProduct(sigma_);
            int nonzero = 0, idx = -1;
            for (int j = 0; j < k; ++j)
                if (row(j) != 0) {
                    ++nonzero;
                    idx = j;
                }
            if (nonzero == 0) {
                if (lo > 0 || up < 0)
                    infeasible_ = true;
            } else if (nonzero == 1) {
                double a = lo / row(idx), b = up / row(idx);
                if (row(idx) < 0)
                    std::swap(a, b);
                lo_(idx) = std::max(lo_(idx), a);
                up_(idx) = std::min(up_(idx), b);
            } else {
                if (std::isfinite(lo))
                    hard.emplace_back(row, lo);
                if (std::isfinite(up))
                    hard.emplace_back(-row, -up);
            }
        }
        for (int j = 0; j < k; ++j)
            if (lo_(j) > up_(j))
                infeasible_ = true;
        if (jstar_ >= 0) {
            const Eigen::VectorXd unit = Eigen::VectorXd::Unit(k, jstar_);
            if (std::isfinite(lo_(jstar_)))
                hard.emplace_back(unit, lo_(jstar_));
            if (std::isfinite(up_(jstar_)))
                hard.emplace_back(-unit, -up_(jstar_));
        }
        for (auto& [a, beta] : hard)
            add_scaled(a, beta, false);
        for (const LinearConstraint& c : poly.constraints)
            if (c.relation == Relation::GreaterEqual)
                add(c.coefficients, c.rhs + c.margin, c.soft);
        base_rows_ = rows_.size();
        for (int j = 0; j < k; ++j)
            if (j != jstar_)
                columns_.push_back(j);
    }

    Eigen::VectorXd map(const Eigen::VectorXd& g) const
    {
        return (poly_.basis.transpose() * g).cwiseProduct(sigma_);
    }

    void add(const Eigen::VectorXd& g, double beta, bool soft) { add_scaled(map(g), beta, soft); }

    void reset_cuts()
    {
        rows_.resize(base_rows_);
    }

    bool infeasible() const { return infeasible_; }

    LinearProgram<double> program() const
    {
        const int n = static_cast<int>(columns_.size());
        const int m = static_cast<int>(rows_.size());
        LinearProgram<double> lp;
        lp.A = Eigen::MatrixXd::Zero(m, n + 1);
        lp.b.resize(m);
        for (int i = 0; i < m; ++i) {
            for (int t = 0; t < n; ++t)
                lp.A(i, t) = -rows_[i].a(columns_[t]);
            lp.A(i, n) = rows_[i].soft ? 1.0 : 0.0;
            lp.b(i) = -rows_[i].beta;
        }
        lp.c = Eigen::VectorXd::Unit(n + 1, n);
        lp.lower.resize(n + 1);
        lp.upper.resize(n + 1);
        for (int t = 0; t < n; ++t) {
            lp.lower(t) = lo_(columns_[t]);
            lp.upper(t) = up_(columns_[t]);
        }
        lp.lower(n) = -1;
        lp.upper(n) = 1;
        return lp;
    }

    Eigen::VectorXd moments(const Eigen::VectorXd& lpx) const
    {
        const int k = poly_.parameter_count();
        Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
        for (std::size_t t = 0; t < columns_.size(); ++t)
            x(columns_[t]) = lpx(static_cast<Eigen::Index>(t));
        if (jstar_ >= 0) {
            double acc = r_;
            for (int j = 0; j < k; ++j)
                if (j != jstar_)
                    acc -= e_(j) * x(j);
            x(jstar_) = acc / e_(jstar_);
        }
        return poly_.basis * x.cwiseProduct(sigma_);
    }

private:
    struct Row {
        Eigen::VectorXd a;
        double beta;
        bool soft;
    };

    void add_scaled(Eigen::VectorXd a, double beta, bool soft)
    {
        const double scale = a.cwiseAbs().maxCoeff();
        if (jstar_ >= 0) {
            const double f = a(jstar_) / e_(jstar_);
            a -= f * e_;
            beta -= f * r_;
            a(jstar_) = 0;
        }
        const double norm = a.norm();
        if (norm <= 1e-13 * (scale + 1e-300)) {
            if (beta > 1e-12 * (1 + std::abs(beta)))
                infeasible_ = true;
            return;
        }
        rows_.push_back({a / norm, beta / norm, soft});
    }

    const LinearConstraintSet& poly_;
    Eigen::VectorXd sigma_, lo_, up_, e_;
    double r_ = 0;
    Eigen::Index jstar_ = -1;
    bool infeasible_ = false;
    std::vector<Row> rows_;
    std::size_t base_rows_ = 0;
    std::vector<int> columns_;
};

// Smallest Jacobi-scaled eigenvalue of M, with cut directions for every eigenvalue <= eps.
double scaled_check(const Eigen::MatrixXd& M, double eps, std::vector<Eigen::VectorXd>& cuts)
{
    const Eigen::Index n = M.rows();
    bool bad_diagonal = false;
    double worst = kInf;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(M(i, i) > 0)) {
            cuts.push_back(Eigen::VectorXd::Unit(n, i));
            bad_diagonal = true;
            worst = std::min(worst, M(i, i));
        }
    if (bad_diagonal)
        return std::min(worst, -1.0);
    Eigen::VectorXd d = M.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd S = d.asDiagonal() * M * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigen-solver failed on a Hankel block");
    for (Eigen::Index i = 0; i < n; ++i)
        if (es.eigenvalues()(i) <= eps)
            cuts.push_back(d.cwiseProduct(es.eigenvectors().col(i)));
    return es.eigenvalues()(0);
}

std::pair<double, double> witness_extremes(const LinearConstraintSet& poly, const Eigen::VectorXd& mu)
{
    MomentSequence<double> seq;
    seq.values.assign(mu.data(), mu.data() + mu.size());
    seq.parity_even = poly.stieltjes;
    seq.normalization = Normalization::None;
    GepOptions opt;
    auto pair = build_pair(seq, (poly.max_order - 4) / 2, opt);
    auto ex = extremal_eigenvalues(pair, opt);
    return {static_cast<double>(ex.lambda_min), static_cast<double>(ex.lambda_max)};
}

ProbeRecord probe_or_throw(const LinearConstraintSet& poly, double at, double lambda, CutMode mode,
                           CutPool* pool, const CuttingOptions& options)
{
    ProbeRecord r = feasible_point(poly, lambda, mode, pool, options);
    r.at = at;
    if (r.verdict == Verdict::Indeterminate)
        throw IndeterminateVerdict(at, "cutting-plane probe at " + num(at) + " exhausted its budget ("
                                           + std::to_string(r.cuts_added) + " cuts)");
    return r;
}

// Bisection between a feasible and an infeasible end; `feasible_low` says which side is which.
template <class Probe>
void bisect(FeasibilityInterval& iv, Probe&& probe, double lo, double hi, bool feasible_low, double tol)
{
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        ProbeRecord r = probe(mid);
        iv.record(r);
        const bool feasible = r.verdict == Verdict::Feasible;
        if (feasible == feasible_low)
            lo = mid;
        else
            hi = mid;
    }
    iv.lo = lo;
    iv.hi = hi;
    iv.lo_closed = feasible_low;
    iv.hi_closed = !feasible_low;
}

FeasibilityInterval bisect_lambda(const LinearConstraintSet& poly, std::pair<double, double> bracket,
                                  double tol, const CuttingOptions& options, CutPool* pool,
                                  CutMode mode)
{
    const bool lower = mode == CutMode::LowerCut;
    FeasibilityInterval iv;
    iv.target = lower ? IntervalTarget::SupLambdaMin : IntervalTarget::InfLambdaMax;
    auto [lo, hi] = bracket;
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw ConfigError("invalid bisection bracket [" + num(lo) + ", " + num(hi) + "]");
    if (!(tol > 0))
        throw ConfigError("bisection tolerance must be positive");
    iv.lo = lo;
    iv.hi = hi;
    if (lo == hi)
        return iv;
    CutPool local;
    CutPool* use = pool ? pool : &local;
    auto probe = [&](double lambda) { return probe_or_throw(poly, lambda, lambda, mode, use, options); };
    ProbeRecord a = probe(lo), b = probe(hi);
    iv.record(a);
    iv.record(b);
    const Verdict want_lo = lower ? Verdict::Feasible : Verdict::Infeasible;
    const Verdict want_hi = lower ? Verdict::Infeasible : Verdict::Feasible;
    if (a.verdict != want_lo || b.verdict != want_hi)
        throw ConfigError("bracket [" + num(lo) + ", " + num(hi) + "] does not straddle the "
                          + (lower ? "sup lambda_min" : "inf lambda_max") + " edge (verdicts "
                          + to_string(a.verdict) + ", " + to_string(b.verdict) + ")");
    bisect(iv, probe, lo, hi, lower, tol);
    return iv;
}

} // namespace

LinearConstraintSet build_polytope(int Q, double epub, const PolytopeOptions& options)
{
    require_order(Q, 6);
    if (!std::isfinite(epub))
        throw ConfigError("E_pub must be finite");
    if (!(options.epsilon > 0))
        throw ConfigError("margin epsilon must be positive");
    LinearConstraintSet s;
    s.max_order = Q;
    s.stieltjes = !options.hamburger;
    s.epsilon = options.epsilon;
    s.epub = epub;
    add_cube_bounds(s);

    std::vector<int> params;
    for (int p = 0; p <= Q; ++p)
        if (!s.stieltjes || p % 2 == 0)
            params.push_back(p);
    const int k = static_cast<int>(params.size());
    const std::vector<double> env = envelope(Q, epub);
    s.moment_scale = Eigen::Map<const Eigen::VectorXd>(env.data(), Q + 1);
    s.basis = Eigen::MatrixXd::Zero(Q + 1, k);
    s.reference.resize(k);
    for (int j = 0; j < k; ++j) {
        s.basis(params[j], j) = 1;
        s.reference(j) = env[params[j]];
        s.parameter_names.push_back("mu_" + std::to_string(params[j]));
    }

    s.constraints.push_back(normalization_row(Q));
    if (s.stieltjes)
        for (int p = 1; p <= Q; p += 2) {
            LinearConstraint c;
            c.coefficients = Eigen::VectorXd::Unit(Q + 1, p);
            c.relation = Relation::Equal;
            c.soft = false;
            c.label = "parity mu_" + std::to_string(p) + " = 0";
            s.constraints.push_back(c);
        }
    for (int p = 0; p + 4 <= Q; p += 2) {
        LinearConstraint c;
        c.coefficients = Eigen::VectorXd::Zero(Q + 1);
        c.coefficients(p) = epub;
        if (p >= 2)
            c.coefficients(p - 2) = double(p) * (p - 1);
        c.coefficients(p + 4) = -1;
        c.margin = s.epsilon;
        c.label = "E_pub row p=" + std::to_string(p);
        s.constraints.push_back(c);
    }
    return s;
}

LinearConstraintSet build_emm_polytope(int Q, double E, const PolytopeOptions& options)
{
    require_order(Q, 4);
    if (!std::isfinite(E))
        throw ConfigError("energy must be finite");
    LinearConstraintSet s;
    s.max_order = Q;
    s.stieltjes = !options.hamburger;
    s.epsilon = options.epsilon;
    s.energy = E;
    s.moment_equation = true;
    add_cube_bounds(s);

    std::vector<int> seeds = s.stieltjes ? std::vector<int>{0, 2} : std::vector<int>{0, 1, 2, 3};
    const int k = static_cast<int>(seeds.size());
    const std::vector<double> env = envelope(Q, E);
    s.moment_scale = Eigen::Map<const Eigen::VectorXd>(env.data(), Q + 1);
    s.basis = Eigen::MatrixXd::Zero(Q + 1, k);
    s.reference.resize(k);
    for (int j = 0; j < k; ++j) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(Q + 1);
        col(seeds[j]) = 1;
        for (int p = 0; p + 4 <= Q; ++p)
            col(p + 4) = E * col(p) + (p >= 2 ? double(p) * (p - 1) * col(p - 2) : 0.0);
        s.basis.col(j) = col;
        s.reference(j) = env[seeds[j]];
        s.parameter_names.push_back("mu_" + std::to_string(seeds[j]));
    }
    s.constraints.push_back(normalization_row(Q));
    return s;
}

const char* to_string(CutMode m)
{
    switch (m) {
    case CutMode::LowerCut: return "lower";
    case CutMode::UpperCut: return "upper";
    case CutMode::MomentsOnly: return "moments";
    }
    return "?";
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

const char* to_string(IntervalTarget t)
{
    switch (t) {
    case IntervalTarget::SupLambdaMin: return "sup-lambda-min";
    case IntervalTarget::InfLambdaMax: return "inf-lambda-max";
    case IntervalTarget::EmmEnergy: return "emm-energy";
    }
    return "?";
}

std::uint64_t hash_moments(const Eigen::VectorXd& mu)
{
    std::uint64_t h = 1469598103934665603ull;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        double v = mu(i);
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(double));
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 1099511628211ull;
        }
    }
    return h;
}

ProbeRecord feasible_point(const LinearConstraintSet& poly, double lambda, CutMode mode,
                           CutPool* pool, const CuttingOptions& options)
{
    if (poly.basis.rows() != poly.max_order + 1 || poly.moment_scale.size() != poly.max_order + 1
        || poly.moment_bounds.size() != static_cast<std::size_t>(poly.max_order + 1))
        throw ConfigError("constraint set dimensions do not match its order");
    if (mode != CutMode::MomentsOnly && !std::isfinite(lambda))
        throw ConfigError("lambda must be finite");

    ProbeRecord rec;
    rec.at = poly.moment_equation ? poly.energy : lambda;
    rec.mode = mode;
    rec.order = poly.max_order;
    auto finish = [&](Verdict v) {
        rec.verdict = v;
        if (options.audit)
            options.audit(rec);
        return rec;
    };

    CutPool local;
    CutPool& cuts = pool ? *pool : local;
    const std::vector<Block> blocks = blocks_for(poly, mode);
    Assembly asmb(poly);
    if (asmb.infeasible())
        return finish(Verdict::Infeasible);

    while (true) {
        if (rec.lp_solves >= options.max_lp_solves)
            return finish(Verdict::Indeterminate);
        asmb.reset_cuts();
        for (const StoredCut& c : cuts)
            if (cut_applies(c, poly, mode))
                asmb.add(cut_form(c, poly.max_order, lambda), poly.epsilon, true);
        if (asmb.infeasible())
            return finish(Verdict::Infeasible);

        const LinearProgram<double> lp = asmb.program();
        const LpResult<double> res = solve_lp(lp, options.simplex);
        ++rec.lp_solves;
        rec.lp_iterations += res.iterations;
        if (res.status == LpStatus::Infeasible)
            return finish(Verdict::Infeasible);
        if (res.status != LpStatus::Optimal)
            throw NumericalError(std::string("LP solve failed: ") + to_string(res.status));
        rec.lp_slack = res.objective;
        if (res.objective <= options.slack_floor)
            return finish(Verdict::Infeasible);

        const Eigen::VectorXd mu = asmb.moments(res.x);
        double worst = kInf;
        int added = 0;
        for (const Block& b : blocks) {
            std::vector<Eigen::VectorXd> dirs;
            worst = std::min(worst, scaled_check(block_matrix(b, mu, lambda, mode), poly.epsilon, dirs));
            for (Eigen::VectorXd& c : dirs) {
                StoredCut sc;
                sc.nu_block = b.nu;
                sc.mode = b.nu ? mode : CutMode::MomentsOnly;
                sc.offset = b.offset;
                sc.stride = b.stride;
                sc.c = std::move(c);
                normalize_cut(sc, poly.moment_scale);
                cuts.push_back(std::move(sc));
                ++added;
            }
        }
        if (added == 0) {
            rec.witness = mu;
            rec.witness_hash = hash_moments(mu);
            rec.min_scaled_eigenvalue = worst;
            return finish(Verdict::Feasible);
        }
        rec.cuts_added += added;
        if (rec.cuts_added > options.max_cuts)
            return finish(Verdict::Indeterminate);
    }
}

double certificate_margin(const LinearConstraintSet& poly, const Eigen::VectorXd& mu, double lambda,
                          CutMode mode)
{
    const int Q = poly.max_order;
    if (mu.size() != Q + 1)
        throw ConfigError("witness has the wrong length");
    std::vector<double> u(mu.data(), mu.data() + mu.size());
    std::vector<double> nu(static_cast<std::size_t>(Q - 3));
    for (int p = 0; p <= Q - 4; ++p)
        nu[p] = element(mu, true, p, lambda, mode);
    double worst = kInf;
    for (const Block& b : blocks_for(poly, mode)) {
        const HankelMatrix<double> h = hankel_from_values(b.nu ? nu : u, b.offset, b.size - 1, b.stride);
        worst = std::min(worst, check_positivity_scaled<double>(h.entries, 0.0).min_eigenvalue);
    }
    return worst;
}

void FeasibilityInterval::record(const ProbeRecord& r)
{
    auto it = verdicts.find(r.at);
    if (it != verdicts.end() && it->second.verdict != r.verdict && r.verdict != Verdict::Indeterminate
        && it->second.verdict != Verdict::Indeterminate)
        throw InvariantViolation("probe at " + num(r.at) + " returned both feasible and infeasible");
    verdicts[r.at] = r;
    double min_f = kInf, max_f = -kInf, min_i = kInf, max_i = -kInf;
    for (const auto& [at, rec] : verdicts) {
        if (rec.verdict == Verdict::Feasible) {
            min_f = std::min(min_f, at);
            max_f = std::max(max_f, at);
        } else if (rec.verdict == Verdict::Infeasible) {
            min_i = std::min(min_i, at);
            max_i = std::max(max_i, at);
        }
    }
    switch (target) {
    case IntervalTarget::SupLambdaMin:
        if (max_f >= min_i)
            throw InvariantViolation("feasible probe at " + num(max_f) + " lies above infeasible probe at "
                                     + num(min_i) + " for sup lambda_min");
        break;
    case IntervalTarget::InfLambdaMax:
        if (min_f <= max_i)
            throw InvariantViolation("feasible probe at " + num(min_f) + " lies below infeasible probe at "
                                     + num(max_i) + " for inf lambda_max");
        break;
    case IntervalTarget::EmmEnergy:
        for (const auto& [at, rec] : verdicts)
            if (rec.verdict == Verdict::Infeasible && at > min_f && at < max_f)
                throw InvariantViolation("infeasible energy " + num(at) + " lies between feasible energies "
                                         + num(min_f) + " and " + num(max_f));
        break;
    }
}

FeasibilityInterval bisect_sup_lambda_min(const LinearConstraintSet& poly,
                                          std::pair<double, double> bracket, double tol,
                                          const CuttingOptions& options, CutPool* pool)
{
    return bisect_lambda(poly, bracket, tol, options, pool, CutMode::LowerCut);
}

FeasibilityInterval bisect_inf_lambda_max(const LinearConstraintSet& poly,
                                          std::pair<double, double> bracket, double tol,
                                          const CuttingOptions& options, CutPool* pool)
{
    return bisect_lambda(poly, bracket, tol, options, pool, CutMode::UpperCut);
}

Theorem4Bounds theorem4_bounds(int Q, double epub, double tol, const CuttingOptions& options,
                               const PolytopeOptions& poly_options)
{
    const LinearConstraintSet poly = build_polytope(Q, epub, poly_options);
    Theorem4Bounds out;
    out.Q = Q;
    out.epub = epub;

    auto verdict = [&](double lambda, CutMode mode, CutPool& pool) {
        return probe_or_throw(poly, lambda, lambda, mode, &pool, options);
    };

    // Returns {feasible end, infeasible end} of a bracket on the edge for the given mode.
    auto seed_bracket = [&](CutMode mode, CutPool& pool) {
        const bool lower = mode == CutMode::LowerCut;
        const double outward = lower ? -1.0 : 1.0;
        const double anchor = lower ? 0.0 : std::max(epub, 0.0);
        ProbeRecord w;
        double f = anchor;
        for (double step = 0; std::abs(f) <= kWitnessLambda; step = step == 0 ? 1 : step * 10) {
            f = anchor + outward * step;
            w = verdict(f, mode, pool);
            if (w.verdict == Verdict::Feasible)
                break;
        }
        if (w.verdict != Verdict::Feasible)
            throw NumericalError("polytope at E_pub = " + num(epub) + " admits no positive moment sequence");
        try {
            const auto ex = witness_extremes(poly, w.witness);
            const double seed = lower ? ex.first : ex.second;
            const double cand = seed + outward * 1e-3 * (1 + std::abs(seed));
            if ((lower ? cand > f : cand < f) && verdict(cand, mode, pool).verdict == Verdict::Feasible)
                f = cand;
        } catch (const Error&) {
        }
        double g = lower ? std::max(epub, f + 1) : std::min(0.0, f - 1);
        double step = 1;
        while (verdict(g, mode, pool).verdict == Verdict::Feasible) {
            f = g;
            g -= outward * step;
            step *= 2;
            if (std::abs(g) > kWitnessLambda)
                throw NumericalError(std::string(lower ? "sup lambda_min" : "inf lambda_max")
                                     + " is not bounded by the polytope");
        }
        return std::pair{f, g};
    };

    // Upper bound on E_gr: sup over the polytope of lambda_min.
    CutPool lower_pool;
    {
        const auto [f, g] = seed_bracket(CutMode::LowerCut, lower_pool);
        out.sup_lambda_min = bisect_sup_lambda_min(poly, {f, g}, tol, options, &lower_pool);
    }
    // Lower bound on E_gr: inf over the polytope of lambda_max.
    CutPool upper_pool;
    {
        const auto [f, g] = seed_bracket(CutMode::UpperCut, upper_pool);
        out.inf_lambda_max = bisect_inf_lambda_max(poly, {g, f}, tol, options, &upper_pool);
    }
    out.total_cuts = static_cast<int>(lower_pool.size() + upper_pool.size());
    return out;
}

double EmmOrderResult::upper() const { return unbounded_above ? kInf : upper_edge.hi; }

std::vector<EmmOrderResult> emm_energy_sequence(int Q, double tol, const EmmOptions& options)
{
    require_order(Q, 4);
    if (!(tol > 0))
        throw ConfigError("bisection tolerance must be positive");
    if (options.samples < 2)
        throw ConfigError("at least two scan samples are required");
    if (!(options.energy_cap > 0))
        throw ConfigError("energy cap must be positive");
    int start = std::clamp(options.start_order, 4, Q);
    start -= start % 2;

    std::vector<EmmOrderResult> out;
    double scan_lo = 0, scan_hi = options.energy_cap;
    for (int q = start; q <= Q; q += 2) {
        CutPool pool;
        auto probe = [&](double E) {
            const LinearConstraintSet poly = build_emm_polytope(q, E, options.polytope);
            return probe_or_throw(poly, E, 0.0, CutMode::MomentsOnly, &pool, options.cutting);
        };
        EmmOrderResult res;
        res.Q = q;
        FeasibilityInterval all;
        all.target = IntervalTarget::EmmEnergy;

        std::vector<ProbeRecord> scan;
        for (int pass = 0, n = options.samples; pass < 2; ++pass, n *= 4) {
            scan.clear();
            for (int i = 0; i < n; ++i) {
                const double E = scan_lo + (scan_hi - scan_lo) * (i + 0.5) / n;
                scan.push_back(probe(E));
                all.record(scan.back());
            }
            if (std::any_of(scan.begin(), scan.end(),
                            [](const ProbeRecord& r) { return r.verdict == Verdict::Feasible; }))
                break;
        }
        int first = -1, last = -1;
        for (int i = 0; i < static_cast<int>(scan.size()); ++i)
            if (scan[i].verdict == Verdict::Feasible) {
                if (first < 0)
                    first = i;
                last = i;
            }
        if (first < 0)
            throw NumericalError("no feasible energy found in [" + num(scan_lo) + ", " + num(scan_hi)
                                 + "] at Q=" + std::to_string(q));

        res.lower_edge = all;
        res.upper_edge = all;
        // Lower edge: lo infeasible, hi feasible.
        double lo = first > 0 ? scan[first - 1].at : 0.0;
        if (first == 0) {
            ProbeRecord r = probe(lo);
            res.lower_edge.record(r);
            if (r.verdict != Verdict::Infeasible)
                throw NumericalError("energy " + num(lo) + " is unexpectedly feasible at Q=" + std::to_string(q));
        }
        bisect(res.lower_edge, probe, lo, scan[first].at, false, tol);

        // Upper edge: lo feasible, hi infeasible.
        const int n = static_cast<int>(scan.size());
        double hi = last + 1 < n ? scan[last + 1].at : scan_hi;
        if (last + 1 == n) {
            ProbeRecord r = probe(hi);
            res.upper_edge.record(r);
            if (r.verdict == Verdict::Feasible) {
                res.unbounded_above = true;
                res.upper_edge.lo = hi;
                res.upper_edge.hi = kInf;
                res.upper_edge.lo_closed = true;
            }
        }
        if (!res.unbounded_above)
            bisect(res.upper_edge, probe, scan[last].at, hi, true, tol);

        scan_lo = res.lower();
        scan_hi = res.unbounded_above ? options.energy_cap : res.upper_edge.hi;
        out.push_back(std::move(res));
    }
    return out;
}

std::pair<double, double> emm_energy_bounds(int Q, double tol, const EmmOptions& options)
{
    const auto seq = emm_energy_sequence(Q, tol, options);
    return {seq.back().lower(), seq.back().upper()};
}

} // namespace momentbounds
