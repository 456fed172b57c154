#ifndef MOMENTBOUNDS_SIMPLEX_HPP
#define MOMENTBOUNDS_SIMPLEX_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace momentbounds {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
    }
    return "?";
}

/// maximize c^T x  subject to  A x <= b,  lower <= x <= upper (infinite bounds allowed).
template <class Scalar>
struct LinearProgram {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lower;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> upper;
};

struct SimplexOptions {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-11;
    int max_iterations = 100000;
    // Consecutive degenerate pivots before switching from Dantzig to Bland pricing.
    int degenerate_switch = 20;
};

template <class Scalar>
struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
    Scalar objective{};
    int iterations = 0;
    int bland_pivots = 0;
};

namespace detail {

// Bounded-variable primal simplex kept in active-set form: a vertex is described by
// basic structurals S and tight rows R with |S| = |R|, so each iteration factors only
// the small block A(R, S). Primal and dual values are recomputed from the data every
// iteration, which keeps round-off from accumulating across pivots.
template <class Scalar>
class ActiveSetSimplex {
public:
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    enum class Status { Basic, AtLower, AtUpper, FreeZero };

    ActiveSetSimplex(const Mat& A, const Vec& b, const Vec& lo, const Vec& up,
                     const SimplexOptions& opt)
        : A_(A), b_(b), lo_(lo), up_(up), opt_(opt), status_(A.cols()), tight_(A.rows(), false)
    {
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            status_[j] = initial_status(j);
    }

    Status initial_status(Eigen::Index j) const
    {
        if (std::isfinite(to_double(lo_(j))))
            return Status::AtLower;
        if (std::isfinite(to_double(up_(j))))
            return Status::AtUpper;
        return Status::FreeZero;
    }

    void place_at_upper(Eigen::Index j) { status_[j] = Status::AtUpper; }

    void set_bounds(Eigen::Index j, const Scalar& lo, const Scalar& up)
    {
        lo_(j) = lo;
        up_(j) = up;
        if (status_[j] == Status::AtUpper && lo == up)
            status_[j] = Status::AtLower;
    }

    const Vec& x() const { return x_; }
    const Vec& slack() const { return s_; }

    // Runs to optimality for objective c from the current vertex.
    LpStatus optimize(const Vec& c, int& iterations, int& bland_pivots)
    {
        int degenerate_run = 0;
        bool bland = false;
        while (true) {
            if (iterations >= opt_.max_iterations)
                return LpStatus::IterationLimit;
            ++iterations;
            factor_and_solve();

            // Pricing.
            Vec y = Vec::Zero(static_cast<Eigen::Index>(R_.size()));
            if (!S_.empty()) {
                Vec cS(static_cast<Eigen::Index>(S_.size()));
                for (std::size_t t = 0; t < S_.size(); ++t)
                    cS(t) = c(S_[t]);
                y = lu_.transpose().solve(cS);
            }
            const Eigen::Index n = A_.cols();
            long entering = -1;
            int direction = 0;
            Scalar best(0);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (status_[j] == Status::Basic)
                    continue;
                Scalar d = c(j);
                for (std::size_t r = 0; r < R_.size(); ++r)
                    d -= y(r) * A_(R_[r], j);
                int dir = 0;
                if (status_[j] == Status::AtLower && d > opt_.optimality_tol && up_(j) > lo_(j))
                    dir = +1;
                else if (status_[j] == Status::AtUpper && d < -opt_.optimality_tol)
                    dir = -1;
                else if (status_[j] == Status::FreeZero && abs_(d) > opt_.optimality_tol)
                    dir = d > 0 ? +1 : -1;
                if (dir == 0)
                    continue;
                if (bland) {
                    entering = j;
                    direction = dir;
                    break;
                }
                if (abs_(d) > best) {
                    best = abs_(d);
                    entering = j;
                    direction = dir;
                }
            }
            if (!(bland && entering >= 0)) {
                for (std::size_t r = 0; r < R_.size(); ++r) {
                    Scalar d = -y(r);
                    if (d <= opt_.optimality_tol)
                        continue;
                    const long idx = n + static_cast<long>(R_[r]);
                    if (bland) {
                        if (entering < 0 || idx < entering) {
                            entering = idx;
                            direction = +1;
                        }
                        continue;
                    }
                    if (d > best) {
                        best = d;
                        entering = idx;
                        direction = +1;
                    }
                }
            }
            if (entering < 0)
                return LpStatus::Optimal;

            // Direction of the basic structurals: dx_S = -theta * sigma * w.
            const bool slack_enters = entering >= n;
            const Eigen::Index k = static_cast<Eigen::Index>(S_.size());
            Vec w = Vec::Zero(k);
            long entering_pos_in_R = -1;
            if (k > 0) {
                Vec rhs(k);
                if (slack_enters) {
                    const long row = entering - n;
                    rhs.setZero();
                    for (Eigen::Index r = 0; r < k; ++r)
                        if (static_cast<long>(R_[r]) == row)
                            entering_pos_in_R = r;
                    rhs(entering_pos_in_R) = 1;
                } else {
                    for (Eigen::Index r = 0; r < k; ++r)
                        rhs(r) = A_(R_[r], entering);
                }
                w = lu_.solve(rhs);
            }
            const Scalar sigma(direction);

            // Ratio test. Candidates: 0 = bound flip, 1 = basic structural, 2 = basic slack.
            Scalar theta = std::numeric_limits<Scalar>::infinity();
            int kind = -1;
            long which = -1;
            long which_index = std::numeric_limits<long>::max();
            Scalar which_pivot(0);
            auto consider = [&](const Scalar& t, int kd, long w_id, long var_index, const Scalar& piv) {
                const Scalar tt = t < 0 ? Scalar(0) : t;
                const Scalar slack_tol = Scalar(1e-12) * (1 + abs_(theta));
                if (kind < 0 || tt < theta - slack_tol) {
                    theta = tt;
                    kind = kd;
                    which = w_id;
                    which_index = var_index;
                    which_pivot = abs_(piv);
                } else if (tt <= theta + slack_tol) {
                    bool take = bland ? var_index < which_index : abs_(piv) > which_pivot;
                    if (take) {
                        theta = std::min(theta, tt);
                        kind = kd;
                        which = w_id;
                        which_index = var_index;
                        which_pivot = abs_(piv);
                    }
                }
            };
            if (!slack_enters) {
                const Scalar range = up_(entering) - lo_(entering);
                if (status_[entering] != Status::FreeZero && std::isfinite(to_double(range)))
                    consider(range, 0, entering, entering, Scalar(1));
            }
            for (Eigen::Index t = 0; t < k; ++t) {
                const Scalar rate = -sigma * w(t); // d x_S(t) / d theta
                const long j = static_cast<long>(S_[t]);
                if (rate < -opt_.pivot_tol && std::isfinite(to_double(lo_(j))))
                    consider((x_(j) - lo_(j)) / -rate, 1, t, j, rate);
                else if (rate > opt_.pivot_tol && std::isfinite(to_double(up_(j))))
                    consider((up_(j) - x_(j)) / rate, 1, t, j, rate);
            }
            for (Eigen::Index i = 0; i < A_.rows(); ++i) {
                if (tight_[i])
                    continue;
                Scalar aw(0);
                for (Eigen::Index t = 0; t < k; ++t)
                    aw += A_(i, S_[t]) * w(t);
                // d s_i / d theta = -rate
                const Scalar rate = slack_enters ? Scalar(-aw) : Scalar(sigma * (A_(i, entering) - aw));
                if (rate > opt_.pivot_tol)
                    consider(s_(i) / rate, 2, i, n + i, rate);
            }
            if (kind < 0)
                return LpStatus::Unbounded;

            if (theta <= Scalar(opt_.feasibility_tol) * Scalar(1e-3)) {
                if (++degenerate_run >= opt_.degenerate_switch)
                    bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
            if (bland)
                ++bland_pivots;

            // Basis update.
            if (kind == 0) {
                status_[entering] =
                    status_[entering] == Status::AtLower ? Status::AtUpper : Status::AtLower;
            } else if (kind == 1) {
                const Eigen::Index t = static_cast<Eigen::Index>(which);
                const Eigen::Index leaving = S_[t];
                const Scalar rate = -sigma * w(t);
                status_[leaving] = rate < 0 ? Status::AtLower : Status::AtUpper;
                if (!slack_enters) {
                    S_[t] = entering;
                    status_[entering] = Status::Basic;
                } else {
                    S_.erase(S_.begin() + t);
                    const Eigen::Index row = entering - n;
                    tight_[row] = false;
                    R_.erase(std::find(R_.begin(), R_.end(), row));
                }
            } else {
                const Eigen::Index row = static_cast<Eigen::Index>(which);
                if (!slack_enters) {
                    R_.push_back(row);
                    tight_[row] = true;
                    S_.push_back(entering);
                    status_[entering] = Status::Basic;
                } else {
                    const Eigen::Index old = entering - n;
                    tight_[old] = false;
                    *std::find(R_.begin(), R_.end(), old) = row;
                    tight_[row] = true;
                }
            }
        }
    }

    void factor_and_solve()
    {
        const Eigen::Index n = A_.cols();
        x_.resize(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            switch (status_[j]) {
            case Status::AtLower: x_(j) = lo_(j); break;
            case Status::AtUpper: x_(j) = up_(j); break;
            case Status::FreeZero: x_(j) = 0; break;
            case Status::Basic: x_(j) = 0; break;
            }
        }
        const Eigen::Index k = static_cast<Eigen::Index>(S_.size());
        if (k > 0) {
            Mat B(k, k);
            Vec rhs(k);
            for (Eigen::Index r = 0; r < k; ++r) {
                rhs(r) = b_(R_[r]);
                for (Eigen::Index j = 0; j < n; ++j)
                    if (status_[j] != Status::Basic)
                        rhs(r) -= A_(R_[r], j) * x_(j);
                for (Eigen::Index t = 0; t < k; ++t)
                    B(r, t) = A_(R_[r], S_[t]);
            }
            lu_.compute(B);
            Vec xs = lu_.solve(rhs);
            for (Eigen::Index t = 0; t < k; ++t)
                x_(S_[t]) = xs(t);
        }
        s_ = b_ - A_ * x_;
        for (Eigen::Index i = 0; i < s_.size(); ++i)
            if (tight_[i])
                s_(i) = 0;
    }

private:
    static double to_double(const Scalar& v) { return static_cast<double>(v); }
    static Scalar abs_(const Scalar& v) { return v < 0 ? Scalar(-v) : v; }

    Mat A_;
    Vec b_, lo_, up_;
    SimplexOptions opt_;
    std::vector<Status> status_;
    std::vector<bool> tight_;
    std::vector<Eigen::Index> S_, R_;
    Eigen::PartialPivLU<Mat> lu_;
    Vec x_, s_;
};

} // namespace detail

/// Two-phase bounded-variable simplex with Dantzig pricing and Bland fallback on degeneracy.
template <class Scalar>
LpResult<Scalar> solve_lp(const LinearProgram<Scalar>& lp, const SimplexOptions& opt = {})
{
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index m = lp.A.rows(), n = lp.A.cols();
    LpResult<Scalar> res;
    for (Eigen::Index j = 0; j < n; ++j)
        if (lp.lower(j) > lp.upper(j)) {
            res.status = LpStatus::Infeasible;
            return res;
        }

    // Starting vertex: every structural at a bound; the violated rows get one shared artificial.
    Vec x0(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::isfinite(static_cast<double>(lp.lower(j))))
            x0(j) = lp.lower(j);
        else if (std::isfinite(static_cast<double>(lp.upper(j))))
            x0(j) = lp.upper(j);
        else
            x0(j) = 0;
    }
    Vec s0 = lp.b - lp.A * x0;
    Scalar worst(0);
    for (Eigen::Index i = 0; i < m; ++i)
        worst = std::max(worst, Scalar(-s0(i)));

    Mat A(m, n + 1);
    A.leftCols(n) = lp.A;
    A.col(n).setZero();
    for (Eigen::Index i = 0; i < m; ++i)
        if (s0(i) < -Scalar(opt.feasibility_tol))
            A(i, n) = -1;
    Vec lo(n + 1), up(n + 1), c(n + 1);
    lo.head(n) = lp.lower;
    up.head(n) = lp.upper;
    lo(n) = 0;
    up(n) = worst > Scalar(opt.feasibility_tol) ? worst : Scalar(0);

    detail::ActiveSetSimplex<Scalar> engine(A, lp.b, lo, up, opt);
    if (up(n) > 0) {
        // Phase 1: drive the artificial, started at its upper bound, down to zero.
        engine.place_at_upper(n);
        Vec c1 = Vec::Zero(n + 1);
        c1(n) = -1;
        LpStatus st = engine.optimize(c1, res.iterations, res.bland_pivots);
        if (st == LpStatus::IterationLimit) {
            res.status = st;
            return res;
        }
        engine.factor_and_solve();
        if (engine.x()(n) > Scalar(opt.feasibility_tol)) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        engine.set_bounds(n, Scalar(0), Scalar(0));
    }
    Vec c2 = Vec::Zero(n + 1);
    c2.head(n) = lp.c;
    res.status = engine.optimize(c2, res.iterations, res.bland_pivots);
    engine.factor_and_solve();
    res.x = engine.x().head(n);
    res.objective = lp.c.dot(res.x);
    return res;
}

} // namespace momentbounds

#endif
