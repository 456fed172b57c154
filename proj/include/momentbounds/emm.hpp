#ifndef MOMENTBOUNDS_EMM_HPP
#define MOMENTBOUNDS_EMM_HPP

#include "momentbounds/moments.hpp"
#include "momentbounds/simplex.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace momentbounds {

enum class Relation { GreaterEqual, Equal };

/// coefficients . mu  (>= | =)  rhs, with an extra required slack `margin` for soft rows.
struct LinearConstraint {
    Eigen::VectorXd coefficients; // over mu_0..mu_Q
    Relation relation = Relation::GreaterEqual;
    double rhs = 0;
    double margin = 0;
    // Soft rows share the uniform slack that the LP maximizes; hard rows must simply hold.
    bool soft = true;
    std::string label;
};

/// Half-space description of the moment polytope over a linear parameterization mu = basis * z.
struct LinearConstraintSet {
    int max_order = 0;
    // Odd moments pinned to zero (Stieltjes form of the parity-even problem).
    bool stieltjes = true;
    Normalization normalization = Normalization::Mu0PlusMuQEqualsOne;
    std::vector<LinearConstraint> constraints;
    // Interval for every moment mu_0..mu_Q.
    std::vector<std::pair<double, double>> moment_bounds;
    // (Q+1) x k map from free parameters to moments.
    Eigen::MatrixXd basis;
    // Positive magnitudes of a representative point; parameters are solved for in units of it.
    Eigen::VectorXd reference;
    // Representative magnitude of every moment; fixes the scale of stored cut vectors.
    Eigen::VectorXd moment_scale;
    std::vector<std::string> parameter_names;
    double epsilon = 1e-8;
    double epub = 0;
    // Energy of the moment equation for classic EMM sets (zero otherwise).
    double energy = 0;
    bool moment_equation = false;

    int parameter_count() const { return static_cast<int>(basis.cols()); }
    Eigen::VectorXd moments(const Eigen::VectorXd& z) const { return basis * z; }
};

struct PolytopeOptions {
    bool hamburger = false;
    double epsilon = 1e-8;
};

/// Moment polytope for the lambda cuts: mu_0 + mu_Q = 1, cube bounds, parity and E_pub rows.
LinearConstraintSet build_polytope(int Q, double epub, const PolytopeOptions& options = {});

/// Classic EMM set at energy E: parameters mu_0, mu_2, the rest from the moment equation.
LinearConstraintSet build_emm_polytope(int Q, double E, const PolytopeOptions& options = {});

enum class CutMode { LowerCut, UpperCut, MomentsOnly };
enum class Verdict { Feasible, Infeasible, Indeterminate };

const char* to_string(CutMode m);
const char* to_string(Verdict v);

/// Quadratic-form cut <c|M|c> on one Hankel block, stored independently of lambda.
struct StoredCut {
    bool nu_block = false;
    CutMode mode = CutMode::MomentsOnly; // sign convention of a nu block
    int offset = 0;
    int stride = 1;
    Eigen::VectorXd c;
};

using CutPool = std::vector<StoredCut>;

struct CuttingOptions {
    int max_cuts = 400;
    int max_lp_solves = 2000;
    // LP optimum t at or below this counts as an empty polytope.
    double slack_floor = 1e-12;
    SimplexOptions simplex;
    std::function<void(const struct ProbeRecord&)> audit;
};

struct ProbeRecord {
    double at = 0; // lambda, or E for classic EMM
    Verdict verdict = Verdict::Indeterminate;
    CutMode mode = CutMode::MomentsOnly;
    int order = 0;
    int cuts_added = 0;
    int lp_solves = 0;
    int lp_iterations = 0;
    double lp_slack = 0;
    // Smallest Jacobi-scaled eigenvalue over all blocks at the witness (feasible probes).
    double min_scaled_eigenvalue = 0;
    Eigen::VectorXd witness; // mu_0..mu_Q
    std::uint64_t witness_hash = 0;
};

std::uint64_t hash_moments(const Eigen::VectorXd& mu);

ProbeRecord feasible_point(const LinearConstraintSet& poly, double lambda, CutMode mode,
                           CutPool* pool = nullptr, const CuttingOptions& options = {});

/// Minimum Jacobi-scaled eigenvalue of every HH block at mu, recomputed through the hankel module.
double certificate_margin(const LinearConstraintSet& poly, const Eigen::VectorXd& mu, double lambda,
                          CutMode mode);

enum class IntervalTarget { SupLambdaMin, InfLambdaMax, EmmEnergy };

const char* to_string(IntervalTarget t);

/// Bracket on a feasibility edge; an endpoint is closed when a probe there was feasible.
struct FeasibilityInterval {
    double lo = 0;
    double hi = 0;
    bool lo_closed = false;
    bool hi_closed = false;
    IntervalTarget target = IntervalTarget::SupLambdaMin;
    std::map<double, ProbeRecord> verdicts;

    double width() const { return hi - lo; }
    // Records a probe and checks that feasible and infeasible probes stay ordered.
    void record(const ProbeRecord& r);
};

FeasibilityInterval bisect_sup_lambda_min(const LinearConstraintSet& poly,
                                          std::pair<double, double> bracket, double tol,
                                          const CuttingOptions& options = {},
                                          CutPool* pool = nullptr);

FeasibilityInterval bisect_inf_lambda_max(const LinearConstraintSet& poly,
                                          std::pair<double, double> bracket, double tol,
                                          const CuttingOptions& options = {},
                                          CutPool* pool = nullptr);

struct Theorem4Bounds {
    int Q = 0;
    double epub = 0;
    FeasibilityInterval sup_lambda_min; // upper bound on E_gr
    FeasibilityInterval inf_lambda_max; // lower bound on E_gr
    int total_cuts = 0;

    double lower() const { return inf_lambda_max.lo; }
    double upper() const { return sup_lambda_min.hi; }
};

Theorem4Bounds theorem4_bounds(int Q, double epub, double tol,
                               const CuttingOptions& options = {},
                               const PolytopeOptions& poly_options = {});

struct EmmOrderResult {
    int Q = 0;
    FeasibilityInterval lower_edge; // lo infeasible, hi feasible
    FeasibilityInterval upper_edge; // lo feasible, hi infeasible (or unbounded)
    bool unbounded_above = false;

    double lower() const { return lower_edge.lo; }
    double upper() const;
};

struct EmmOptions {
    int samples = 20;
    double energy_cap = 4.0;
    int start_order = 6;
    CuttingOptions cutting;
    PolytopeOptions polytope;
};

/// Classic EMM energy interval at order Q, continued upward from options.start_order.
std::vector<EmmOrderResult> emm_energy_sequence(int Q, double tol, const EmmOptions& options = {});

std::pair<double, double> emm_energy_bounds(int Q, double tol, const EmmOptions& options = {});

} // namespace momentbounds

#endif
