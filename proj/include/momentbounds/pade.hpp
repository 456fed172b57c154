#ifndef MOMENTBOUNDS_PADE_HPP
#define MOMENTBOUNDS_PADE_HPP

#include "momentbounds/errors.hpp"
#include "momentbounds/moments.hpp"
#include "momentbounds/precision.hpp"

#include <string>
#include <vector>

namespace momentbounds {

// The denominator system of an approximant is singular, or its denominator vanishes at s.
class PadeSingular : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// [M|N] approximant at s of I(s) = sum_k (-s)^k u_k, from u_0..u_{M+N}.
template <class Scalar>
Scalar pade_value(const std::vector<Scalar>& u, int M, int N, const Scalar& s);

struct PadeOptions {
    std::vector<double> probe_points{0.1, 0.5, 1.0, 2.0, 10.0};
    unsigned digits = 40;
    // Relative slack allowed in each nesting inequality.
    double tolerance = 1e-20;
};

struct PadeProbe {
    double s = 0;
    bool skipped = false;
    std::string reason;
    std::vector<HighPrecision> lower; // [k-1|k], k = 1, 2, ...
    std::vector<HighPrecision> upper; // [k|k], k = 0, 1, ...
};

struct PadeTable {
    MomentSequence<HighPrecision> moments;
    std::vector<double> probe_points;
    std::vector<PadeProbe> probes;
};

/// Approximants of the harmonic-oscillator Stieltjes sequence u_0..u_Q at energy E.
PadeTable pade_table(double E, int Q, const PadeOptions& options = {});

struct NestingCheck {
    bool holds = true;
    int probes_used = 0;
    int probes_skipped = 0;
    std::string violation; // first failing inequality
};

/// Lower chain nondecreasing, upper chain nonincreasing and last lower <= last upper at every
/// probe that was not skipped. With every probe skipped the energy counts as infeasible.
NestingCheck check_nesting(const PadeTable& table, double tolerance = 1e-20);

bool pade_feasible(double E, int Q, const PadeOptions& options = {});

struct PadeInterval {
    int Q = 0;
    double lower = 0;
    double upper = 0;
    bool upper_open = false; // still feasible at the top of the scan
    int grid_points = 0;
    int feasible_points = 0;
    int skipped_probes = 0;
};

struct PadeScanOptions {
    double grid_min = 0.0;
    double grid_max = 4.0;
    double grid_step = 0.01;
    PadeOptions pade;
};

/// Feasible energy interval at order Q: grid scan, island check, then bisection on each edge.
PadeInterval pade_energy_interval(int Q, double tol, const PadeScanOptions& options = {});

std::pair<double, double> pade_energy_bounds(int Q, double tol, const PadeScanOptions& options = {});

extern template double pade_value<double>(const std::vector<double>&, int, int, const double&);
extern template HighPrecision pade_value<HighPrecision>(const std::vector<HighPrecision>&, int, int,
                                                        const HighPrecision&);

} // namespace momentbounds

#endif
