#pragma once

// Amplitude-constrained AWGN capacity
//
//   C(A,P) = sup { I(X; X+Z) : |X| <= A a.s., E[X^2] <= P },  Z ~ N(0,1),
//
// together with the analytic converse/achievability bounds on the gap
// (1/2) ln(1+P) - C(A,P). The numerical solver discretizes the input on a
// symmetric uniform grid and runs capacity iteration with a Lagrange
// multiplier on power, certified by the standard upper/lower sandwich.

#include "peakbound/papr_converse.hpp"

#include <vector>

namespace peakbound {

struct AmplitudeConstraint {
    double A;
    explicit AmplitudeConstraint(double a) : A(a) {
        if (!(A > 0.0)) throw std::domain_error("AmplitudeConstraint: A must be > 0");
    }
};

struct TruncatedGaussianStats {
    double theta;       // A / sqrt(P)
    double inner_power; // E[X^2 | |X| <= A], X ~ N(0,P)
    double outer_power; // E[X^2 | |X| >  A]
};

struct SmithCapacityResult {
    double value_nats = 0.0;
    std::vector<double> support; // grid points in [-A, A]
    std::vector<double> probs;   // matching masses, sum to 1
    double power_used = 0.0;     // E[X^2] at the optimum
    double multiplier = 0.0;     // Lagrange multiplier on power (0 if inactive)
    double sandwich_gap = 0.0;   // certified duality gap on the grid, nats
    long iterations = 0;
    double gap_to_gaussian = 0.0; // (1/2) ln(1+P) - value_nats
};

struct SmithOptions {
    int grid_size = 501;
    double tol = 1e-6;          // target certified sandwich gap, nats
    long max_iterations = 200000;
    double quad_spacing = 0.2;  // output-grid spacing for the entropy quadrature
    double tail_pad = 10.0;     // quadrature range extends this far beyond [-A,A]
};

/// Non-asymptotic converse bound on (1/2)ln(1+P) - C(A,P), in nats:
///   ((sqrt(1+P)-1) ln(1+P) / (A+A1))^2 * phi(b)^2 * 8,
/// A1 = sqrt(A^2 + P ln(1+P)), b = sqrt(1+P) A1/P + A/P.
double gap_converse(double A, double P);

/// ln of gap_converse, computed in the log domain (the linear value
/// underflows already for moderate A).
double log_gap_converse(double A, double P);

/// Non-asymptotic achievability bound on the gap, in nats:
///   (1/(1-2Q(t))) * [ Q(t) ln(1 + (A sqrt(P)/(1+P)) phi(t)/Q(t)) + h(2Q(t)) ],
/// t = A/sqrt(P).
double gap_achievability(double A, double P);

double log_gap_achievability(double A, double P);

/// Second moments of N(0,P) conditioned inside/outside [-A, A].
TruncatedGaussianStats truncated_gaussian_stats(double A, double P);

/// I(X; X+Z) in nats for a discrete input on `support` with masses `probs`
/// and unit noise variance, via adaptive quadrature of the output entropy.
/// Absolute error below ~1e-9 nats.
double mutual_info_discrete_awgn(const std::vector<double>& support,
                                 const std::vector<double>& probs);

/// Numerical C(A,P) on a uniform grid of opts.grid_size points in [-A,A].
/// Power handled by outer bisection on the multiplier; stops when the
/// certified sandwich gap is at most opts.tol. Throws SolverError with the
/// achieved gap on non-convergence.
SmithCapacityResult capacity_amplitude_constrained(double A, double P,
                                                   const SmithOptions& opts = {});

} // namespace peakbound
