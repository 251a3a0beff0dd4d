#pragma once

// Minimum peak amplitude / PAPR required of codes operating near the AWGN
// capacity. The single-letter divergence bound
//
//   u1(A) >= ( Q(r A) - Q((r sqrt(1+P) - 1) A) )^2 * 8     [nats]
//
// evaluated at the optimizing radius r* gives, via the output-distribution
// divergence budget of a good code, a solvable equation for the smallest
// admissible peak amplitude A.

#include "peakbound/awgn_limits.hpp"

namespace peakbound {

/// Convergence regime: rates of the form C(P) - gamma * n^(alpha-1).
struct RegimeParams {
    double alpha; // in [1/2, 1)
    double gamma; // > 0

    RegimeParams(double a, double g) : alpha(a), gamma(g) {
        if (!(alpha >= 0.5 && alpha < 1.0))
            throw std::domain_error("RegimeParams: alpha must lie in [1/2,1)");
        if (!(gamma > 0.0)) throw std::domain_error("RegimeParams: gamma must be > 0");
    }
};

enum class U1Variant {
    as_printed,         // 8 * (Q(rA) - Q((r sqrt(1+P)-1) A))^2
    pinsker_consistent, // 2 * (Q(rA) - 2 Q((r sqrt(1+P)-1) A))^2, clamped at 0
};

struct PeakBoundOptions {
    U1Variant variant = U1Variant::as_printed;
    bool include_sqrt_term = true; // the sqrt(6(3+4P)/n) term of the budget
    double bisect_tol = 1e-13;     // absolute, in A
    int max_iter = 240;
};

struct PeakBoundResult {
    double A = 0.0;       // solved minimum peak amplitude
    double r_star = 0.0;  // optimizing radius at the solution
    double rhs_nats = 0.0;// divergence budget per symbol
    double lhs_at_zero = 0.0;
    double papr_db = 0.0; // 10 log10(A^2 / P)
    bool trivial_flag = false; // bound weaker than the trivial PAPR >= 1
};

/// Peak exponent delta_{alpha,P} = (1-alpha)(sqrt(1+P)-1)^2.
double delta_alpha_p(double alpha, double P);

/// sqrt(2 delta ln n): the peak threshold implied by exponent delta.
double asymptotic_peak_threshold(long n, double delta);

/// (2 delta_{alpha,P} / P) * ln n: asymptotic PAPR lower bound (linear).
double papr_lower_bound_asymptotic(double alpha, double P, long n);

/// Closed-form maximizer of the Q-difference bound over the radius r:
///   r* = (sqrt(A^2 + P ln(P+1)) + A sqrt(P+1)) / (A P).
/// Always satisfies the validity constraint r* (sqrt(1+P)-1) > 1.
double r_star(double A, double P);

/// Single-letter divergence lower bound at radius r, in nats. Requires
/// r > 1/(sqrt(1+P)-1) so that the Q arguments are ordered.
double u1_lower_bound(double A, double P, double r,
                      U1Variant variant = U1Variant::as_printed);

/// u1_lower_bound at the optimizing radius r*(A,P).
double u1_at_r_star(double A, double P, U1Variant variant = U1Variant::as_printed);

/// Divergence budget per symbol implied by the code parameters, in nats:
///   C - log M / n + sqrt(6(3+4P)/n) + (1/n) ln(2/(1-eps)).
/// The sqrt term is dropped when opts.include_sqrt_term is false.
double peak_budget_nats(long n, double log_M_nats, double epsilon, double P,
                        const PeakBoundOptions& opts = {});

/// Solves u1(A, r*(A)) = budget for the minimum peak amplitude A by
/// expand-right bracketing plus bisection on the decreasing branch.
/// Returns A = 0 with trivial_flag when the budget exceeds the A->0 limit
/// of the left side (no nontrivial bound). Throws SolverError on
/// non-convergence or a monotonicity violation inside the bracket.
PeakBoundResult min_peak_amplitude(long n, double log_M_nats, double epsilon, double P,
                                   const PeakBoundOptions& opts = {});

/// Convenience overload; code.log_M is interpreted in `base`.
PeakBoundResult min_peak_amplitude(const CodeParams& code, double P,
                                   const LogBase& base = LogBase{},
                                   const PeakBoundOptions& opts = {});

/// (gamma n^alpha + a sqrt(n)) / n, with a = sqrt(6(3+4P)) + ln(2/(1-eps))/sqrt(n),
/// i.e. the explicit non-asymptotic constants in place of the unspecified a.
double divergence_budget(long n, double epsilon, double P, const RegimeParams& regime);

/// Max-error reduction bookkeeping: an average-error (n, M, eps) code in the
/// regime (alpha, gamma) yields a max-error subcode in the regime
/// (alpha, gamma') at error eps' in (2 eps, 1), with
///   gamma' = gamma - ln(c - 1/2)/n^alpha,  c = 1 - eps/eps'.
RegimeParams adjusted_regime_max_error(const RegimeParams& regime, double epsilon,
                                       double epsilon_prime, long n);

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace peakbound
