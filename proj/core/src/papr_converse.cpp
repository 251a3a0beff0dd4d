#include "peakbound/papr_converse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace peakbound {

double delta_alpha_p(double alpha, double P) {
    if (!(alpha >= 0.5 && alpha < 1.0))
        throw std::domain_error("delta_alpha_p: alpha must lie in [1/2,1)");
    if (!(P > 0.0)) throw std::domain_error("delta_alpha_p: P must be > 0");
    double s = std::sqrt(1.0 + P) - 1.0;
    return (1.0 - alpha) * s * s;
}

double asymptotic_peak_threshold(long n, double delta) {
    if (n < 2) throw std::domain_error("asymptotic_peak_threshold: n must be >= 2");
    if (delta < 0.0) throw std::domain_error("asymptotic_peak_threshold: delta must be >= 0");
    return std::sqrt(2.0 * delta * std::log(static_cast<double>(n)));
}

double papr_lower_bound_asymptotic(double alpha, double P, long n) {
    return 2.0 * delta_alpha_p(alpha, P) / P * std::log(static_cast<double>(n));
}

double r_star(double A, double P) {
    if (!(A > 0.0)) throw std::domain_error("r_star: A must be > 0");
    if (!(P > 0.0)) throw std::domain_error("r_star: P must be > 0");
    return (std::sqrt(A * A + P * std::log(P + 1.0)) + A * std::sqrt(P + 1.0)) / (A * P);
}

double u1_lower_bound(double A, double P, double r, U1Variant variant) {
    if (!(A > 0.0)) throw std::domain_error("u1_lower_bound: A must be > 0");
    if (!(P > 0.0)) throw std::domain_error("u1_lower_bound: P must be > 0");
    double s = std::sqrt(1.0 + P) - 1.0;
    if (!(r * s > 1.0)) {
        std::ostringstream os;
        os << "u1_lower_bound: radius must satisfy r > 1/(sqrt(1+P)-1); got r=" << r
           << ", 1/(sqrt(1+P)-1)=" << 1.0 / s;
        throw std::domain_error(os.str());
    }
    double q1 = q_function(r * A);
    double q2 = q_function((r * std::sqrt(1.0 + P) - 1.0) * A);
    switch (variant) {
    case U1Variant::as_printed: {
        double d = q1 - q2;
        return 8.0 * d * d;
    }
    case U1Variant::pinsker_consistent: {
        double d = std::max(0.0, q1 - 2.0 * q2);
        return 2.0 * d * d;
    }
    }
    return 0.0;
}

double u1_at_r_star(double A, double P, U1Variant variant) {
    return u1_lower_bound(A, P, r_star(A, P), variant);
}

double peak_budget_nats(long n, double log_M_nats, double epsilon, double P,
                        const PeakBoundOptions& opts) {
    if (n < 1) throw std::domain_error("peak_budget_nats: n must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("peak_budget_nats: epsilon must lie in (0,1)");
    double dn = static_cast<double>(n);
    double rhs = capacity_nats(P) - log_M_nats / dn + std::log(2.0 / (1.0 - epsilon)) / dn;
    if (opts.include_sqrt_term) rhs += std::sqrt(6.0 * (3.0 + 4.0 * P) / dn);
    return rhs;
}

PeakBoundResult min_peak_amplitude(long n, double log_M_nats, double epsilon, double P,
                                   const PeakBoundOptions& opts) {
    double rhs = peak_budget_nats(n, log_M_nats, epsilon, P, opts);
    if (!(rhs > 0.0)) {
        std::ostringstream os;
        os << "min_peak_amplitude: infeasible parameters, divergence budget rhs=" << rhs
           << " <= 0 (log M exceeds the bound's reach)";
        throw std::domain_error(os.str());
    }

    auto lhs = [&](double A) { return u1_at_r_star(A, P, opts.variant); };

    PeakBoundResult res;
    res.rhs_nats = rhs;
    const double a0 = 1e-8;
    res.lhs_at_zero = lhs(a0);
    if (rhs >= res.lhs_at_zero) {
        res.A = 0.0;
        res.trivial_flag = true;
        res.papr_db = -std::numeric_limits<double>::infinity();
        res.r_star = r_star(a0, P);
        return res;
    }

    // Expand right until LHS drops below rhs; LHS must decrease along the way.
    double lo = a0, f_lo = res.lhs_at_zero;
    double hi = std::max(1.0, std::sqrt(P));
    double f_hi = lhs(hi);
    int expansions = 0;
    while (f_hi >= rhs) {
        if (f_hi > f_lo + 1e-12) {
            std::ostringstream os;
            os << "min_peak_amplitude: LHS not decreasing during bracket expansion: LHS(" << lo
               << ")=" << f_lo << " vs LHS(" << hi << ")=" << f_hi;
            throw SolverError(os.str());
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = lhs(hi);
        if (++expansions > 80) {
            std::ostringstream os;
            os << "min_peak_amplitude: bracket expansion failed, LHS(" << hi << ")=" << f_hi
               << " never dropped below rhs=" << rhs;
            throw SolverError(os.str());
        }
    }

    for (int it = 0; it < opts.max_iter && hi - lo > opts.bisect_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double f_mid = lhs(mid);
        if (f_mid > f_lo + 1e-12 || f_mid < f_hi - 1e-12) {
            std::ostringstream os;
            os << "min_peak_amplitude: monotonicity violated in bracket [" << lo << "," << hi
               << "]: LHS(" << mid << ")=" << f_mid << " outside [" << f_hi << "," << f_lo << "]";
            throw SolverError(os.str());
        }
        if (f_mid >= rhs) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    if (hi - lo > opts.bisect_tol * 4.0 + 1e-15 * hi) {
        std::ostringstream os;
        os << "min_peak_amplitude: bisection did not converge, bracket [" << lo << "," << hi
           << "] width " << hi - lo << " after " << opts.max_iter << " iterations";
        throw SolverError(os.str());
    }

    res.A = 0.5 * (lo + hi);
    res.r_star = r_star(res.A, P);
    res.papr_db = 10.0 * std::log10(res.A * res.A / P);
    res.trivial_flag = res.papr_db < 0.0;
    return res;
}

PeakBoundResult min_peak_amplitude(const CodeParams& code, double P, const LogBase& base,
                                   const PeakBoundOptions& opts) {
    return min_peak_amplitude(code.n, code.log_M * base.to_nats(), code.epsilon, P, opts);
}

double divergence_budget(long n, double epsilon, double P, const RegimeParams& regime) {
    double dn = static_cast<double>(n);
    double a = std::sqrt(6.0 * (3.0 + 4.0 * P)) + std::log(2.0 / (1.0 - epsilon)) / std::sqrt(dn);
    return (regime.gamma * std::pow(dn, regime.alpha) + a * std::sqrt(dn)) / dn;
}

RegimeParams adjusted_regime_max_error(const RegimeParams& regime, double epsilon,
                                       double epsilon_prime, long n) {
    if (!(epsilon_prime > 2.0 * epsilon && epsilon_prime < 1.0))
        throw std::domain_error("adjusted_regime_max_error: need eps' in (2 eps, 1)");
    double c = 1.0 - epsilon / epsilon_prime; // surviving fraction, > 1/2
    double gamma_prime =
        regime.gamma - std::log(c - 0.5) / std::pow(static_cast<double>(n), regime.alpha);
    return RegimeParams(regime.alpha, gamma_prime);
}

} // namespace peakbound
