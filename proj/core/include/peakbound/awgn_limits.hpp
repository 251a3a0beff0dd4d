#pragma once

// Classical AWGN capacity, dispersion and the normal approximation to
// log M*(n, epsilon, P). Unit-variance noise throughout; SNR P is a linear
// power ratio.

#include "peakbound/scalar_math.hpp"

namespace peakbound {

struct ChannelParams {
    double P; // SNR, linear
    explicit ChannelParams(double snr) : P(snr) {
        if (!(P > 0.0)) throw std::domain_error("ChannelParams: P must be > 0");
    }
};

struct CodeParams {
    long n;         // blocklength
    double log_M;   // log-cardinality, in the configured display base
    double epsilon; // error probability

    CodeParams(long n_, double log_M_, double eps) : n(n_), log_M(log_M_), epsilon(eps) {
        if (n < 1) throw std::domain_error("CodeParams: n must be >= 1");
        if (!(log_M >= 0.0)) throw std::domain_error("CodeParams: log_M must be >= 0");
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::domain_error("CodeParams: epsilon must lie in (0,1)");
    }
};

/// C(P) = (1/2) ln(1+P), in nats.
double capacity_nats(double P);

/// V(P) = (1/2) P(P+2)/(P+1)^2, in nats^2.
double dispersion_nats(double P);

double capacity(double P, const LogBase& base = LogBase{});
double dispersion(double P, const LogBase& base = LogBase{});

/// n C(P) - sqrt(n V(P)) Qinv(eps) + offset, in nats. The O(log n) third
/// order term is deliberately omitted (its constant is unspecified); callers
/// may pass a nonzero `offset_nats` to reinstate one.
double normal_approx_log_M_nats(long n, double epsilon, double P, double offset_nats = 0.0);

double normal_approx_log_M(long n, double epsilon, double P, const LogBase& base = LogBase{},
                           double offset_nats = 0.0);

/// f * n * C(P), the log-cardinality of a code running at a fraction f of
/// capacity. In nats.
double rate_fraction_to_log_M_nats(long n, double P, double fraction);

double rate_fraction_to_log_M(long n, double P, double fraction,
                              const LogBase& base = LogBase{});

} // namespace peakbound
