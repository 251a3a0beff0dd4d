#include "peakbound/awgn_limits.hpp"

#include <cmath>

namespace peakbound {

double capacity_nats(double P) {
    if (P < 0.0) throw std::domain_error("capacity: P must be >= 0");
    return 0.5 * std::log1p(P);
}

double dispersion_nats(double P) {
    if (P < 0.0) throw std::domain_error("dispersion: P must be >= 0");
    double q = (P + 1.0) * (P + 1.0);
    return 0.5 * P * (P + 2.0) / q;
}

double capacity(double P, const LogBase& base) { return capacity_nats(P) * base.from_nats(); }

double dispersion(double P, const LogBase& base) {
    double s = base.from_nats();
    return dispersion_nats(P) * s * s;
}

double normal_approx_log_M_nats(long n, double epsilon, double P, double offset_nats) {
    if (n < 1) throw std::domain_error("normal_approx_log_M: n must be >= 1");
    if (!(P > 0.0)) throw std::domain_error("normal_approx_log_M: P must be > 0");
    double dn = static_cast<double>(n);
    return dn * capacity_nats(P) - std::sqrt(dn * dispersion_nats(P)) * q_inverse(epsilon) +
           offset_nats;
}

double normal_approx_log_M(long n, double epsilon, double P, const LogBase& base,
                           double offset_nats) {
    return normal_approx_log_M_nats(n, epsilon, P, offset_nats) * base.from_nats();
}

double rate_fraction_to_log_M_nats(long n, double P, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::domain_error("rate_fraction_to_log_M: fraction must lie in (0,1]");
    return fraction * static_cast<double>(n) * capacity_nats(P);
}

double rate_fraction_to_log_M(long n, double P, double fraction, const LogBase& base) {
    return rate_fraction_to_log_M_nats(n, P, fraction) * base.from_nats();
}

} // namespace peakbound
