#pragma once

// Scalar special functions used by every bound in the library.
//
// Convention: all internal computation is carried out in natural log (nats),
// so every "log e" factor in the formulas equals 1. Conversion to a display
// base (bits by default) happens only at the output layer via LogBase.

#include <stdexcept>
#include <utility>

namespace peakbound {

/// Display log base. Internal math is always in nats; LogBase only rescales
/// values on the way out.
struct LogBase {
    double base = 2.0;

    explicit LogBase(double b = 2.0);

    /// Multiplier converting nats to this base: 1/ln(base).
    double from_nats() const { return scale_; }
    double to_nats() const { return 1.0 / scale_; }

  private:
    double scale_;
};

/// Standard Gaussian upper-tail probability Q(x) = P[N(0,1) > x].
/// Relative error below ~1e-14 until the result approaches the denormal
/// range (|x| around 37.5), where double precision itself gives out.
double q_function(double x);

/// Inverse of q_function on (0,1). Throws std::domain_error outside.
double q_inverse(double p);

/// Standard normal density phi(x) = exp(-x^2/2)/sqrt(2*pi).
double normal_pdf(double x);

/// log of normal_pdf, safe far into the tail.
double log_normal_pdf(double x);

/// Two-sided elementary bounds on the Gaussian tail for x > 0:
///   x*phi(x)/(1+x^2) <= Q(x) <= phi(x)/x.
/// Throws std::domain_error for x <= 0.
std::pair<double, double> mills_bounds(double x);

/// Binary entropy in nats, with the 0*log(0) = 0 convention.
double binary_entropy_nats(double p);

/// Binary entropy in the given display base.
double binary_entropy(double p, const LogBase& base = LogBase{});

} // namespace peakbound
