#include "peakbound/scalar_math.hpp"

#include <cmath>

namespace peakbound {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
} // namespace

LogBase::LogBase(double b) : base(b) {
    if (!(b > 1.0)) throw std::domain_error("LogBase: base must be > 1");
    scale_ = 1.0 / std::log(b);
}

double q_function(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double log_normal_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

namespace {

// Acklam's rational approximation to the standard normal quantile,
// accurate to ~1.15e-9; polished below by Halley steps.
double norm_quantile_estimate(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("q_inverse: p must lie in (0,1)");
    // Q(x) = p  <=>  Phi(-x) = p, so x = -quantile(p).
    double x = -norm_quantile_estimate(p);
    // Halley polish on f(x) = Q(x) - p; f' = -phi, f'' = x*phi.
    for (int it = 0; it < 3; ++it) {
        double f = q_function(x) - p;
        double d = normal_pdf(x);
        if (d == 0.0) break;
        double u = f / d;
        x += u / (1.0 - 0.5 * x * u); // Halley
    }
    return x;
}

std::pair<double, double> mills_bounds(double x) {
    if (!(x > 0.0)) throw std::domain_error("mills_bounds: x must be > 0");
    double phi = normal_pdf(x);
    return {x * phi / (1.0 + x * x), phi / x};
}

double binary_entropy_nats(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binary_entropy: p must lie in [0,1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
    return h;
}

double binary_entropy(double p, const LogBase& base) {
    return binary_entropy_nats(p) * base.from_nats();
}

} // namespace peakbound
