#include "peakbound/ofdm_pmepr.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace peakbound {

namespace {

double mean_power(const ComplexCodeword& x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return s / static_cast<double>(x.size());
}

void check_nonzero(double power, const char* who) {
    if (!(power > 0.0)) throw std::domain_error(std::string(who) + ": zero codeword");
}

// Forward-exponent transform y_j = sum_k x_k e^{+2 pi i k j / N}. Plans are
// cached per length; FFTW_UNALIGNED lets one plan serve caller buffers.
void exp_plus_dft(std::vector<std::complex<double>>& buf) {
    static std::unordered_map<size_t, fftw_plan> cache;
    static std::mutex mu;
    size_t n = buf.size();
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it == cache.end()) {
            std::vector<std::complex<double>> tmp(n);
            plan = fftw_plan_dft_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(tmp.data()),
                                    reinterpret_cast<fftw_complex*>(tmp.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
            cache.emplace(n, plan);
        } else {
            plan = it->second;
        }
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
}

} // namespace

OrthogonalRotation::OrthogonalRotation(std::vector<std::vector<std::complex<double>>> rows)
    : rows_(std::move(rows)) {
    size_t n = rows_.size();
    for (const auto& r : rows_)
        if (r.size() != n) throw std::domain_error("OrthogonalRotation: matrix must be square");
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = a; b < n; ++b) {
            std::complex<double> dot = 0.0;
            for (size_t k = 0; k < n; ++k) dot += rows_[k][a] * std::conj(rows_[k][b]);
            double target = a == b ? 1.0 : 0.0;
            if (std::abs(dot - target) > 1e-10)
                throw std::domain_error("OrthogonalRotation: columns not orthonormal");
        }
    }
}

OrthogonalRotation OrthogonalRotation::hadamard(int n) {
    if (n < 1 || (n & (n - 1)) != 0)
        throw std::domain_error("OrthogonalRotation::hadamard: n must be a power of two");
    std::vector<std::vector<std::complex<double>>> h(n, std::vector<std::complex<double>>(n));
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int bits = i & j, par = 0;
            while (bits) {
                par ^= bits & 1;
                bits >>= 1;
            }
            h[i][j] = par ? -scale : scale;
        }
    return OrthogonalRotation(std::move(h));
}

OrthogonalRotation OrthogonalRotation::identity(int n) {
    std::vector<std::vector<std::complex<double>>> id(n, std::vector<std::complex<double>>(n, 0.0));
    for (int i = 0; i < n; ++i) id[i][i] = 1.0;
    return OrthogonalRotation(std::move(id));
}

ComplexCodeword OrthogonalRotation::apply(const ComplexCodeword& x) const {
    if (static_cast<int>(x.size()) != dim())
        throw std::domain_error("OrthogonalRotation::apply: dimension mismatch");
    ComplexCodeword out(x.size(), 0.0);
    for (size_t i = 0; i < rows_.size(); ++i)
        for (size_t j = 0; j < rows_.size(); ++j) out[i] += rows_[i][j] * x[j];
    return out;
}

ComplexCodeword OrthogonalRotation::apply(const RealCodeword& x) const {
    ComplexCodeword cx(x.begin(), x.end());
    return apply(cx);
}

double papr(const ComplexCodeword& x) {
    if (x.empty()) throw std::domain_error("papr: empty codeword");
    double peak = 0.0, power = mean_power(x);
    check_nonzero(power, "papr");
    for (const auto& v : x) peak = std::max(peak, std::norm(v));
    return peak / power;
}

double papr(const RealCodeword& x) {
    ComplexCodeword cx(x.begin(), x.end());
    return papr(cx);
}

std::complex<double> baseband_envelope(const ComplexCodeword& x, double t) {
    size_t n = x.size();
    if (n == 0) throw std::domain_error("baseband_envelope: empty codeword");
    if (!(t >= 0.0 && t < static_cast<double>(n)))
        throw std::domain_error("baseband_envelope: t must lie in [0, n)");
    std::complex<double> s = 0.0;
    double w = 2.0 * std::numbers::pi * t / static_cast<double>(n);
    for (size_t k = 0; k < n; ++k)
        s += x[k] * std::polar(1.0, w * static_cast<double>(k));
    return s / std::sqrt(static_cast<double>(n));
}

double pmepr(const ComplexCodeword& x, int oversampling, const PmeprOptions& opts) {
    size_t n = x.size();
    if (n == 0) throw std::domain_error("pmepr: empty codeword");
    if (oversampling < 1) throw std::domain_error("pmepr: oversampling L must be >= 1");
    double power = mean_power(x);
    check_nonzero(power, "pmepr");

    // Zero-padded length-nL transform evaluates s_b on the grid {j/L}.
    size_t nl = n * static_cast<size_t>(oversampling);
    std::vector<std::complex<double>> buf(nl, 0.0);
    std::copy(x.begin(), x.end(), buf.begin());
    exp_plus_dft(buf);
    double peak = 0.0;
    size_t jmax = 0;
    for (size_t j = 0; j < nl; ++j) {
        double v = std::norm(buf[j]);
        if (v > peak) {
            peak = v;
            jmax = j;
        }
    }
    peak /= static_cast<double>(n); // 1/sqrt(n) envelope normalization

    if (opts.refine) {
        // Golden-section polish of |s_b(t)|^2 in the bracket around the grid max.
        double tc = static_cast<double>(jmax) / oversampling;
        double dn = static_cast<double>(n);
        double lo = tc - 1.0 / oversampling, hi = tc + 1.0 / oversampling;
        auto env2 = [&](double t) {
            double tw = t;
            while (tw < 0.0) tw += dn;
            while (tw >= dn) tw -= dn;
            return std::norm(baseband_envelope(x, tw));
        };
        const double gr = 0.61803398874989484820;
        double a = lo, b = hi;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = env2(c), fd = env2(d);
        while (b - a > opts.refine_tol) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = env2(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = env2(d);
            }
        }
        peak = std::max(peak, std::max(fc, fd));
    }
    return peak / power;
}

double dft_peak_lower_bound(const ComplexCodeword& x) {
    size_t n = x.size();
    if (n == 0) throw std::domain_error("dft_peak_lower_bound: empty codeword");
    double power = mean_power(x);
    check_nonzero(power, "dft_peak_lower_bound");
    std::vector<std::complex<double>> buf(x);
    exp_plus_dft(buf);
    double peak = 0.0;
    for (const auto& v : buf) peak = std::max(peak, std::norm(v));
    return peak / static_cast<double>(n) / power;
}

double rotated_peak(const ComplexCodeword& x, const OrthogonalRotation& U) {
    ComplexCodeword y = U.apply(x);
    double peak = 0.0;
    for (const auto& v : y) peak = std::max(peak, std::abs(v));
    return peak;
}

double rotated_peak(const RealCodeword& x, const OrthogonalRotation& U) {
    ComplexCodeword cx(x.begin(), x.end());
    return rotated_peak(cx, U);
}

} // namespace peakbound
