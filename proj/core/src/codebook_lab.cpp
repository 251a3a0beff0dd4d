#include "peakbound/codebook_lab.hpp"

#include "peakbound/scalar_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace peakbound {

EnsembleSpec::EnsembleSpec(EnsembleKind k, long n_, double P_, int M) : kind(k), n(n_), P(P_), constellation_M(M) {
    if (n < 1) throw std::domain_error("EnsembleSpec: n must be >= 1");
    if (!(P > 0.0)) throw std::domain_error("EnsembleSpec: P must be > 0");
    if (kind == EnsembleKind::qam) {
        int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(constellation_M))));
        if (constellation_M < 4 || m * m != constellation_M)
            throw std::domain_error("EnsembleSpec: QAM size must be a perfect square >= 4");
    }
    if (kind == EnsembleKind::psk && constellation_M < 2)
        throw std::domain_error("EnsembleSpec: PSK size must be >= 2");
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
    if (name == "real-gaussian") return EnsembleKind::real_gaussian;
    if (name == "complex-gaussian") return EnsembleKind::complex_gaussian;
    if (name == "uniform-sphere-real") return EnsembleKind::uniform_sphere_real;
    if (name == "uniform-sphere-complex") return EnsembleKind::uniform_sphere_complex;
    if (name == "qam") return EnsembleKind::qam;
    if (name == "psk") return EnsembleKind::psk;
    throw std::domain_error("unknown ensemble kind: " + name);
}

std::string ensemble_kind_name(EnsembleKind k) {
    switch (k) {
    case EnsembleKind::real_gaussian: return "real-gaussian";
    case EnsembleKind::complex_gaussian: return "complex-gaussian";
    case EnsembleKind::uniform_sphere_real: return "uniform-sphere-real";
    case EnsembleKind::uniform_sphere_complex: return "uniform-sphere-complex";
    case EnsembleKind::qam: return "qam";
    case EnsembleKind::psk: return "psk";
    }
    return "?";
}

RealCodeword sample_real_codeword(const EnsembleSpec& spec, Philox& rng) {
    if (!spec.is_real())
        throw std::domain_error("sample_real_codeword: ensemble is complex-valued");
    RealCodeword x(spec.n);
    double sd = std::sqrt(spec.P);
    for (auto& v : x) v = sd * rng.next_normal();
    if (spec.kind == EnsembleKind::uniform_sphere_real) {
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        double scale = std::sqrt(static_cast<double>(spec.n) * spec.P / nrm);
        for (auto& v : x) v *= scale;
    }
    return x;
}

ComplexCodeword sample_complex_codeword(const EnsembleSpec& spec, Philox& rng) {
    ComplexCodeword x(spec.n);
    switch (spec.kind) {
    case EnsembleKind::real_gaussian:
    case EnsembleKind::uniform_sphere_real: {
        RealCodeword r = sample_real_codeword(spec, rng);
        std::copy(r.begin(), r.end(), x.begin());
        return x;
    }
    case EnsembleKind::complex_gaussian:
    case EnsembleKind::uniform_sphere_complex: {
        double sd = std::sqrt(spec.P / 2.0);
        for (auto& v : x) v = {sd * rng.next_normal(), sd * rng.next_normal()};
        if (spec.kind == EnsembleKind::uniform_sphere_complex) {
            double nrm = 0.0;
            for (const auto& v : x) nrm += std::norm(v);
            double scale = std::sqrt(static_cast<double>(spec.n) * spec.P / nrm);
            for (auto& v : x) v *= scale;
        }
        return x;
    }
    case EnsembleKind::qam: {
        int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(spec.constellation_M))));
        // levels +-1, +-3, ..., +-(m-1); unit-average-energy scale to power P
        double avg = 2.0 * (static_cast<double>(m) * m - 1.0) / 3.0;
        double scale = std::sqrt(spec.P / avg);
        for (auto& v : x) {
            int a = static_cast<int>(rng.next_u32() % m);
            int b = static_cast<int>(rng.next_u32() % m);
            v = {scale * (2.0 * a - (m - 1)), scale * (2.0 * b - (m - 1))};
        }
        return x;
    }
    case EnsembleKind::psk: {
        double amp = std::sqrt(spec.P);
        for (auto& v : x) {
            int k = static_cast<int>(rng.next_u32() % spec.constellation_M);
            v = std::polar(amp, 2.0 * std::numbers::pi * k / spec.constellation_M);
        }
        return x;
    }
    }
    throw std::domain_error("sample_complex_codeword: invalid ensemble kind");
}

std::variant<RealCodeword, ComplexCodeword> sample_codeword(const EnsembleSpec& spec, Philox& rng) {
    if (spec.is_real()) return sample_real_codeword(spec, rng);
    return sample_complex_codeword(spec, rng);
}

double expurgation_survival(long n, double A, double P) {
    if (n < 1) throw std::domain_error("expurgation_survival: n must be >= 1");
    if (!(A > 0.0 && P > 0.0)) throw std::domain_error("expurgation_survival: need A, P > 0");
    // (1 - 2Q(A/sqrt(P)))^n via log1p for large n stability
    double q = q_function(A / std::sqrt(P));
    return std::exp(static_cast<double>(n) * std::log1p(-2.0 * q));
}

double pmepr_tail_approx(long n, double A) {
    if (n < 1) throw std::domain_error("pmepr_tail_approx: n must be >= 1");
    if (!(A > 0.0)) throw std::domain_error("pmepr_tail_approx: A must be > 0");
    double rate = std::sqrt(std::numbers::pi / 3.0) * static_cast<double>(n) * A *
                  std::exp(-A * A);
    return std::exp(-rate);
}

CdfTable empirical_pmepr_cdf(const EnsembleSpec& spec, const SeededRun& run, int oversampling,
                             const std::vector<double>& thresholds) {
    CdfTable table;
    table.thresholds = thresholds;
    std::sort(table.thresholds.begin(), table.thresholds.end());
    std::vector<long> counts(table.thresholds.size(), 0);
    for (long t = 0; t < run.trials; ++t) {
        Philox rng = trial_stream(run, t);
        ComplexCodeword x = sample_complex_codeword(spec, rng);
        double v = pmepr(x, oversampling);
        for (size_t k = 0; k < table.thresholds.size(); ++k)
            if (v <= table.thresholds[k]) ++counts[k];
    }
    table.fractions.resize(counts.size());
    for (size_t k = 0; k < counts.size(); ++k)
        table.fractions[k] = static_cast<double>(counts[k]) / static_cast<double>(run.trials);
    return table;
}

PeakStatistics peak_amplitude_statistics(const EnsembleSpec& spec, const SeededRun& run) {
    if (spec.kind != EnsembleKind::real_gaussian)
        throw std::domain_error("peak_amplitude_statistics: real-gaussian ensembles only");
    std::vector<double> peaks(run.trials);
    for (long t = 0; t < run.trials; ++t) {
        Philox rng = trial_stream(run, t);
        RealCodeword x = sample_real_codeword(spec, rng);
        double peak = 0.0;
        for (double v : x) peak = std::max(peak, std::abs(v));
        peaks[t] = peak;
    }
    std::sort(peaks.begin(), peaks.end());
    auto quantile = [&](double q) {
        double idx = q * (peaks.size() - 1);
        size_t lo = static_cast<size_t>(idx);
        size_t hi = std::min(lo + 1, peaks.size() - 1);
        double frac = idx - lo;
        return peaks[lo] * (1.0 - frac) + peaks[hi] * frac;
    };
    PeakStatistics st;
    st.mean = 0.0;
    for (double v : peaks) st.mean += v;
    st.mean /= static_cast<double>(peaks.size());
    st.median = quantile(0.5);
    st.q05 = quantile(0.05);
    st.q25 = quantile(0.25);
    st.q75 = quantile(0.75);
    st.q95 = quantile(0.95);
    st.samples = std::move(peaks);
    return st;
}

double empirical_expurgation_survival(const EnsembleSpec& spec, const SeededRun& run, double A) {
    long hit = 0;
    for (long t = 0; t < run.trials; ++t) {
        Philox rng = trial_stream(run, t);
        bool within = true;
        if (spec.is_real()) {
            RealCodeword x = sample_real_codeword(spec, rng);
            for (double v : x)
                if (std::abs(v) > A) {
                    within = false;
                    break;
                }
        } else {
            ComplexCodeword x = sample_complex_codeword(spec, rng);
            for (const auto& v : x)
                if (std::abs(v) > A) {
                    within = false;
                    break;
                }
        }
        if (within) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(run.trials);
}

} // namespace peakbound
