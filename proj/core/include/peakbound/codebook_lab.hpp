#pragma once

// Random codeword ensembles and Monte-Carlo validation of the probabilistic
// claims: expected expurgation survival, the PMEPR tail approximation, and
// extreme-value scaling of the peak amplitude. Trials are replayable: each
// trial owns a counter-derived Philox stream, so results are bit-identical
// for a fixed (spec, seed, trials) regardless of evaluation order.

#include "peakbound/ofdm_pmepr.hpp"
#include "peakbound/philox.hpp"

#include <string>
#include <variant>
#include <vector>

namespace peakbound {

enum class EnsembleKind {
    real_gaussian,
    complex_gaussian,
    uniform_sphere_real,
    uniform_sphere_complex,
    qam,
    psk,
};

struct EnsembleSpec {
    EnsembleKind kind;
    long n;             // blocklength
    double P;           // per-symbol average power
    int constellation_M = 0; // for qam/psk

    EnsembleSpec(EnsembleKind k, long n_, double P_, int M = 0);
    bool is_real() const {
        return kind == EnsembleKind::real_gaussian || kind == EnsembleKind::uniform_sphere_real;
    }
};

EnsembleKind parse_ensemble_kind(const std::string& name);
std::string ensemble_kind_name(EnsembleKind k);

struct SeededRun {
    std::uint64_t seed;
    long trials;
    SeededRun(std::uint64_t s, long t) : seed(s), trials(t) {
        if (trials < 1) throw std::domain_error("SeededRun: trials must be >= 1");
    }
};

/// One draw from the ensemble using the given per-trial stream.
std::variant<RealCodeword, ComplexCodeword> sample_codeword(const EnsembleSpec& spec, Philox& rng);

RealCodeword sample_real_codeword(const EnsembleSpec& spec, Philox& rng);
ComplexCodeword sample_complex_codeword(const EnsembleSpec& spec, Philox& rng);

/// Philox stream for trial `t` of a run.
inline Philox trial_stream(const SeededRun& run, long t) {
    return Philox(run.seed, static_cast<std::uint64_t>(t));
}

/// Expected fraction (1 - 2Q(A/sqrt(P)))^n of i.i.d. N(0,P) codewords whose
/// peak amplitude stays within A.
double expurgation_survival(long n, double A, double P);

/// exp(-sqrt(pi/3) n A e^{-A^2}): reference approximation to
/// P[PMEPR <= A^2] for a complex-Gaussian codeword. A is the normalized
/// peak-to-root-mean ratio (P-free after PMEPR normalization).
double pmepr_tail_approx(long n, double A);

struct CdfTable {
    std::vector<double> thresholds;
    std::vector<double> fractions; // empirical P[PMEPR <= threshold]
};

CdfTable empirical_pmepr_cdf(const EnsembleSpec& spec, const SeededRun& run, int oversampling,
                             const std::vector<double>& thresholds);

struct PeakStatistics {
    double mean;
    double median;
    double q05, q25, q75, q95;
    std::vector<double> samples; // sorted peak amplitudes
};

/// Order statistics of ||X||_inf over trials (real-gaussian ensembles).
PeakStatistics peak_amplitude_statistics(const EnsembleSpec& spec, const SeededRun& run);

/// Empirical fraction of trials whose peak amplitude stays within A;
/// Monte-Carlo counterpart of expurgation_survival.
double empirical_expurgation_survival(const EnsembleSpec& spec, const SeededRun& run, double A);

} // namespace peakbound
