#include "peakbound/codebook_lab.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace peakbound;

TEST_CASE("ensemble names round-trip and bad specs are rejected") {
    for (EnsembleKind k :
         {EnsembleKind::real_gaussian, EnsembleKind::complex_gaussian,
          EnsembleKind::uniform_sphere_real, EnsembleKind::uniform_sphere_complex,
          EnsembleKind::qam, EnsembleKind::psk})
        CHECK(parse_ensemble_kind(ensemble_kind_name(k)) == k);
    CHECK_THROWS(parse_ensemble_kind("laplacian"));
    CHECK_THROWS(EnsembleSpec(EnsembleKind::qam, 16, 1.0, 3));   // not a perfect square
    CHECK_THROWS(EnsembleSpec(EnsembleKind::qam, 16, 1.0, 0));
    CHECK_NOTHROW(EnsembleSpec(EnsembleKind::qam, 16, 1.0, 16));
    CHECK_NOTHROW(EnsembleSpec(EnsembleKind::psk, 16, 1.0, 8));
}

TEST_CASE("sampled codewords respect their power normalization") {
    // Sphere ensembles: exact norm. Constellations: unit-energy scaling.
    Philox rng(7, 0);
    EnsembleSpec sph(EnsembleKind::uniform_sphere_complex, 64, 2.5);
    ComplexCodeword x = sample_complex_codeword(sph, rng);
    double norm2 = 0.0;
    for (auto& v : x) norm2 += std::norm(v);
    CHECK(norm2 == doctest::Approx(64.0 * 2.5).epsilon(1e-9));

    EnsembleSpec psk(EnsembleKind::psk, 64, 2.5, 8);
    ComplexCodeword y = sample_complex_codeword(psk, rng);
    for (auto& v : y) CHECK(std::norm(v) == doctest::Approx(2.5).epsilon(1e-12));

    // QAM: unit average energy over the constellation; long-run average = P.
    EnsembleSpec qam(EnsembleKind::qam, 4096, 2.5, 16);
    ComplexCodeword z = sample_complex_codeword(qam, rng);
    double avg = 0.0;
    for (auto& v : z) avg += std::norm(v);
    avg /= static_cast<double>(z.size());
    CHECK(avg == doctest::Approx(2.5).epsilon(0.1));

    // Real Gaussian: empirical per-symbol power close to P.
    EnsembleSpec rg(EnsembleKind::real_gaussian, 20000, 4.0);
    RealCodeword w = sample_real_codeword(rg, rng);
    double p = 0.0;
    for (double v : w) p += v * v;
    p /= static_cast<double>(w.size());
    CHECK(p == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("expurgation survival and PMEPR tail reference formulas") {
    // Frozen values.
    CHECK(expurgation_survival(100, 3.0, 1.0) ==
          doctest::Approx(7.631163962487808e-01).epsilon(1e-12));
    CHECK(pmepr_tail_approx(256, 2.0) ==
          doctest::Approx(6.797600291720234e-05).epsilon(1e-10));
    // Independent recomputation.
    double q = 0.5 * std::erfc((3.0 / std::sqrt(2.0)) / std::sqrt(2.0));
    CHECK(expurgation_survival(100, 3.0, 2.0) ==
          doctest::Approx(std::pow(1.0 - 2.0 * q, 100)).epsilon(1e-12));
    CHECK(pmepr_tail_approx(64, 1.5) ==
          doctest::Approx(std::exp(-std::sqrt(M_PI / 3.0) * 64.0 * 1.5 *
                                   std::exp(-2.25))).epsilon(1e-12));
    // Monotone in A.
    CHECK(expurgation_survival(100, 3.5, 1.0) > expurgation_survival(100, 3.0, 1.0));
    CHECK(pmepr_tail_approx(256, 2.5) > pmepr_tail_approx(256, 2.0));
}

TEST_CASE("replay is bit-identical for a fixed seed") {
    EnsembleSpec spec(EnsembleKind::complex_gaussian, 32, 1.0);
    SeededRun run(99, 200);
    std::vector<double> th{2.0, 4.0, 6.0, 8.0};
    CdfTable a = empirical_pmepr_cdf(spec, run, 4, th);
    CdfTable b = empirical_pmepr_cdf(spec, run, 4, th);
    REQUIRE(a.fractions.size() == b.fractions.size());
    for (size_t i = 0; i < a.fractions.size(); ++i) CHECK(a.fractions[i] == b.fractions[i]);
    // CDF is monotone in the threshold.
    for (size_t i = 1; i < a.fractions.size(); ++i) CHECK(a.fractions[i] >= a.fractions[i - 1]);
    // A different seed gives a different draw (overwhelmingly).
    CdfTable c = empirical_pmepr_cdf(spec, SeededRun(100, 200), 4, th);
    bool any_diff = false;
    for (size_t i = 0; i < a.fractions.size(); ++i) any_diff |= (a.fractions[i] != c.fractions[i]);
    CHECK(any_diff);
}

TEST_CASE("per-trial streams are order-independent") {
    // Trial t's stream depends only on (seed, t), not on what ran before.
    SeededRun run(5, 10);
    Philox direct = trial_stream(run, 7);
    double first = direct.next_normal();
    Philox again = trial_stream(run, 7);
    CHECK(again.next_normal() == first);
}

TEST_CASE("peak statistics are ordered and consistent with the empirical survival") {
    EnsembleSpec spec(EnsembleKind::real_gaussian, 64, 1.0);
    SeededRun run(11, 500);
    PeakStatistics st = peak_amplitude_statistics(spec, run);
    CHECK(st.q05 <= st.q25);
    CHECK(st.q25 <= st.median);
    CHECK(st.median <= st.q75);
    CHECK(st.q75 <= st.q95);
    REQUIRE(st.samples.size() == 500);
    for (size_t i = 1; i < st.samples.size(); ++i) CHECK(st.samples[i] >= st.samples[i - 1]);
    // empirical_expurgation_survival is the CDF of the same peak draw.
    double frac = empirical_expurgation_survival(spec, run, st.median);
    CHECK(frac == doctest::Approx(0.5).epsilon(0.05));
}
