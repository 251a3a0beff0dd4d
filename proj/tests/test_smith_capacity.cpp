#include "peakbound/smith_capacity.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace peakbound;

TEST_CASE("analytic gap bounds: frozen values and log-domain consistency") {
    // Frozen at (A, P) = (5, 1); the converse side is already deep in the tail.
    CHECK(gap_converse(5.0, 1.0) == doctest::Approx(5.114900903e-68).epsilon(1e-8));
    CHECK(gap_achievability(5.0, 1.0) == doctest::Approx(9.568534213e-06).epsilon(1e-8));
    CHECK(log_gap_converse(5.0, 1.0) == doctest::Approx(-154.943628298124).epsilon(1e-10));
    CHECK(log_gap_achievability(5.0, 1.0) == doctest::Approx(-11.557030528972).epsilon(1e-10));
    // Log and linear versions agree where the linear value is representable.
    for (double A : {1.0, 2.0, 4.0, 8.0})
        for (double P : {0.5, 1.0, 10.0}) {
            if (gap_converse(A, P) > 1e-300)
                CHECK(log_gap_converse(A, P) ==
                      doctest::Approx(std::log(gap_converse(A, P))).epsilon(1e-9));
            CHECK(log_gap_achievability(A, P) ==
                  doctest::Approx(std::log(gap_achievability(A, P))).epsilon(1e-9));
        }
    // The log version keeps going after the linear one underflows.
    CHECK(gap_converse(20.0, 1.0) == 0.0);
    CHECK(std::isfinite(log_gap_converse(20.0, 1.0)));
}

TEST_CASE("truncated Gaussian second moments") {
    auto ts = truncated_gaussian_stats(1.0, 1.0);
    CHECK(ts.theta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ts.inner_power == doctest::Approx(0.291125094773).epsilon(1e-10));
    CHECK(ts.outer_power == doctest::Approx(2.525135276161).epsilon(1e-10));
    // Law of total variance: mix back to the unconditional power P.
    for (double A : {0.5, 1.0, 2.5})
        for (double P : {0.3, 1.0, 9.0}) {
            auto s = truncated_gaussian_stats(A, P);
            double pin = 1.0 - 2.0 * q_function(A / std::sqrt(P));
            double mixed = pin * s.inner_power + (1.0 - pin) * s.outer_power;
            CHECK(mixed == doctest::Approx(P).epsilon(1e-12));
        }
}

TEST_CASE("mutual information of antipodal signaling") {
    // Frozen oracle for equiprobable +-1 in unit noise.
    CHECK(mutual_info_discrete_awgn({-1.0, 1.0}, {0.5, 0.5}) ==
          doctest::Approx(0.336830820348).epsilon(1e-8));
    // Degenerate input carries nothing.
    CHECK(mutual_info_discrete_awgn({0.7}, {1.0}) == doctest::Approx(0.0).epsilon(1e-9));
    // Invariant under input sign flip.
    double a = mutual_info_discrete_awgn({-2.0, 0.5}, {0.3, 0.7});
    double b = mutual_info_discrete_awgn({-0.5, 2.0}, {0.7, 0.3});
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
}

TEST_CASE("capacity solver: tightly constrained case reduces to antipodal") {
    SmithOptions o;
    o.grid_size = 301;
    SmithCapacityResult r = capacity_amplitude_constrained(1.0, 1.0, o);
    // At A = 1, P = 1 the optimum is equiprobable +-1 (power constraint inactive).
    CHECK(r.value_nats == doctest::Approx(0.336830820348).epsilon(1e-5));
    CHECK(r.sandwich_gap <= o.tol);
    CHECK(r.power_used <= 1.0 + 1e-9);
    CHECK(r.gap_to_gaussian > 0.0);
    CHECK(r.gap_to_gaussian ==
          doctest::Approx(0.5 * std::log(2.0) - r.value_nats).epsilon(1e-12));
    // Distribution sanity: normalized and symmetric.
    double mass = std::accumulate(r.probs.begin(), r.probs.end(), 0.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    size_t n = r.probs.size();
    for (size_t i = 0; i < n; ++i) {
        CHECK(r.probs[i] >= 0.0);
        CHECK(r.probs[i] == doctest::Approx(r.probs[n - 1 - i]).epsilon(1e-6));
        CHECK(std::abs(r.support[i] + r.support[n - 1 - i]) < 1e-12);
    }
}

TEST_CASE("capacity solver: loose amplitude approaches the Gaussian value") {
    SmithOptions o;
    o.grid_size = 301;
    SmithCapacityResult r = capacity_amplitude_constrained(6.0 * std::sqrt(2.0), 1.0, o);
    CHECK(0.5 * std::log(2.0) - r.value_nats < 1e-3);
    CHECK(r.value_nats < 0.5 * std::log(2.0)); // never exceeds the unconstrained capacity
    CHECK(r.sandwich_gap <= o.tol);
}

TEST_CASE("solver input validation") {
    CHECK_THROWS_AS(capacity_amplitude_constrained(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(capacity_amplitude_constrained(1.0, 0.0), std::domain_error);
}
