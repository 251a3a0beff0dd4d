#include "peakbound/papr_converse.hpp"

#include <doctest.h>

#include <cmath>

using namespace peakbound;

namespace {
// Independent Q for cross-checks.
double qref(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }
} // namespace

TEST_CASE("peak exponent delta_{alpha,P}") {
    // Frozen: (1-1/2)(sqrt(101)-1)^2 at P=100.
    CHECK(delta_alpha_p(0.5, 100.0) == doctest::Approx(40.950124378879).epsilon(1e-12));
    // Decreasing in alpha, vanishing at alpha -> 1.
    double prev = 1e300;
    for (double a = 0.5; a < 1.0; a += 0.01) {
        double d = delta_alpha_p(a, 100.0);
        CHECK(d < prev);
        CHECK(d > 0.0);
        prev = d;
    }
    CHECK(delta_alpha_p(0.999, 100.0) < 0.1);
}

TEST_CASE("asymptotic threshold and PAPR bound") {
    CHECK(asymptotic_peak_threshold(10000, 2.0) ==
          doctest::Approx(std::sqrt(4.0 * std::log(1e4))).epsilon(1e-13));
    // Frozen: (2 delta_{1/2,100} / 100) ln(1e4).
    CHECK(papr_lower_bound_asymptotic(0.5, 100.0, 10000) ==
          doctest::Approx(7.543291676085).epsilon(1e-12));
}

TEST_CASE("r_star closed form and validity") {
    // Frozen spot value.
    CHECK(r_star(12.57, 100.0) == doctest::Approx(0.120299947510).epsilon(1e-11));
    // r* always clears the validity threshold 1/(sqrt(1+P)-1).
    for (double P : {0.1, 1.0, 10.0, 100.0, 1e4})
        for (double A : {0.05, 0.5, 2.0, 20.0, 500.0})
            CHECK(r_star(A, P) * (std::sqrt(1.0 + P) - 1.0) > 1.0);
    // Independent closed form.
    double A = 3.0, P = 7.0;
    double expect = (std::sqrt(A * A + P * std::log(P + 1.0)) + A * std::sqrt(P + 1.0)) / (A * P);
    CHECK(r_star(A, P) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("u1 lower bound against a direct evaluation") {
    double A = 2.5, P = 4.0, r = 1.4;
    double t1 = r * A, t2 = (r * std::sqrt(1.0 + P) - 1.0) * A;
    double d = qref(t1) - qref(t2);
    CHECK(u1_lower_bound(A, P, r, U1Variant::as_printed) ==
          doctest::Approx(8.0 * d * d).epsilon(1e-12));
    double dp = qref(t1) - 2.0 * qref(t2);
    double expect_p = dp > 0.0 ? 2.0 * dp * dp : 0.0;
    CHECK(u1_lower_bound(A, P, r, U1Variant::pinsker_consistent) ==
          doctest::Approx(expect_p).epsilon(1e-12));
    // r* maximizes over r (local comparison).
    double rs = r_star(A, P);
    double at_star = u1_at_r_star(A, P);
    CHECK(at_star >= u1_lower_bound(A, P, rs * 1.02) - 1e-12);
    CHECK(at_star >= u1_lower_bound(A, P, rs * 0.98) - 1e-12);
}

TEST_CASE("divergence budget pieces") {
    long n = 10000;
    double P = 100.0, eps = 1e-3;
    double log_M = rate_fraction_to_log_M_nats(n, P, 0.99);
    PeakBoundOptions full, bare;
    bare.include_sqrt_term = false;
    double with = peak_budget_nats(n, log_M, eps, P, full);
    double without = peak_budget_nats(n, log_M, eps, P, bare);
    CHECK(with - without ==
          doctest::Approx(std::sqrt(6.0 * (3.0 + 4.0 * P) / n)).epsilon(1e-12));
    double expect = capacity_nats(P) - log_M / n + std::log(2.0 / (1.0 - eps)) / n;
    CHECK(without == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("min_peak_amplitude frozen solution and equation residual") {
    long n = 10000;
    double P = 100.0, eps = 1e-3;
    double log_M = rate_fraction_to_log_M_nats(n, P, 0.99);
    PeakBoundResult r = min_peak_amplitude(n, log_M, eps, P);
    CHECK(r.A == doctest::Approx(4.0334711126).epsilon(1e-9));
    CHECK_FALSE(r.A == 0.0);
    CHECK(r.trivial_flag); // solved, but below the trivial PAPR >= 1 line
    CHECK(r.papr_db == doctest::Approx(-7.886).epsilon(1e-3));
    CHECK(std::abs(u1_at_r_star(r.A, P) - r.rhs_nats) < 1e-10);
    CHECK(r.r_star == doctest::Approx(r_star(r.A, P)).epsilon(1e-13));

    // Budget above the A -> 0 limit: no bound at all.
    PeakBoundResult none = min_peak_amplitude(100, 0.0, eps, P);
    CHECK(none.A == 0.0);
    CHECK(none.trivial_flag);

    // Without the sqrt term the bound turns nontrivial at this operating point.
    PeakBoundOptions bare;
    bare.include_sqrt_term = false;
    PeakBoundResult nb = min_peak_amplitude(n, log_M, eps, P, bare);
    CHECK(nb.papr_db == doctest::Approx(2.38694812401).epsilon(1e-8));
    CHECK_FALSE(nb.trivial_flag);
}

TEST_CASE("regime bookkeeping") {
    CHECK_THROWS_AS(RegimeParams(0.4, 1.0), std::domain_error);
    CHECK_THROWS_AS(RegimeParams(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(RegimeParams(0.5, 0.0), std::domain_error);
    RegimeParams reg(0.5, 2.0);
    // Budget dominated by the gamma n^alpha term for large gamma.
    double b = divergence_budget(10000, 1e-3, 1.0, reg);
    CHECK(b > 2.0 * std::pow(10000.0, 0.5) / 10000.0);
    RegimeParams adj = adjusted_regime_max_error(reg, 1e-3, 1e-2, 10000);
    CHECK(adj.alpha == reg.alpha);
    // gamma' = gamma - ln(c - 1/2)/n^alpha with c = 1 - eps/eps'.
    double c = 1.0 - 1e-3 / 1e-2;
    CHECK(adj.gamma ==
          doctest::Approx(reg.gamma - std::log(c - 0.5) / 100.0).epsilon(1e-12));
}
