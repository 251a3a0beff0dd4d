#include "peakbound/awgn_limits.hpp"

#include <doctest.h>

#include <cmath>

using namespace peakbound;

TEST_CASE("capacity and dispersion closed forms") {
    CHECK(capacity_nats(1.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
    CHECK(capacity(100.0, LogBase(2.0)) ==
          doctest::Approx(3.329105741375897).epsilon(1e-14)); // 0.5 log2(101)
    CHECK(dispersion_nats(1.0) == doctest::Approx(0.375).epsilon(1e-15));
    // V(P) -> 1/2 as P -> infinity.
    CHECK(dispersion_nats(1e9) == doctest::Approx(0.5).epsilon(1e-8));
    // Display conversion carries (log_b e)^2: the unit is squared.
    double s = 1.0 / std::log(2.0);
    CHECK(dispersion(1.0, LogBase(2.0)) == doctest::Approx(0.375 * s * s).epsilon(1e-14));
}

TEST_CASE("normal approximation to log M*") {
    // Frozen: n C - sqrt(n V) Qinv(eps) at n=2000, eps=1e-3, P=1.
    CHECK(normal_approx_log_M_nats(2000, 1e-3, 1.0) ==
          doctest::Approx(608.517683458979).epsilon(1e-12));
    CHECK(normal_approx_log_M(2000, 1e-3, 1.0, LogBase(2.0)) ==
          doctest::Approx(877.905444219509).epsilon(1e-12));
    // The offset hook shifts additively in nats.
    CHECK(normal_approx_log_M_nats(2000, 1e-3, 1.0, 3.5) ==
          doctest::Approx(608.517683458979 + 3.5).epsilon(1e-12));
    // Independent recomputation from the defining pieces.
    double expect = 2000.0 * capacity_nats(1.0) -
                    std::sqrt(2000.0 * dispersion_nats(1.0)) * q_inverse(1e-3);
    CHECK(normal_approx_log_M_nats(2000, 1e-3, 1.0) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("rate fraction helper") {
    CHECK(rate_fraction_to_log_M_nats(10000, 100.0, 0.99) ==
          doctest::Approx(0.99 * 10000.0 * capacity_nats(100.0)).epsilon(1e-14));
    CHECK(rate_fraction_to_log_M(100, 1.0, 1.0, LogBase(2.0)) ==
          doctest::Approx(50.0).epsilon(1e-13)); // capacity of P=1 is half a bit per use
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ChannelParams(0.0), std::domain_error);
    CHECK_THROWS_AS(CodeParams(0, 1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(CodeParams(10, -1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(CodeParams(10, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(CodeParams(10, 1.0, 1.0), std::domain_error);
}
