#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fcount/specfun.hpp"
#include "test_util.hpp"

using namespace fcount;
using namespace fcount::specfun;

TEST_CASE("log_gamma: pinned values and domain") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
    // duplication-formula oracle at 0.5: Gamma(1/2) = sqrt(pi)
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("log_gamma: recurrence ln G(x+1) = ln G(x) + ln x") {
    for (double x = 0.5; x <= 50.0; x += 0.7) {
        CHECK(std::abs(log_gamma(x + 1.0) - (log_gamma(x) + std::log(x))) < 1e-10);
    }
}

TEST_CASE("mittag_leffler: trivial and pinned values") {
    CHECK(mittag_leffler(1.0, 1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(mittag_leffler(0.5, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // E_{1/2}(-x) = exp(x^2) erfc(x); erfc from an independent quadrature oracle
    const double oracle = testutil::erfcx_quadrature(1.0);
    CHECK(mittag_leffler(0.5, 1.0, -1.0) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(oracle == doctest::Approx(0.4275836).epsilon(1e-6));
}

TEST_CASE("mittag_leffler: E_{1,1}(z) = e^z on [-20, 5]") {
    for (double z = -20.0; z <= 5.0; z += 0.5) {
        CHECK(std::abs(mittag_leffler(1.0, 1.0, z) - std::exp(z)) < 1e-8);
    }
}

TEST_CASE("mittag_leffler: alpha=1/2 identity across the evaluation-path switch") {
    // plain series for small |z|, contour/asymptotic beyond: all must agree
    // with exp(x^2) erfc(x)
    for (double x : {0.5, 2.0, 5.0, 7.9, 8.1, 12.0, 20.0, 35.0, 50.0}) {
        const double want = testutil::erfcx_quadrature(x);
        const double got = mittag_leffler(0.5, 1.0, -x);
        CHECK(std::abs(got - want) < 1e-10 * std::max(1.0, std::abs(want)) + 1e-12);
    }
}

TEST_CASE("mittag_leffler: h-quadrature oracle at larger alpha") {
    // E_alpha(-x t^alpha) = int_0^inf e^{-x u} h_alpha(t, u) du with t = 1
    for (double alpha : {0.3, 0.7, 0.9, 0.95}) {
        for (double x : {2.0, 10.0, 25.0}) {
            const double hi = inv_subordinator_tail_cutoff(alpha, 1.0, 1e-13);
            const double oracle = testutil::integrate(
                [&](double u) {
                    if (u <= 0.0) return inv_subordinator_density_at_zero(alpha, 1.0);
                    return std::exp(-x * u) * inv_subordinator_density(alpha, 1.0, u);
                },
                0.0, hi, 1e-11);
            CHECK(std::abs(mittag_leffler(alpha, 1.0, -x) - oracle) < 2e-8);
        }
    }
}

TEST_CASE("mittag_leffler: monotone decay on the negative axis") {
    for (double alpha : {0.4, 0.6, 0.8}) {
        double prev = 1.0;
        for (double x = 0.5; x < 60.0; x *= 1.7) {
            const double v = mittag_leffler(alpha, 1.0, -x);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("mittag_leffler: domain and range errors") {
    CHECK_THROWS_AS(mittag_leffler(0.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler(1.2, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler(0.5, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, 2e8), std::range_error);
    CHECK_THROWS_AS(mittag_leffler(1.0, 1.0, 800.0), std::range_error);
}

TEST_CASE("prabhakar_ml: reductions and brute-force oracle") {
    // gamma = 1 reduces to the two-parameter function
    for (double z : {-6.0, -2.0, 0.5, 3.0}) {
        CHECK(prabhakar_ml(0.7, 1.3, 1.0, z) ==
              doctest::Approx(mittag_leffler(0.7, 1.3, z)).epsilon(1e-10));
    }
    // z = 0 gives 1/Gamma(beta)
    CHECK(prabhakar_ml(0.5, 2.0, 3.0, 0.0) ==
          doctest::Approx(1.0 / std::tgamma(2.0)).epsilon(1e-13));
    // direct long-double summation oracle
    CHECK(prabhakar_ml(0.7, 1.0, 2.0, -0.5) ==
          doctest::Approx(testutil::prabhakar_series_ld(0.7, 1.0, 2.0, -0.5)).epsilon(1e-11));
    CHECK(prabhakar_ml(0.6, 2.2, 3.0, 1.5) ==
          doctest::Approx(testutil::prabhakar_series_ld(0.6, 2.2, 3.0, 1.5)).epsilon(1e-11));
}

TEST_CASE("prabhakar_ml: contour path against h-quadrature oracle") {
    // Mixture-moment identity behind the FPPk marginals: with Y = Y_alpha(t),
    //   E[(x Y)^z / z! e^{-x Y}] = x^z t^{alpha z} E^{z+1}_{alpha, alpha z + 1}(-x t^alpha),
    // the z-th derivative of the Laplace transform E_alpha(-x t^alpha).
    const double alpha = 0.8, t = 1.0;
    for (double x : {6.0, 12.0, 30.0}) {
        for (int z : {0, 1, 3, 6}) {
            const double hi = inv_subordinator_tail_cutoff(alpha, t, 1e-13);
            const double oracle = testutil::integrate(
                [&](double u) {
                    if (u <= 0.0)
                        return z == 0 ? inv_subordinator_density_at_zero(alpha, t) : 0.0;
                    const double log_pois =
                        z * std::log(x * u) - x * u - std::lgamma(z + 1.0);
                    return std::exp(log_pois) * inv_subordinator_density(alpha, t, u);
                },
                0.0, hi, 1e-11);
            const double block =
                std::pow(x, z) * prabhakar_ml(alpha, alpha * z + 1.0, z + 1.0, -x);
            CHECK(std::abs(block - oracle) < 1e-8);
        }
    }
}

TEST_CASE("stable_density: alpha = 1/2 closed form") {
    auto levy = [](double x) {
        return std::pow(x, -1.5) * std::exp(-1.0 / (4.0 * x)) / (2.0 * std::sqrt(M_PI));
    };
    CHECK(stable_density(0.5, 1.0) == doctest::Approx(levy(1.0)).epsilon(1e-10));
    CHECK(stable_density(0.5, 4.0) == doctest::Approx(levy(4.0)).epsilon(1e-10));
    CHECK(levy(1.0) == doctest::Approx(0.2196956).epsilon(1e-6));
    // small arguments exercise the fallback paths
    for (double x : {0.05, 0.2, 0.6}) {
        CHECK(stable_density(0.5, x) == doctest::Approx(levy(x)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(stable_density(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(stable_density(1.0, 1.0), std::domain_error);
}

TEST_CASE("stable_density: normalization across alpha") {
    // numeric mass on (0, X] plus the term-by-term integrated series tail
    // beyond the declared cutoff X (the series is exact for large arguments)
    const double X = 50.0;
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
        const double mass = testutil::integrate(
            [&](double x) { return x <= 0.0 ? 0.0 : stable_density(alpha, x); }, 0.0, X, 1e-9);
        double tail = 0.0;
        for (int k = 1; k <= 200; ++k) {
            const double term = ((k & 1) ? 1.0 : -1.0) *
                                std::exp(std::lgamma(alpha * k + 1.0) -
                                         std::lgamma(k + 1.0) - alpha * k * std::log(X)) *
                                std::sin(M_PI * k * alpha) / (M_PI * alpha * k);
            tail += term;
            if (std::abs(term) < 1e-14) break;
        }
        CHECK(std::abs(mass + tail - 1.0) < 1e-4);
    }
}

TEST_CASE("stable_density: nonnegative everywhere sampled") {
    for (double alpha : {0.25, 0.5, 0.75, 0.9}) {
        for (double x = 0.02; x < 50.0; x *= 1.6) {
            CHECK(stable_density(alpha, x) >= 0.0);
        }
    }
}

TEST_CASE("inv_subordinator_density: alpha = 1/2 closed form and normalization") {
    // h(t, x) = exp(-x^2/(4t)) / sqrt(pi t)
    CHECK(inv_subordinator_density(0.5, 1.0, 1.0) ==
          doctest::Approx(std::exp(-0.25) / std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(std::exp(-0.25) / std::sqrt(M_PI) == doctest::Approx(0.4393912).epsilon(1e-6));
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
        for (double t : {0.7, 2.0}) {
            const double hi = inv_subordinator_tail_cutoff(alpha, t, 1e-10);
            const double mass = testutil::integrate(
                [&](double x) {
                    if (x <= 0.0) return inv_subordinator_density_at_zero(alpha, t);
                    return inv_subordinator_density(alpha, t, x);
                },
                0.0, hi, 1e-9);
            CHECK(std::abs(mass - 1.0) < 1e-4);
        }
    }
}

TEST_CASE("inv_subordinator_density: Laplace transform in t matches s^{a-1} e^{-x s^a}") {
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
        for (double s : {0.5, 1.0, 2.0}) {
            const double x = 0.8;
            const double got = testutil::integrate(
                [&](double t) {
                    if (t <= 0.0) return 0.0;
                    return std::exp(-s * t) * inv_subordinator_density(alpha, t, x);
                },
                0.0, 80.0 / s, 1e-9);
            const double want =
                std::pow(s, alpha - 1.0) * std::exp(-x * std::pow(s, alpha));
            CHECK(std::abs(got - want) < 1e-4);
        }
    }
}

TEST_CASE("caputo_l1: constants, powers, classical limit") {
    const int n = 1001;
    GridFunction f;
    f.grid.resize(n);
    f.values.resize(n);
    for (int i = 0; i < n; ++i) f.grid[static_cast<std::size_t>(i)] = 2.0 * i / (n - 1);

    SUBCASE("derivative of a constant vanishes") {
        for (auto& v : f.values) v = 3.25;
        const auto d = caputo_l1(f, 0.5);
        for (double v : d.values) CHECK(std::abs(v) < 1e-12);
    }

    SUBCASE("D^{1/2} t = t^{1/2} / Gamma(1.5)") {
        for (int i = 0; i < n; ++i)
            f.values[static_cast<std::size_t>(i)] = f.grid[static_cast<std::size_t>(i)];
        const auto d = caputo_l1(f, 0.5);
        double worst = 0.0;
        for (std::size_t i = 0; i < d.grid.size(); ++i) {
            const double want = std::sqrt(d.grid[i]) / std::tgamma(1.5);
            worst = std::max(worst, std::abs(d.values[i] - want));
        }
        CHECK(worst < 5e-3);
    }

    SUBCASE("alpha = 1 is the two-point difference: f = t^2 -> 2t") {
        for (int i = 0; i < n; ++i) {
            const double t = f.grid[static_cast<std::size_t>(i)];
            f.values[static_cast<std::size_t>(i)] = t * t;
        }
        const auto d = caputo_l1(f, 1.0);
        const double dt = f.grid[1] - f.grid[0];
        for (std::size_t i = 0; i < d.grid.size(); ++i) {
            CHECK(std::abs(d.values[i] - (2.0 * d.grid[i] - dt)) < 1e-10);
        }
    }
}

TEST_CASE("caputo_l1: power rule error decreases with refinement (order >= 1)") {
    // D^a t^mu = Gamma(mu+1)/Gamma(mu-a+1) t^{mu-a}
    const double alpha = 0.6, mu = 2.0;
    std::vector<double> errs;
    for (int n : {250, 500, 1000, 2000}) {
        GridFunction f;
        f.grid.resize(static_cast<std::size_t>(n) + 1);
        f.values.resize(f.grid.size());
        for (int i = 0; i <= n; ++i) {
            const double t = 2.0 * i / n;
            f.grid[static_cast<std::size_t>(i)] = t;
            f.values[static_cast<std::size_t>(i)] = std::pow(t, mu);
        }
        const auto d = caputo_l1(f, alpha);
        double worst = 0.0;
        for (std::size_t i = 0; i < d.grid.size(); ++i) {
            const double want = std::tgamma(mu + 1.0) / std::tgamma(mu - alpha + 1.0) *
                                std::pow(d.grid[i], mu - alpha);
            worst = std::max(worst, std::abs(d.values[i] - want));
        }
        errs.push_back(worst);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        CHECK(errs[i] < errs[i - 1]);
        const double rate = std::log2(errs[i - 1] / errs[i]);
        CHECK(rate >= 1.0);
    }
}

TEST_CASE("caputo_l1: shape errors") {
    GridFunction f;
    f.grid = {0.0};
    f.values = {1.0};
    CHECK_THROWS_AS(caputo_l1(f, 0.5), std::invalid_argument);
    f.grid = {0.0, 0.5, 2.0};
    f.values = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(caputo_l1(f, 0.5), std::invalid_argument);
}
