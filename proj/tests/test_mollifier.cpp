#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "luniv/mollifier.hpp"
#include "luniv/phase_assignment.hpp"

using namespace luniv;

TEST_CASE("bump is normalized, nonnegative and compactly supported") {
    // composite Simpson as an independent mass check
    const int n = 20000;
    double acc = 0.0;
    const double h = 2.0 / n;
    for (int i = 0; i <= n; ++i) {
        const double x = -1.0 + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * bump_value(x);
    }
    acc *= h / 3.0;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bump_value(0.0) > 0.0);
    CHECK(bump_value(1.0) == 0.0);
    CHECK(bump_value(-1.2) == 0.0);
    for (double x = -0.99; x < 1.0; x += 0.07) CHECK(bump_value(x) >= 0.0);
}

TEST_CASE("periodized bump values") {
    const auto spec = MollifierSpec::make(3.0, 100.0);
    CHECK(spec.delta == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(phi_delta(spec, 0.0) == doctest::Approx(bump_value(0.0) * 3.0).epsilon(1e-15));
    CHECK(phi_delta(spec, 0.5) == 0.0);
    CHECK(phi_delta(spec, 0.2) == doctest::Approx(phi_delta(spec, 1.2)).epsilon(1e-12));
    CHECK(phi_delta(spec, -0.3) == doctest::Approx(phi_delta(spec, 0.7)).epsilon(1e-12));
    for (double t = -0.5; t < 0.5; t += 0.03) CHECK(phi_delta(spec, t) >= 0.0);
    CHECK_THROWS_AS(MollifierSpec::make(2.0, 100.0), std::invalid_argument);
}

TEST_CASE("zeroth Fourier coefficient is one") {
    const auto spec = MollifierSpec::make(5.0, 100.0);
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        const auto a0 = fourier_alpha(spec, 0, u(rng));
        CHECK(std::abs(a0 - cplx{1.0}) <= 1e-10);
    }
}

TEST_CASE("coefficients are bounded by one and by the quadratic envelope") {
    const auto spec = MollifierSpec::make(10.0, 100.0);  // delta = 0.1
    for (long n : {1L, 2L, 5L, 10L, 25L, 60L, 200L, 1000L}) {
        const double mag = std::abs(fourier_alpha(spec, n, 0.37));
        CHECK(mag <= 1.0 + 1e-12);
        CHECK(mag * spec.delta * spec.delta * n * n <= spec.C_phi * (1.0 + 1e-9));
    }
    const auto tight = MollifierSpec::make(100.0, 100.0);  // delta = 0.01
    for (long n : {1L, 10L, 100L, 400L, 1000L}) {
        const double mag = std::abs(fourier_alpha(tight, n, 0.11));
        CHECK(mag * tight.delta * tight.delta * n * n <= tight.C_phi * (1.0 + 1e-9));
    }
}

TEST_CASE("product mollifier support and positivity") {
    const auto spec = MollifierSpec::make(3.0, 100.0);
    const std::vector<double> theta_star{0.1, 0.8};
    CHECK(phi_Q_value(spec, theta_star, theta_star) ==
          doctest::Approx(std::pow(bump_value(0.0) / spec.delta, 2)).epsilon(1e-12));
    std::vector<double> off = theta_star;
    off[1] += 0.5;
    CHECK(phi_Q_value(spec, off, theta_star) == 0.0);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> t{u(rng), u(rng)};
        CHECK(phi_Q_value(spec, t, theta_star) >= 0.0);
    }
    CHECK_THROWS_AS(phi_Q_value(spec, {0.1}, theta_star), std::invalid_argument);
}

TEST_CASE("truncation bound matches the brute-force majorant tail at Q = 3") {
    const auto spec = MollifierSpec::make(3.0, 100.0);
    // two primes below Q = 3; the majorant per frequency is
    // min(1, C_phi/(delta^2 n^2))
    auto majorant = [&](long n) {
        if (n == 0) return 1.0;
        return std::min(1.0, spec.C_phi / (spec.delta * spec.delta * n * n));
    };
    const double S = alpha_majorant_full_sum(spec);
    double S_direct = 0.0, S_inner = 0.0;
    for (long n = -4000000; n <= 4000000; ++n) {
        const double m = majorant(n);
        S_direct += m;
        if (std::abs(n) <= spec.M) S_inner += m;
    }
    CHECK(S == doctest::Approx(S_direct).epsilon(1e-5));
    // inclusion-exclusion over the two-prime grid
    const double brute = S_direct * S_direct - S_inner * S_inner;
    const double bound = truncation_error_bound(spec);
    CHECK(bound >= brute * (1.0 - 1e-9));
    CHECK(bound == doctest::Approx(brute).epsilon(0.05));
}

TEST_CASE("truncation bound decreases in the cutoff") {
    const auto b100 = truncation_error_bound(MollifierSpec::make(3.0, 100.0));
    const auto b1000 = truncation_error_bound(MollifierSpec::make(3.0, 1000.0));
    const auto b100000 = truncation_error_bound(MollifierSpec::make(3.0, 100000.0));
    CHECK(b1000 < b100);
    CHECK(b100000 < b1000);
    CHECK(b100000 < 2e-3 * b100);  // tail scales like 1/M
}

TEST_CASE("truncated Fourier series reproduces the product mollifier") {
    const auto spec = MollifierSpec::make(3.0, 200.0);
    const std::vector<double> theta0{0.37, 0.81};
    const long M = static_cast<long>(spec.M);
    // per-prime coefficient tables; the product over primes factorizes
    std::vector<std::vector<cplx>> alpha(2);
    for (int pi = 0; pi < 2; ++pi) {
        alpha[pi].resize(2 * M + 1);
        for (long n = -M; n <= M; ++n) alpha[pi][n + M] = fourier_alpha(spec, n, theta0[pi]);
    }
    // beta_0 = product of alpha_0
    CHECK(std::abs(alpha[0][M] * alpha[1][M] - cplx{1.0}) < 1e-9);
    const double bound = truncation_error_bound(spec);
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> theta{u(rng), u(rng)};
        cplx series{1.0};
        for (int pi = 0; pi < 2; ++pi) {
            cplx factor{0.0};
            for (long n = -M; n <= M; ++n)
                factor += alpha[pi][n + M] *
                          std::exp(cplx{0.0, 2.0 * M_PI * n * theta[pi]});
            series *= factor;
        }
        std::vector<double> shifted(2);
        for (int pi = 0; pi < 2; ++pi) shifted[pi] = theta[pi] - theta0[pi];
        const double exact = phi_Q_value(spec, theta, theta0);
        CHECK(std::abs(series - cplx{exact}) <= bound + 1e-6);
    }
}

TEST_CASE("full coefficient sum stays below the product bound") {
    const auto spec = MollifierSpec::make(3.0, 100.0);
    double alpha_sum = 0.0;
    for (long n = -500; n <= 500; ++n) alpha_sum += std::abs(fourier_alpha(spec, n, 0.29));
    CHECK(alpha_sum * alpha_sum <= beta_full_sum_bound(spec) * (1.0 + 1e-9));
    CHECK(spec.C0 > 0.0);
    CHECK(spec.C1 > 0.0);
    CHECK(beta_full_sum_bound(spec) <= std::exp(spec.C0 * spec.Q) * (1.0 + 1e-9));
    CHECK(spec.M * truncation_error_bound(spec) <= std::exp(spec.C1 * spec.Q) * (1.0 + 1e-9));
}
