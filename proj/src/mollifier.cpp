#include "luniv/mollifier.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "luniv/quadrature.hpp"
#include "luniv/sieve.hpp"

namespace luniv {

namespace {

double bump_mass() {
    static std::once_flag once;
    static double mass = 0.0;
    std::call_once(once, [] {
        mass = integrate_real([](double x) { return std::exp(-1.0 / (1.0 - x * x)); },
                              -1.0 + 1e-14, 1.0 - 1e-14, 1e-15);
    });
    return mass;
}

// sum_{n > M} 1/n^2 (trigamma at M+1)
double inverse_square_tail(double M) {
    double m = std::floor(M);
    double acc = 0.0;
    while (m < 50.0) {
        acc += 1.0 / ((m + 1.0) * (m + 1.0));
        m += 1.0;
    }
    const double x = m;
    acc += 1.0 / x - 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x * x * x) -
           1.0 / (30.0 * x * x * x * x * x);
    return acc;
}

double fitted_C_phi() {
    static std::once_flag once;
    static double c = 0.0;
    std::call_once(once, [] {
        // sup of |phi_hat(xi)| xi^2 over the sweep xi = n * delta,
        // n in [1, 1000], delta in {0.1, 0.01}; |alpha_n| depends on n, delta
        // only through xi.
        double worst = 0.0;
        for (double xi = 0.01; xi <= 100.0; xi += (xi < 10.0 ? 0.01 : 0.1)) {
            const auto transform = integrate_complex(
                [xi](double x) {
                    return bump_value(x) * std::exp(cplx{0.0, -2.0 * M_PI * xi * x});
                },
                -1.0, 1.0, 1e-12);
            worst = std::max(worst, std::abs(transform) * xi * xi);
            if (xi > 20.0 && std::abs(transform) * xi * xi < worst * 1e-6) break;
        }
        c = worst;
    });
    return c;
}

}  // namespace

double bump_value(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x)) / bump_mass();
}

MollifierSpec MollifierSpec::make(double Q, double M) {
    if (!(Q > 2.0) || !(M > 2.0))
        throw std::invalid_argument("MollifierSpec: Q and M must exceed 2");
    MollifierSpec spec;
    spec.Q = Q;
    spec.delta = 1.0 / Q;
    spec.M = M;
    spec.C_phi = fitted_C_phi();
    // fit the exponential envelopes over a Q sweep
    double c0 = 0.0, c1 = 0.0;
    for (double q = 3.0; q <= 53.0; q += 2.0) {
        MollifierSpec probe;
        probe.Q = q;
        probe.delta = 1.0 / q;
        probe.M = M;
        probe.C_phi = spec.C_phi;
        const double piq = static_cast<double>(PrimeSieve::instance().count_up_to(
            static_cast<std::uint64_t>(q)));
        const double s1 = alpha_majorant_full_sum(probe);
        c0 = std::max(c0, piq * std::log(s1) / q);
        const double mfree = piq * 2.0 * spec.C_phi / (probe.delta * probe.delta) *
                             std::pow(s1, piq - 1.0);
        c1 = std::max(c1, std::log(mfree) / q);
    }
    spec.C0 = c0;
    spec.C1 = c1;
    return spec;
}

double phi_delta(const MollifierSpec& spec, double theta) {
    // reduce to [-1/2, 1/2)
    double t = theta - std::floor(theta + 0.5);
    if (std::abs(t) >= spec.delta) return 0.0;
    return bump_value(t / spec.delta) / spec.delta;
}

cplx fourier_alpha(const MollifierSpec& spec, long n, double theta0) {
    // alpha_n(theta0) = e^{-2 pi i n theta0} * int_{-delta}^{delta}
    //                   phi_delta(u) e^{-2 pi i n u} du
    const double d = spec.delta;
    const auto base = integrate_complex(
        [&spec, n](double u) {
            return phi_delta(spec, u) * std::exp(cplx{0.0, -2.0 * M_PI * n * u});
        },
        -d, d, 1e-11);
    return std::exp(cplx{0.0, -2.0 * M_PI * n * theta0}) * base;
}

double phi_Q_value(const MollifierSpec& spec, const std::vector<double>& theta,
                   const std::vector<double>& theta_star) {
    if (theta.size() != theta_star.size())
        throw std::invalid_argument("phi_Q_value: vectors must align over P(Q)");
    double prod = 1.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        prod *= phi_delta(spec, theta[i] - theta_star[i]);
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

double alpha_majorant_full_sum(const MollifierSpec& spec) {
    const double c = spec.C_phi / (spec.delta * spec.delta);
    double s = 1.0;  // n = 0
    long n = 1;
    for (; static_cast<double>(n) * n <= c; ++n) s += 2.0;
    double partial = 0.0;
    const long tail_from = n + 200;
    for (; n < tail_from; ++n) partial += 1.0 / (static_cast<double>(n) * n);
    return s + 2.0 * c * (partial + inverse_square_tail(static_cast<double>(tail_from - 1)));
}

double alpha_majorant_tail_sum(const MollifierSpec& spec) {
    const double c = spec.C_phi / (spec.delta * spec.delta);
    return 2.0 * c * inverse_square_tail(spec.M);
}

double truncation_error_bound(const MollifierSpec& spec) {
    const double piq = static_cast<double>(
        PrimeSieve::instance().count_up_to(static_cast<std::uint64_t>(spec.Q)));
    return piq * alpha_majorant_tail_sum(spec) *
           std::pow(alpha_majorant_full_sum(spec), piq - 1.0);
}

double beta_full_sum_bound(const MollifierSpec& spec) {
    const double piq = static_cast<double>(
        PrimeSieve::instance().count_up_to(static_cast<std::uint64_t>(spec.Q)));
    return std::pow(alpha_majorant_full_sum(spec), piq);
}

}  // namespace luniv
