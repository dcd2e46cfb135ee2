#include "luniv/vandermonde.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace luniv {

NodeSystem::NodeSystem(double X_, std::size_t N_) : X(X_), N(N_) {
    if (!(X > std::exp(1.0))) throw std::invalid_argument("NodeSystem: X must exceed e");
    if (N < 1) throw std::invalid_argument("NodeSystem: N must be positive");
    if (N > kMaxOrder) throw std::invalid_argument("NodeSystem: N exceeds conditioning guard (12)");
    nodes.resize(N);
    for (std::size_t j = 0; j < N; ++j)
        nodes[j] = -(std::log(X) + static_cast<double>(j) * std::log(2.0));
}

namespace {

// Double-double helpers; the power sums reach ~|log X|^{N-1} ||z|| where a
// plain double dot product rounds far above the residual contract.
struct DD {
    double hi = 0.0, lo = 0.0;
};

DD two_sum(double x, double y) {
    const double s = x + y;
    const double bb = s - x;
    return {s, (x - (s - bb)) + (y - bb)};
}

DD dd_add(DD x, DD y) {
    DD s = two_sum(x.hi, y.hi);
    s.lo += x.lo + y.lo;
    const DD t = two_sum(s.hi, s.lo);
    return t;
}

DD dd_mul(DD x, DD y) {
    const double p = x.hi * y.hi;
    const double e = std::fma(x.hi, y.hi, -p);
    DD r{p, e + x.hi * y.lo + x.lo * y.hi};
    const DD t = two_sum(r.hi, r.lo);
    return t;
}

DD dd_pow(double u, std::size_t k) {
    DD r{1.0, 0.0};
    for (std::size_t i = 0; i < k; ++i) r = dd_mul(r, DD{u, 0.0});
    return r;
}

// Lagrange-coefficient application: z_i = <coeffs(l_i), a> / prod(u_i - u_l).
std::vector<cplx> lagrange_solve(const NodeSystem& system, const std::vector<cplx>& a) {
    const std::size_t N = system.N;
    std::vector<cplx> z(N, cplx{0.0});
    std::vector<double> basis;
    for (std::size_t i = 0; i < N; ++i) {
        basis.assign(N, 0.0);
        basis[0] = 1.0;
        std::size_t deg = 0;
        double denom = 1.0;
        for (std::size_t l = 0; l < N; ++l) {
            if (l == i) continue;
            const double u = system.nodes[l];
            ++deg;
            for (std::size_t k = deg; k > 0; --k) basis[k] = basis[k - 1] - u * basis[k];
            basis[0] *= -u;
            denom *= system.nodes[i] - u;
        }
        cplx acc{0.0};
        for (std::size_t k = 0; k < N; ++k) acc += basis[k] * a[k];
        z[i] = acc / denom;
    }
    return z;
}

}  // namespace

std::vector<cplx> system_residual(const NodeSystem& system, const std::vector<cplx>& z,
                                  const std::vector<cplx>& a) {
    const std::size_t N = system.N;
    std::vector<cplx> res(N, cplx{0.0});
    for (std::size_t k = 0; k < N; ++k) {
        DD re{-a[k].real(), 0.0}, im{-a[k].imag(), 0.0};
        for (std::size_t j = 0; j < N; ++j) {
            const DD p = dd_pow(system.nodes[j], k);
            re = dd_add(re, dd_mul(p, DD{z[j].real(), 0.0}));
            im = dd_add(im, dd_mul(p, DD{z[j].imag(), 0.0}));
        }
        res[k] = cplx{re.hi, im.hi};
    }
    return res;
}

std::vector<cplx> solve_target_system(const NodeSystem& system, const std::vector<cplx>& a,
                                      bool enforce_contract) {
    const std::size_t N = system.N;
    if (a.size() != N) throw std::invalid_argument("solve_target_system: size mismatch");
    auto z = lagrange_solve(system, a);
    // iterative refinement against the compensated residual
    double worst_prev = 1e300;
    for (int pass = 0; pass < 4; ++pass) {
        const auto res = system_residual(system, z, a);
        double worst = 0.0;
        for (const auto& r : res) worst = std::max(worst, std::abs(r));
        if (worst < 1e-13 * (1.0 + l1_norm(a)) || worst >= worst_prev) break;
        worst_prev = worst;
        const auto corr = lagrange_solve(system, res);
        for (std::size_t j = 0; j < N; ++j) z[j] -= corr[j];
    }
    if (enforce_contract) {
        const auto res = system_residual(system, z, a);
        const double bound = 1e-10 * (1.0 + l1_norm(a));
        for (const auto& r : res)
            if (std::abs(r) > bound)
                throw std::runtime_error("solve_target_system: residual exceeds contract");
    }
    return z;
}

namespace {

double ratio_for(const NodeSystem& system, const std::vector<cplx>& a) {
    const auto z = solve_target_system(system, a, /*enforce_contract=*/false);
    const double denom =
        std::pow(std::log(system.X), static_cast<double>(system.N - 1)) * l1_norm(a);
    return l1_norm(z) / denom;
}

std::vector<cplx> random_unit_target(std::size_t N, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> a(N);
    for (auto& x : a) x = cplx{u(rng), u(rng)};
    const double norm = l1_norm(a);
    for (auto& x : a) x /= norm;
    return a;
}

}  // namespace

double norm_bound_check(std::size_t N, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("norm_bound_check: trials must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xdist(1.0, 6.0);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const NodeSystem system(std::pow(10.0, xdist(rng)), N);
        worst = std::max(worst, ratio_for(system, random_unit_target(N, rng)));
    }
    return worst;
}

double norm_bound_check_at(const NodeSystem& system, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("norm_bound_check_at: trials must be >= 1");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t)
        worst = std::max(worst, ratio_for(system, random_unit_target(system.N, rng)));
    return worst;
}

}  // namespace luniv
