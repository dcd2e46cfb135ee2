#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "luniv/powseries.hpp"

namespace luniv {

struct GammaFactor {
    double lambda = 0.5;
    cplx mu{0.0, 0.0};
};

// A Selberg-class element: Dirichlet coefficients a(n), Euler-log
// coefficients b(p^l), the density/zero-density/short-interval constants,
// and functional-equation metadata (stored, unused by the core pipelines).
struct LFunctionDescriptor {
    std::string name;

    std::function<cplx(std::uint64_t)> dirichlet_coeff;              // n -> a(n)
    std::function<cplx(std::uint64_t, unsigned)> euler_log_coeff;    // (p, l) -> b(p^l)

    double kappa = 1.0;      // prime square-mean density
    double sigma_L = 0.5;    // zero-density abscissa
    std::function<double(double)> delta_L;  // zero-density exponent, sigma > sigma_L
    double E_L = 5.0 / 12.0; // short-interval exponent, in (0,1)
    double D = 22.0;         // short-interval log power

    // |b(p^l)| <= b_bound_C * p^{l * b_bound_theta}, b_bound_theta < 1/2.
    double b_bound_C = 1.0;
    double b_bound_theta = 0.0;

    // functional-equation metadata
    double degree = 1.0;
    std::vector<GammaFactor> gamma_factor;
    double R = 1.0;
    cplx omega{1.0, 0.0};
    int m_L = 0;

    // Dirichlet-character data when applicable (empty for zeta).
    std::uint64_t modulus = 0;
    std::vector<cplx> character;  // values at residues 1..q

    std::string to_json() const;
    static LFunctionDescriptor from_json(const std::string& text);
};

// Riemann zeta: a(n) = 1, b(p^l) = 1/l, kappa = 1, sigma = 1/2, E = 5/12.
LFunctionDescriptor builtin_zeta();

// Dirichlet L-function from a character table chi(1..q). The table must be
// completely multiplicative mod q with chi(a) = 0 iff gcd(a, q) > 1
// (checked on a finite grid); primitivity is the caller's responsibility.
// The (C2)/(C3) constants default to the zeta values, documented as
// unverified assumptions.
LFunctionDescriptor builtin_dirichlet(std::uint64_t modulus, const std::vector<cplx>& table);

// Weighted von Mangoldt value Lambda_{L,x}(n): Lambda_L(n) = b(n) log n for
// n <= x, damped by log(x^2/n)/log x on [x, x^2], zero beyond x^2 or off
// prime powers.
cplx lambda_weight(const LFunctionDescriptor& desc, double x, std::uint64_t n);

// Default zero-density exponent used for zeta: (8/3)(sigma-1/2)/(3-2 sigma).
double zeta_density_exponent(double sigma);

// Decompose n = p^l; returns false if n is not a prime power.
bool prime_power(std::uint64_t n, std::uint64_t& p, unsigned& l);

}  // namespace luniv
