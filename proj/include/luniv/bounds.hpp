#pragma once

#include <string>
#include <vector>

#include "luniv/lfunc.hpp"

namespace luniv {

// Every closed-form constant attached to a choice of (descriptor, sigma0):
// the short-interval exponent A, the coefficient-growth exponent eta, the
// block-capacity exponent d1_1, the approximation exponent B_exp, the
// threshold exponents d1 and d, the density parameters mu/rho, and the
// height/length exponents of the final scan step.
struct EffectiveConstants {
    double sigma0 = 0.0;
    double E_L = 0.0;
    double A = 0.0;
    double eta = 0.0;
    double d1_1 = 0.0;
    double B_exp = 0.0;
    double d1 = 0.0;
    double d = 0.0;
    double mu = 0.0;
    double rho = 0.0;
    double h_exponent = 0.0;
    double x_exponent = 0.0;

    std::string to_json() const;  // 15 significant digits, fixed key order
};

// Checks max{sigma_L, 1-2E_L} < sigma0 < 1; throws std::domain_error naming
// the violated inequality otherwise.
void check_sigma0_admissible(const LFunctionDescriptor& desc, double sigma0);

EffectiveConstants compute_constants(const LFunctionDescriptor& desc, double sigma0);

// log log T = C1 * (||c|| + 1/eps)^d. Returned in log-log form; the literal
// T overflows any fixed-width float.
double threshold_T_main(const EffectiveConstants& consts, const std::vector<cplx>& c,
                        double eps, double C1_stand_in);

// B(N, c, eps) = |log c_0| + (||c||/|c_0|)^{(N-1)^2} (1+|c_0|)/eps.
double B_quantity(const std::vector<cplx>& c, double eps, int branch = 0);

// A(N, b, eps) = |log b_0| + (||b||/eps)^{N^2}; requires |b_0| > eps > 0.
double A_quantity_voronin(const std::vector<cplx>& b, double eps, int branch = 0);

// Smallest N >= 1 with M_g * delta0^N / (1 - delta0) < eps / 3.
int gl_N_choice(double M_g, double delta0, double eps);

}  // namespace luniv
