#pragma once

#include <cstdint>
#include <vector>

#include "luniv/powseries.hpp"

namespace luniv {

// Periodized smooth bump concentrated at scale delta = 1/Q, one factor per
// prime <= Q. C_phi, C0, C1 are fitted numerically; the bump itself is the
// canonical exp(-1/(1-x^2)) normalized to unit mass.
struct MollifierSpec {
    double Q = 0.0;
    double delta = 0.0;  // 1/Q
    double M = 0.0;      // Fourier truncation order
    double C_phi = 0.0;  // fitted sup |alpha_n| delta^2 n^2
    double C0 = 0.0;     // fitted exponent of the full beta sum, eqn-EB style
    double C1 = 0.0;     // fitted exponent of the truncation remainder

    static MollifierSpec make(double Q, double M);
};

// Bump value phi(x), support (-1,1), unit mass.
double bump_value(double x);

// Periodized scaled bump (1/delta) phi(theta/delta), period 1.
double phi_delta(const MollifierSpec& spec, double theta);

// Fourier coefficient alpha_n(theta0) of phi_delta(theta - theta0) by
// adaptive quadrature, absolute error <= 1e-10.
cplx fourier_alpha(const MollifierSpec& spec, long n, double theta0);

// Product mollifier over aligned phase vectors: prod_p phi_delta(theta_p -
// theta_star_p). Nonzero only when every component is within delta mod 1.
double phi_Q_value(const MollifierSpec& spec, const std::vector<double>& theta,
                   const std::vector<double>& theta_star);

// Certified bound on the Fourier-truncation remainder over prime-indexed
// frequency vectors with max |n_p| > M:
//   pi(Q) * (sum_{|n|>M} C_phi/(delta^2 n^2)) * (sum_n min{1, C_phi/(delta^2 n^2)})^{pi(Q)-1}.
double truncation_error_bound(const MollifierSpec& spec);

// Full-sum bound sum_n |beta_n| <= (sum_n min{1, C_phi/(delta^2 n^2)})^{pi(Q)}.
double beta_full_sum_bound(const MollifierSpec& spec);

// One-dimensional majorant sums behind the two bounds above.
double alpha_majorant_full_sum(const MollifierSpec& spec);
double alpha_majorant_tail_sum(const MollifierSpec& spec);

}  // namespace luniv
