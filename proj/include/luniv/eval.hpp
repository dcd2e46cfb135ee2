#pragma once

#include <cstdint>
#include <vector>

#include "luniv/lfunc.hpp"
#include "luniv/phase_assignment.hpp"

namespace luniv {

struct EvalConfig {
    double abs_tol = 1e-10;
    int euler_maclaurin_terms = 12;  // Bernoulli pairs in the tail correction
    int cutoff = 0;                  // main-sum length; 0 = adaptive from |t|
    double anchor_sigma = 10.0;      // seed point of the log branch
    double zero_proximity = 1e-8;    // |L| below this on the path is a branch error
};

// d^order/ds^order L(s) for the built-in descriptors (zeta, Dirichlet L),
// absolute error <= abs_tol. Throws precision_error when the internal
// estimate cannot reach the tolerance, std::domain_error at the pole.
cplx eval_L(const LFunctionDescriptor& desc, cplx s, int order, const EvalConfig& cfg = {});

// Taylor coefficients L(s+X) mod X^{orders+1}; derivatives are k! times
// the entries.
std::vector<cplx> eval_L_taylor(const LFunctionDescriptor& desc, cplx s, int orders,
                                const EvalConfig& cfg = {});

// Branch-consistent log L and its derivatives. Order 0 integrates L'/L
// horizontally from anchor_sigma (where the Dirichlet series seeds the
// branch) to s; refuses t = 0 with sigma <= 1, where the branch is not
// defined. Orders >= 1 come from the Taylor quotient recurrence and are
// branch-free.
cplx eval_logL(const LFunctionDescriptor& desc, cplx s, int order, const EvalConfig& cfg = {});

// Orders 0..N-1 at once (one path integral, one Taylor evaluation).
std::vector<cplx> eval_logL_derivs(const LFunctionDescriptor& desc, cplx s, int N,
                                   const EvalConfig& cfg = {});

// d^order log L_M(sigma0, theta) over a finite prime set, the l-sum
// truncated per prime once its certified geometric tail drops below 1e-12.
cplx finite_log_product(const LFunctionDescriptor& desc,
                        const std::vector<std::uint64_t>& prime_set, double sigma0,
                        const PhaseAssignment& theta, int order);

// Orders 0..N-1 at once.
std::vector<cplx> finite_log_product_derivs(const LFunctionDescriptor& desc,
                                            const std::vector<std::uint64_t>& prime_set,
                                            double sigma0, const PhaseAssignment& theta, int N);

// Explicit bound on the phase-perturbation sensitivity of the truncated
// product: delta * sum_{p<=Q} sum_l l^N (log p^l)^{N-1} |b(p^l)| p^{-l sigma0}
// with delta = 1/Q.
double perturbation_bound(const LFunctionDescriptor& desc, double Q, double sigma0, int N);

}  // namespace luniv
