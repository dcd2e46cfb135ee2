#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "luniv/bounds.hpp"
#include "luniv/lfunc.hpp"
#include "luniv/phase_assignment.hpp"

namespace luniv {

// Phases theta_n in [0,1) with sum_n r_n e^{-2 pi i theta_n} = target, by
// recursive radius merging down to the two-vector law-of-cosines base case.
// Requires radii sorted ascending; for N >= 3 the polygon condition
// r_N <= sum_{n<N} r_n, for N = 2 the annulus condition, and always
// |target| <= sum r_n. Residual <= 1e-9 * sum r_n.
std::vector<double> realize_phase_sum(const std::vector<double>& radii, cplx target);

// Greedy bounded-partial-sum base assignment: each prime with b(p) != 0 gets
// the phase of b(p) (rotating its term to |b(p)|) or that plus a half turn,
// chosen so the running real partial sum stays within max_p |b(p)|. Primes
// with b(p) = 0 get phase 0.
PhaseAssignment greedy_theta0(const LFunctionDescriptor& desc, double prime_limit);

// Partial sums of the rotated terms, one entry per prime <= prime_limit, for
// verifying the boundedness property.
std::vector<cplx> greedy_partial_sums(const LFunctionDescriptor& desc, double prime_limit);

struct GammaTargets {
    std::vector<cplx> gamma;   // length N
    double truncation_point;   // primes beyond this are covered by the bound
    double tail_bound;         // certified, max over derivative orders
};

// Derivative targets of the full theta0-rotated log series at sigma0,
// truncated once the certified tail (bounded partial sums against the l = 1
// series plus the geometric l >= 2 estimate) is below tail_eps.
GammaTargets gamma_targets(const LFunctionDescriptor& desc, const PhaseAssignment& theta0,
                           double sigma0, int N, double tail_eps);

// Truncation point the gamma computation will use; phase-free, so callers
// can grow theta0 to cover it first.
double gamma_truncation_point(const LFunctionDescriptor& desc, double sigma0, int N,
                              double tail_eps);

enum class PipelineMode { rigorous, practical };

struct PracticalGeometry {
    double X = 0.0, Y = 0.0, H = 0.0, Q = 0.0;
};

struct PipelineParams {
    double sigma0 = 0.0;
    int N = 0;
    double eps = 0.0;
    double eta = 0.0;
    double X = 0.0, Y = 0.0, H = 0.0, Q = 0.0;
    PipelineMode mode = PipelineMode::practical;
    double mu = 0.0, rho = 0.0;
    double C_L_eta = 0.0;      // fitted sup |a(p)| p^{-eta}
    double C1_stand_in = 1.0;  // stand-in for the unquantified threshold constant
};

// Rigorous mode derives X from the threshold inequality (stand-in constant
// C1_stand_in), then Y, H = Y^A and Q > 2^N Y; the resulting sizes are far
// beyond desk scale and the assembled run will reject them at the sieve
// guard. Practical mode takes the caller's geometry and checks the ordering
// constraints Y >= 2X+1 and Q > 2^N Y.
PipelineParams derive_pipeline_params(const LFunctionDescriptor& desc, double sigma0, int N,
                                      double eps, const std::vector<cplx>& c, PipelineMode mode,
                                      std::optional<PracticalGeometry> geometry = std::nullopt,
                                      double C1_stand_in = 1.0);

struct BlockDiagnostics {
    std::uint64_t anchor = 0;
    std::size_t interval_primes = 0;
    double radius_sum = 0.0;   // sum |b(p)| p^{-sigma0} over the block
    cplx z{0.0};               // realized block target (final iterate)
    double sur_margin = 0.0;   // radius_sum - ||z||_1
};

struct AssemblyResult {
    PhaseAssignment theta_star;
    std::vector<double> residuals;  // |d^k log L_{P(Q)}(sigma0, theta_star) - c_k|
    // diagnostics
    std::vector<cplx> gamma;
    double gamma_tail_bound = 0.0;
    std::vector<cplx> z;  // final block targets
    std::vector<BlockDiagnostics> blocks;
    bool cond_Y1 = false;  // anchor radii dominate interval radii
    bool cond_Y2 = false;  // anchor radii below every interval block sum
    int refinement_iterations = 0;
};

// Full assembly: greedy base phases, derivative targets, anchor primes from
// (X, 2X] with |a(p)| > mu, interval blocks (2^j Y, 2^j Y + H], the
// node-system solve, the per-block capacity check, and phase realization,
// followed by bounded fixed-point refinement of the block targets against
// the measured residuals (the correction that absorbs the frequency-
// replacement remainders at desk scale). Throws pipeline_error naming the
// violated step.
AssemblyResult assemble_theta_star(const LFunctionDescriptor& desc, const PipelineParams& params,
                                   const std::vector<cplx>& c);

}  // namespace luniv
