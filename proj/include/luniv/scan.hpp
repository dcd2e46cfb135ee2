#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "luniv/eval.hpp"
#include "luniv/lfunc.hpp"

namespace luniv {

struct ScanWindow {
    std::size_t index = 0;
    double t_best = 0.0;
    std::vector<double> residuals;  // at t_best
    double max_residual = 0.0;
    bool eval_error = false;
    std::string error;
};

struct ScanReport {
    std::string descriptor;
    double sigma0 = 0.0;
    int N = 0;
    std::vector<cplx> targets;
    double eps = 0.0;
    double t_min = 0.0, t_max = 0.0, step = 0.0;
    double best_t = 0.0;
    std::vector<double> best_residuals;
    double best_max_residual = 0.0;
    bool success = false;
    std::vector<ScanWindow> windows;
    double wall_time_s = 0.0;  // reported on stderr, kept out of the JSON so
                               // identical inputs produce identical bytes

    std::string to_json() const;
    std::string windows_csv() const;
};

// Grid scan of max_k |(log L)^(k)(sigma0 + i t) - c_k| with fixed-size
// windows merged by index (worker count never changes the result), followed
// by golden-section refinement around the best grid point.
ScanReport scan_targets(const LFunctionDescriptor& desc, double sigma0,
                        const std::vector<cplx>& c, double eps, double t_min, double t_max,
                        double step, int workers, const EvalConfig& cfg = {});

// Serial reference of the grid pass (no windows, no refinement); used by
// tests and the benchmark to pin the parallel kernel.
std::vector<double> scan_grid_serial(const LFunctionDescriptor& desc, double sigma0,
                                     const std::vector<cplx>& c, double t_min, double step,
                                     std::size_t count, const EvalConfig& cfg = {});

// Parallel twin of scan_grid_serial.
std::vector<double> scan_grid_parallel(const LFunctionDescriptor& desc, double sigma0,
                                       const std::vector<cplx>& c, double t_min, double step,
                                       std::size_t count, int workers,
                                       const EvalConfig& cfg = {});

struct DiscReport {
    double sigma0 = 0.0, t0 = 0.0, r = 0.0;
    double eps = 0.0, delta0 = 0.0;
    int N = 0;
    double M_g = 0.0;
    double tau = 0.0;
    double delta_admissible = 0.0;
    double M_tau = 0.0;          // max |L| on the radius-r circle at tau
    double sampled_sup = 0.0;    // max |L(s+i tau) - g(s)| over the delta*r disc samples
    double sigma1 = 0.0, sigma2 = 0.0, sigma3 = 0.0;  // Taylor budget pieces
    double sigma1_bound = 0.0;   // M(g) delta^N / (1 - delta)
    double sigma3_bound = 0.0;   // M(tau) delta^N / (1 - delta)
    std::vector<cplx> targets;   // g^{(k)}(s_0)

    std::string to_json() const;
};

// Disc-approximation experiment: g given by its Taylor coefficients at
// s0 = sigma0 + i t0 (g(s0) != 0), scanned over tau in [t_lo, t_hi] with the
// given step, sup norms estimated on 720 boundary plus 1000 interior
// samples.
DiscReport disc_experiment(const LFunctionDescriptor& desc, double sigma0, double t0, double r,
                           const std::vector<cplx>& g_taylor, double eps, double delta0,
                           double t_lo, double t_hi, double step, int workers,
                           const EvalConfig& cfg = {});

// Minimum distance from each target to the attainable set of
// sum_n r_n e^{-2 pi i theta_n} over a K^3 phase grid (three radii).
// Serial reference and OpenMP twin; results are identical.
std::vector<double> phase_grid_min_distances_serial(const std::vector<double>& radii,
                                                    const std::vector<cplx>& targets, int K);
std::vector<double> phase_grid_min_distances_parallel(const std::vector<double>& radii,
                                                      const std::vector<cplx>& targets, int K);

}  // namespace luniv
