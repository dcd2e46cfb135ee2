// Timing comparison of the serial reference kernels against their OpenMP
// twins: segmented sieve, phase-grid attainability, and the t-scan grid.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "luniv/lfunc.hpp"
#include "luniv/scan.hpp"
#include "luniv/sieve.hpp"

namespace {

template <typename F>
double time_s(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP: disabled (serial build)\n");
#endif
    std::printf("%-28s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

    {
        const std::uint64_t limit = 20'000'000;
        std::vector<std::uint64_t> base;
        for (std::uint64_t p : luniv::PrimeSieve::instance().primes_up_to(
                 luniv::integer_sqrt(limit)))
            base.push_back(p);
        std::vector<char> a, b;
        const double ts = time_s([&] { a = luniv::sieve_segment_serial(2, limit, base); });
        const double tp = time_s([&] { b = luniv::sieve_segment_parallel(2, limit, base); });
        std::printf("%-28s %12.3f %12.3f %7.2fx %s\n", "sieve_segment 2e7", ts, tp, ts / tp,
                    a == b ? "" : "MISMATCH");
    }

    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        std::vector<luniv::cplx> targets(100);
        for (auto& z : targets) z = luniv::cplx{u(rng), u(rng)};
        const std::vector<double> radii{1.0, 1.0, 1.0};
        std::vector<double> a, b;
        const double ts =
            time_s([&] { a = luniv::phase_grid_min_distances_serial(radii, targets, 200); });
        const double tp =
            time_s([&] { b = luniv::phase_grid_min_distances_parallel(radii, targets, 200); });
        std::printf("%-28s %12.3f %12.3f %7.2fx %s\n", "phase_grid 200^3 x100", ts, tp, ts / tp,
                    a == b ? "" : "MISMATCH");
    }

    {
        const auto zeta = luniv::builtin_zeta();
        const std::vector<luniv::cplx> c{luniv::cplx{0.3, 0.1}, luniv::cplx{-0.2, 0.4}};
        std::vector<double> a, b;
        const double ts =
            time_s([&] { a = luniv::scan_grid_serial(zeta, 0.8, c, 30.0, 0.05, 200); });
        const double tp =
            time_s([&] { b = luniv::scan_grid_parallel(zeta, 0.8, c, 30.0, 0.05, 200, 0); });
        std::printf("%-28s %12.3f %12.3f %7.2fx %s\n", "scan_grid 200 pts", ts, tp, ts / tp,
                    a == b ? "" : "MISMATCH");
    }
    return 0;
}
