#pragma once

#include <cstdint>
#include <vector>

#include "luniv/powseries.hpp"

namespace luniv {

// Nodes u_j = -log(2^j X), strictly decreasing, X > e. The target system is
//   sum_j u_j^k z_j = a_k,  k = 0..N-1.
struct NodeSystem {
    double X = 0.0;
    std::size_t N = 0;
    std::vector<double> nodes;

    static constexpr std::size_t kMaxOrder = 12;  // conditioning guard

    NodeSystem(double X, std::size_t N);
};

// Unique solution recovered through the dual interpolation form: the k-th
// equation pairs the moments against polynomials, so z_i is the Lagrange
// basis polynomial at node i paired with a. Residual of every equation is
// <= 1e-10 * (1 + ||a||), verified with compensated arithmetic; throws when
// double precision cannot reach that floor (large N with wide nodes, where
// ||z|| ~ (log X)^{N-1} makes the contract unrepresentable). Callers that
// only need the scale-free solution ratio can disable the gate.
std::vector<cplx> solve_target_system(const NodeSystem& system, const std::vector<cplx>& a,
                                      bool enforce_contract = true);

// Residual vector sum_j u_j^k z_j - a_k.
std::vector<cplx> system_residual(const NodeSystem& system, const std::vector<cplx>& z,
                                  const std::vector<cplx>& a);

// Fitted constant sup ||z||_1 / ((log X)^{N-1} ||a||_1) over random unit-norm
// targets with X drawn from [10, 1e6]; bounded uniformly in X.
double norm_bound_check(std::size_t N, int trials, std::uint64_t seed = 1);

// Same ratio at a fixed system, for uniformity sweeps across X.
double norm_bound_check_at(const NodeSystem& system, int trials, std::uint64_t seed = 1);

}  // namespace luniv
