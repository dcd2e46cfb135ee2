#include "luniv/phases.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "luniv/errors.hpp"
#include "luniv/eval.hpp"
#include "luniv/sieve.hpp"
#include "luniv/vandermonde.hpp"

namespace luniv {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double angle_to_phase(double psi) {
    // term r e^{-2 pi i theta} = r e^{i psi}
    double theta = -psi / kTwoPi;
    theta -= std::floor(theta);
    if (theta >= 1.0) theta = 0.0;
    return theta;
}

}  // namespace

std::vector<double> realize_phase_sum(const std::vector<double>& radii, cplx target) {
    const std::size_t N = radii.size();
    if (N == 0) throw std::invalid_argument("realize_phase_sum: empty radius list");
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        if (!(radii[i] > 0.0))
            throw std::invalid_argument("realize_phase_sum: radii must be positive");
        if (i > 0 && radii[i] < radii[i - 1])
            throw std::invalid_argument("realize_phase_sum: radii must be sorted ascending");
        total += radii[i];
    }
    const double d = std::abs(target);
    const double slack = 1e-12 * (1.0 + total);
    if (d > total + slack)
        throw std::invalid_argument("realize_phase_sum: |target| exceeds the radius sum");
    if (N == 1) {
        if (std::abs(d - radii[0]) > 1e-9 * (1.0 + total))
            throw std::invalid_argument("realize_phase_sum: single radius cannot reach target");
        return {angle_to_phase(d < 1e-300 ? 0.0 : std::arg(target))};
    }
    if (N == 2 && d < radii[1] - radii[0] - slack)
        throw std::invalid_argument("realize_phase_sum: target inside the two-vector annulus gap");
    if (N >= 3 && radii[N - 1] > total - radii[N - 1] + slack)
        throw std::invalid_argument("realize_phase_sum: polygon condition r_N <= sum of the rest fails");

    // Place the largest radius first, steering the running remainder into
    // the attainable annulus of the unplaced suffix. Every choice below is
    // continuous in the target, which the assembly refinement relies on.
    std::vector<double> phases(N);
    cplx remainder = target;
    double suffix_sum = total;
    for (std::size_t step = 0; step < N; ++step) {
        const std::size_t idx = N - 1 - step;  // descending radius, input is ascending
        const double r = radii[idx];
        const double rem = std::abs(remainder);
        if (step == N - 1) {
            if (std::abs(rem - r) > 1e-9 * total)
                throw std::runtime_error("realize_phase_sum: final remainder off the last circle");
            phases[idx] = angle_to_phase(rem < 1e-300 ? 0.0 : std::arg(remainder));
            break;
        }
        suffix_sum -= r;
        const double suffix_max = radii[idx - 1];
        const double lo = std::max(0.0, 2.0 * suffix_max - suffix_sum);
        double dlo = std::max(lo, std::abs(rem - r));
        double dhi = std::min(suffix_sum, rem + r);
        if (dlo > dhi) {
            if (dlo > dhi + 1e-9 * (1.0 + total))
                throw std::runtime_error("realize_phase_sum: feasible interval collapsed");
            dlo = dhi = 0.5 * (dlo + dhi);
        }
        const double next = std::clamp(rem - r, dlo, dhi);
        const double base = rem < 1e-300 ? 0.0 : std::arg(remainder);
        double cosphi = (r * r + rem * rem - next * next) / (2.0 * r * std::max(rem, 1e-300));
        if (rem < 1e-300) cosphi = 0.0;
        const double phi = std::acos(std::clamp(cosphi, -1.0, 1.0));
        const double psi = base + phi;
        phases[idx] = angle_to_phase(psi);
        remainder -= r * std::polar(1.0, psi);
    }
    cplx achieved{0.0};
    for (std::size_t i = 0; i < N; ++i) achieved += radii[i] * unit_phase(phases[i]);
    if (std::abs(achieved - target) > 1e-9 * total)
        throw std::runtime_error("realize_phase_sum: residual contract violated");
    return phases;
}

namespace {

struct GreedyRun {
    PhaseAssignment phases;
    std::vector<cplx> partial_sums;
};

GreedyRun run_greedy(const LFunctionDescriptor& desc, double prime_limit, bool want_sums) {
    if (!(prime_limit >= 2.0))
        throw std::invalid_argument("greedy_theta0: prime_limit must be at least 2");
    const auto primes =
        PrimeSieve::instance().primes_up_to(static_cast<std::uint64_t>(prime_limit));
    GreedyRun out;
    if (want_sums) out.partial_sums.reserve(primes.size());
    double running = 0.0;   // rotated terms are real by construction
    cplx recomputed{0.0};   // independent check value from the stored phases
    for (std::uint64_t p : primes) {
        const cplx b = desc.euler_log_coeff(p, 1);
        if (b == cplx{0.0}) {
            out.phases.set(p, 0.0);
            if (want_sums) out.partial_sums.push_back(recomputed);
            continue;
        }
        double theta_coeff = std::arg(b) / kTwoPi;  // phase of b(p)
        theta_coeff -= std::floor(theta_coeff);
        const double mag = std::abs(b);
        double theta;
        if (running <= 0.0) {
            theta = theta_coeff;
            running += mag;
        } else {
            theta = theta_coeff + 0.5;
            theta -= std::floor(theta);
            running -= mag;
        }
        out.phases.set(p, theta);
        if (want_sums) {
            recomputed += b * unit_phase(theta);
            out.partial_sums.push_back(recomputed);
        }
    }
    return out;
}

}  // namespace

PhaseAssignment greedy_theta0(const LFunctionDescriptor& desc, double prime_limit) {
    return run_greedy(desc, prime_limit, false).phases;
}

std::vector<cplx> greedy_partial_sums(const LFunctionDescriptor& desc, double prime_limit) {
    return run_greedy(desc, prime_limit, true).partial_sums;
}

namespace {

// Gamma(k+1, y) = k! e^{-y} sum_{j<=k} y^j / j!
double upper_incomplete_poly(int k, double y) {
    double sum = 0.0, term = 1.0;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) term *= y / j;
        sum += term;
    }
    double kfact = 1.0;
    for (int j = 2; j <= k; ++j) kfact *= j;
    return kfact * std::exp(-y) * sum;
}

// Certified tail of the order-k rotated log series beyond prime cutoff P:
// partial summation against the bounded greedy sums for l = 1; for l >= 2 a
// geometric ratio per prime, then Abel summation against pi(x) <= 1.3 x/log x.
double gamma_tail_bound_k(const LFunctionDescriptor& desc, double P, int k, double sigma0) {
    const double C = desc.b_bound_C;
    const double smt = sigma0 - desc.b_bound_theta;
    const double lP = std::log(P);
    if (P < 17.0) return 1e300;
    // weight (log x)^k x^{-sigma0} must be decreasing past P
    if (lP * sigma0 <= static_cast<double>(k)) return 1e300;
    const double t1 = 2.0 * C * std::pow(lP, k) * std::pow(P, -sigma0);
    const double a = 2.0 * smt;
    if (a <= 1.0 || lP * a <= static_cast<double>(k)) return 1e300;
    const double r = std::pow(1.5, k) * std::pow(P, -smt);
    if (r >= 1.0) return 1e300;
    const double y = (a - 1.0) * lP;
    const double integral =
        std::pow(2.0, k) * C / (1.0 - r) * upper_incomplete_poly(k, y) / std::pow(a - 1.0, k + 1);
    const double fP_times_P = std::pow(2.0 * lP, k) * C * std::pow(P, 1.0 - a) / (1.0 - r);
    const double t2 = 1.3 / lP * (fP_times_P + integral);
    return t1 + t2;
}

double gamma_tail_bound(const LFunctionDescriptor& desc, double P, int N, double sigma0) {
    double worst = 0.0;
    for (int k = 0; k < N; ++k)
        worst = std::max(worst, gamma_tail_bound_k(desc, P, k, sigma0));
    return worst;
}

}  // namespace

double gamma_truncation_point(const LFunctionDescriptor& desc, double sigma0, int N,
                              double tail_eps) {
    if (!(sigma0 > 0.5)) throw std::domain_error("gamma_targets: sigma0 must exceed 1/2");
    if (!(tail_eps > 0.0)) throw std::domain_error("gamma_targets: tail_eps must be positive");
    const double limit = static_cast<double>(PrimeSieve::instance().limit());
    for (double P = 1000.0; P <= limit; P *= 2.0) {
        P = std::min(P, limit);
        if (gamma_tail_bound(desc, P, N, sigma0) <= tail_eps) return P;
        if (P == limit) break;
    }
    throw precision_error("gamma_targets: certified tail cannot reach tail_eps within the sieve limit");
}

GammaTargets gamma_targets(const LFunctionDescriptor& desc, const PhaseAssignment& theta0,
                           double sigma0, int N, double tail_eps) {
    const double P = gamma_truncation_point(desc, sigma0, N, tail_eps);
    const auto primes = PrimeSieve::instance().primes_up_to(static_cast<std::uint64_t>(P));
    if (!primes.empty() &&
        (theta0.size() == 0 || theta0.entries().back().first < primes.back()))
        throw std::domain_error("gamma_targets: theta0 must cover primes up to the truncation point");
    GammaTargets out;
    out.gamma = finite_log_product_derivs(desc, primes, sigma0, theta0, N);
    out.truncation_point = P;
    out.tail_bound = gamma_tail_bound(desc, P, N, sigma0);
    return out;
}

namespace {

double fitted_coeff_growth(const LFunctionDescriptor& desc, double eta) {
    const auto primes = PrimeSieve::instance().primes_up_to(100000);
    double worst = 0.0;
    for (std::uint64_t p : primes)
        worst = std::max(worst,
                         std::abs(desc.dirichlet_coeff(p)) * std::pow(static_cast<double>(p), -eta));
    return worst;
}

}  // namespace

PipelineParams derive_pipeline_params(const LFunctionDescriptor& desc, double sigma0, int N,
                                      double eps, const std::vector<cplx>& c, PipelineMode mode,
                                      std::optional<PracticalGeometry> geometry,
                                      double C1_stand_in) {
    check_sigma0_admissible(desc, sigma0);
    if (N < 1) throw std::domain_error("derive_pipeline_params: N must be positive");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("derive_pipeline_params: eps must lie in (0,1)");
    const auto consts = compute_constants(desc, sigma0);
    PipelineParams params;
    params.sigma0 = sigma0;
    params.N = N;
    params.eps = eps;
    params.eta = consts.eta;
    params.mu = consts.mu;
    params.rho = consts.rho;
    params.mode = mode;
    params.C1_stand_in = C1_stand_in;
    params.C_L_eta = fitted_coeff_growth(desc, consts.eta);
    if (mode == PipelineMode::practical) {
        if (!geometry)
            throw std::invalid_argument("derive_pipeline_params: practical mode needs X, Y, H, Q");
        params.X = geometry->X;
        params.Y = geometry->Y;
        params.H = geometry->H;
        params.Q = geometry->Q;
        if (!(params.Y >= 2.0 * params.X + 1.0))
            throw std::domain_error("derive_pipeline_params: requires Y >= 2X + 1");
        if (!(params.Q > std::ldexp(params.Y, N)))
            throw std::domain_error("derive_pipeline_params: requires Q > 2^N Y");
        return params;
    }
    // rigorous mode: thresholds from the closed formulas with the stand-in
    // constant; the sizes land far beyond the sieve and are reported as-is.
    const double limit = static_cast<double>(PrimeSieve::instance().limit());
    double P = limit;
    for (double cand = 1000.0; cand < limit; cand = std::min(cand * 2.0, limit))
        if (gamma_tail_bound(desc, cand, N, sigma0) <= 1e-3) {
            P = cand;
            break;
        }
    const auto theta0 = greedy_theta0(desc, P);
    const auto gamma = finite_log_product_derivs(
        desc, PrimeSieve::instance().primes_up_to(static_cast<std::uint64_t>(P)), sigma0, theta0,
        N);
    std::vector<cplx> diff(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) diff[k] = c[k] - gamma[k];
    params.X = C1_stand_in * std::pow(l1_norm(diff) + 1.0, 2.0 / consts.d1_1);
    params.Y = std::pow(params.C_L_eta / consts.mu, 1.0 / (sigma0 - consts.eta)) *
               std::pow(2.0 * params.X, sigma0 / (sigma0 - consts.eta));
    params.H = std::pow(params.Y, consts.A);
    params.Q = std::ldexp(params.Y, N) * (1.0 + 1e-9);
    return params;
}

namespace {

struct BlockPrime {
    std::uint64_t p;
    double radius;       // |b(p)| p^{-sigma0}
    double coeff_phase;  // phase of b(p)
};

struct Block {
    std::uint64_t anchor;
    std::vector<BlockPrime> members;  // anchor + contributing interval primes
    std::size_t interval_count = 0;
    double radius_sum = 0.0;
};

// Staged realization of one block: the two largest members form a steering
// pair whose phases absorb target motion smoothly; the remaining members
// (the bulk) are assigned once per rebase and their exact contribution is
// carried along. Keeping the bulk frozen keeps the measured derivative map
// well-conditioned in the block targets.
struct StagedBlock {
    std::size_t sa = 0, sb = 0;      // steering members, ra >= rb
    double ra = 0.0, rb = 0.0;
    std::vector<std::size_t> bulk;   // ascending radius
    double bulk_lo = 0.0, bulk_hi = 0.0;
};

StagedBlock stage_block(const Block& block) {
    StagedBlock st;
    if (block.members.size() < 3)
        throw pipeline_error("block construction", "block needs at least three members");
    // steering pair: the two largest interval members (index 0 is the
    // anchor); keeping the pair inside the interval keeps the blocks'
    // steering frequencies separated
    std::vector<std::size_t> order(block.members.size() - 1);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i + 1;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return block.members[a].radius < block.members[b].radius;
    });
    st.sa = order[order.size() - 1];
    st.sb = order[order.size() - 2];
    st.ra = block.members[st.sa].radius;
    st.rb = block.members[st.sb].radius;
    st.bulk.assign(order.begin(), order.end() - 2);
    st.bulk.push_back(0);  // anchor joins the bulk
    std::sort(st.bulk.begin(), st.bulk.end(), [&](std::size_t a, std::size_t b) {
        return block.members[a].radius < block.members[b].radius;
    });
    double mx = 0.0;
    for (std::size_t i : st.bulk) {
        st.bulk_hi += block.members[i].radius;
        mx = std::max(mx, block.members[i].radius);
    }
    if (!st.bulk.empty()) st.bulk_lo = std::max(0.0, 2.0 * mx - st.bulk_hi);
    return st;
}

void set_member_phase(const Block& block, std::size_t idx, double psi, PhaseAssignment& theta) {
    double th = psi + block.members[idx].coeff_phase;
    th -= std::floor(th);
    theta.set(block.members[idx].p, th);
}

// Steering ring with an interior safety margin.
void steering_ring(const StagedBlock& st, double& lo, double& hi) {
    const double em = 0.2 * std::min(st.ra, st.rb);
    lo = std::abs(st.ra - st.rb) + em;
    hi = st.ra + st.rb - em;
}

// Point the steering pair at target s; fails (false) when s leaves the ring.
bool steer_block(const Block& block, const StagedBlock& st, cplx s, PhaseAssignment& theta) {
    double lo, hi;
    steering_ring(st, lo, hi);
    const double d = std::abs(s);
    if (d < lo || d > hi) return false;
    const double base = std::arg(s);
    double cosA = (st.ra * st.ra + d * d - st.rb * st.rb) / (2.0 * st.ra * d);
    cosA = std::clamp(cosA, -1.0, 1.0);
    const double psi_a = base + std::acos(cosA);
    const cplx v2 = s - st.ra * std::polar(1.0, psi_a);
    const double psi_b = std::abs(v2) < 1e-300 ? base : std::arg(v2);
    set_member_phase(block, st.sa, -psi_a / kTwoPi, theta);
    set_member_phase(block, st.sb, -psi_b / kTwoPi, theta);
    return true;
}

// Re-realize the bulk so that the steering target z - bulk_value sits well
// inside the ring; returns the exact bulk contribution.
cplx rebase_block(const Block& block, const StagedBlock& st, cplx target,
                  PhaseAssignment& theta) {
    double ring_lo, ring_hi;
    steering_ring(st, ring_lo, ring_hi);
    ring_lo += 0.05 * std::min(st.ra, st.rb);
    ring_hi -= 0.05 * std::min(st.ra, st.rb);
    const double zm = std::abs(target);
    // bulk band with margins
    const double bl = st.bulk.empty() ? 0.0 : (st.bulk_lo > 0.0 ? st.bulk_lo * 1.05 : 0.0);
    const double bh = st.bulk.empty() ? 0.0 : 0.98 * st.bulk_hi;
    // |zm - rho| must land in [bl, bh]; rho must land in the ring
    double rho = 0.0;
    bool found = false;
    const auto try_interval = [&](double a, double b) {
        const double lo = std::max(a, ring_lo), hi = std::min(b, ring_hi);
        if (lo <= hi && !found) {
            rho = std::clamp(st.ra, lo, hi);
            found = true;
        }
    };
    try_interval(zm - bh, zm - bl);
    try_interval(zm + bl, zm + bh);
    if (!found)
        throw std::invalid_argument("staged realization: no feasible steering modulus");
    const double phi = zm < 1e-300 ? 0.0 : std::arg(target);
    const cplx bulk_target = target - rho * std::polar(1.0, phi);
    cplx bulk_value{0.0};
    if (!st.bulk.empty()) {
        std::vector<double> radii(st.bulk.size());
        for (std::size_t i = 0; i < st.bulk.size(); ++i)
            radii[i] = block.members[st.bulk[i]].radius;
        const auto psi = realize_phase_sum(radii, bulk_target);
        for (std::size_t i = 0; i < st.bulk.size(); ++i) {
            set_member_phase(block, st.bulk[i], psi[i], theta);
            bulk_value += radii[i] * unit_phase(psi[i]);
        }
    } else if (std::abs(bulk_target) > 1e-12 * (1.0 + zm)) {
        throw std::invalid_argument("staged realization: empty bulk cannot absorb remainder");
    }
    if (!steer_block(block, st, target - bulk_value, theta))
        throw std::invalid_argument("staged realization: steering failed after rebase");
    return bulk_value;
}

}  // namespace

AssemblyResult assemble_theta_star(const LFunctionDescriptor& desc, const PipelineParams& params,
                                   const std::vector<cplx>& c) {
    const int N = params.N;
    const double sigma0 = params.sigma0;
    if (static_cast<int>(c.size()) != N)
        throw std::invalid_argument("assemble_theta_star: c must have length N");
    const auto& sieve = PrimeSieve::instance();
    if (!(params.Q >= 2.0) || params.Q > static_cast<double>(sieve.limit()))
        throw pipeline_error("sieve limit", "assemble_theta_star: Q outside the sieve range");
    if (params.H > params.Y)
        throw pipeline_error("block disjointness",
                             "assemble_theta_star: H > Y lets interval blocks overlap");

    // Step 1: base phases and derivative targets of the rotated series.
    double tail_eps = std::clamp(params.eps / 1000.0, 1e-8, 1e-3);
    const double limit = static_cast<double>(sieve.limit());
    double P = limit;
    for (double cand = 1000.0; cand <= limit; cand = std::min(cand * 2.0, limit)) {
        if (gamma_tail_bound(desc, cand, N, sigma0) <= tail_eps) {
            P = cand;
            break;
        }
        if (cand == limit) break;
    }
    const auto theta0 = greedy_theta0(desc, std::max(P, params.Q));

    AssemblyResult result;
    const auto gamma_primes = sieve.primes_up_to(static_cast<std::uint64_t>(P));
    result.gamma = finite_log_product_derivs(desc, gamma_primes, sigma0, theta0, N);
    result.gamma_tail_bound = gamma_tail_bound(desc, P, N, sigma0);

    // Step 2: anchor primes from (X, 2X] with |a(p)| > mu.
    const auto anchor_pool = sieve.primes_in(static_cast<std::uint64_t>(params.X),
                                             static_cast<std::uint64_t>(2.0 * params.X));
    std::vector<std::uint64_t> anchors;
    for (std::uint64_t p : anchor_pool) {
        if (std::abs(desc.dirichlet_coeff(p)) > params.mu) anchors.push_back(p);
        if (anchors.size() == static_cast<std::size_t>(N)) break;
    }
    if (anchors.size() < static_cast<std::size_t>(N)) {
        std::ostringstream os;
        os << "only " << anchors.size() << " primes in (" << params.X << ", " << 2.0 * params.X
           << "] have |a(p)| > mu = " << params.mu << "; need " << N;
        throw pipeline_error("anchor selection", os.str());
    }

    // Step 3: interval blocks (2^j Y, 2^j Y + H].
    std::vector<Block> blocks(N);
    double min_anchor_radius = 1e300, max_anchor_radius = 0.0;
    double max_interval_radius = 0.0, min_interval_sum = 1e300;
    for (int j = 0; j < N; ++j) {
        Block& blk = blocks[j];
        blk.anchor = anchors[j];
        const double pa = static_cast<double>(blk.anchor);
        const cplx ba = desc.euler_log_coeff(blk.anchor, 1);
        double aphase = std::arg(ba) / kTwoPi;
        aphase -= std::floor(aphase);
        const double ar = std::abs(ba) * std::pow(pa, -sigma0);
        blk.members.push_back({blk.anchor, ar, aphase});
        min_anchor_radius = std::min(min_anchor_radius, ar);
        max_anchor_radius = std::max(max_anchor_radius, ar);
        const double lo = std::ldexp(params.Y, j);
        const auto interval = sieve.primes_in(static_cast<std::uint64_t>(lo),
                                              static_cast<std::uint64_t>(lo + params.H));
        double interval_sum = 0.0;
        for (std::uint64_t p : interval) {
            const cplx b = desc.euler_log_coeff(p, 1);
            if (b == cplx{0.0}) continue;
            double phase = std::arg(b) / kTwoPi;
            phase -= std::floor(phase);
            const double r = std::abs(b) * std::pow(static_cast<double>(p), -sigma0);
            blk.members.push_back({p, r, phase});
            ++blk.interval_count;
            interval_sum += r;
            max_interval_radius = std::max(max_interval_radius, r);
        }
        if (blk.interval_count == 0)
            throw pipeline_error("block construction",
                                 "assemble_theta_star: interval block " + std::to_string(j) +
                                     " has no contributing primes");
        min_interval_sum = std::min(min_interval_sum, interval_sum);
        for (const auto& bp : blk.members) blk.radius_sum += bp.radius;
    }
    result.cond_Y1 = min_anchor_radius >= max_interval_radius;
    result.cond_Y2 = max_anchor_radius <= min_interval_sum;

    // Step 4/5: node system and per-block capacity, then phase realization,
    // then bounded refinement of the block targets against the measured
    // derivative vector.
    const NodeSystem system(params.Y, static_cast<std::size_t>(N));
    const auto all_primes = sieve.primes_up_to(static_cast<std::uint64_t>(params.Q));
    std::vector<cplx> rhs(N);
    for (int k = 0; k < N; ++k) rhs[k] = c[k] - result.gamma[k];

    PhaseAssignment base;
    for (const auto& e : theta0.entries()) {
        if (e.first > static_cast<std::uint64_t>(params.Q)) break;
        base.set(e.first, e.second);
    }

    // Initial iterate: the node-system solution, capacity-gated per block.
    const auto z0 = solve_target_system(system, rhs);
    {
        const double znorm = l1_norm(z0);
        double min_capacity = 1e300;
        for (int j = 0; j < N; ++j) min_capacity = std::min(min_capacity, blocks[j].radius_sum);
        if (znorm > min_capacity) {
            std::ostringstream os;
            os << "||z|| = " << znorm << " exceeds a block capacity (min block sum = "
               << min_capacity << ")";
            throw pipeline_error("eqn Sur", os.str());
        }
    }

    const double znorm_cap = [&] {
        double m = 1e300;
        for (int j = 0; j < N; ++j) m = std::min(m, blocks[j].radius_sum);
        return m;
    }();
    auto feasible = [&](const std::vector<cplx>& z) { return l1_norm(z) <= znorm_cap; };

    std::vector<StagedBlock> staged(N);
    for (int j = 0; j < N; ++j) staged[j] = stage_block(blocks[j]);

    struct Iterate {
        PhaseAssignment theta;
        std::vector<cplx> bulk_value;
    };
    // steer only; false when some block needs a rebase
    auto try_steer = [&](const std::vector<cplx>& z, Iterate& it) {
        for (int j = 0; j < N; ++j)
            if (!steer_block(blocks[j], staged[j], z[j] - it.bulk_value[j], it.theta))
                return false;
        return true;
    };
    auto rebase_all = [&](const std::vector<cplx>& z, Iterate& it) {
        it.theta = base;
        it.bulk_value.assign(N, cplx{0.0});
        for (int j = 0; j < N; ++j)
            it.bulk_value[j] = rebase_block(blocks[j], staged[j], z[j], it.theta);
    };
    auto evaluate = [&](const std::vector<cplx>& z, Iterate& it) {
        if (it.bulk_value.empty() || !try_steer(z, it)) rebase_all(z, it);
        return finite_log_product_derivs(desc, all_primes, sigma0, it.theta, N);
    };
    auto record = [&](const std::vector<cplx>& z, const Iterate& it,
                      const std::vector<cplx>& measured, int iter) {
        double maxres = 0.0;
        std::vector<double> residuals(N);
        for (int k = 0; k < N; ++k) {
            residuals[k] = std::abs(measured[k] - c[k]);
            maxres = std::max(maxres, residuals[k]);
        }
        result.theta_star = it.theta;
        result.residuals = residuals;
        result.z = z;
        result.blocks.assign(N, {});
        const double znorm = l1_norm(z);
        for (int j = 0; j < N; ++j) {
            result.blocks[j].anchor = blocks[j].anchor;
            result.blocks[j].interval_primes = blocks[j].interval_count;
            result.blocks[j].radius_sum = blocks[j].radius_sum;
            result.blocks[j].z = z[j];
            result.blocks[j].sur_margin = blocks[j].radius_sum - znorm;
        }
        result.refinement_iterations = iter;
        return maxres;
    };

    // Refinement against the measured derivative vector: absorbs the
    // frequency-replacement remainders that the asymptotic argument only
    // bounds, certifying the output a posteriori. A damped fixed-point pass
    // on the node-system right side does the coarse work; steering-pair
    // Newton finishes once the correction fits inside the steering rings.
    std::vector<cplx> z = z0;
    Iterate cur;
    std::vector<cplx> measured;
    try {
        rebase_all(z, cur);
        measured = finite_log_product_derivs(desc, all_primes, sigma0, cur.theta, N);
    } catch (const std::exception& e) {
        throw pipeline_error("phase realization", e.what());
    }
    double best_res = record(z, cur, measured, 0);
    const bool trace = std::getenv("LUNIV_TRACE") != nullptr;
    if (trace) std::fprintf(stderr, "iter 0: res = %.6e\n", best_res);
    const double stop_tol = 1e-11 * (1.0 + l1_norm(c));

    std::vector<cplx> best_z = z;
    Iterate best_it = cur;
    std::vector<cplx> best_measured = measured;
    {
        auto rhs_cur = rhs;
        int stall = 0;
        for (int m = 1; m <= 25 && best_res > 2e-3; ++m) {
            for (int k = 0; k < N; ++k) rhs_cur[k] += 0.7 * (c[k] - measured[k]);
            std::vector<cplx> zt;
            try {
                zt = solve_target_system(system, rhs_cur);
            } catch (const std::exception&) {
                break;
            }
            if (!feasible(zt)) break;
            Iterate it;
            try {
                rebase_all(zt, it);
            } catch (const std::exception&) {
                break;
            }
            measured = finite_log_product_derivs(desc, all_primes, sigma0, it.theta, N);
            double maxres = 0.0;
            for (int k = 0; k < N; ++k) maxres = std::max(maxres, std::abs(measured[k] - c[k]));
            if (trace) std::fprintf(stderr, "picard %d: res = %.6e\n", m, maxres);
            z = zt;
            cur = it;
            if (maxres < best_res) {
                best_res = record(z, cur, measured, m);
                best_z = z;
                best_it = cur;
                best_measured = measured;
                stall = 0;
            } else if (++stall >= 4) {
                break;
            }
        }
    }
    z = best_z;
    cur = best_it;
    measured = best_measured;
    const int n2 = 2 * N;
    for (int iter = 1; iter <= 30 && best_res > stop_tol; ++iter) {
        // finite-difference Jacobian of measured(z), 2N x 2N real
        std::vector<double> J(n2 * n2, 0.0);
        const double h = 1e-7 * (1.0 + l1_norm(z));
        bool jac_ok = true;
        for (int col = 0; col < n2 && jac_ok; ++col) {
            const cplx dir = (col % 2 == 0) ? cplx{h, 0.0} : cplx{0.0, h};
            double sign = 1.0;
            auto zp = z;
            zp[col / 2] += dir;
            Iterate probe = cur;
            if (!try_steer(zp, probe)) {
                zp[col / 2] -= 2.0 * dir;
                sign = -1.0;
                probe = cur;
                if (!try_steer(zp, probe)) {
                    jac_ok = false;
                    break;
                }
            }
            const auto mp = finite_log_product_derivs(desc, all_primes, sigma0, probe.theta, N);
            for (int row = 0; row < N; ++row) {
                J[(2 * row) * n2 + col] = sign * (mp[row].real() - measured[row].real()) / h;
                J[(2 * row + 1) * n2 + col] = sign * (mp[row].imag() - measured[row].imag()) / h;
            }
        }
        if (!jac_ok) break;
        // solve J * step = c - measured
        std::vector<double> rhs_real(n2);
        for (int k = 0; k < N; ++k) {
            rhs_real[2 * k] = c[k].real() - measured[k].real();
            rhs_real[2 * k + 1] = c[k].imag() - measured[k].imag();
        }
        // Gaussian elimination with partial pivoting
        bool singular = false;
        for (int col = 0; col < n2 && !singular; ++col) {
            int piv = col;
            for (int rr = col + 1; rr < n2; ++rr)
                if (std::abs(J[rr * n2 + col]) > std::abs(J[piv * n2 + col])) piv = rr;
            if (std::abs(J[piv * n2 + col]) < 1e-14) {
                singular = true;
                break;
            }
            if (piv != col) {
                for (int cc = 0; cc < n2; ++cc) std::swap(J[piv * n2 + cc], J[col * n2 + cc]);
                std::swap(rhs_real[piv], rhs_real[col]);
            }
            for (int rr = col + 1; rr < n2; ++rr) {
                const double f = J[rr * n2 + col] / J[col * n2 + col];
                for (int cc = col; cc < n2; ++cc) J[rr * n2 + cc] -= f * J[col * n2 + cc];
                rhs_real[rr] -= f * rhs_real[col];
            }
        }
        if (singular) break;
        std::vector<double> step(n2);
        for (int rr = n2 - 1; rr >= 0; --rr) {
            double acc = rhs_real[rr];
            for (int cc = rr + 1; cc < n2; ++cc) acc -= J[rr * n2 + cc] * step[cc];
            step[rr] = acc / J[rr * n2 + rr];
        }
        // backtracking line search
        bool improved = false;
        for (double scale = 1.0; scale >= 1.0 / 1024.0; scale *= 0.5) {
            auto zt = z;
            for (int k = 0; k < N; ++k)
                zt[k] += scale * cplx{step[2 * k], step[2 * k + 1]};
            if (!feasible(zt)) continue;
            try {
                Iterate trial = cur;
                const auto mt = evaluate(zt, trial);
                double maxres = 0.0;
                for (int k = 0; k < N; ++k)
                    maxres = std::max(maxres, std::abs(mt[k] - c[k]));
                if (maxres < best_res) {
                    z = zt;
                    cur = trial;
                    measured = mt;
                    best_res = record(z, cur, mt, iter);
                    if (trace)
                        std::fprintf(stderr, "iter %d: res = %.6e (scale %.4f)\n", iter, best_res,
                                     scale);
                    improved = true;
                    break;
                }
            } catch (const std::exception&) {
                continue;
            }
        }
        if (!improved) {
            if (trace) std::fprintf(stderr, "iter %d: no improvement, stop\n", iter);
            break;
        }
    }
    return result;
}

}  // namespace luniv
