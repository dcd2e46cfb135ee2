#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "luniv/errors.hpp"
#include "luniv/eval.hpp"
#include "luniv/phases.hpp"
#include "luniv/sieve.hpp"

using namespace luniv;

namespace {

cplx phase_sum(const std::vector<double>& radii, const std::vector<double>& phases) {
    cplx acc{0.0};
    for (std::size_t i = 0; i < radii.size(); ++i) acc += radii[i] * unit_phase(phases[i]);
    return acc;
}

}  // namespace

TEST_CASE("aligned and antipodal two-vector cases") {
    {
        const auto th = realize_phase_sum({1.0, 1.0}, cplx{2.0});
        CHECK(std::abs(phase_sum({1.0, 1.0}, th) - cplx{2.0}) <= 2e-9);
        CHECK(th[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(th[1] == doctest::Approx(0.0).epsilon(1e-12));
    }
    {
        const auto th = realize_phase_sum({1.0, 1.0}, cplx{0.0});
        CHECK(std::abs(phase_sum({1.0, 1.0}, th)) <= 2e-9);
        double gap = std::abs(th[1] - th[0]);
        gap = std::min(gap, 1.0 - gap);
        CHECK(gap == doctest::Approx(0.5).epsilon(1e-9));
    }
    {
        const auto th = realize_phase_sum({1.0, 1.0}, cplx{1.0, 1.0});
        CHECK(std::abs(phase_sum({1.0, 1.0}, th) - cplx{1.0, 1.0}) <= 2e-9);
        std::vector<double> sorted = th;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted[0] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(sorted[1] == doctest::Approx(0.75).epsilon(1e-9));
    }
}

TEST_CASE("infeasible targets are rejected") {
    CHECK_THROWS_AS(realize_phase_sum({1.0, 1.0}, cplx{3.0}), std::invalid_argument);
    CHECK_THROWS_AS(realize_phase_sum({1.0, 3.0}, cplx{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(realize_phase_sum({1.0, 1.0, 10.0}, cplx{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(realize_phase_sum({2.0, 1.0}, cplx{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(realize_phase_sum({}, cplx{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(realize_phase_sum({1.0}, cplx{0.5}), std::invalid_argument);
    const auto th = realize_phase_sum({1.0}, cplx{0.0, -1.0});
    CHECK(std::abs(phase_sum({1.0}, th) - cplx{0.0, -1.0}) <= 1e-9);
}

TEST_CASE("random feasible targets hit the residual contract") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.2, 2.0), w(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> nd(2, 40);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = nd(rng);
        std::vector<double> radii(n);
        for (auto& r : radii) r = u(rng);
        std::sort(radii.begin(), radii.end());
        double total = 0.0;
        for (double r : radii) total += r;
        if (n >= 3 && radii[n - 1] > total - radii[n - 1]) continue;
        cplx z{w(rng), w(rng)};
        z *= total * std::abs(w(rng));
        if (n == 2) {
            const double lo = radii[1] - radii[0];
            if (std::abs(z) < lo) z *= (lo + 0.01) / std::max(std::abs(z), 1e-12);
        }
        if (std::abs(z) > total) z *= 0.99 * total / std::abs(z);
        const auto th = realize_phase_sum(radii, z);
        for (double t : th) {
            CHECK(t >= 0.0);
            CHECK(t < 1.0);
        }
        CHECK(std::abs(phase_sum(radii, th) - z) <= 1e-9 * total);
    }
}

TEST_CASE("greedy base phases alternate for zeta") {
    const auto zeta = builtin_zeta();
    const auto sums = greedy_partial_sums(zeta, 8.0);
    REQUIRE(sums.size() == 4);  // primes 2, 3, 5, 7
    CHECK(sums[0] == cplx{1.0});
    CHECK(sums[1] == cplx{0.0});
    CHECK(sums[2] == cplx{1.0});
    CHECK(sums[3] == cplx{0.0});
    const auto th = greedy_theta0(zeta, 8.0);
    CHECK(th.at(2) == 0.0);
    CHECK(th.at(3) == 0.5);
    CHECK(th.at(5) == 0.0);
    CHECK(th.at(7) == 0.5);
}

TEST_CASE("zero euler data leaves every phase at zero") {
    auto dead = builtin_zeta();
    dead.name = "dead";
    dead.euler_log_coeff = [](std::uint64_t, unsigned) { return cplx{0.0}; };
    dead.dirichlet_coeff = [](std::uint64_t n) { return n == 1 ? cplx{1.0} : cplx{0.0}; };
    const auto th = greedy_theta0(dead, 100.0);
    for (const auto& [p, t] : th.entries()) CHECK(t == 0.0);
    for (const auto& s : greedy_partial_sums(dead, 100.0)) CHECK(s == cplx{0.0});
}

TEST_CASE("greedy partial sums stay bounded by the largest coefficient") {
    const auto L4 = builtin_dirichlet(4, {cplx{1.0}, cplx{0.0}, cplx{-1.0}, cplx{0.0}});
    double maxb = 0.0;
    const auto primes = PrimeSieve::instance().primes_up_to(10000);
    const auto sums = greedy_partial_sums(L4, 10000.0);
    REQUIRE(sums.size() == primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        maxb = std::max(maxb, std::abs(L4.euler_log_coeff(primes[i], 1)));
        CHECK(std::abs(sums[i]) <= maxb + 1e-12);
    }
}

TEST_CASE("derivative targets of the rotated series stabilize") {
    // two-limit convergence oracle at N = 1
    const auto zeta = builtin_zeta();
    const auto theta = greedy_theta0(zeta, 1000000.0);
    const auto p1 = PrimeSieve::instance().primes_up_to(100000);
    const auto p2 = PrimeSieve::instance().primes_up_to(1000000);
    const cplx g1 = finite_log_product(zeta, p1, 0.75, theta, 0);
    const cplx g2 = finite_log_product(zeta, p2, 0.75, theta, 0);
    CHECK(std::abs(g1 - g2) < 1e-3);
}

TEST_CASE("certified tail bound shrinks monotonically") {
    const auto zeta = builtin_zeta();
    double prev = 1e300;
    for (double P : {1e4, 1e5, 1e6}) {
        const auto trunc = gamma_truncation_point(zeta, 0.75, 1, 1e-2);
        CHECK(trunc > 2.0);
        // probing the bound indirectly through gamma_targets at two scales
        (void)P;
        break;
    }
    const auto th = greedy_theta0(zeta, 1e7);
    for (double eps : {3e-2, 1e-2, 4e-3}) {
        const auto g = gamma_targets(zeta, th, 0.75, 2, eps);
        CHECK(g.tail_bound <= eps);
        CHECK(g.tail_bound < prev);
        prev = g.tail_bound;
    }
}

TEST_CASE("gamma for dead euler data is zero") {
    auto dead = builtin_zeta();
    dead.euler_log_coeff = [](std::uint64_t, unsigned) { return cplx{0.0}; };
    const auto th = greedy_theta0(dead, 2000.0);
    // tail certificates still use the descriptor growth envelope, so only a
    // truncation-reachable request is made
    const auto g = gamma_targets(dead, greedy_theta0(dead, 1e7), 0.9, 1, 1e-2);
    CHECK(std::abs(g.gamma[0]) == 0.0);
}

TEST_CASE("pipeline parameter checks") {
    const auto zeta = builtin_zeta();
    const std::vector<cplx> c{cplx{0.1}, cplx{0.05}};
    CHECK_THROWS_AS(derive_pipeline_params(zeta, 0.4, 2, 0.5, c, PipelineMode::practical,
                                           PracticalGeometry{50, 200, 200, 2000}),
                    std::domain_error);
    CHECK_THROWS_AS(derive_pipeline_params(zeta, 0.75, 2, 0.5, c, PipelineMode::practical,
                                           PracticalGeometry{50, 100, 100, 2000}),
                    std::domain_error);  // Y < 2X + 1
    CHECK_THROWS_AS(derive_pipeline_params(zeta, 0.75, 2, 0.5, c, PipelineMode::practical,
                                           PracticalGeometry{50, 200, 200, 700}),
                    std::domain_error);  // Q <= 2^N Y
    const auto params = derive_pipeline_params(zeta, 0.75, 2, 0.5, c, PipelineMode::practical,
                                               PracticalGeometry{50, 200, 200, 2000});
    CHECK(params.eta == doctest::Approx(1.0 / 64.0).epsilon(1e-13));
    CHECK(params.mu == doctest::Approx(std::sqrt(0.125)).epsilon(1e-15));
    CHECK(params.rho == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(params.C_L_eta > 0.0);
    CHECK(params.C_L_eta <= 1.0);
}

TEST_CASE("rigorous thresholds follow the closed formulas") {
    const auto zeta = builtin_zeta();
    const std::vector<cplx> c{cplx{0.1}};
    const auto params = derive_pipeline_params(zeta, 0.75, 1, 0.5, c, PipelineMode::rigorous);
    const auto k = compute_constants(zeta, 0.75);
    CHECK(params.Y == doctest::Approx(std::pow(params.C_L_eta / k.mu, 1.0 / (0.75 - k.eta)) *
                                      std::pow(2.0 * params.X, 0.75 / (0.75 - k.eta)))
                          .epsilon(1e-12));
    CHECK(params.H == doctest::Approx(std::pow(params.Y, k.A)).epsilon(1e-12));
    CHECK(params.Q > 2.0 * params.Y);
    CHECK(params.Y >= 2.0 * params.X + 1.0);
    // desk-scale sieve cannot host these sizes; the assembly must refuse
    CHECK_THROWS_AS(assemble_theta_star(zeta, params, c), pipeline_error);
}

TEST_CASE("self-targets are reproduced to the residual contract") {
    const auto zeta = builtin_zeta();
    const auto primes = PrimeSieve::instance().primes_up_to(2000);
    const auto th0 = greedy_theta0(zeta, 2000.0);
    const auto c = finite_log_product_derivs(zeta, primes, 0.75, th0, 2);
    const auto params = derive_pipeline_params(zeta, 0.75, 2, 0.5, c, PipelineMode::practical,
                                               PracticalGeometry{50, 200, 200, 2000});
    const auto res = assemble_theta_star(zeta, params, c);
    CHECK(res.residuals[0] <= 1e-9);
    CHECK(res.residuals[1] <= 1e-9);
    // internal consistency: residuals recomputed from the returned phases
    const auto re = finite_log_product_derivs(zeta, primes, 0.75, res.theta_star, 2);
    for (int k = 0; k < 2; ++k)
        CHECK(std::abs(std::abs(re[k] - c[k]) - res.residuals[k]) <= 1e-12);
    // every phase lies in [0, 1)
    for (const auto& [p, t] : res.theta_star.entries()) {
        CHECK(t >= 0.0);
        CHECK(t < 1.0);
    }
}

TEST_CASE("block structure is disjoint and inside the product range") {
    const auto zeta = builtin_zeta();
    const auto primes = PrimeSieve::instance().primes_up_to(2000);
    const auto th0 = greedy_theta0(zeta, 2000.0);
    const auto c = finite_log_product_derivs(zeta, primes, 0.75, th0, 2);
    const auto params = derive_pipeline_params(zeta, 0.75, 2, 0.5, c, PipelineMode::practical,
                                               PracticalGeometry{50, 200, 200, 2000});
    const auto res = assemble_theta_star(zeta, params, c);
    REQUIRE(res.blocks.size() == 2);
    // anchors from (X, 2X], deterministic choice: the smallest qualifying
    CHECK(res.blocks[0].anchor == 53);
    CHECK(res.blocks[1].anchor == 59);
    CHECK(res.blocks[0].interval_primes > 0);
    CHECK(res.blocks[1].interval_primes > 0);
    CHECK(res.cond_Y1);
    CHECK(res.cond_Y2);
    // anchor primes sit below Y, interval blocks above; no overlap possible
    CHECK(res.blocks[0].anchor < params.Y);
    CHECK(res.blocks[1].anchor < params.Y);
}

TEST_CASE("oversized targets trip the capacity gate") {
    const auto zeta = builtin_zeta();
    const std::vector<cplx> c{cplx{1e6}, cplx{1e6}};
    const auto params = derive_pipeline_params(zeta, 0.75, 2, 0.5, c, PipelineMode::practical,
                                               PracticalGeometry{50, 200, 200, 2000});
    try {
        assemble_theta_star(zeta, params, c);
        FAIL("expected a capacity failure");
    } catch (const pipeline_error& e) {
        CHECK(e.step == "eqn Sur");
    }
}

TEST_CASE("phase assignments round trip through JSON") {
    PhaseAssignment th;
    th.set(2, 0.123456789012345678);
    th.set(101, 0.875);
    th.set(3, 0.0);
    const auto text = th.to_json();
    CHECK(text.find("0.12345678901234568") != std::string::npos);  // 17 significant digits
    const auto back = PhaseAssignment::from_json(text);
    CHECK(back.size() == 3);
    CHECK(back.at(2) == th.at(2));
    CHECK(back.at(3) == 0.0);
    CHECK(back.at(101) == 0.875);
    CHECK(back.at(7) == 0.0);  // absent primes read as zero
}

TEST_CASE("assembly refuses a sieve-range violation") {
    const auto zeta = builtin_zeta();
    PipelineParams params;
    params.sigma0 = 0.75;
    params.N = 1;
    params.eps = 0.5;
    params.X = 50;
    params.Y = 200;
    params.H = 200;
    params.Q = 1e12;
    params.mu = 0.35;
    try {
        assemble_theta_star(zeta, params, {cplx{0.0}});
        FAIL("expected a sieve-range failure");
    } catch (const pipeline_error& e) {
        CHECK(e.step == "sieve limit");
    }
}
