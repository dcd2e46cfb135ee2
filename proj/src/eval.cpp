#include "luniv/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "luniv/errors.hpp"
#include "luniv/quadrature.hpp"
#include "luniv/sieve.hpp"

namespace luniv {

cplx unit_phase(double theta) {
    double r = theta - std::floor(theta);
    if (r == 0.0) return cplx{1.0, 0.0};
    if (r == 0.5) return cplx{-1.0, 0.0};
    if (r == 0.25) return cplx{0.0, -1.0};
    if (r == 0.75) return cplx{0.0, 1.0};
    return std::polar(1.0, -2.0 * M_PI * r);
}

double PhaseAssignment::at(std::uint64_t p) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const auto& e, std::uint64_t v) { return e.first < v; });
    if (it != entries_.end() && it->first == p) return it->second;
    return 0.0;
}

void PhaseAssignment::set(std::uint64_t p, double theta) {
    theta -= std::floor(theta);
    if (!entries_.empty() && entries_.back().first < p) {
        entries_.emplace_back(p, theta);
        return;
    }
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const auto& e, std::uint64_t v) { return e.first < v; });
    if (it != entries_.end() && it->first == p)
        it->second = theta;
    else
        entries_.insert(it, {p, theta});
}

std::string PhaseAssignment::to_json() const {
    std::ostringstream os;
    os << "[";
    char buf[64];
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) os << ",";
        std::snprintf(buf, sizeof buf, "[%llu,%.17g]",
                      static_cast<unsigned long long>(entries_[i].first), entries_[i].second);
        os << "\n  " << buf;
    }
    os << "\n]";
    return os.str();
}

PhaseAssignment PhaseAssignment::from_json(const std::string& text) {
    PhaseAssignment out;
    const char* p = text.c_str();
    while (*p) {
        while (*p && (*p == '[' || *p == ',' || *p == ']' || std::isspace(*p))) ++p;
        if (!*p) break;
        char* end = nullptr;
        const auto prime = std::strtoull(p, &end, 10);
        p = end;
        while (*p && (*p == ',' || std::isspace(*p))) ++p;
        const double theta = std::strtod(p, &end);
        p = end;
        out.set(prime, theta);
        while (*p && *p != '[') ++p;
    }
    return out;
}

namespace {

// B_2, B_4, ..., B_30
constexpr double kBernoulli[] = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
};
constexpr int kMaxBernoulliPairs = 14;  // last slot reserved for the error term

// Series of c^{-(s+X)}: coefficient k is c^{-s} (-log c)^k / k!.
TruncatedSeries pow_series(double c, cplx s, std::size_t deg) {
    TruncatedSeries out(deg);
    const double lc = std::log(c);
    cplx term = std::exp(-s * lc);
    out[0] = term;
    for (std::size_t k = 1; k <= deg; ++k) {
        term *= -lc / static_cast<double>(k);
        out[k] = term;
    }
    return out;
}

// Series of 1/(s + X - w): geometric in X about 1/(s - w).
TruncatedSeries inv_linear_series(cplx s, cplx w, std::size_t deg) {
    TruncatedSeries out(deg);
    const cplx inv = 1.0 / (s - w);
    cplx term = inv;
    out[0] = term;
    for (std::size_t k = 1; k <= deg; ++k) {
        term *= -inv;
        out[k] = term;
    }
    return out;
}

// Series of the rising product (s+X)(s+1+X)...(s+r-1+X).
TruncatedSeries pochhammer_series(cplx s, int r, std::size_t deg) {
    TruncatedSeries out(deg);
    out[0] = 1.0;
    for (int i = 0; i < r; ++i) {
        TruncatedSeries lin(deg);
        lin[0] = s + static_cast<double>(i);
        if (deg >= 1) lin[1] = 1.0;
        out = out * lin;
    }
    return out;
}

struct HurwitzResult {
    TruncatedSeries series;
    double err_estimate = 0.0;
};

// Euler-Maclaurin for zeta(s + X, a) mod X^{deg+1}, a in (0, 1].
HurwitzResult hurwitz_series(cplx s, double a, std::size_t deg, int main_len, int pairs) {
    HurwitzResult r;
    TruncatedSeries total(deg);
    for (int n = 0; n < main_len; ++n) total = total + pow_series(n + a, s, deg);
    const double m = main_len + a;  // first point not covered by the main sum
    // (m)^{1-s-X}/(s+X-1)
    total = total + pow_series(m, s, deg) * m * inv_linear_series(s, cplx{1.0, 0.0}, deg);
    const auto mpow = pow_series(m, s, deg);
    total = total + mpow * 0.5;
    double fact = 1.0;  // (2j)!
    TruncatedSeries mshift(deg);
    mshift[0] = 1.0;
    for (int j = 1; j <= pairs; ++j) {
        fact *= (2.0 * j - 1.0) * (2.0 * j);
        mshift = mshift * (1.0 / (m * m));
        const auto term =
            pochhammer_series(s, 2 * j - 1, deg) * mpow * mshift * (m * kBernoulli[j - 1] / fact);
        if (j == pairs) {
            // magnitude of the last kept pair doubles as the error estimate
            for (std::size_t k = 0; k <= deg; ++k)
                r.err_estimate = std::max(r.err_estimate, std::abs(term[k]));
        }
        total = total + term;
    }
    r.series = total;
    return r;
}

TruncatedSeries eval_series_impl(const LFunctionDescriptor& desc, cplx s, std::size_t deg,
                                 const EvalConfig& cfg) {
    const double t = s.imag();
    if (desc.m_L > 0 && std::abs(s - cplx{1.0, 0.0}) < 1e-14)
        throw std::domain_error("eval_L: pole at s = 1");
    if (s.real() <= 0.0)
        throw std::domain_error("eval_L: evaluator requires sigma > 0");
    int main_len = cfg.cutoff > 0
                       ? cfg.cutoff
                       : std::max(24, static_cast<int>(std::ceil(2.0 * std::abs(t))) + 8);
    const int pairs = std::min(std::max(cfg.euler_maclaurin_terms, 4), kMaxBernoulliPairs);
    for (int attempt = 0;; ++attempt) {
        HurwitzResult res;
        if (desc.name == "zeta" || desc.modulus == 1) {
            res = hurwitz_series(s, 1.0, deg, main_len, pairs);
        } else if (desc.name == "dirichlet") {
            const auto q = desc.modulus;
            TruncatedSeries acc(deg);
            double err = 0.0;
            const int per_residue = std::max(2, static_cast<int>(main_len / q) + 1);
            for (std::uint64_t aa = 1; aa <= q; ++aa) {
                const cplx chi = desc.character[aa - 1];
                if (chi == cplx{0.0}) continue;
                auto part = hurwitz_series(s, static_cast<double>(aa) / q, deg, per_residue, pairs);
                acc = acc + part.series * chi;
                err = std::max(err, part.err_estimate);
            }
            res.series = acc * pow_series(static_cast<double>(q), s, deg);
            res.err_estimate = err * std::pow(static_cast<double>(q), -s.real());
        } else {
            throw std::domain_error("eval_L: evaluator supports the built-in descriptors only");
        }
        if (res.err_estimate <= cfg.abs_tol) return res.series;
        if (attempt >= 2)
            throw precision_error("eval_L: error estimate " + std::to_string(res.err_estimate) +
                                  " exceeds abs_tol");
        main_len *= 2;
    }
}

}  // namespace

std::vector<cplx> eval_L_taylor(const LFunctionDescriptor& desc, cplx s, int orders,
                                const EvalConfig& cfg) {
    if (orders < 0) throw std::domain_error("eval_L_taylor: order must be nonnegative");
    const auto series = eval_series_impl(desc, s, static_cast<std::size_t>(orders), cfg);
    return series.coeffs();
}

cplx eval_L(const LFunctionDescriptor& desc, cplx s, int order, const EvalConfig& cfg) {
    const auto coeffs = eval_L_taylor(desc, s, order, cfg);
    double fact = 1.0;
    for (int k = 2; k <= order; ++k) fact *= k;
    return coeffs[order] * fact;
}

namespace {

// log L at the anchor via the absolutely convergent Dirichlet series for
// log L; the tail past P is below C * P^{1-sigma}/(sigma-1).
cplx anchor_log(const LFunctionDescriptor& desc, cplx s) {
    if (s.real() < 2.0)
        throw branch_error("eval_logL: anchor_sigma must be at least 2");
    cplx acc{0.0};
    const double sigma = s.real();
    for (std::uint64_t p : PrimeSieve::instance().primes_up_to(1000)) {
        const double pd = static_cast<double>(p);
        if (desc.b_bound_C * std::pow(pd, 1.0 - sigma) / (sigma - 1.0) < 1e-16) break;
        for (unsigned l = 1;; ++l) {
            const double mag = std::pow(pd, -static_cast<double>(l) * sigma);
            if (mag < 1e-18) break;
            acc += desc.euler_log_coeff(p, l) *
                   std::exp(-static_cast<double>(l) * s * std::log(pd));
        }
    }
    return acc;
}

}  // namespace

namespace {

// derivatives of log L from the Taylor coefficients; branch-free
std::vector<cplx> logL_derivatives_only(const LFunctionDescriptor& desc, cplx s, int N,
                                        const EvalConfig& cfg) {
    std::vector<cplx> out(N, cplx{0.0});
    const auto c = eval_L_taylor(desc, s, N, cfg);
    if (std::abs(c[0]) < cfg.zero_proximity)
        throw branch_error("eval_logL: |L(s)| below zero-proximity threshold");
    std::vector<cplx> w(c.begin() + 1, c.end());
    for (auto& x : w) x /= c[0];
    const auto g = G_polys(w);
    double fact = 1.0;
    for (int k = 1; k <= N; ++k) {
        fact *= k;
        out[k - 1] = fact * g[k - 1];
    }
    return out;
}

// order 0: horizontal branch path from the anchor
cplx logL_tracked(const LFunctionDescriptor& desc, cplx s, const EvalConfig& cfg) {
    const double t = s.imag();
    if (std::abs(t) < 1e-12 && s.real() <= 1.0)
        throw branch_error("eval_logL: branch undefined for t = 0, sigma <= 1");
    const cplx anchor_s{cfg.anchor_sigma, t};
    cplx value = anchor_log(desc, anchor_s);
    if (std::abs(s.real() - cfg.anchor_sigma) > 1e-15) {
        auto integrand = [&](double alpha) -> cplx {
            const auto taylor = eval_L_taylor(desc, cplx{alpha, t}, 1, cfg);
            if (std::abs(taylor[0]) < cfg.zero_proximity)
                throw branch_error("eval_logL: possible zero on the horizontal path");
            return taylor[1] / taylor[0];
        };
        value += integrate_complex(integrand, cfg.anchor_sigma, s.real(), 1e-12);
    }
    return value;
}

}  // namespace

std::vector<cplx> eval_logL_derivs(const LFunctionDescriptor& desc, cplx s, int N,
                                   const EvalConfig& cfg) {
    if (N < 1) throw std::domain_error("eval_logL: N must be positive");
    std::vector<cplx> out(N, cplx{0.0});
    if (N > 1) {
        const auto derivs = logL_derivatives_only(desc, s, N - 1, cfg);
        for (int k = 1; k < N; ++k) out[k] = derivs[k - 1];
    }
    out[0] = logL_tracked(desc, s, cfg);
    return out;
}

cplx eval_logL(const LFunctionDescriptor& desc, cplx s, int order, const EvalConfig& cfg) {
    if (order == 0) return logL_tracked(desc, s, cfg);
    return logL_derivatives_only(desc, s, order, cfg)[order - 1];
}

namespace {

// l_max with certified tail sum_{l > l_max} (l log p)^k C p^{-l(sigma-theta)}
// below tol; returns 0 if even l_max = 64 cannot certify.
unsigned certified_l_max(double p, int k, double sigma_minus_theta, double C, double tol) {
    const double lp = std::log(p);
    for (unsigned lmax = 1; lmax <= 64; ++lmax) {
        const double l0 = lmax + 1;
        const double ratio =
            std::pow((l0 + 1.0) / l0, k) * std::pow(p, -sigma_minus_theta);
        if (ratio >= 1.0) continue;
        const double first = std::pow(l0 * lp, k) * C * std::pow(p, -l0 * sigma_minus_theta);
        if (first / (1.0 - ratio) < tol) return lmax;
    }
    return 0;
}

}  // namespace

std::vector<cplx> finite_log_product_derivs(const LFunctionDescriptor& desc,
                                            const std::vector<std::uint64_t>& prime_set,
                                            double sigma0, const PhaseAssignment& theta, int N) {
    if (!(sigma0 > 0.5)) throw std::domain_error("finite_log_product: sigma0 must exceed 1/2");
    if (N < 1) throw std::domain_error("finite_log_product: N must be positive");
    const double smt = sigma0 - desc.b_bound_theta;
    std::vector<cplx> out(N, cplx{0.0});
    for (std::uint64_t p : prime_set) {
        const double pd = static_cast<double>(p);
        const double lp = std::log(pd);
        const double th = theta.at(p);
        const unsigned lmax = certified_l_max(pd, N - 1, smt, desc.b_bound_C, 1e-12);
        if (lmax == 0) throw precision_error("finite_log_product: tail cannot be certified");
        for (unsigned l = 1; l <= lmax; ++l) {
            const cplx b = desc.euler_log_coeff(p, l);
            if (b == cplx{0.0}) continue;
            const cplx common = b * unit_phase(l * th) * std::pow(pd, -static_cast<double>(l) * sigma0);
            double w = 1.0;
            for (int k = 0; k < N; ++k) {
                out[k] += common * w;
                w *= -(static_cast<double>(l) * lp);
            }
        }
    }
    return out;
}

cplx finite_log_product(const LFunctionDescriptor& desc,
                        const std::vector<std::uint64_t>& prime_set, double sigma0,
                        const PhaseAssignment& theta, int order) {
    return finite_log_product_derivs(desc, prime_set, sigma0, theta, order + 1)[order];
}

double perturbation_bound(const LFunctionDescriptor& desc, double Q, double sigma0, int N) {
    if (!(Q > 2.0)) throw std::domain_error("perturbation_bound: Q must exceed 2");
    if (!(sigma0 > 0.5)) throw std::domain_error("perturbation_bound: sigma0 must exceed 1/2");
    const double delta = 1.0 / Q;
    const auto primes = PrimeSieve::instance().primes_up_to(static_cast<std::uint64_t>(Q));
    double total = 0.0;
    for (std::uint64_t p : primes) {
        const double pd = static_cast<double>(p);
        const double lp = std::log(pd);
        for (unsigned l = 1; l <= 64; ++l) {
            const double term = std::pow(static_cast<double>(l), N) *
                                std::pow(l * lp, N - 1) *
                                std::abs(desc.euler_log_coeff(p, l)) *
                                std::pow(pd, -static_cast<double>(l) * sigma0);
            total += term;
            if (term < 1e-16 * (1.0 + total)) break;
        }
    }
    return delta * total;
}

}  // namespace luniv
