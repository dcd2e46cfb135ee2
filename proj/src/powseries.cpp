#include "luniv/powseries.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace luniv {

namespace {

void check_same_degree(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.degree() != b.degree())
        throw std::invalid_argument("TruncatedSeries: mismatched truncation degrees");
}

}  // namespace

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& rhs) const {
    check_same_degree(*this, rhs);
    TruncatedSeries out(degree());
    for (std::size_t n = 0; n <= degree(); ++n) out[n] = coeffs_[n] + rhs[n];
    return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& rhs) const {
    check_same_degree(*this, rhs);
    TruncatedSeries out(degree());
    for (std::size_t n = 0; n <= degree(); ++n) out[n] = coeffs_[n] - rhs[n];
    return out;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& rhs) const {
    check_same_degree(*this, rhs);
    TruncatedSeries out(degree());
    for (std::size_t n = 0; n <= degree(); ++n)
        for (std::size_t k = 0; k <= n; ++k) out[n] += coeffs_[k] * rhs[n - k];
    return out;
}

TruncatedSeries TruncatedSeries::operator*(cplx scalar) const {
    TruncatedSeries out(degree());
    for (std::size_t n = 0; n <= degree(); ++n) out[n] = coeffs_[n] * scalar;
    return out;
}

TruncatedSeries TruncatedSeries::exp() const {
    if (coeffs_[0] != cplx{0.0})
        throw std::invalid_argument("TruncatedSeries::exp: constant term must be 0");
    const std::size_t N = degree();
    TruncatedSeries e(N);
    e[0] = 1.0;
    // n e_n = sum_{k=1}^{n} k f_k e_{n-k}
    for (std::size_t n = 1; n <= N; ++n) {
        cplx acc{0.0};
        for (std::size_t k = 1; k <= n; ++k)
            acc += static_cast<double>(k) * coeffs_[k] * e[n - k];
        e[n] = acc / static_cast<double>(n);
    }
    return e;
}

TruncatedSeries TruncatedSeries::log() const {
    if (coeffs_[0] != cplx{1.0})
        throw std::invalid_argument("TruncatedSeries::log: constant term must be 1");
    const std::size_t N = degree();
    TruncatedSeries g(N);
    // n g_n = n f_n - sum_{k=1}^{n-1} k g_k f_{n-k}
    for (std::size_t n = 1; n <= N; ++n) {
        cplx acc = static_cast<double>(n) * coeffs_[n];
        for (std::size_t k = 1; k < n; ++k)
            acc -= static_cast<double>(k) * g[k] * coeffs_[n - k];
        g[n] = acc / static_cast<double>(n);
    }
    return g;
}

TruncatedSeries TruncatedSeries::abs() const {
    TruncatedSeries out(degree());
    for (std::size_t n = 0; n <= degree(); ++n) out[n] = std::abs(coeffs_[n]);
    return out;
}

std::string TruncatedSeries::to_string() const {
    std::ostringstream os;
    for (std::size_t n = 0; n <= degree(); ++n) {
        if (n) os << " + ";
        os << "(" << coeffs_[n].real() << (coeffs_[n].imag() < 0 ? "" : "+")
           << coeffs_[n].imag() << "i)";
        if (n) os << "*X^" << n;
    }
    return os.str();
}

TruncatedSeries f_map(const std::vector<cplx>& z) {
    TruncatedSeries s(z.size());
    for (std::size_t n = 0; n < z.size(); ++n) s[n + 1] = z[n];
    return s;
}

std::vector<cplx> F_polys(const std::vector<cplx>& z) {
    if (z.empty()) return {};
    const auto e = f_map(z).exp();
    std::vector<cplx> out(z.size());
    for (std::size_t n = 1; n <= z.size(); ++n) out[n - 1] = e[n];
    return out;
}

std::vector<cplx> G_polys(const std::vector<cplx>& w) {
    if (w.empty()) return {};
    TruncatedSeries s(w.size());
    s[0] = 1.0;
    for (std::size_t n = 0; n < w.size(); ++n) s[n + 1] = w[n];
    const auto g = s.log();
    std::vector<cplx> out(w.size());
    for (std::size_t n = 1; n <= w.size(); ++n) out[n - 1] = g[n];
    return out;
}

bool majorizes(const TruncatedSeries& alpha, const TruncatedSeries& beta) {
    check_same_degree(alpha, beta);
    for (std::size_t n = 0; n <= beta.degree(); ++n) {
        if (beta[n].imag() != 0.0 || beta[n].real() < 0.0)
            throw std::invalid_argument("majorizes: beta must have nonnegative real coefficients");
    }
    for (std::size_t n = 0; n <= alpha.degree(); ++n)
        if (std::abs(alpha[n]) > beta[n].real()) return false;
    return true;
}

double l1_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::abs(x);
    return s;
}

double alpha_norm_bound(const std::vector<cplx>& Fvals) {
    const std::size_t Nm1 = Fvals.size();
    if (Nm1 == 0) return 0.0;
    const double fn = l1_norm(Fvals);
    double geo = 0.0;
    double p = 1.0;
    for (std::size_t n = 1; n <= Nm1; ++n) {
        p /= 3.0;
        geo += p;
    }
    return std::pow(3.0 * (1.0 + fn), static_cast<double>(Nm1)) * std::abs(std::log(1.0 - geo));
}

ExpLogChain exp_log_chain(const std::vector<cplx>& c, int branch) {
    if (c.empty() || c[0] == cplx{0.0})
        throw std::invalid_argument("exp_log_chain: c_0 must be nonzero");
    ExpLogChain out;
    out.alpha0 = std::log(c[0]) + cplx{0.0, 2.0 * M_PI * branch};
    std::vector<cplx> beta(c.size() - 1);
    double fact = 1.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
        fact *= static_cast<double>(k);
        beta[k - 1] = c[k] / (c[0] * fact);
    }
    out.alpha = G_polys(beta);
    return out;
}

std::vector<cplx> exp_log_reconstruct(cplx alpha0, const std::vector<cplx>& alpha) {
    std::vector<cplx> c(alpha.size() + 1);
    const cplx c0 = std::exp(alpha0);
    c[0] = c0;
    const auto F = F_polys(alpha);
    double fact = 1.0;
    for (std::size_t k = 1; k <= alpha.size(); ++k) {
        fact *= static_cast<double>(k);
        c[k] = c0 * fact * F[k - 1];
    }
    return c;
}

}  // namespace luniv
