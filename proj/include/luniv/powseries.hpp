#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace luniv {

using cplx = std::complex<double>;

// Complex power series truncated at degree n_max; coeffs[n] is the X^n
// coefficient. Arithmetic is exact modulo X^{n_max+1}.
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    explicit TruncatedSeries(std::size_t n_max) : coeffs_(n_max + 1, cplx{0.0}) {}
    TruncatedSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}

    std::size_t degree() const { return coeffs_.size() - 1; }
    cplx operator[](std::size_t n) const { return coeffs_[n]; }
    cplx& operator[](std::size_t n) { return coeffs_[n]; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    TruncatedSeries operator+(const TruncatedSeries& rhs) const;
    TruncatedSeries operator-(const TruncatedSeries& rhs) const;
    TruncatedSeries operator*(const TruncatedSeries& rhs) const;
    TruncatedSeries operator*(cplx scalar) const;

    // exp of a series with zero constant term, by the recurrence from
    // (exp f)' = f' exp f. Throws on nonzero constant term.
    TruncatedSeries exp() const;

    // log of a series with constant term 1 (same recurrence, inverted).
    TruncatedSeries log() const;

    // Series with coefficients |a_n|.
    TruncatedSeries abs() const;

    std::string to_string() const;

private:
    std::vector<cplx> coeffs_;
};

// f(X;z) = sum z_n X^n, zero constant term, truncated at degree z.size().
TruncatedSeries f_map(const std::vector<cplx>& z);

// Degree 1..N coefficients of exp(f(X;z)); component n is the value of the
// n-th exponential polynomial at z_1..z_n.
std::vector<cplx> F_polys(const std::vector<cplx>& z);

// Inverse of F_polys: degree 1..N coefficients of log(1 + sum w_n X^n).
std::vector<cplx> G_polys(const std::vector<cplx>& w);

// alpha majorized by beta: |a_n| <= b_n for all n <= n_max. beta must have
// nonnegative real coefficients; throws otherwise.
bool majorizes(const TruncatedSeries& alpha, const TruncatedSeries& beta);

// l1 norm of a coefficient vector.
double l1_norm(const std::vector<cplx>& v);

// Explicit bound on ||alpha||_1 in terms of Fvals = F_polys(alpha) truncated
// to length N-1, obtained by evaluating the majorant at X = 1/(3(1+||F||)):
//   ||alpha|| <= (3(1+||F||))^{N-1} * |log(1 - sum_{n=1}^{N-1} 3^{-n})|.
double alpha_norm_bound(const std::vector<cplx>& Fvals);

struct ExpLogChain {
    cplx alpha0;              // chosen branch of log c_0
    std::vector<cplx> alpha;  // length N-1
};

// Given derivative-style targets c = (c_0, ..., c_{N-1}) with c_0 != 0,
// produce alpha0 = log c_0 (principal branch shifted by `branch` windings)
// and alpha with F_polys(alpha) = (c_k / (c_0 k!))_{k=1..N-1}.
ExpLogChain exp_log_chain(const std::vector<cplx>& c, int branch = 0);

// Reverse direction: c_k = e^{alpha0} * k! * F_k(alpha), c_0 = e^{alpha0}.
std::vector<cplx> exp_log_reconstruct(cplx alpha0, const std::vector<cplx>& alpha);

}  // namespace luniv
