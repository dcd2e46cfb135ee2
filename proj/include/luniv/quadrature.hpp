#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace luniv {

// Adaptive Simpson on [a, b] with absolute tolerance. Works for double or
// std::complex<double> integrands.
template <typename T>
class AdaptiveSimpson {
public:
    AdaptiveSimpson(std::function<T(double)> f, double abs_tol, int max_depth = 48)
        : f_(std::move(f)), tol_(abs_tol), max_depth_(max_depth) {}

    T integrate(double a, double b) const {
        const T fa = f_(a), fb = f_(b), fm = f_(0.5 * (a + b));
        const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole, tol_, max_depth_);
    }

private:
    T recurse(double a, double b, const T& fa, const T& fm, const T& fb, const T& whole,
              double tol, int depth) const {
        const double m = 0.5 * (a + b);
        const T fl = f_(0.5 * (a + m)), fr = f_(0.5 * (m + b));
        const T left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
        const T right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
        const T delta = left + right - whole;
        if (depth <= 0) throw std::runtime_error("AdaptiveSimpson: depth exhausted");
        if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        return recurse(a, m, fa, fl, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, fr, fb, right, 0.5 * tol, depth - 1);
    }

    std::function<T(double)> f_;
    double tol_;
    int max_depth_;
};

inline double integrate_real(const std::function<double(double)>& f, double a, double b,
                             double abs_tol) {
    return AdaptiveSimpson<double>(f, abs_tol).integrate(a, b);
}

inline std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b, double abs_tol) {
    return AdaptiveSimpson<std::complex<double>>(f, abs_tol).integrate(a, b);
}

}  // namespace luniv
