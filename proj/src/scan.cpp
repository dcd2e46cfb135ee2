#include "luniv/scan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "luniv/bounds.hpp"
#include "luniv/errors.hpp"

namespace luniv {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_complex_list(const std::vector<cplx>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << "[" << fmt(v[i].real()) << ", " << fmt(v[i].imag()) << "]";
    }
    os << "]";
    return os.str();
}

std::string json_real_list(const std::vector<double>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << fmt(v[i]);
    }
    os << "]";
    return os.str();
}

struct PointResult {
    std::vector<double> residuals;
    double max_residual = 1e300;
    bool ok = false;
    std::string error;
};

PointResult residuals_at(const LFunctionDescriptor& desc, double sigma0,
                         const std::vector<cplx>& c, double t, const EvalConfig& cfg) {
    PointResult out;
    try {
        const auto derivs = eval_logL_derivs(desc, cplx{sigma0, t}, static_cast<int>(c.size()), cfg);
        out.residuals.resize(c.size());
        out.max_residual = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            out.residuals[k] = std::abs(derivs[k] - c[k]);
            out.max_residual = std::max(out.max_residual, out.residuals[k]);
        }
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

int clamp_workers(int workers) {
#ifdef _OPENMP
    if (workers <= 0) return omp_get_max_threads();
    return workers;
#else
    (void)workers;
    return 1;
#endif
}

}  // namespace

std::vector<double> scan_grid_serial(const LFunctionDescriptor& desc, double sigma0,
                                     const std::vector<cplx>& c, double t_min, double step,
                                     std::size_t count, const EvalConfig& cfg) {
    std::vector<double> out(count, 1e300);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = residuals_at(desc, sigma0, c, t_min + static_cast<double>(i) * step, cfg)
                     .max_residual;
    return out;
}

std::vector<double> scan_grid_parallel(const LFunctionDescriptor& desc, double sigma0,
                                       const std::vector<cplx>& c, double t_min, double step,
                                       std::size_t count, int workers, const EvalConfig& cfg) {
    std::vector<double> out(count, 1e300);
    const int nw = clamp_workers(workers);
#pragma omp parallel for schedule(dynamic, 16) num_threads(nw)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
        out[i] = residuals_at(desc, sigma0, c, t_min + static_cast<double>(i) * step, cfg)
                     .max_residual;
    return out;
}

ScanReport scan_targets(const LFunctionDescriptor& desc, double sigma0,
                        const std::vector<cplx>& c, double eps, double t_min, double t_max,
                        double step, int workers, const EvalConfig& cfg) {
    if (!(t_min > 0.0) || !(t_max > t_min) || !(step > 0.0) || t_max > 1e4)
        throw std::domain_error("scan: need 0 < t_min < t_max <= 1e4 and step > 0");
    const auto start = std::chrono::steady_clock::now();
    ScanReport rep;
    rep.descriptor = desc.name;
    rep.sigma0 = sigma0;
    rep.N = static_cast<int>(c.size());
    rep.targets = c;
    rep.eps = eps;
    rep.t_min = t_min;
    rep.t_max = t_max;
    rep.step = step;

    const auto count = static_cast<std::size_t>(std::floor((t_max - t_min) / step)) + 1;
    const std::size_t window_size = 128;  // fixed; worker count cannot move boundaries
    const std::size_t nwin = (count + window_size - 1) / window_size;
    rep.windows.assign(nwin, {});

    const int nw = clamp_workers(workers);
#pragma omp parallel for schedule(dynamic) num_threads(nw)
    for (std::int64_t w = 0; w < static_cast<std::int64_t>(nwin); ++w) {
        ScanWindow win;
        win.index = static_cast<std::size_t>(w);
        const std::size_t lo = win.index * window_size;
        const std::size_t hi = std::min(count, lo + window_size);
        for (std::size_t i = lo; i < hi; ++i) {
            const double t = t_min + static_cast<double>(i) * step;
            const auto pr = residuals_at(desc, sigma0, c, t, cfg);
            if (!pr.ok) {
                win.eval_error = true;
                win.error = pr.error;
                continue;
            }
            if (pr.max_residual < win.max_residual || win.residuals.empty()) {
                win.max_residual = pr.max_residual;
                win.residuals = pr.residuals;
                win.t_best = t;
            }
        }
        if (win.residuals.empty()) win.max_residual = 1e300;
        rep.windows[win.index] = win;
    }

    // merge by window index
    double best = 1e300, best_t = t_min;
    for (const auto& win : rep.windows) {
        if (!win.residuals.empty() && win.max_residual < best) {
            best = win.max_residual;
            best_t = win.t_best;
        }
    }
    if (best >= 1e300) throw precision_error("scan: every grid point failed to evaluate");

    // golden-section refinement on the scalar max-residual
    auto value = [&](double t) { return residuals_at(desc, sigma0, c, t, cfg).max_residual; };
    double a = std::max(t_min, best_t - step);
    double b = std::min(t_max, best_t + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = value(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = value(x2);
        }
    }
    const double t_ref = f1 < f2 ? x1 : x2;
    const auto refined = residuals_at(desc, sigma0, c, t_ref, cfg);
    if (refined.ok && refined.max_residual < best) {
        best = refined.max_residual;
        best_t = t_ref;
        rep.best_residuals = refined.residuals;
    }
    if (rep.best_residuals.empty())
        rep.best_residuals = residuals_at(desc, sigma0, c, best_t, cfg).residuals;
    rep.best_t = best_t;
    rep.best_max_residual = best;
    rep.success = best < eps;
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string ScanReport::to_json() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"schema\": 1,\n";
    os << "  \"descriptor\": \"" << descriptor << "\",\n";
    os << "  \"sigma0\": " << fmt(sigma0) << ",\n";
    os << "  \"N\": " << N << ",\n";
    os << "  \"targets\": " << json_complex_list(targets) << ",\n";
    os << "  \"eps\": " << fmt(eps) << ",\n";
    os << "  \"t_range\": [" << fmt(t_min) << ", " << fmt(t_max) << ", " << fmt(step) << "],\n";
    os << "  \"best_t\": " << fmt(best_t) << ",\n";
    os << "  \"best_residuals\": " << json_real_list(best_residuals) << ",\n";
    os << "  \"best_max_residual\": " << fmt(best_max_residual) << ",\n";
    os << "  \"success\": " << (success ? "true" : "false") << "\n";
    os << "}";
    return os.str();
}

std::string ScanReport::windows_csv() const {
    std::ostringstream os;
    os << "t";
    for (int k = 0; k < N; ++k) os << ",residual_" << k;
    os << ",max_residual\n";
    for (const auto& w : windows) {
        if (w.residuals.empty()) continue;
        os << fmt(w.t_best);
        for (double r : w.residuals) os << "," << fmt(r);
        os << "," << fmt(w.max_residual) << "\n";
    }
    return os.str();
}

namespace {

// 720 boundary points plus ~1000 golden-spiral interior points of the disc
// |s - center| <= radius.
std::vector<cplx> disc_samples(cplx center, double radius) {
    std::vector<cplx> pts;
    pts.reserve(1720);
    for (int i = 0; i < 720; ++i) {
        const double phi = 2.0 * M_PI * i / 720.0;
        pts.push_back(center + radius * std::polar(1.0, phi));
    }
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < 1000; ++i) {
        const double rr = radius * std::sqrt((i + 0.5) / 1000.0);
        pts.push_back(center + rr * std::polar(1.0, golden * i));
    }
    return pts;
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx dz, std::size_t terms) {
    cplx acc{0.0};
    const std::size_t n = std::min(terms, coeffs.size());
    for (std::size_t k = n; k-- > 0;) acc = acc * dz + coeffs[k];
    return acc;
}

}  // namespace

DiscReport disc_experiment(const LFunctionDescriptor& desc, double sigma0, double t0, double r,
                           const std::vector<cplx>& g_taylor, double eps, double delta0,
                           double t_lo, double t_hi, double step, int workers,
                           const EvalConfig& cfg) {
    if (g_taylor.empty() || g_taylor[0] == cplx{0.0})
        throw std::domain_error("disc: g(s0) must be nonzero");
    if (!(delta0 > 0.0 && delta0 < 1.0))
        throw std::domain_error("disc: delta0 must lie in (0,1)");
    if (!(r > 0.0) || !(step > 0.0) || !(t_hi > t_lo))
        throw std::domain_error("disc: need r > 0, step > 0 and a nonempty tau range");
    const double strip_floor = std::max(desc.sigma_L, 1.0 - 2.0 * desc.E_L);
    if (!(sigma0 - r > strip_floor))
        throw std::domain_error("disc: the disc must stay right of max{sigma_L, 1-2E_L}");

    DiscReport rep;
    rep.sigma0 = sigma0;
    rep.t0 = t0;
    rep.r = r;
    rep.eps = eps;
    rep.delta0 = delta0;
    const cplx s0{sigma0, t0};

    // M(g) on the radius-r boundary
    double mg = 0.0;
    for (int i = 0; i < 720; ++i) {
        const cplx dz = r * std::polar(1.0, 2.0 * M_PI * i / 720.0);
        mg = std::max(mg, std::abs(poly_eval(g_taylor, dz, g_taylor.size())));
    }
    rep.M_g = mg;
    rep.N = gl_N_choice(mg, delta0, eps);
    const int N = rep.N;

    rep.targets.resize(N);
    double fact = 1.0;
    for (int k = 0; k < N; ++k) {
        if (k > 0) fact *= k;
        rep.targets[k] =
            k < static_cast<int>(g_taylor.size()) ? fact * g_taylor[k] : cplx{0.0};
    }

    // scan tau minimizing the sampled sup over the delta0*r disc
    const auto scan_pts = disc_samples(s0, delta0 * r);
    std::vector<cplx> g_at(scan_pts.size());
    for (std::size_t i = 0; i < scan_pts.size(); ++i)
        g_at[i] = poly_eval(g_taylor, scan_pts[i] - s0, g_taylor.size());

    const auto count = static_cast<std::size_t>(std::floor((t_hi - t_lo) / step)) + 1;
    std::vector<double> sups(count, 1e300);
    const int nw = clamp_workers(workers);
#pragma omp parallel for schedule(dynamic) num_threads(nw)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
        const double tau = t_lo + static_cast<double>(i) * step;
        double sup = 0.0;
        try {
            for (std::size_t j = 0; j < scan_pts.size(); ++j) {
                const cplx L = eval_L(desc, scan_pts[j] + cplx{0.0, tau}, 0, cfg);
                sup = std::max(sup, std::abs(L - g_at[j]));
            }
            sups[i] = sup;
        } catch (const std::exception&) {
            sups[i] = 1e300;
        }
    }
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < count; ++i)
        if (sups[i] < sups[best_i]) best_i = i;
    if (sups[best_i] >= 1e300) throw precision_error("disc: every tau failed to evaluate");
    rep.tau = t_lo + static_cast<double>(best_i) * step;

    // M(tau; L) on the radius-r circle
    double mtau = 0.0;
    for (int i = 0; i < 720; ++i) {
        const cplx z = s0 + r * std::polar(1.0, 2.0 * M_PI * i / 720.0) + cplx{0.0, rep.tau};
        mtau = std::max(mtau, std::abs(eval_L(desc, z, 0, cfg)));
    }
    rep.M_tau = mtau;

    // largest delta <= delta0 with M(tau) delta^N/(1-delta) < eps/3
    auto admissible = [&](double d) { return mtau * std::pow(d, N) / (1.0 - d) < eps / 3.0; };
    double delta = 0.0;
    if (admissible(delta0)) {
        delta = delta0;
    } else {
        double lo = 0.0, hi = delta0;
        for (int it = 0; it < 70; ++it) {
            const double mid = 0.5 * (lo + hi);
            (admissible(mid) ? lo : hi) = mid;
        }
        delta = lo;
    }
    rep.delta_admissible = delta;

    // Taylor budget at the reported (tau, delta), all on one sample set
    const auto pts = disc_samples(s0, delta * r);
    const auto Lcoeffs = eval_L_taylor(desc, s0 + cplx{0.0, rep.tau}, N - 1, cfg);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, sup_dev = 0.0;
    for (const auto& s : pts) {
        const cplx dz = s - s0;
        const cplx gv = poly_eval(g_taylor, dz, g_taylor.size());
        const cplx gN = poly_eval(g_taylor, dz, static_cast<std::size_t>(N));
        cplx tN{0.0};
        for (int k = N - 1; k >= 0; --k) tN = tN * dz + Lcoeffs[k];
        const cplx Lv = eval_L(desc, s + cplx{0.0, rep.tau}, 0, cfg);
        s1 = std::max(s1, std::abs(gv - gN));
        s2 = std::max(s2, std::abs(tN - gN));
        s3 = std::max(s3, std::abs(Lv - tN));
        sup_dev = std::max(sup_dev, std::abs(Lv - gv));
    }
    rep.sigma1 = s1;
    rep.sigma2 = s2;
    rep.sigma3 = s3;
    rep.sampled_sup = sup_dev;
    rep.sigma1_bound = mg * std::pow(delta, N) / (1.0 - delta);
    rep.sigma3_bound = mtau * std::pow(delta, N) / (1.0 - delta);
    return rep;
}

std::string DiscReport::to_json() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"schema\": 1,\n";
    os << "  \"sigma0\": " << fmt(sigma0) << ",\n";
    os << "  \"t0\": " << fmt(t0) << ",\n";
    os << "  \"r\": " << fmt(r) << ",\n";
    os << "  \"eps\": " << fmt(eps) << ",\n";
    os << "  \"delta0\": " << fmt(delta0) << ",\n";
    os << "  \"N\": " << N << ",\n";
    os << "  \"M_g\": " << fmt(M_g) << ",\n";
    os << "  \"targets\": " << json_complex_list(targets) << ",\n";
    os << "  \"tau\": " << fmt(tau) << ",\n";
    os << "  \"delta_admissible\": " << fmt(delta_admissible) << ",\n";
    os << "  \"M_tau\": " << fmt(M_tau) << ",\n";
    os << "  \"sampled_sup\": " << fmt(sampled_sup) << ",\n";
    os << "  \"sigma1\": " << fmt(sigma1) << ",\n";
    os << "  \"sigma2\": " << fmt(sigma2) << ",\n";
    os << "  \"sigma3\": " << fmt(sigma3) << ",\n";
    os << "  \"sigma1_bound\": " << fmt(sigma1_bound) << ",\n";
    os << "  \"sigma3_bound\": " << fmt(sigma3_bound) << "\n";
    os << "}";
    return os.str();
}

namespace {

template <bool Parallel>
std::vector<double> phase_grid_impl(const std::vector<double>& radii,
                                    const std::vector<cplx>& targets, int K) {
    if (radii.size() != 3) throw std::invalid_argument("phase grid kernel expects three radii");
    std::vector<cplx> unit(K);
    for (int j = 0; j < K; ++j) unit[j] = std::polar(1.0, -2.0 * M_PI * j / K);
    const std::size_t nt = targets.size();
    std::vector<double> best(nt, 1e300);
#pragma omp parallel if (Parallel)
    {
        std::vector<double> local(nt, 1e300);
#ifdef _OPENMP
#pragma omp for schedule(dynamic) nowait
#endif
        for (int i = 0; i < K; ++i) {
            const cplx v1 = radii[0] * unit[i];
            for (int j = 0; j < K; ++j) {
                const cplx v12 = v1 + radii[1] * unit[j];
                for (int k = 0; k < K; ++k) {
                    const cplx v = v12 + radii[2] * unit[k];
                    for (std::size_t m = 0; m < nt; ++m) {
                        const double dx = v.real() - targets[m].real();
                        const double dy = v.imag() - targets[m].imag();
                        const double d2 = dx * dx + dy * dy;
                        if (d2 < local[m]) local[m] = d2;
                    }
                }
            }
        }
#pragma omp critical
        for (std::size_t m = 0; m < nt; ++m) best[m] = std::min(best[m], local[m]);
    }
    for (auto& b : best) b = std::sqrt(b);
    return best;
}

}  // namespace

std::vector<double> phase_grid_min_distances_serial(const std::vector<double>& radii,
                                                    const std::vector<cplx>& targets, int K) {
    return phase_grid_impl<false>(radii, targets, K);
}

std::vector<double> phase_grid_min_distances_parallel(const std::vector<double>& radii,
                                                      const std::vector<cplx>& targets, int K) {
    return phase_grid_impl<true>(radii, targets, K);
}

}  // namespace luniv
