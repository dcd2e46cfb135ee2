#include "luniv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace luniv {

void check_sigma0_admissible(const LFunctionDescriptor& desc, double sigma0) {
    const double lo = std::max(desc.sigma_L, 1.0 - 2.0 * desc.E_L);
    if (!(sigma0 > lo)) {
        std::ostringstream os;
        os << "sigma0 = " << sigma0 << " violates sigma0 > max{sigma_L, 1-2E_L} = " << lo;
        throw std::domain_error(os.str());
    }
    if (!(sigma0 < 1.0)) {
        std::ostringstream os;
        os << "sigma0 = " << sigma0 << " violates sigma0 < 1";
        throw std::domain_error(os.str());
    }
}

EffectiveConstants compute_constants(const LFunctionDescriptor& desc, double sigma0) {
    check_sigma0_admissible(desc, sigma0);
    EffectiveConstants k;
    k.sigma0 = sigma0;
    k.E_L = desc.E_L;
    k.A = 0.5 * (std::max(sigma0, 1.0 - desc.E_L) + (1.0 + sigma0) / 2.0);
    k.eta = 0.5 * std::min({(1.0 - desc.E_L) / 2.0, (k.A - sigma0) / 2.0,
                            1.0 + sigma0 - 2.0 * k.A});
    k.d1_1 = sigma0 / (sigma0 - k.eta) * (k.A - sigma0 - 2.0 * k.eta);
    k.B_exp = std::min(sigma0 / (sigma0 - k.eta) * (1.0 + sigma0 - 2.0 * k.A - k.eta),
                       sigma0 - k.eta);
    k.d1 = (2.0 * sigma0 / (sigma0 - k.eta)) *
           std::max(1.0 / k.d1_1, 1.0 / std::min(k.B_exp, sigma0 - 0.5));
    k.d = std::max(k.d1, 8.0 / (sigma0 - 0.5));
    k.mu = std::sqrt(desc.kappa / 8.0);
    k.rho = desc.kappa / 4.0;
    const double mid = 0.5 * (desc.sigma_L + sigma0);
    const double delta_mid = desc.delta_L ? desc.delta_L(mid) : zeta_density_exponent(mid);
    k.h_exponent = delta_mid / 2.0;
    k.x_exponent = std::min(1.0 / 200.0, delta_mid / 10.0);
    return k;
}

namespace {

std::string fmt15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

std::string EffectiveConstants::to_json() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"sigma0\": " << fmt15(sigma0) << ",\n";
    os << "  \"E_L\": " << fmt15(E_L) << ",\n";
    os << "  \"A\": " << fmt15(A) << ",\n";
    os << "  \"eta\": " << fmt15(eta) << ",\n";
    os << "  \"d1_1\": " << fmt15(d1_1) << ",\n";
    os << "  \"B_exp\": " << fmt15(B_exp) << ",\n";
    os << "  \"d1\": " << fmt15(d1) << ",\n";
    os << "  \"d\": " << fmt15(d) << ",\n";
    os << "  \"mu\": " << fmt15(mu) << ",\n";
    os << "  \"rho\": " << fmt15(rho) << ",\n";
    os << "  \"h_exponent\": " << fmt15(h_exponent) << ",\n";
    os << "  \"x_exponent\": " << fmt15(x_exponent) << "\n";
    os << "}";
    return os.str();
}

double threshold_T_main(const EffectiveConstants& consts, const std::vector<cplx>& c,
                        double eps, double C1_stand_in) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("threshold_T_main: eps must lie in (0,1)");
    return C1_stand_in * std::pow(l1_norm(c) + 1.0 / eps, consts.d);
}

double B_quantity(const std::vector<cplx>& c, double eps, int branch) {
    if (c.empty() || c[0] == cplx{0.0})
        throw std::domain_error("B_quantity: c_0 must be nonzero");
    if (!(eps > 0.0)) throw std::domain_error("B_quantity: eps must be positive");
    const std::size_t N = c.size();
    const cplx logc0 = std::log(c[0]) + cplx{0.0, 2.0 * M_PI * branch};
    const double power = static_cast<double>((N - 1) * (N - 1));
    return std::abs(logc0) +
           std::pow(l1_norm(c) / std::abs(c[0]), power) * (1.0 + std::abs(c[0])) / eps;
}

double A_quantity_voronin(const std::vector<cplx>& b, double eps, int branch) {
    if (b.empty()) throw std::domain_error("A_quantity_voronin: b must be nonempty");
    if (!(std::abs(b[0]) > eps && eps > 0.0))
        throw std::domain_error("A_quantity_voronin: requires |b_0| > eps > 0");
    const std::size_t N = b.size();
    const cplx logb0 = std::log(b[0]) + cplx{0.0, 2.0 * M_PI * branch};
    return std::abs(logb0) +
           std::pow(l1_norm(b) / eps, static_cast<double>(N * N));
}

int gl_N_choice(double M_g, double delta0, double eps) {
    if (M_g < 0.0) throw std::domain_error("gl_N_choice: M_g must be nonnegative");
    if (!(delta0 > 0.0 && delta0 < 1.0))
        throw std::domain_error("gl_N_choice: delta0 must lie in (0,1)");
    if (!(eps > 0.0)) throw std::domain_error("gl_N_choice: eps must be positive");
    int N = 1;
    double pw = delta0;
    while (M_g * pw / (1.0 - delta0) >= eps / 3.0) {
        ++N;
        pw *= delta0;
        if (N > 10000) throw std::runtime_error("gl_N_choice: no admissible N below 10^4");
    }
    return N;
}

}  // namespace luniv
