#include "luniv/lfunc.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "luniv/sieve.hpp"

namespace luniv {

double zeta_density_exponent(double sigma) {
    return (8.0 / 3.0) * (sigma - 0.5) / (3.0 - 2.0 * sigma);
}

bool prime_power(std::uint64_t n, std::uint64_t& p, unsigned& l) {
    if (n < 2) return false;
    std::uint64_t m = n;
    std::uint64_t d = 2;
    while (d * d <= m) {
        if (m % d == 0) {
            p = d;
            l = 0;
            while (m % d == 0) {
                m /= d;
                ++l;
            }
            return m == 1;
        }
        ++d;
    }
    p = m;
    l = 1;
    return true;
}

LFunctionDescriptor builtin_zeta() {
    LFunctionDescriptor d;
    d.name = "zeta";
    d.dirichlet_coeff = [](std::uint64_t) { return cplx{1.0, 0.0}; };
    d.euler_log_coeff = [](std::uint64_t, unsigned l) { return cplx{1.0 / l, 0.0}; };
    d.kappa = 1.0;
    d.sigma_L = 0.5;
    d.delta_L = zeta_density_exponent;
    d.E_L = 5.0 / 12.0;
    d.D = 22.0;
    d.b_bound_C = 1.0;
    d.b_bound_theta = 0.0;
    d.degree = 1.0;
    d.gamma_factor = {GammaFactor{0.5, cplx{0.0, 0.0}}};
    d.R = 1.0 / std::sqrt(M_PI);
    d.omega = cplx{1.0, 0.0};
    d.m_L = 1;
    return d;
}

LFunctionDescriptor builtin_dirichlet(std::uint64_t q, const std::vector<cplx>& table) {
    if (q < 1 || table.size() != q)
        throw std::invalid_argument("builtin_dirichlet: table must list chi(1..q)");
    auto chi = [q, table](std::uint64_t n) -> cplx {
        std::uint64_t r = n % q;
        if (r == 0) r = q;
        return table[r - 1];
    };
    const double tol = 1e-12;
    if (std::abs(chi(1) - cplx{1.0}) > tol)
        throw std::invalid_argument("builtin_dirichlet: chi(1) must be 1");
    for (std::uint64_t a = 1; a <= q; ++a) {
        const bool coprime = std::gcd(a, q) == 1;
        if (coprime == (std::abs(chi(a)) < tol))
            throw std::invalid_argument("builtin_dirichlet: chi(a) = 0 must match gcd(a,q) > 1");
        for (std::uint64_t b = a; b <= q; ++b) {
            if (std::abs(chi(a * b) - chi(a) * chi(b)) > tol)
                throw std::invalid_argument("builtin_dirichlet: table is not completely multiplicative");
        }
    }

    LFunctionDescriptor d;
    d.name = "dirichlet";
    d.modulus = q;
    d.character = table;
    d.dirichlet_coeff = chi;
    d.euler_log_coeff = [chi](std::uint64_t p, unsigned l) {
        const cplx base = chi(p);
        cplx pw{1.0, 0.0};
        for (unsigned i = 0; i < l; ++i) pw *= base;
        return pw / static_cast<double>(l);
    };
    d.kappa = 1.0;
    // (C2)/(C3) values are not pinned down for L(s,chi); mirror zeta.
    d.sigma_L = 0.5;
    d.delta_L = zeta_density_exponent;
    d.E_L = 5.0 / 12.0;
    d.D = 22.0;
    d.b_bound_C = 1.0;
    d.b_bound_theta = 0.0;
    d.degree = 1.0;
    const bool odd = q > 1 && std::abs(chi(q - 1) + cplx{1.0}) < tol;
    d.gamma_factor = {GammaFactor{0.5, cplx{odd ? 0.5 : 0.0, 0.0}}};
    d.R = std::sqrt(static_cast<double>(q) / M_PI);
    d.omega = cplx{1.0, 0.0};
    d.m_L = (q == 1) ? 1 : 0;
    return d;
}

cplx lambda_weight(const LFunctionDescriptor& desc, double x, std::uint64_t n) {
    if (x <= 1.0) throw std::invalid_argument("lambda_weight: x must exceed 1");
    if (n < 1) throw std::invalid_argument("lambda_weight: n must be positive");
    const double nn = static_cast<double>(n);
    if (nn > x * x) return cplx{0.0};
    std::uint64_t p;
    unsigned l;
    if (!prime_power(n, p, l)) return cplx{0.0};
    const cplx lam = desc.euler_log_coeff(p, l) * std::log(nn);
    if (nn <= x) return lam;
    return lam * (std::log(x * x / nn) / std::log(x));
}

std::string LFunctionDescriptor::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["kappa"] = kappa;
    j["sigma_L"] = sigma_L;
    j["E_L"] = E_L;
    j["D"] = D;
    j["degree"] = degree;
    j["R"] = R;
    j["omega"] = {omega.real(), omega.imag()};
    j["m_L"] = m_L;
    j["b_bound_C"] = b_bound_C;
    j["b_bound_theta"] = b_bound_theta;
    nlohmann::json gf = nlohmann::json::array();
    for (const auto& g : gamma_factor)
        gf.push_back({g.lambda, g.mu.real(), g.mu.imag()});
    j["gamma_factor"] = gf;
    if (modulus > 0) {
        j["modulus"] = modulus;
        nlohmann::json tab = nlohmann::json::array();
        for (const auto& c : character) tab.push_back({c.real(), c.imag()});
        j["character"] = tab;
    }
    return j.dump(2);
}

LFunctionDescriptor LFunctionDescriptor::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string name = j.at("name").get<std::string>();
    LFunctionDescriptor d;
    if (name == "zeta") {
        d = builtin_zeta();
    } else if (name == "dirichlet") {
        std::vector<cplx> table;
        for (const auto& e : j.at("character"))
            table.emplace_back(e[0].get<double>(), e[1].get<double>());
        d = builtin_dirichlet(j.at("modulus").get<std::uint64_t>(), table);
    } else {
        throw std::invalid_argument("LFunctionDescriptor: unknown name " + name);
    }
    d.kappa = j.value("kappa", d.kappa);
    d.sigma_L = j.value("sigma_L", d.sigma_L);
    d.E_L = j.value("E_L", d.E_L);
    d.D = j.value("D", d.D);
    return d;
}

}  // namespace luniv
