// Batch verification harness: effective constants, phase-assignment
// construction, t-scans and disc experiments, with machine-readable reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "luniv/bounds.hpp"
#include "luniv/errors.hpp"
#include "luniv/eval.hpp"
#include "luniv/lfunc.hpp"
#include "luniv/mollifier.hpp"
#include "luniv/phases.hpp"
#include "luniv/scan.hpp"

namespace {

using luniv::cplx;

// complex literal: "a", "bi", "a+bi", "a-bi", "i", "-i"
cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    double re = 0.0, im = 0.0;
    std::size_t pos = 0;
    auto read_num = [&](double& out) {
        if (s[pos] == 'i' || (pos + 1 < s.size() && (s[pos] == '+' || s[pos] == '-') &&
                              s[pos + 1] == 'i')) {
            out = (s[pos] == '-') ? -1.0 : 1.0;
            pos += (s[pos] == 'i') ? 0 : 1;
            return;
        }
        std::size_t used = 0;
        out = std::stod(s.substr(pos), &used);
        pos += used;
    };
    read_num(re);
    if (pos == s.size()) return {re, 0.0};
    if (s[pos] == 'i' && pos + 1 == s.size()) return {0.0, re};
    read_num(im);
    if (pos >= s.size() || s[pos] != 'i' || pos + 1 != s.size())
        throw std::invalid_argument("bad complex literal: " + raw);
    return {re, im};
}

std::vector<cplx> parse_complex_list(const std::string& raw) {
    std::vector<cplx> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
    return out;
}

luniv::LFunctionDescriptor parse_descriptor(const std::string& raw) {
    if (raw == "zeta") return luniv::builtin_zeta();
    if (raw.rfind("dirichlet:", 0) == 0) {
        const auto rest = raw.substr(10);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("descriptor: expected dirichlet:<q>:<table>");
        const auto q = std::stoull(rest.substr(0, colon));
        return luniv::builtin_dirichlet(q, parse_complex_list(rest.substr(colon + 1)));
    }
    throw std::invalid_argument("descriptor: expected zeta or dirichlet:<q>:<table>");
}

void parse_trange(const std::string& raw, double& t0, double& t1, double& step) {
    std::stringstream ss(raw);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
        throw std::invalid_argument("trange: expected t0:t1:step");
    t0 = std::stod(a);
    t1 = std::stod(b);
    step = std::stod(c);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open output file " + path);
    os << text;
}

int cmd_constants(const luniv::LFunctionDescriptor& desc, double sigma0,
                  const std::vector<cplx>& c, double eps, double c1_standin,
                  const std::string& out) {
    const auto k = luniv::compute_constants(desc, sigma0);
    std::ostringstream os;
    os << "{\n  \"schema\": 1,\n  \"descriptor\": \"" << desc.name << "\",\n";
    os << "  \"constants\": " << k.to_json() << ",\n";
    os << "  \"loglog_T\": " << fmt(luniv::threshold_T_main(k, c, eps, c1_standin)) << ",\n";
    os << "  \"C1_stand_in\": " << fmt(c1_standin) << ",\n";
    if (!c.empty() && c[0] != cplx{0.0})
        os << "  \"B_quantity\": " << fmt(luniv::B_quantity(c, eps)) << "\n";
    else
        os << "  \"B_quantity\": null\n";
    os << "}\n";
    if (!out.empty())
        write_file(out, os.str());
    else
        std::cout << os.str();
    return 0;
}

int cmd_construct(const luniv::LFunctionDescriptor& desc, double sigma0, int N,
                  const std::vector<cplx>& c, double eps, const std::string& params_path,
                  const std::string& out) {
    luniv::PipelineMode mode = luniv::PipelineMode::practical;
    std::optional<luniv::PracticalGeometry> geo;
    double c1_standin = 1.0;
    {
        std::ifstream is(params_path);
        if (!is) throw std::invalid_argument("cannot read params file " + params_path);
        const auto j = nlohmann::json::parse(is);
        const std::string m = j.value("mode", "practical");
        if (m == "rigorous") {
            mode = luniv::PipelineMode::rigorous;
            c1_standin = j.value("C1_stand_in", 1.0);
        } else {
            luniv::PracticalGeometry g;
            g.X = j.at("X").get<double>();
            g.Y = j.at("Y").get<double>();
            g.H = j.at("H").get<double>();
            g.Q = j.at("Q").get<double>();
            geo = g;
        }
    }
    const auto params =
        luniv::derive_pipeline_params(desc, sigma0, N, eps, c, mode, geo, c1_standin);
    const auto res = luniv::assemble_theta_star(desc, params, c);

    double worst = 0.0;
    for (double r : res.residuals) worst = std::max(worst, r);
    const bool pass = worst < eps / 3.0;

    std::ostringstream os;
    os << "{\n  \"schema\": 1,\n  \"descriptor\": \"" << desc.name << "\",\n";
    os << "  \"sigma0\": " << fmt(sigma0) << ",\n  \"N\": " << N << ",\n";
    os << "  \"eps\": " << fmt(eps) << ",\n";
    os << "  \"params\": {\"X\": " << fmt(params.X) << ", \"Y\": " << fmt(params.Y)
       << ", \"H\": " << fmt(params.H) << ", \"Q\": " << fmt(params.Q) << "},\n";
    os << "  \"gamma\": [";
    for (std::size_t k = 0; k < res.gamma.size(); ++k) {
        if (k) os << ", ";
        os << "[" << fmt(res.gamma[k].real()) << ", " << fmt(res.gamma[k].imag()) << "]";
    }
    os << "],\n  \"gamma_tail_bound\": " << fmt(res.gamma_tail_bound) << ",\n";
    os << "  \"z\": [";
    for (std::size_t k = 0; k < res.z.size(); ++k) {
        if (k) os << ", ";
        os << "[" << fmt(res.z[k].real()) << ", " << fmt(res.z[k].imag()) << "]";
    }
    os << "],\n  \"blocks\": [";
    for (std::size_t k = 0; k < res.blocks.size(); ++k) {
        const auto& b = res.blocks[k];
        if (k) os << ", ";
        os << "{\"anchor\": " << b.anchor << ", \"interval_primes\": " << b.interval_primes
           << ", \"radius_sum\": " << fmt(b.radius_sum)
           << ", \"sur_margin\": " << fmt(b.sur_margin) << "}";
    }
    os << "],\n";
    os << "  \"cond_Y1\": " << (res.cond_Y1 ? "true" : "false") << ",\n";
    os << "  \"cond_Y2\": " << (res.cond_Y2 ? "true" : "false") << ",\n";
    os << "  \"refinement_iterations\": " << res.refinement_iterations << ",\n";
    os << "  \"residuals\": [";
    for (std::size_t k = 0; k < res.residuals.size(); ++k) {
        if (k) os << ", ";
        os << fmt(res.residuals[k]);
    }
    os << "],\n  \"pass\": " << (pass ? "true" : "false") << "\n}\n";
    std::cout << os.str();
    if (!out.empty()) write_file(out, res.theta_star.to_json());
    return 0;
}

int cmd_scan(const luniv::LFunctionDescriptor& desc, double sigma0, const std::vector<cplx>& c,
             double eps, const std::string& trange, int workers, const std::string& out) {
    double t0, t1, step;
    parse_trange(trange, t0, t1, step);
    const auto rep = luniv::scan_targets(desc, sigma0, c, eps, t0, t1, step, workers);
    std::fprintf(stderr, "wall_time_s: %.3f\n", rep.wall_time_s);
    if (!out.empty()) {
        write_file(out, rep.to_json() + "\n");
        std::string csv_path = out;
        const auto dot = csv_path.rfind('.');
        csv_path = (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".csv";
        write_file(csv_path, rep.windows_csv());
    } else {
        std::cout << rep.to_json() << "\n";
    }
    return 0;
}

int cmd_disc(const luniv::LFunctionDescriptor& desc, double sigma0, double t0, double r,
             const std::vector<cplx>& g_taylor, double eps, double delta0,
             const std::string& trange, int workers, const std::string& out) {
    double lo, hi, step;
    parse_trange(trange, lo, hi, step);
    const auto rep =
        luniv::disc_experiment(desc, sigma0, t0, r, g_taylor, eps, delta0, lo, hi, step, workers);
    if (!out.empty())
        write_file(out, rep.to_json() + "\n");
    else
        std::cout << rep.to_json() << "\n";
    return 0;
}

int cmd_mollifier_check(double Q, double M, const std::string& out) {
    const auto spec = luniv::MollifierSpec::make(Q, M);
    std::mt19937_64 rng(20240229);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_alpha0 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto a0 = luniv::fourier_alpha(spec, 0, u(rng));
        worst_alpha0 = std::max(worst_alpha0, std::abs(a0 - cplx{1.0, 0.0}));
    }
    std::ostringstream os;
    os << "{\n  \"schema\": 1,\n";
    os << "  \"Q\": " << fmt(Q) << ",\n  \"M\": " << fmt(M) << ",\n";
    os << "  \"delta\": " << fmt(spec.delta) << ",\n";
    os << "  \"C_phi\": " << fmt(spec.C_phi) << ",\n";
    os << "  \"C0\": " << fmt(spec.C0) << ",\n";
    os << "  \"C1\": " << fmt(spec.C1) << ",\n";
    os << "  \"alpha0_max_error\": " << fmt(worst_alpha0) << ",\n";
    os << "  \"alpha0_ok\": " << (worst_alpha0 <= 1e-10 ? "true" : "false") << ",\n";
    os << "  \"truncation_error_bound\": " << fmt(luniv::truncation_error_bound(spec)) << ",\n";
    os << "  \"beta_full_sum_bound\": " << fmt(luniv::beta_full_sum_bound(spec)) << "\n}\n";
    if (!out.empty())
        write_file(out, os.str());
    else
        std::cout << os.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"effective universality toolkit for Selberg-class L-functions"};
    app.require_subcommand(1);

    std::string descriptor = "zeta", target, trange, params_path, out, g_taylor_raw;
    double sigma0 = 0.75, eps = 0.5, c1_standin = 1.0, t0 = 0.0, r = 0.05, delta0 = 0.5;
    double Q = 3.0, M = 200.0;
    int order = 1, workers = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--descriptor", descriptor, "zeta or dirichlet:<q>:<table>");
        sub->add_option("--sigma0", sigma0, "real part of the target line");
        sub->add_option("--order", order, "number of derivative targets N");
        sub->add_option("--target", target, "comma-separated complex literals a+bi");
        sub->add_option("--eps", eps, "approximation tolerance");
        sub->add_option("--out", out, "output file");
    };

    auto* constants = app.add_subcommand("constants", "effective constants and thresholds");
    add_common(constants);
    constants->add_option("--c1-standin", c1_standin, "stand-in for the threshold constant");

    auto* construct = app.add_subcommand("construct", "assemble a phase vector hitting targets");
    add_common(construct);
    construct->add_option("--params", params_path, "pipeline parameter file (JSON)")->required();

    auto* scan = app.add_subcommand("scan", "grid scan for t with log-derivative targets");
    add_common(scan);
    scan->add_option("--trange", trange, "t0:t1:step")->required();
    scan->add_option("--workers", workers, "worker threads (0 = all)");

    auto* disc = app.add_subcommand("disc", "disc approximation experiment");
    disc->add_option("--descriptor", descriptor, "zeta or dirichlet:<q>:<table>");
    disc->add_option("--sigma0", sigma0, "center real part");
    disc->add_option("--t0", t0, "center imaginary part");
    disc->add_option("--r", r, "disc radius");
    disc->add_option("--g-taylor", g_taylor_raw, "Taylor coefficients of g at the center")
        ->required();
    disc->add_option("--eps", eps, "target sup-deviation");
    disc->add_option("--delta0", delta0, "inner-disc shrink factor in (0,1)");
    disc->add_option("--trange", trange, "tau range lo:hi:step")->required();
    disc->add_option("--workers", workers, "worker threads (0 = all)");
    disc->add_option("--out", out, "output file");

    auto* mol = app.add_subcommand("mollifier-check", "mollifier estimates and fitted constants");
    mol->add_option("--Q", Q, "prime cutoff (> 2)");
    mol->add_option("--M", M, "Fourier truncation (> 2)");
    mol->add_option("--out", out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        const auto desc = parse_descriptor(descriptor);
        const auto c = target.empty() ? std::vector<cplx>{} : parse_complex_list(target);
        if (constants->parsed()) {
            auto cc = c;
            if (cc.empty()) cc.assign(static_cast<std::size_t>(order), cplx{0.0});
            return cmd_constants(desc, sigma0, cc, eps, c1_standin, out);
        }
        if (construct->parsed()) {
            auto cc = c;
            if (static_cast<int>(cc.size()) != order)
                throw std::invalid_argument("construct: --target must list N = --order values");
            return cmd_construct(desc, sigma0, order, cc, eps, params_path, out);
        }
        if (scan->parsed()) {
            auto cc = c;
            if (static_cast<int>(cc.size()) != order)
                throw std::invalid_argument("scan: --target must list N = --order values");
            return cmd_scan(desc, sigma0, cc, eps, trange, workers, out);
        }
        if (disc->parsed())
            return cmd_disc(desc, sigma0, t0, r, parse_complex_list(g_taylor_raw), eps, delta0,
                            trange, workers, out);
        if (mol->parsed()) return cmd_mollifier_check(Q, M, out);
    } catch (const luniv::pipeline_error& e) {
        std::fprintf(stderr, "pipeline failure at step [%s]: %s\n", e.step.c_str(), e.what());
        return 3;
    } catch (const luniv::precision_error& e) {
        std::fprintf(stderr, "precision failure: %s\n", e.what());
        return 4;
    } catch (const luniv::branch_error& e) {
        std::fprintf(stderr, "branch failure: %s\n", e.what());
        return 4;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
