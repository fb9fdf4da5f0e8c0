// Command-line front end: parse a JSON configuration, dispatch the spectral
// computations, emit CSV datasets and verification reports.
//
// Subcommands: moments | branch | landau | green | evolve | verify
// Exit codes: 0 success, 1 validation failure, 2 numerical failure.

#include "CLI11.hpp"
#include "json.hpp"

#include "vpspec/csv.hpp"
#include "vpspec/dispersion.hpp"
#include "vpspec/equilibrium.hpp"
#include "vpspec/errors.hpp"
#include "vpspec/field.hpp"
#include "vpspec/green.hpp"
#include "vpspec/spectral.hpp"
#include "vpspec/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using json = nlohmann::json;
using namespace vpspec;

namespace {

struct RunConfig {
    EquilibriumProfile profile = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    std::string out = "out.csv";
    double kmin = 0.0, kmax = 0.0; // 0 = command default
    int knum = -1;                 // -1 = command default
    double tmax = 0.0;
    int tnum = 0;
    double tol = 1.0; // scales verification thresholds
    InitialData data;
    double observation_radius = 1.0;
    bool synthesis = false;
};

EquilibriumProfile profile_from_json(const json& j) {
    std::string fam = j.value("family", "CompactPolynomial");
    double A = j.value("amplitude", 1.0);
    if (fam == "Gaussian")
        return EquilibriumProfile::gaussian(A, j.value("beta", 1.0));
    if (fam == "CompactPolynomial")
        return EquilibriumProfile::compact_poly(A, j.value("e_max", 1.0),
                                                j.value("vanishing_order", 4));
    if (fam == "PowerLaw")
        return EquilibriumProfile::power_law(A, j.value("decay_order", 4));
    throw std::runtime_error("unknown profile family: " + fam);
}

EquilibriumProfile builtin_profile(const std::string& name) {
    if (name == "compact") return EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    if (name == "gaussian")
        return EquilibriumProfile::gaussian(std::pow(2.0 * M_PI, -1.5), 1.0);
    if (name == "powerlaw") return EquilibriumProfile::power_law(1.0, 5);
    throw std::runtime_error("unknown built-in profile: " + name);
}

RunConfig load_config(const std::string& path, const std::string& profile_override,
                      std::optional<double> kmin, std::optional<double> kmax,
                      std::optional<int> knum, std::optional<double> tmax,
                      std::optional<int> tnum, std::optional<double> tol,
                      const std::string& out_override) {
    RunConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot read config file: " + path);
        json j = json::parse(in);
        if (j.contains("profile")) cfg.profile = profile_from_json(j["profile"]);
        cfg.out = j.value("out", cfg.out);
        cfg.kmin = j.value("kmin", cfg.kmin);
        cfg.kmax = j.value("kmax", cfg.kmax);
        cfg.knum = j.value("knum", cfg.knum);
        cfg.tmax = j.value("tmax", cfg.tmax);
        cfg.tnum = j.value("tnum", cfg.tnum);
        cfg.tol = j.value("tol", cfg.tol);
        if (j.contains("data")) {
            const json& d = j["data"];
            cfg.data.spatial.amplitude = d.value("amplitude", 1.0);
            cfg.data.spatial.sigma = d.value("sigma", 1.0);
            cfg.data.spatial.zero_average = d.value("zero_average", false);
            if (d.contains("velocity")) cfg.data.velocity = profile_from_json(d["velocity"]);
            cfg.observation_radius = d.value("observation_radius", 1.0);
        }
        cfg.synthesis = j.value("synthesis", false);
    }
    // flags override file values
    if (!profile_override.empty()) cfg.profile = builtin_profile(profile_override);
    if (kmin) cfg.kmin = *kmin;
    if (kmax) cfg.kmax = *kmax;
    if (knum) cfg.knum = *knum;
    if (tmax) cfg.tmax = *tmax;
    if (tnum) cfg.tnum = *tnum;
    if (tol) cfg.tol = *tol;
    if (!out_override.empty()) cfg.out = out_override;
    return cfg;
}

int require_valid(const EquilibriumProfile& p) {
    ValidationReport r = validate_profile(p);
    if (!r.pass) {
        std::cerr << "profile validation failed:\n";
        for (const auto& f : r.failures) std::cerr << "  - " << f << "\n";
        return 1;
    }
    return 0;
}

int cmd_moments(const RunConfig& cfg) {
    if (int rc = require_valid(cfg.profile)) return rc;
    MomentTable t = build_moment_table(cfg.profile, 2);
    std::printf("profile: %s\n", cfg.profile.name().c_str());
    for (std::size_t j = 0; j < t.tau_sq.size(); ++j)
        std::printf("tau_%zu^2   = %.12f\n", j, t.tau_sq[j]);
    for (std::size_t j = 0; j < t.kappa_sq.size(); ++j)
        std::printf("kappa_%zu^2 = %.12f\n", j, t.kappa_sq[j]);
    std::printf("kappa_0   = %.12f\n", t.kappa0);
    if (cfg.profile.compact()) {
        double U = cfg.profile.upsilon();
        std::printf("endpoint residual |kappa0^2 U^2 - (tau0^2 + kappa1^2)| = %.6f\n",
                    t.endpoint_identity_residual);
        std::printf("tau*(kappa0) used downstream: kappa0 U = %.12f\n", t.kappa0 * U);
    }
    return 0;
}

int cmd_branch(const RunConfig& cfg) {
    if (int rc = require_valid(cfg.profile)) return rc;
    if (!cfg.profile.compact()) {
        std::cerr << "branch requires a compact-support profile (kappa0 > 0)\n";
        return 1;
    }
    double kappa0 = survival_threshold(cfg.profile);
    int n = cfg.knum == -1 ? 100 : cfg.knum;
    if (n < 1) {
        std::cerr << "empty k grid\n";
        return 1;
    }
    double klo = cfg.kmin > 0 ? cfg.kmin : kappa0 / n;
    double khi = cfg.kmax > 0 ? std::min(cfg.kmax, kappa0) : kappa0;
    std::vector<double> ks;
    for (int i = 0; i < n; ++i)
        ks.push_back(klo + (khi - klo) * (n == 1 ? 0.0 : double(i) / (n - 1)));
    auto pts = branch_scan(cfg.profile, ks);

    CsvWriter csv(cfg.out);
    csv.header({"k", "tau_star", "dtau", "d2tau", "nu_star", "re_lambda", "im_lambda",
                "residual"});
    double min_d2 = 1e300, max_d2 = -1e300;
    for (const auto& b : pts) {
        csv.row({b.k, b.tau_star, b.dtau, b.d2tau, b.phase_velocity, 0.0, b.tau_star,
                 b.x_residual});
        min_d2 = std::min(min_d2, b.d2tau);
        max_d2 = std::max(max_d2, b.d2tau);
    }
    csv.comment("convexity certificate: min tau*'' = " + std::to_string(min_d2) +
                ", max tau*'' = " + std::to_string(max_d2));
    std::printf("branch scan: %zu points, tau*'' in [%g, %g], nu*(kmax) = %.9f\n",
                pts.size(), min_d2, max_d2, pts.back().phase_velocity);
    return 0;
}

int cmd_landau(const RunConfig& cfg) {
    if (int rc = require_valid(cfg.profile)) return rc;
    double kappa0 = survival_threshold(cfg.profile);
    int n = cfg.knum <= 0 ? 20 : cfg.knum;
    double dk_lo = cfg.kmin > 0 ? cfg.kmin : 1e-3;
    double dk_hi = cfg.kmax > 0 ? cfg.kmax : 5e-2;

    CsvWriter csv(cfg.out);
    csv.header({"k", "re_lambda", "im_lambda", "predicted_rate", "ratio", "residual",
                "flag"});
    Complex seed;
    const double U = cfg.profile.upsilon();
    bool ok_any = false;
    for (int i = 0; i < n; ++i) {
        double dk = dk_lo * std::pow(dk_hi / dk_lo, n == 1 ? 0.0 : double(i) / (n - 1));
        double k = cfg.profile.compact() ? kappa0 + dk : dk;
        try {
            if (i == 0 || std::abs(seed) == 0.0) {
                if (cfg.profile.compact()) {
                    double k1sq = moment_kappa(cfg.profile, 1);
                    double nu = U - 2.0 * kappa0 / k1sq * dk;
                    seed = Complex(0, nu * k) - Complex(1e-9, 0);
                } else {
                    double t0 = std::sqrt(moment_tau(cfg.profile, 0));
                    seed = Complex(0, t0);
                }
            }
            DampedRoot r = damped_root(cfg.profile, k, seed);
            seed = r.lambda;
            double ratio = r.predicted_rate != 0.0 ? r.lambda.real() / r.predicted_rate : 0.0;
            csv.row({k, r.lambda.real(), r.lambda.imag(), r.predicted_rate, ratio,
                     r.newton_residual},
                    "ok");
            ok_any = true;
        } catch (const std::exception& e) {
            csv.row({k, 0.0, 0.0, 0.0, 0.0, 0.0}, std::string("fail:") + e.what());
        }
    }
    return ok_any ? 0 : 2;
}

int cmd_green(const RunConfig& cfg) {
    if (int rc = require_valid(cfg.profile)) return rc;
    GreenContext ctx(cfg.profile);
    double kappa0 = ctx.kappa0();
    std::vector<double> ks;
    int n = cfg.knum <= 0 ? 3 : cfg.knum;
    double klo = cfg.kmin > 0 ? cfg.kmin : (cfg.profile.compact() ? kappa0 / 8 : 0.25);
    double khi = cfg.kmax > 0 ? cfg.kmax : (cfg.profile.compact() ? kappa0 / 2 : 1.0);
    for (int i = 0; i < n; ++i)
        ks.push_back(klo * std::pow(khi / klo, n == 1 ? 0.0 : double(i) / (n - 1)));

    double T = cfg.tmax > 0 ? cfg.tmax : 50.0;
    int tn = cfg.tnum > 0 ? cfg.tnum : 200;

    CsvWriter csv(cfg.out);
    csv.header({"k", "t", "re_G_osc", "im_G_osc", "re_G_r", "im_G_r", "rho_green",
                "rho_volterra", "delta_rho", "flag"});
    for (double k : ks) {
        try {
            double tau_sc = std::max(1.0, std::sqrt(ctx.tau0_sq()));
            double h = 0.005 / tau_sc;
            std::size_t nconv = std::size_t(T / h) + 1;
            std::vector<double> tfull(nconv), src(nconv);
            for (std::size_t i = 0; i < nconv; ++i) {
                tfull[i] = i * h;
                src[i] = std::exp(-0.5 * (tfull[i] - 3.0) * (tfull[i] - 3.0));
            }
            GreenDecomposition g = green_remainder(ctx, k, tfull);
            auto rho_g = green_density(g, src, h);
            auto rho_v = volterra_density(cfg.profile, k, src, h);
            std::size_t stride = std::max<std::size_t>(1, nconv / tn);
            for (std::size_t i = 0; i < nconv; i += stride) {
                double osc = green_oscillatory(g, tfull[i]);
                csv.row({k, tfull[i], osc, 0.0, g.remainder[i], 0.0, rho_g[i], rho_v[i],
                         rho_g[i] - rho_v[i]},
                        "ok");
            }
        } catch (const std::exception& e) {
            csv.row({k, 0, 0, 0, 0, 0, 0, 0, 0}, std::string("fail:") + e.what());
            return 2;
        }
    }
    return 0;
}

int cmd_evolve(const RunConfig& cfg) {
    if (int rc = require_valid(cfg.profile)) return rc;
    GreenContext ctx(cfg.profile);
    double kappa0 = ctx.kappa0();
    double k = cfg.kmin > 0 ? cfg.kmin : (cfg.profile.compact() ? kappa0 / 2 : 1.0);
    double T = cfg.tmax > 0 ? cfg.tmax : 50.0;
    int tn = cfg.tnum > 0 ? cfg.tnum : 250;

    double h = 0.005 / std::max(1.0, std::sqrt(ctx.tau0_sq()));
    std::vector<double> tg;
    for (double x = 0.0; x <= T + 1e-12; x += h) tg.push_back(x);
    FieldTrace tr = field_decomposition(ctx, cfg.data, k, tg);

    CsvWriter csv(cfg.out);
    csv.header({"k", "t", "re_S", "im_S", "re_E", "im_E", "re_E_osc", "im_E_osc",
                "re_E_r", "im_E_r"});
    std::size_t stride = std::max<std::size_t>(1, tg.size() / tn);
    for (std::size_t i = 0; i < tg.size(); i += stride) {
        Complex eosc = tr.E_osc_plus[i] + tr.E_osc_minus[i];
        csv.row({k, tg[i], tr.S_hat[i], 0.0, tr.E_hat[i].real(), tr.E_hat[i].imag(),
                 eosc.real(), eosc.imag(), tr.E_r[i].real(), tr.E_r[i].imag()});
    }
    csv.comment("decomposition identity residual = " +
                std::to_string(tr.decomposition_residual));
    csv.comment("green-vs-volterra deviation = " + std::to_string(tr.route_deviation));
    std::printf("decomposition residual %.3e, route deviation %.3e\n",
                tr.decomposition_residual, tr.route_deviation);

    if (cfg.synthesis) {
        if (!cfg.profile.compact()) {
            std::cerr << "synthesis requires a compact-support profile\n";
            return 1;
        }
        BranchTable table(ctx);
        CsvWriter scsv(cfg.out + ".synth.csv");
        scsv.header({"t", "E_osc_point", "fitted_alpha"});
        std::vector<double> ts, vs;
        for (int i = 0; i < 80; ++i) {
            double t = 10.0 * std::pow(20.0, i / 79.0);
            ts.push_back(t);
            vs.push_back(synth_osc_point(table, cfg.data, t, cfg.observation_radius));
        }
        DecayFit f = decay_exponent_fit(ts, vs, 10.0, 200.0);
        for (std::size_t i = 0; i < ts.size(); ++i)
            scsv.row({ts[i], vs[i], -f.slope});
        std::printf("synthesis decay exponent alpha = %.4f\n", -f.slope);
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, bool have_config) {
    std::vector<CheckResult> checks =
        have_config ? verify_profile(cfg.profile, cfg.tol)
                    : verify_default_suite(cfg.tol);
    bool all = true;
    for (const auto& c : checks) {
        std::printf("%s %-45s value=%.3e bound=%.3e\n", c.pass ? "ok  " : "FAIL",
                    c.name.c_str(), c.value, c.threshold);
        all = all && c.pass;
    }
    json summary = {{"checks", checks.size()}, {"pass", all}};
    std::printf("%s\n", summary.dump().c_str());
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis of the linearized Vlasov-Poisson system: "
                 "dielectric function, survival threshold, Langmuir branch, "
                 "Landau rates, Green decomposition and field traces"};
    app.require_subcommand(1);
    app.fallthrough(true);

    std::string config_path, profile_name, out_path;
    std::optional<double> kmin, kmax, tmax, tol;
    std::optional<int> knum, tnum;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--profile", profile_name, "built-in profile: compact|gaussian|powerlaw");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--kmin", kmin, "lower wave number (landau: offset from kappa0)");
    app.add_option("--kmax", kmax, "upper wave number (landau: offset from kappa0)");
    app.add_option("--knum", knum, "number of k samples");
    app.add_option("--tmax", tmax, "time horizon");
    app.add_option("--tnum", tnum, "number of emitted time samples");
    app.add_option("--tol", tol, "verification tolerance scale");

    auto* moments = app.add_subcommand("moments", "moment constants and threshold");
    auto* branch = app.add_subcommand("branch", "oscillatory branch scan");
    auto* landau = app.add_subcommand("landau", "damped roots past the threshold");
    auto* green = app.add_subcommand("green", "mode-wise Green decomposition traces");
    auto* evolve = app.add_subcommand("evolve", "field traces and decomposition");
    auto* verify = app.add_subcommand("verify", "run the property suite");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path, profile_name, kmin, kmax, knum, tmax,
                                    tnum, tol, out_path);
        bool have_cfg = !config_path.empty() || !profile_name.empty();
        if (moments->parsed()) return cmd_moments(cfg);
        if (branch->parsed()) return cmd_branch(cfg);
        if (landau->parsed()) return cmd_landau(cfg);
        if (green->parsed()) return cmd_green(cfg);
        if (evolve->parsed()) return cmd_evolve(cfg);
        if (verify->parsed()) return cmd_verify(cfg, have_cfg);
    } catch (const OutOfRange& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
