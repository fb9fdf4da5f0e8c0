#include "vpspec/field.hpp"
#include "vpspec/errors.hpp"
#include "vpspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace vpspec {

namespace {

constexpr Complex kI{0.0, 1.0};

// sinc and derivatives, stable near zero
double sinc0(double x) {
    if (std::abs(x) < 1e-3) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}
double sinc1(double x) {
    if (std::abs(x) < 1e-3) {
        double x2 = x * x;
        return -x / 3.0 + x * x2 / 30.0 - x * x2 * x2 / 840.0;
    }
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}
double sinc2(double x) {
    if (std::abs(x) < 1e-3) {
        double x2 = x * x;
        return -1.0 / 3.0 + x2 / 10.0 - x2 * x2 / 168.0;
    }
    return ((2.0 - x * x) * std::sin(x) - 2.0 * x * std::cos(x)) / (x * x * x);
}

double sph_j1(double x) {
    if (std::abs(x) < 1e-4) return x / 3.0;
    return (std::sin(x) - x * std::cos(x)) / (x * x);
}

} // namespace

double SpatialProfile::a_hat(double k) const {
    double v = amplitude * std::pow(2.0 * M_PI * sigma * sigma, 1.5) *
               std::exp(-0.5 * sigma * sigma * k * k);
    if (zero_average) v *= sigma * sigma * k * k;
    return v;
}

double InitialData::b_mass() const {
    double cut = velocity.support_cut();
    return quad::integrate(
        [&](double u) { return 4.0 * M_PI * u * u * eval_mu(velocity, 0.5 * u * u); }, 0.0,
        cut);
}

double InitialData::B(double r, int order) const {
    double cut = velocity.support_cut();
    auto kernel = [order](double x) {
        switch (order) {
        case 0: return sinc0(x);
        case 1: return sinc1(x);
        case 2: return sinc2(x);
        default: throw OutOfRange("B derivative order must be 0..2");
        }
    };
    auto f = [&](double u) {
        return 4.0 * M_PI * eval_mu(velocity, 0.5 * u * u) * std::pow(u, 2 + order) *
               kernel(r * u);
    };
    // phase-resolved panels for large r
    auto panels = quad::build_panels(0.0, cut, std::abs(r));
    double v = 0.0;
    for (std::size_t i = 0; i < panels.nodes.size(); ++i)
        v += panels.weights[i] * f(panels.nodes[i]);
    return v;
}

double InitialData::S_hat(double k, double t, int order) const {
    return spatial.a_hat(k) * std::pow(k, order) * B(k * t, order);
}

FieldTrace potential_trace(const GreenContext& ctx, const InitialData& data, double k,
                           const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw OutOfRange("time grid needs at least two points");
    const double h = t_grid[1] - t_grid[0];
    FieldTrace tr;
    tr.k = k;
    tr.t = t_grid;
    tr.S_hat.resize(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) tr.S_hat[i] = data.S_hat(k, t_grid[i]);

    // the remainder is computed on a coarse grid and resampled; its scale of
    // variation is the oscillation period, far above the convolution step
    double T = t_grid.back();
    std::size_t ncoarse = std::min<std::size_t>(t_grid.size(), 1201);
    std::vector<double> coarse(ncoarse);
    for (std::size_t i = 0; i < ncoarse; ++i) coarse[i] = T * double(i) / (ncoarse - 1);
    GreenDecomposition gc = green_remainder(ctx, k, coarse);
    GreenDecomposition g = resample_remainder(gc, t_grid);
    tr.rho_green = green_density(g, tr.S_hat, h);
    tr.rho_volterra = volterra_density(ctx.profile(), k, tr.S_hat, h);

    double mx = 1e-300, dev = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        mx = std::max(mx, std::abs(tr.rho_volterra[i]));
        dev = std::max(dev, std::abs(tr.rho_green[i] - tr.rho_volterra[i]));
    }
    tr.route_deviation = dev / mx;

    tr.phi_hat.resize(t_grid.size());
    tr.E_hat.resize(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        tr.phi_hat[i] = tr.rho_green[i] / (k * k);
        tr.E_hat[i] = -kI * k * tr.phi_hat[i];
    }
    return tr;
}

FieldTrace field_decomposition(const GreenContext& ctx, const InitialData& data, double k,
                               const std::vector<double>& t_grid) {
    FieldTrace tr = potential_trace(ctx, data, k, t_grid);
    const double h = t_grid[1] - t_grid[0];
    const std::size_t n = t_grid.size();

    double T = t_grid.back();
    std::size_t ncoarse = std::min<std::size_t>(t_grid.size(), 1201);
    std::vector<double> coarse(ncoarse);
    for (std::size_t i = 0; i < ncoarse; ++i) coarse[i] = T * double(i) / (ncoarse - 1);
    GreenDecomposition g = resample_remainder(green_remainder(ctx, k, coarse), t_grid);
    Complex ap = g.a_plus, am = std::conj(g.a_plus);
    Complex lp = g.lambda_plus, lm = std::conj(g.lambda_plus);
    const bool osc = g.has_poles && std::abs(ap) > 0.0;

    auto S = [&](double s) { return Complex(data.S_hat(k, s, 0), 0.0); };
    auto S2 = [&](double s) { return Complex(data.S_hat(k, s, 2), 0.0); };
    const double S0 = data.S_hat(k, 0.0, 0);
    const double dS0 = data.S_hat(k, 0.0, 1);

    // direct density rebuilt with the exact-exponential oscillatory convolution
    // so the decomposition identity is tested at quadrature accuracy
    std::vector<Complex> conv_p(n, Complex(0, 0)), conv_m(n, Complex(0, 0));
    std::vector<Complex> conv_p2(n, Complex(0, 0)), conv_m2(n, Complex(0, 0));
    if (osc) {
        conv_p = convolve_exp(lp, S, n, h);
        conv_m = convolve_exp(lm, S, n, h);
        conv_p2 = convolve_exp(lp, S2, n, h);
        conv_m2 = convolve_exp(lm, S2, n, h);
    }
    std::vector<double> conv_r(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        double acc = 0.5 * (g.remainder[m] * tr.S_hat[0] + g.remainder[0] * tr.S_hat[m]);
        for (std::size_t j = 1; j < m; ++j) acc += g.remainder[m - j] * tr.S_hat[j];
        conv_r[m] = h * acc;
    }

    // per-mode multipliers from the integration-by-parts algebra
    Complex P2 = 1.0, P4 = 0.0;
    if (osc) {
        P2 = 1.0 - (ap / lp + am / lm);
        P4 = -(ap / (lp * lp) + am / (lm * lm));
    }

    tr.E_osc_plus.assign(n, Complex(0, 0));
    tr.E_osc_minus.assign(n, Complex(0, 0));
    tr.E_r.assign(n, Complex(0, 0));
    std::vector<Complex> direct(n);
    const Complex field_mult = -kI / k; // E = -ik phi = -ik rho/k^2
    for (std::size_t i = 0; i < n; ++i) {
        double t = t_grid[i];
        Complex rho_osc_p = 0.0, rho_osc_m = 0.0;
        if (osc) {
            Complex bdry_p = ap * std::exp(lp * t) * (S0 / lp + dS0 / (lp * lp));
            Complex bdry_m = am * std::exp(lm * t) * (S0 / lm + dS0 / (lm * lm));
            rho_osc_p = bdry_p + conv_p2[i] * ap / (lp * lp);
            rho_osc_m = bdry_m + conv_m2[i] * am / (lm * lm);
        }
        double dS_t = data.S_hat(k, t, 1);
        Complex rho_r = P2 * tr.S_hat[i] + P4 * dS_t + conv_r[i];
        tr.E_osc_plus[i] = field_mult * rho_osc_p;
        tr.E_osc_minus[i] = field_mult * rho_osc_m;
        tr.E_r[i] = field_mult * rho_r;
        Complex rho_direct = tr.S_hat[i] + conv_r[i];
        if (osc) rho_direct += ap * conv_p[i] + am * conv_m[i];
        direct[i] = field_mult * rho_direct;
    }

    double mx = 1e-300, dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx = std::max(mx, std::abs(direct[i]));
        dev = std::max(dev, std::abs(tr.E_osc_plus[i] + tr.E_osc_minus[i] + tr.E_r[i] -
                                     direct[i]));
    }
    tr.decomposition_residual = dev / mx;
    // publish the high-accuracy direct field in E_hat as well
    tr.E_hat = direct;
    return tr;
}

BranchTable::BranchTable(const GreenContext& ctx, int nodes_per_piece) {
    const double kappa0 = ctx.kappa0();
    k_hi_ = ctx.taper_end();
    std::vector<std::pair<double, double>> spans;
    if (ctx.profile().compact()) {
        spans.push_back({1e-4 * kappa0, kappa0});
        if (k_hi_ > kappa0) spans.push_back({kappa0, k_hi_});
    } else {
        spans.push_back({1e-4 * k_hi_, k_hi_});
    }
    for (auto [a, b] : spans) {
        Piece pc;
        pc.a = a;
        pc.b = b;
        for (int i = 0; i < nodes_per_piece; ++i) {
            double th = M_PI * (i + 0.5) / nodes_per_piece;
            double k = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(th);
            pc.nodes.push_back(k);
            Complex lam = ctx.lambda_plus(k);
            pc.lam.push_back(lam);
            pc.res.push_back(residue_weight(ctx, k));
        }
        pieces_.push_back(std::move(pc));
    }
}

const BranchTable::Piece& BranchTable::piece(double k) const {
    for (const auto& pc : pieces_)
        if (k <= pc.b + 1e-14) return pc;
    return pieces_.back();
}

Complex BranchTable::interp(const Piece& pc, const std::vector<Complex>& v, double k) const {
    // barycentric interpolation on Chebyshev (first kind) nodes
    const std::size_t n = pc.nodes.size();
    Complex num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = k - pc.nodes[j];
        if (std::abs(d) < 1e-14) return v[j];
        double th = M_PI * (j + 0.5) / n;
        double w = ((j % 2) ? -1.0 : 1.0) * std::sin(th);
        num += w / d * v[j];
        den += w / d;
    }
    return num / den;
}

Complex BranchTable::lambda_plus(double k) const {
    const Piece& pc = piece(k);
    return interp(pc, pc.lam, k);
}

Complex BranchTable::a_plus(double k) const {
    const Piece& pc = piece(k);
    return interp(pc, pc.res, k);
}

double synth_osc_point(const BranchTable& table, const InitialData& data, double t,
                       double r0) {
    const double k_max = table.k_max();
    const double bm = data.b_mass();
    // phase varies at most ~ (max tau) * t across the support; panels sized on
    // the spread of tau_* rather than its absolute size keeps cost modest
    auto panels = quad::build_panels(1e-6, k_max - 1e-12, 0.3 * std::max(t, 1.0));
    Complex acc = 0.0;
    for (std::size_t i = 0; i < panels.nodes.size(); ++i) {
        double k = panels.nodes[i];
        Complex lam = table.lambda_plus(k);
        Complex a = table.a_plus(k);
        if (a == Complex(0.0, 0.0)) continue;
        double Sk0 = data.spatial.a_hat(k) * bm;
        // dS(0)/dt = a_hat * k * B'(0) = 0 for these radial families
        Complex w = a * (Sk0 / lam);
        acc += panels.weights[i] * k * sph_j1(k * r0) * std::exp(lam * t) * w;
    }
    Complex Ep = acc / (2.0 * M_PI * M_PI);
    return std::abs(2.0 * Ep);
}

DecayFit decay_exponent_fit(const std::vector<double>& t, const std::vector<double>& v,
                            double t_min, double t_max) {
    if (t.size() != v.size()) throw OutOfRange("trace arrays must match");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_min || t[i] > t_max) continue;
        if (!(v[i] > 0.0)) continue;
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(v[i]));
    }
    if (lx.size() < 8) throw WindowTooShort("fewer than 8 usable samples in the window");
    double n = double(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icpt = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (icpt + slope * lx[i]);
        ss += r * r;
    }
    DecayFit f;
    f.slope = slope;
    f.residual = std::sqrt(ss / n);
    f.poor_fit = f.residual > 0.25;
    return f;
}

double peak_frequency(const std::vector<double>& values, double dt) {
    const std::size_t n = values.size();
    if (n < 16) throw WindowTooShort("trace too short for a frequency estimate");
    // Hann-windowed DFT amplitude at angular frequency w
    auto amp = [&](double w) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double win = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / (n - 1));
            acc += win * values[i] * std::exp(-kI * w * (dt * double(i)));
        }
        return std::abs(acc);
    };
    const double w_max = 0.9 * M_PI / dt;
    const double dw = 2.0 * M_PI / (n * dt) / 4.0;
    double best_w = dw, best_a = -1.0;
    for (double w = dw; w < w_max; w += dw) {
        double a = amp(w);
        if (a > best_a) {
            best_a = a;
            best_w = w;
        }
    }
    // golden-section refinement around the coarse peak
    double lo = std::max(best_w - dw, dw * 0.5), hi = best_w + dw;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = amp(c), fd = amp(d);
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo);
            fc = amp(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo);
            fd = amp(d);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace vpspec
