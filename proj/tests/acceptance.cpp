// Acceptance suite: one check per numbered criterion, each printing a single
// PASS/FAIL line with the measured values.  Exit status is the number of
// failed criteria.  Usage: acceptance [criterion-number]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qakin/analysis.hpp"
#include "qakin/boltzmann.hpp"
#include "qakin/kernel.hpp"
#include "qakin/model.hpp"
#include "qakin/rates.hpp"
#include "qakin/renorm.hpp"
#include "qakin/rng.hpp"
#include "qakin/stochastic.hpp"

using namespace qakin;
namespace {

constexpr double pi = std::numbers::pi;

struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::string&)> run;
};

ModelParams reference_params(int n_sites = 1024) {
    ModelParams p;
    p.alpha = 0.06;
    p.beta = 25.0;
    p.n_sites = n_sites;
    return p;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// ---------------------------------------------------------------- criterion 1
bool c1_diffusion_constant(std::string& detail) {
    const auto p = reference_params();
    bool ok = true;
    double lo = 1e300, hi = -1e300;
    std::string vals;
    for (double g : {0.5, 0.8, 0.95}) {
        const double c = diffusion_quadrature(g, p).c_d;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        ok &= std::abs(c - 0.17) <= 0.01;
        vals += " c_D(g=" + fmt(g) + ")=" + fmt(c);
    }
    const double spread = (hi - lo) / lo;
    ok &= spread < 0.02;
    detail = vals + " spread=" + fmt(spread) + " (target 0.17 +- 0.01, spread < 2%)";
    return ok;
}

// ---------------------------------------------------------------- criterion 2
bool c2_kernel_gap(std::string& detail) {
    const auto spec = kernel_spectrum(400, 6.0);
    const double e0 = spec.eigenvalues[0];
    const double e1 = spec.eigenvalues[1];
    const bool zero_ok = std::abs(e0) < 1e-6;
    const bool gap_ok = std::abs(e1 + 6.6) <= 0.02 * 6.6;
    detail = "e0=" + fmt(e0) + " e1=" + fmt(e1) + " (targets |e0| < 1e-6, e1 = -6.6 +- 2%); " +
             "note 2|e1|=" + fmt(2.0 * std::abs(e1)) +
             " matches the quoted -6.6, consistent with a factor-2 rate-unit slip in the source";
    return zero_ok && gap_ok;
}

// ---------------------------------------------------------------- criterion 3
bool c3_detailed_balance(std::string& detail) {
    Xoshiro256 rng(2024);
    const auto grid = MomentumGrid::make(1024);
    double worst = 0.0;
    for (int draw = 0; draw < 10; ++draw) {
        ModelParams p = reference_params();
        p.beta = 5.0 + 45.0 * rng.uniform();
        const double g = 0.5 + rng.uniform();
        for (int s = 0; s < 40; ++s) {
            const double k = grid.momenta[rng.below(1024)];
            const double q = grid.momenta[rng.below(1024)];
            const double ek = dispersion(g, k), eq = dispersion(g, q);
            const double lhs = transition_rate(Band::plus, Band::minus, g, k, q, p) *
                               std::exp(-p.beta * ek);
            const double rhs = transition_rate(Band::plus, Band::minus, g, q, k, p) *
                               std::exp(-p.beta * eq);
            if (rhs != 0.0) worst = std::max(worst, std::abs(lhs / rhs - 1.0));
            const double gen = transition_rate(Band::minus, Band::minus, g, k, q, p);
            const double rec = transition_rate(Band::plus, Band::plus, g, k, q, p);
            if (rec > 0.0)
                worst = std::max(worst,
                                 std::abs(gen / (rec * std::exp(-p.beta * (ek + eq))) - 1.0));
        }
    }
    detail = "worst relative violation " + fmt(worst) + " (target < 1e-12)";
    return worst < 1e-12;
}

// ---------------------------------------------------------------- criterion 4
bool c4_fermi_dirac_and_relaxation(std::string& detail) {
    bool ok = true;
    double worst_rhs = 0.0;
    const struct { double g, beta; } pts[] = {
        {0.5, 5.0}, {0.8, 25.0}, {1.0, 12.0}, {1.2, 50.0}, {1.5, 8.0}};
    const auto grid = MomentumGrid::make(1024);
    for (const auto& pt : pts) {
        auto p = reference_params();
        p.beta = pt.beta;
        const auto fd = fermi_dirac_state(pt.g, pt.beta, grid);
        worst_rhs = std::max(worst_rhs, qbe_rhs(fd, p, grid).cwiseAbs().maxCoeff());
    }
    ok &= worst_rhs < 1e-10;

    // Maxwell-shape perturbation at fixed g relaxes at |e1|/tau_r.  The
    // spectrum is continuous above the gap, so the distortion is kept smooth
    // and the fit starts only after several gap times.
    auto p = reference_params();
    p.beta = 50.0;
    const double g = 0.5;
    const double k_th = std::sqrt((1.0 - g) / (p.beta * g));
    Eigen::VectorXd maxwell(1024), rho(1024);
    for (int i = 0; i < 1024; ++i)
        maxwell[i] = std::exp(-p.beta * (dispersion(g, grid.momenta[i]) - (1.0 - g)));
    for (int i = 0; i < 1024; ++i) {
        const double u = std::pow(grid.momenta[i] / k_th, 2);
        const double bump = 0.3 * (1.0 - u) * std::exp(-0.25 * u);
        // small amplitude keeps the recombination-slaved shape floor below
        // the decaying signal across the fit window
        rho[i] = 1e-5 * maxwell[i] * (1.0 + bump);
    }
    PopulationState state;
    state.g = g;
    state.rho = rho;
    auto shape_norm = [&](const Eigen::VectorXd& r) {
        return (r - (r.sum() / maxwell.sum()) * maxwell).norm();
    };
    const double gap_time = 1.0 / (3.27 * momentum_relaxation_rate(g, p));
    const double t_settle = 4.0 * gap_time, t_fit = 2.7 * gap_time;
    const auto mid = evolve_at_fixed_g(state, t_settle, p, grid);
    const auto end = evolve_at_fixed_g(mid.state, t_fit, p, grid);
    const double measured =
        std::log(shape_norm(mid.state.rho) / shape_norm(end.state.rho)) / t_fit;
    const double predicted = -kernel_spectrum(400, 6.0).eigenvalues[1] *
                             momentum_relaxation_rate(g, p);
    const double rel = std::abs(measured / predicted - 1.0);
    ok &= rel < 0.10;
    detail = "max|rhs(FD)|=" + fmt(worst_rhs) + " relaxation measured/predicted=" +
             fmt(measured / predicted) + " (targets < 1e-10 and within 10%)";
    return ok;
}

// ---------------------------------------------------------------- criterion 5
bool c5_fig1a(std::string& detail) {
    const auto p = reference_params(1024);
    const double v = 2.85e-7;
    const auto grid = MomentumGrid::make(1024);
    const double g0 = solve_g0(v, p);

    Schedule schedule{1.2, v, 0.42};
    const auto run = integrate_density(schedule, p, RateSource::asymptotic);

    // (i) thermal tracking above the freeze-out point, below the critical region
    double track_dev = 0.0;
    for (const auto& s : run.trajectory.samples)
        if (s.g > g0 + 2.0 / p.beta && s.g <= 1.0 - thresholds::asym_beta_gap / p.beta)
            track_dev = std::max(track_dev, std::abs(s.n_mean / s.n_th - 1.0));
    const bool track_ok = track_dev <= 0.05;

    // (ii) the density exceeds twice the thermal value within 2/beta below g0
    double ratio_below = 0.0;
    for (const auto& s : run.trajectory.samples)
        if (s.g < g0 && s.g > g0 - 2.0 / p.beta)
            ratio_below = std::max(ratio_below, s.n_mean / s.n_th);
    const bool depart_ok = ratio_below > 2.0;

    // (iii) frozen plateau against the log law
    double law_dev = 0.0;
    for (const auto& s : run.trajectory.samples) {
        if (std::exp(p.beta * (g0 - s.g)) < 100.0) continue;
        const double law =
            thermal_density_asymptotic(g0, p.beta) / (p.beta * std::log(g0 / s.g));
        law_dev = std::max(law_dev, std::abs(s.n_mean / law - 1.0));
    }
    const bool plateau_ok = law_dev <= 0.15;

    // (iv) the Boltzmann trajectory departs within 2/beta of g0
    Schedule qbe_schedule{1.2, v, g0 - 0.1};
    const auto qbe_run = evolve(fermi_dirac_state(1.2, p.beta, grid), qbe_schedule, p, grid);
    double g_depart = 0.0;
    for (const auto& s : qbe_run.trajectory.samples)
        if (s.g < 1.0 && s.n_mean > 2.0 * s.n_th) {
            g_depart = s.g;
            break;
        }
    const bool bracket_ok = std::abs(g_depart - g0) <= 2.0 / p.beta && qbe_run.clip_events == 0;

    detail = "(i) max|n/nth-1|=" + fmt(track_dev) + (track_ok ? " ok" : " FAIL(>0.05)") +
             "; (ii) max n/nth below g0 = " + fmt(ratio_below) + (depart_ok ? " ok" : " FAIL") +
             "; (iii) max|n/law-1|=" + fmt(law_dev) + (plateau_ok ? " ok" : " FAIL(>0.15)") +
             "; (iv) g_depart=" + fmt(g_depart) + " vs g0=" + fmt(g0) +
             (bracket_ok ? " ok" : " FAIL");
    return track_ok && depart_ok && plateau_ok && bracket_ok;
}

// ---------------------------------------------------------------- criterion 6
bool c6_nonmonotone_optimum(std::string& detail) {
    bool curves_ok = true;
    for (double log_mu : {8.0, 9.0, 10.0, 11.0}) {
        const auto curves = scaled_curves({log_mu});
        const auto& pts = curves[0].points;
        int minima = 0;
        std::size_t at = 0;
        for (std::size_t i = 1; i + 1 < pts.size(); ++i)
            if (pts[i].n_scaled < pts[i - 1].n_scaled && pts[i].n_scaled <= pts[i + 1].n_scaled) {
                ++minima;
                at = i;
            }
        const double x_opt = log_mu + 1.0 - std::log(log_mu);
        curves_ok &= (minima == 1) && std::abs(pts[at].x_star / x_opt - 1.0) < 0.10;
    }
    const auto opt = optimum(reference_params(), 1.0);
    const double ratio = opt.v_opt / 2.85e-7;
    const bool v_ok = ratio <= 2.0 && ratio >= 0.5;
    detail = std::string("curves ") + (curves_ok ? "ok" : "FAIL") +
             "; v_opt=" + fmt(opt.v_opt) + " ratio to 2.85e-7 = " + fmt(ratio) +
             (v_ok ? " ok" : " FAIL(factor-2)") +
             "; closed-form cross-check v_opt_closed=" + fmt(opt.v_opt_closed);
    return curves_ok && v_ok;
}

// ---------------------------------------------------------------- criterion 7
bool c7_kz_glauber(std::string& detail) {
    const auto p = reference_params();
    const double v = 7.7e-7;
    const double n_v = kz_density(v);
    const double roundtrip = 8.0 * pi * n_v * n_v;
    const bool rt_ok = std::abs(roundtrip / v - 1.0) < 1e-12;

    const auto opt = optimum(p, 1.0);
    const auto cmp = kz_comparison(p, opt.n_opt, 1.0);
    const bool kz_ok = cmp.ratio > 10.0;
    const double tv = glauber_time(opt.n_opt, 1.0) * opt.v_opt;
    const bool glauber_ok = tv > 10.0;
    detail = "roundtrip " + std::string(rt_ok ? "ok" : "FAIL") +
             "; v_opt/v_KZ=" + fmt(cmp.ratio) + (kz_ok ? " ok" : " FAIL(<=10)") +
             "; t_class*v_opt=" + fmt(tv) + (glauber_ok ? " ok" : " FAIL(<=10)");
    return rt_ok && kz_ok && glauber_ok;
}

// ---------------------------------------------------------------- criterion 8
bool c8_stochastic(std::string& detail) {
    // decay exponent and time-to-density for the classical baseline
    std::vector<double> times;
    for (int i = 0; i < 24; ++i) times.push_back(2.0 * std::pow(400.0 / 2.0, i / 23.0));
    const auto glauber = glauber_kink_mc(4096, 0.5, 1.0, 7, 400.0, 32, times);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& pt : glauber) {
        if (pt.t < 15.0) continue;  // asymptotic window
        const double x = std::log(pt.t), y = std::log(pt.n_mean);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const bool slope_ok = std::abs(slope + 0.5) <= 0.05;

    double t_cross = 0.0;
    for (std::size_t i = 1; i < glauber.size(); ++i)
        if (glauber[i].n_mean <= 0.05) {
            const double f = (0.05 - glauber[i - 1].n_mean) /
                             (glauber[i].n_mean - glauber[i - 1].n_mean);
            t_cross = glauber[i - 1].t + f * (glauber[i].t - glauber[i - 1].t);
            break;
        }
    const double t_pred = 1.0 / (8.0 * pi * 0.05 * 0.05);
    const bool time_ok = t_cross > 0.0 && std::abs(t_cross / t_pred - 1.0) <= 0.25;

    // time-decaying diffusion: plateau against the touching construction
    const double d0 = 500.0, t0 = 5.0, lambda = 2.0, horizon = 500.0;
    RateHooks decaying;
    decaying.hop_rate = [=](double t) { return 2.0 * d0 * std::pow(1.0 + t / t0, -1.5); };
    decaying.reaction_rate = [=](double) { return lambda; };
    decaying.hop_bound = 2.0 * d0;
    decaying.reaction_bound = lambda;

    std::vector<double> kmc_times;
    for (int i = 0; i < 30; ++i) kmc_times.push_back(0.05 * std::pow(horizon / 0.05, i / 29.0));
    const auto series = kmc_time_dependent(4096, 0.5, decaying, 11, horizon, 32, kmc_times);
    const double plateau = series.back().n_mean;

    const double w_mf = 2.0 * lambda;  // mean-field pair loss: dn/dt = -2 lambda n^2
    auto density_law = [&](double t) { return 0.5 / (1.0 + 0.5 * w_mf * t); };
    RateHooks for_touching = decaying;
    for_touching.reaction_rate = [](double) { return 0.0; };
    for_touching.reaction_bound = 0.0;
    const auto touch = touching_crossover(for_touching, density_law, horizon);
    const double plateau_ratio = plateau / touch.n_star;
    const bool plateau_ok = plateau_ratio > 0.5 && plateau_ratio < 2.0;
    // implied order-unity constant k = n_plateau D(tau*) / w
    const double k_emp = plateau * (0.5 * decaying.hop_rate(touch.tau_star)) / w_mf;
    const bool k_ok = k_emp > 0.3 && k_emp < 3.0;

    detail = "slope=" + fmt(slope) + (slope_ok ? " ok" : " FAIL") +
             "; t(n=0.05)=" + fmt(t_cross) + " vs " + fmt(t_pred) + (time_ok ? " ok" : " FAIL") +
             "; plateau/touching=" + fmt(plateau_ratio) + (plateau_ok ? " ok" : " FAIL") +
             "; k=" + fmt(k_emp) + (k_ok ? " ok" : " FAIL");
    return slope_ok && time_ok && plateau_ok && k_ok;
}

// ---------------------------------------------------------------- criterion 9
bool c9_renormalization(std::string& detail) {
    const auto grid = MomentumGrid::make(1024);

    // narrow band: sign and approach of Sigma_0/(alpha wc^2)
    bool sign_ok = true;
    std::vector<double> ratios;
    for (double wc : {0.2, 0.1, 0.05}) {
        ModelParams p;
        p.alpha = 0.06;
        p.omega_c = wc;
        p.omega_cutoff = wc;
        p.n_sites = 1024;
        const double s0 = polaron_shift(0.5, 1e-4, p, grid);
        sign_ok &= (s0 < 0.0);
        ratios.push_back(s0 / (p.alpha * wc * wc));
    }
    const bool approach_ok = std::abs(ratios[2] - ratios[1]) < std::abs(ratios[1] - ratios[0]);

    // broadband: linear in the polaron cutoff
    ModelParams bb;
    bb.alpha = 0.06;
    bb.omega_c = 1e3;
    bb.n_sites = 1024;
    bb.omega_cutoff = 10.0;
    const double s10 = polaron_shift(0.95, 1e-4, bb, grid);
    bb.omega_cutoff = 20.0;
    const double s20 = polaron_shift(0.95, 1e-4, bb, grid);
    const bool linear_ok = s10 < 0.0 && std::abs(s20 / s10 - 2.0) < 0.2;

    // pair mixing dies toward k -> 0
    ModelParams mix_p;
    mix_p.alpha = 0.06;
    mix_p.omega_c = 50.0;
    mix_p.omega_cutoff = 20.0;
    mix_p.n_sites = 1024;
    double prev = 1e300;
    bool mix_ok = true;
    for (double k : {0.2, 0.1, 0.05}) {
        const double m = std::abs(mixing_term(0.95, k, mix_p, grid));
        mix_ok &= (m < prev);
        prev = m;
    }

    // long-wavelength linearity of the shift
    const auto fit = linear_spectrum_fit(0.95, mix_p, grid, 0.3);
    const double resid = fit.max_residual / fit.range;
    const bool fit_ok = resid <= 0.02;

    detail = "Sigma0/(a wc^2) = {" + fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " + fmt(ratios[2]) +
             "}" + (sign_ok ? " neg ok" : " SIGN FAIL") +
             (approach_ok ? ", approach ok" : ", approach FAIL") +
             "; cutoff doubling ratio=" + fmt(s20 / s10) + (linear_ok ? " ok" : " FAIL") +
             "; mixing decay " + (mix_ok ? "ok" : "FAIL") +
             "; fit residual/range=" + fmt(resid) + (fit_ok ? " ok" : " FAIL(>0.02)");
    return sign_ok && approach_ok && linear_ok && mix_ok && fit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "diffusion constant c_D from first principles", c1_diffusion_constant},
        {2, "scale-free kernel spectrum", c2_kernel_gap},
        {3, "detailed-balance identities", c3_detailed_balance},
        {4, "Fermi-Dirac stationarity and relaxation gap", c4_fermi_dirac_and_relaxation},
        {5, "reference annealing trajectory", c5_fig1a},
        {6, "nonmonotone crossover density and optimum", c6_nonmonotone_optimum},
        {7, "Kibble-Zurek and Glauber comparisons", c7_kz_glauber},
        {8, "stochastic lattice crossover", c8_stochastic},
        {9, "spectrum renormalization scalings", c9_renormalization},
    };

    int selected = 0;
    if (argc > 1) selected = std::atoi(argv[1]);

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (selected != 0 && criterion.number != selected) continue;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s — %s (%.1f s)\n", ok ? "PASS" : "FAIL",
                    criterion.number, criterion.name.c_str(), detail.c_str(), seconds);
        if (!ok) ++failures;
    }
    return failures;
}
