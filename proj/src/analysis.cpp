#include "qakin/analysis.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

namespace qakin {

namespace {

constexpr double pi = std::numbers::pi;

using brackets = std::pair<double, double>;

double refine_root(const std::function<double(double)>& f, double lo, double hi) {
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(std::abs(a), std::abs(b)); };
    std::uintmax_t it = 200;
    const brackets r = boost::math::tools::toms748_solve(f, lo, hi, tol, it);
    return 0.5 * (r.first + r.second);
}

// Tabulated exact w(g), n_th(g) with log-linear interpolation.
class RateMesh {
public:
    RateMesh(double g_lo, double g_hi, double dg, const ModelParams& params,
             const MomentumGrid& grid) {
        g_lo_ = g_lo;
        dg_ = dg;
        const int n = static_cast<int>(std::ceil((g_hi - g_lo) / dg)) + 2;
        log_w_.resize(n);
        log_nth_.resize(n);
        for (int i = 0; i < n; ++i) {
            const double g = g_lo_ + i * dg_;
            log_w_[i] = std::log(recombination_rate_exact(g, params, grid));
            log_nth_[i] = std::log(thermal_density_exact(g, params.beta, grid));
        }
    }
    double w(double g) const { return std::exp(interp(log_w_, g)); }
    double n_th(double g) const { return std::exp(interp(log_nth_, g)); }

private:
    double interp(const std::vector<double>& table, double g) const {
        double x = (g - g_lo_) / dg_;
        x = std::clamp(x, 0.0, static_cast<double>(table.size() - 1) - 1e-12);
        const int i = static_cast<int>(x);
        const double s = x - i;
        return (1.0 - s) * table[i] + s * table[i + 1];
    }
    double g_lo_, dg_;
    std::vector<double> log_w_, log_nth_;
};

// Uniform interface over the two rate sources.
struct Source {
    std::function<double(double)> w, n_th;
};

Source make_source(RateSource source, const ModelParams& params, const MomentumGrid* grid,
                   double g_lo, double g_hi, double mesh_dg,
                   std::shared_ptr<RateMesh>* keep_alive) {
    if (source == RateSource::asymptotic) {
        return {[params](double g) { return 8.0 * pi * params.alpha / (params.beta * g); },
                [params](double g) { return detail::thermal_density_closed(g, params.beta); }};
    }
    if (grid == nullptr)
        throw std::domain_error("exact rate source requires a momentum grid");
    auto mesh = std::make_shared<RateMesh>(g_lo, g_hi, mesh_dg, params, *grid);
    if (keep_alive) *keep_alive = mesh;
    return {[mesh](double g) { return mesh->w(g); },
            [mesh](double g) { return mesh->n_th(g); }};
}

}  // namespace

double scaled_rate_from_x0(double x0) {
    if (!(x0 > 0.0)) throw std::domain_error("scaled_rate_from_x0: x0 must be > 0");
    return std::sqrt(x0) * std::exp(-x0);
}

double x0_from_scaled_rate(double v_scaled) {
    constexpr double x_peak = 0.5;
    const double v_max = scaled_rate_from_x0(x_peak);
    if (!(v_scaled > 0.0))
        throw std::domain_error("x0_from_scaled_rate: rate must be > 0");
    if (v_scaled > v_max)
        throw solver_error("x0_from_scaled_rate: no freeze-out root; scaled rate " +
                           std::to_string(v_scaled) + " exceeds the maximum " + std::to_string(v_max));
    if (v_scaled == v_max) return x_peak;
    double hi = 2.0;
    while (scaled_rate_from_x0(hi) > v_scaled) hi *= 2.0;
    return refine_root([v_scaled](double x) { return scaled_rate_from_x0(x) - v_scaled; }, x_peak, hi);
}

double x_star_from_x0(double x0, double mu) {
    const double target = mu * scaled_rate_from_x0(x0);
    auto f = [x0, target](double x) { return std::pow(x, 1.5) * (x - x0) - target; };
    double hi = x0 + 50.0;
    if (f(hi) < 0.0) {
        hi = x0 + 400.0;
        if (f(hi) < 0.0)
            throw solver_error("x_star_from_x0: crossover equation has no root below x0 + 400");
    }
    double x = refine_root(f, x0 + 1e-12 * std::max(1.0, x0), hi);
    // Newton polish: the returned pair must satisfy the crossover equation to
    // near machine precision.
    for (int i = 0; i < 3; ++i) {
        const double fx = f(x);
        const double dfx = 1.5 * std::sqrt(x) * (x - x0) + std::pow(x, 1.5);
        x -= fx / dfx;
    }
    return x;
}

double scale_rate(double v, const ModelParams& params) {
    return std::pow(params.beta, 3) * v / (4.0 * std::sqrt(2.0 * pi) * params.alpha);
}

double unscale_rate(double v_scaled, const ModelParams& params) {
    return v_scaled * 4.0 * std::sqrt(2.0 * pi) * params.alpha / std::pow(params.beta, 3);
}

double mu_parameter(const ModelParams& params, double k_order, double c_d) {
    if (!(k_order > 0.0)) throw std::domain_error("mu_parameter: k_order must be > 0");
    return c_d * params.beta * params.beta /
           (8.0 * params.alpha * params.alpha * k_order * std::sqrt(2.0 * pi * pi * pi));
}

double solve_g0(double v, const ModelParams& params, RateSource source, const MomentumGrid* grid) {
    if (!(v > 0.0)) throw std::domain_error("solve_g0: v must be > 0");
    std::shared_ptr<RateMesh> keep;
    const Source src = make_source(source, params, grid, 0.02, 1.0, 2e-3, &keep);
    auto residual = [&](double g) { return src.w(g) * src.n_th(g) / params.beta - v; };

    // w n_th / beta peaks near beta(1-g) = 1/2; the physical (freeze-out)
    // branch is the decreasing one at smaller g.
    const double g_peak = 1.0 - 0.5 / params.beta;
    if (residual(g_peak) < 0.0)
        throw solver_error("solve_g0: no root; residual at the peak g = " + std::to_string(g_peak) +
                           " is " + std::to_string(residual(g_peak)) + " (v too large)");
    double g_lo = g_peak;
    while (residual(g_lo) > 0.0) {
        g_lo -= 0.02;
        if (g_lo < 0.03)
            throw solver_error("solve_g0: no root above g = 0.03 (v too small for this bracket)");
    }
    return refine_root(residual, g_lo, std::min(g_lo + 0.02, g_peak));
}

double log_law_density(double g, double g0, const ModelParams& params) {
    if (!(g < g0)) throw std::domain_error("log_law_density: requires g < g0");
    if (!(g > 0.0)) throw std::domain_error("log_law_density: requires g > 0");
    if (std::exp(params.beta * (g0 - g)) < thresholds::log_law_exp)
        warn("log_law_density: e^{beta(g0-g)} is not large; the frozen-density law is marginal");
    return thermal_density_asymptotic(g0, params.beta) / (params.beta * std::log(g0 / g));
}

IntegrationResult integrate_density(const Schedule& schedule, const ModelParams& params,
                                    RateSource source, const MomentumGrid* grid,
                                    const IntegrateOptions& options) {
    schedule.validate();
    namespace ode = boost::numeric::odeint;
    using state_t = std::array<double, 1>;

    std::shared_ptr<RateMesh> keep;
    const double g_lo = std::max(0.02, schedule.g_final - 0.02);
    const Source src = make_source(source, params, grid, g_lo, schedule.g_initial + 0.02,
                                   options.mesh_dg, &keep);

    auto rhs = [&](const state_t& y, state_t& dydt, double t) {
        const double g = schedule.g_at(t);
        const double nth = src.n_th(g);
        dydt[0] = -src.w(g) * (y[0] * y[0] - nth * nth);
    };
    auto crossover_level = [&](double g) {
        return options.k_order * src.w(g) / diffusion_closed(g, params);
    };

    IntegrationResult result;
    result.trajectory.schedule = schedule;
    auto push = [&](double t, double n) {
        TrajectorySample s;
        s.t = t;
        s.g = schedule.g_at(t);
        s.n_mean = n;
        s.n_th = src.n_th(s.g);
        s.n_th_asym = detail::thermal_density_closed(s.g, params.beta);
        result.trajectory.samples.push_back(s);
    };

    const double t_end = schedule.duration();
    auto stepper = ode::make_dense_output(options.atol, options.rtol,
                                          ode::runge_kutta_dopri5<state_t>());
    state_t y{src.n_th(schedule.g_initial)};
    stepper.initialize(y, 0.0, std::min(t_end * 1e-6, 1.0 / (src.w(schedule.g_initial) + 1e-30)));
    push(0.0, y[0]);

    double next_sample = options.sample_dg / schedule.v;
    double prev_t = 0.0;
    double prev_phi = 0.0;
    bool phi_live = false;
    while (stepper.current_time() < t_end) {
        stepper.do_step(rhs);
        double t_new = stepper.current_time();
        const bool done = t_new >= t_end;
        if (done) t_new = t_end;

        while (next_sample <= t_new + 1e-9) {
            state_t ys;
            stepper.calc_state(std::min(next_sample, t_new), ys);
            push(std::min(next_sample, t_new), ys[0]);
            next_sample += options.sample_dg / schedule.v;
        }

        if (options.locate_crossover && !result.g_star_event) {
            const double g_new = schedule.g_at(t_new);
            if (g_new < 1.0 - 1e-6) {
                state_t ys;
                stepper.calc_state(t_new, ys);
                const double phi = ys[0] - crossover_level(g_new);
                if (phi_live && prev_phi > 0.0 && phi <= 0.0) {
                    auto phi_at = [&](double t) {
                        state_t yy;
                        stepper.calc_state(t, yy);
                        return yy[0] - crossover_level(schedule.g_at(t));
                    };
                    const double t_star = refine_root(phi_at, prev_t, t_new);
                    result.g_star_event = schedule.g_at(t_star);
                }
                prev_phi = phi;
                phi_live = true;
                prev_t = t_new;
            }
        }
        if (done) {
            state_t ys;
            stepper.calc_state(t_end, ys);
            if (result.trajectory.samples.back().t < t_end - 1e-9 * t_end) push(t_end, ys[0]);
            break;
        }
    }
    return result;
}

CrossoverReport solve_crossover(double v, const ModelParams& params, double k_order) {
    CrossoverReport report;
    report.k_order = k_order;
    report.mu = mu_parameter(params, k_order);
    if (report.mu < thresholds::mu_large)
        warn("solve_crossover: mu = " + std::to_string(report.mu) + " is not >> 1");

    const double v_scaled = scale_rate(v, params);
    report.x0 = x0_from_scaled_rate(v_scaled);
    report.x_star = x_star_from_x0(report.x0, report.mu);
    report.g0 = 1.0 - report.x0 / params.beta;
    report.g_star = 1.0 - report.x_star / params.beta;
    if (!(report.g_star > 0.0))
        throw solver_error("solve_crossover: crossover field g* is not positive at this rate");

    report.n_star = k_order * recombination_rate_asymptotic(report.g_star, params) /
                    diffusion_closed(report.g_star, params);
    report.n_star_log_route = thermal_density_asymptotic(report.g0, params.beta) /
                              (params.beta * std::log(report.g0 / report.g_star));
    report.valid = (report.x_star - report.x0 >= 1.0) && (params.beta > report.x_star);
    const double route_ratio = report.n_star_log_route / report.n_star;
    if (route_ratio < 0.5 || route_ratio > 2.0)
        warn("solve_crossover: the two n* routes differ by factor " + std::to_string(route_ratio) +
             "; outside the asymptotic regime");
    return report;
}

OptimumReport optimum(const ModelParams& params, double k_order) {
    OptimumReport report;
    report.mu = mu_parameter(params, k_order);
    if (report.mu < thresholds::mu_large)
        warn("optimum: mu = " + std::to_string(report.mu) + " is not >> 1");
    const double log_mu = std::log(report.mu);
    report.x_opt = log_mu + 1.0 - std::log(log_mu);
    if (params.beta <= report.x_opt)
        warn("optimum: beta <= x_opt; the scaled analysis does not apply");
    report.n_opt = 8.0 * pi * k_order * params.alpha * params.alpha /
                   (diffusion_constant_cd * std::pow(params.beta, 3)) * std::pow(report.x_opt, 1.5);
    report.v_opt = unscale_rate(scaled_rate_from_x0(report.x_opt - 1.0), params);
    report.v_opt_closed = 64.0 * k_order * pi * pi * std::pow(params.alpha, 3) /
                          (diffusion_constant_cd * std::pow(params.beta, 5)) *
                          std::sqrt(2.0 * std::log(params.beta / params.alpha));

    // direct sweep of the scaled curve as a cross-check on x_opt
    const double v_guess = scaled_rate_from_x0(report.x_opt - 1.0);
    const double mu = report.mu;
    auto n_scaled = [mu](double log_v) {
        const double x0 = x0_from_scaled_rate(std::exp(log_v));
        return std::pow(x_star_from_x0(x0, mu), 1.5);
    };
    const auto min_pair = boost::math::tools::brent_find_minima(
        n_scaled, std::log(v_guess) - 1.5, std::log(v_guess) + 1.5, 40);
    report.v_opt_minimized = unscale_rate(std::exp(min_pair.first), params);
    report.x_star_minimized = x_star_from_x0(x0_from_scaled_rate(std::exp(min_pair.first)), mu);
    return report;
}

std::vector<ScaledCurve> scaled_curves(const std::vector<double>& log_mu_values,
                                       const std::vector<double>& v_scaled_grid) {
    std::vector<ScaledCurve> curves;
    curves.reserve(log_mu_values.size());
    for (double log_mu : log_mu_values) {
        const double mu = std::exp(log_mu);
        ScaledCurve curve;
        curve.log_mu = log_mu;

        std::vector<double> grid = v_scaled_grid;
        if (grid.empty()) {
            // two decades around the curve's own optimum
            const double x0_opt = log_mu - std::log(log_mu);
            const double v_opt = scaled_rate_from_x0(x0_opt);
            const int n_points = 81;
            for (int i = 0; i < n_points; ++i)
                grid.push_back(v_opt * std::pow(10.0, -1.0 + 2.0 * i / (n_points - 1)));
        }
        for (double v_scaled : grid) {
            if (!(v_scaled > 0.0) || v_scaled >= scaled_rate_from_x0(0.5)) continue;
            ScaledPoint p;
            p.v_scaled = v_scaled;
            p.x0 = x0_from_scaled_rate(v_scaled);
            p.x_star = x_star_from_x0(p.x0, mu);
            p.n_scaled = std::pow(p.x_star, 1.5);
            p.valid = (p.x_star - p.x0 >= 1.0);
            curve.points.push_back(p);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

KzComparison kz_comparison(const ModelParams& params, double n_target, double k_order) {
    if (!(n_target > 0.0 && n_target < 1.0))
        throw std::domain_error("kz_comparison: n_target must lie in (0,1)");
    KzComparison cmp;
    cmp.v_kz = 8.0 * pi * n_target * n_target;
    cmp.ratio = optimum(params, k_order).v_opt / cmp.v_kz;
    cmp.regime_ok = cmp.ratio > 1.0;
    if (!cmp.regime_ok)
        warn("kz_comparison: v_opt/v_KZ = " + std::to_string(cmp.ratio) +
             " is not > 1 at these parameters");
    return cmp;
}

double glauber_time(double n, double w_g) {
    if (!(n > 0.0) || !(w_g > 0.0))
        throw std::domain_error("glauber_time: requires n > 0 and w_G > 0");
    if (n > 0.2) warn("glauber_time: n is not << 1");
    if (w_g > 1.0) warn("glauber_time: w_G exceeds the uncertainty bound J/hbar");
    return 1.0 / (8.0 * pi * w_g * n * n);
}

}  // namespace qakin
