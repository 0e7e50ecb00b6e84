#include "qakin/renorm.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace qakin {

namespace {

using boost::math::quadrature::gauss_kronrod;

bool infinite_cut(double lambda_cut) { return !(lambda_cut > 0.0); }

struct Panel {
    double value = 0.0;
    double error = 0.0;
};

Panel integrate_panel(const std::function<double(double)>& f, double lo, double hi,
                      const PrincipalValueOptions& opt) {
    Panel p;
    if (!(hi > lo)) return p;
    p.value = gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, opt.rel_tol, &p.error);
    return p;
}

}  // namespace

namespace detail {

// Evaluated in the scaled variable u = w/omega_c, where the exponential weight
// has unit width:  I = omega_c * v.p. int_0^U  u e^{-u} / (atilde - u) du.
double pv_frequency_integral(double a, double omega_c, double lambda_cut,
                             const PrincipalValueOptions& opt) {
    const double inf = std::numeric_limits<double>::infinity();
    const bool open_end = infinite_cut(lambda_cut);
    const double at = a / omega_c;
    const double cut = open_end ? inf : lambda_cut / omega_c;
    auto phi = [](double u) { return u * std::exp(-u); };

    double value = 0.0, error = 0.0;
    auto accumulate = [&](const Panel& p) {
        value += p.value;
        error += p.error;
    };

    if (at <= 0.0 || at >= cut) {
        // no pole inside the range; the u factor tames the u = 0 endpoint
        auto f = [&](double u) { return phi(u) / (at - u); };
        if (open_end) {
            accumulate(integrate_panel(f, 0.0, inf, opt));
        } else {
            accumulate(integrate_panel(f, 0.0, cut, opt));
        }
    } else {
        // pole at u = atilde: subtract the simple-pole part with residue
        // phi(atilde), reintegrate it analytically, quadrature on the rest
        const double body_end = open_end ? at + std::max(12.0, 2.0 * at) : cut;
        const double res = phi(at);
        auto regular = [&](double u) {
            const double d = at - u;
            if (std::abs(d) < 1e-14 * std::max(1.0, std::abs(at)))
                return -(1.0 - at) * std::exp(-at);  // limit -phi'(atilde)
            return (phi(u) - res) / d;
        };
        const double delta =
            std::min({std::max(opt.exclusion_halfwidth, 1e-3), at, body_end - at});
        accumulate(integrate_panel(regular, 0.0, at - delta, opt));
        accumulate(integrate_panel(regular, at - delta, at + delta, opt));
        accumulate(integrate_panel(regular, at + delta, body_end, opt));
        value += res * std::log(at / (body_end - at));
        if (open_end) {
            auto tail = [&](double u) { return phi(u) / (at - u); };
            accumulate(integrate_panel(tail, body_end, inf, opt));
        }
    }
    if (!(error <= 1e-7 * (1.0 + std::abs(value))))
        throw solver_error("pv_frequency_integral: quadrature did not converge (error estimate " +
                           std::to_string(error) + ")");
    return omega_c * value;
}

double pv_frequency_integral_closed(double a, double omega_c, double lambda_cut) {
    const bool open_end = infinite_cut(lambda_cut);
    auto ei = [](double x) { return boost::math::expint(x); };
    if (open_end) {
        if (a == 0.0) return -omega_c;
        const double x = a / omega_c;
        return -omega_c + a * std::exp(-x) * ei(x);
    }
    const double base = -omega_c * (1.0 - std::exp(-lambda_cut / omega_c));
    if (a == 0.0) return base;
    const double x = a / omega_c;
    const double y = (a - lambda_cut) / omega_c;
    return base + a * std::exp(-x) * (ei(x) - (y == 0.0 ? 0.0 : ei(y)));
}

}  // namespace detail

RenormFactor ising_renorm_factor(double alpha, double omega_c, double omega_cutoff) {
    RenormFactor rf;
    if (omega_c <= 1.0 || omega_cutoff > omega_c) return rf;  // no transformation applied
    rf.w = 2.0 * alpha * std::log(omega_c / omega_cutoff);
    rf.factor = std::exp(-rf.w);
    if (rf.w > thresholds::renorm_w)
        warn("ising_renorm_factor: W = " + std::to_string(rf.w) +
             " is not small; the polaron transformation is unreliable");
    return rf;
}

namespace {

double frequency_cut(const ModelParams& params) {
    return params.omega_c > 1.0 ? params.omega_cutoff : -1.0;  // -1 encodes infinity
}

}  // namespace

double polaron_shift(double g, double k, const ModelParams& params, const MomentumGrid& grid,
                     const PrincipalValueOptions& options) {
    if (!(g > 0.0)) throw std::domain_error("polaron_shift: requires g > 0");
    const double lambda_cut = frequency_cut(params);
    const double eps_k = dispersion(g, k);
    const double theta_k = bogoliubov_angle(g, k);
    double sum = 0.0;
    for (double kp : grid.momenta) {
        const double eps_p = dispersion(g, kp);
        const double half = 0.5 * (theta_k + bogoliubov_angle(g, kp));
        const double c2 = 4.0 * std::cos(half) * std::cos(half);
        const double s2 = 4.0 * std::sin(half) * std::sin(half);
        sum += c2 * detail::pv_frequency_integral(eps_k - eps_p, params.omega_c, lambda_cut, options);
        sum += s2 * detail::pv_frequency_integral(eps_k + eps_p, params.omega_c, lambda_cut, options);
    }
    return 0.5 * params.alpha * grid.weight * sum;
}

double mixing_term(double g, double k, const ModelParams& params, const MomentumGrid& grid,
                   const PrincipalValueOptions& options) {
    if (!(g > 0.0)) throw std::domain_error("mixing_term: requires g > 0");
    const double lambda_cut = frequency_cut(params);
    const double eps_k = dispersion(g, k);
    const double theta_k = bogoliubov_angle(g, k);
    double sum = 0.0;
    for (double kp : grid.momenta) {
        const double eps_p = dispersion(g, kp);
        const double sc = std::sin(theta_k + bogoliubov_angle(g, kp));
        if (sc == 0.0) continue;
        sum += sc * (detail::pv_frequency_integral(eps_k - eps_p, params.omega_c, lambda_cut, options) -
                     detail::pv_frequency_integral(eps_k + eps_p, params.omega_c, lambda_cut, options));
    }
    return 0.5 * params.alpha * grid.weight * sum;
}

LinearSpectrumFit linear_spectrum_fit(double g, const ModelParams& params,
                                      const MomentumGrid& grid, double eps_window,
                                      const PrincipalValueOptions& options) {
    std::vector<double> es, sigmas;
    for (double k : grid.momenta) {
        if (k <= 0.0) continue;
        const double e = dispersion(g, k);
        if (e >= eps_window) continue;
        es.push_back(e);
        sigmas.push_back(polaron_shift(g, k, params, grid, options));
    }
    const int n = static_cast<int>(es.size());
    if (n < 8)
        throw std::domain_error("linear_spectrum_fit: fewer than 8 grid points in the window");

    double se = 0.0, se2 = 0.0, ss = 0.0, ses = 0.0;
    for (int i = 0; i < n; ++i) {
        se += es[i];
        se2 += es[i] * es[i];
        ss += sigmas[i];
        ses += es[i] * sigmas[i];
    }
    const double denom = n * se2 - se * se;
    LinearSpectrumFit fit;
    fit.n_points = n;
    fit.slope_c = (n * ses - se * ss) / denom;
    fit.sigma0 = (ss - fit.slope_c * se) / n;
    double lo = sigmas[0], hi = sigmas[0];
    for (int i = 0; i < n; ++i) {
        fit.max_residual = std::max(fit.max_residual,
                                    std::abs(sigmas[i] - fit.sigma0 - fit.slope_c * es[i]));
        lo = std::min(lo, sigmas[i]);
        hi = std::max(hi, sigmas[i]);
    }
    fit.range = hi - lo;
    return fit;
}

RenormResult renorm_scan(double g, const ModelParams& params, const MomentumGrid& grid,
                         int n_k, const PrincipalValueOptions& options) {
    if (n_k < 2) throw std::domain_error("renorm_scan: n_k must be >= 2");
    RenormResult result;
    const int n = grid.size();
    for (int j = 0; j < n_k; ++j) {
        const int idx = n / 2 + static_cast<int>((static_cast<double>(j) / n_k) * (n / 2));
        const double k = grid.momenta[idx];
        result.k.push_back(k);
        result.eps.push_back(dispersion(g, k));
        result.sigma.push_back(polaron_shift(g, k, params, grid, options));
        result.sigma_mix.push_back(mixing_term(g, k, params, grid, options));
    }
    const auto fit = linear_spectrum_fit(g, params, grid, 0.3, options);
    result.sigma0 = fit.sigma0;
    result.slope_c = fit.slope_c;
    return result;
}

}  // namespace qakin
