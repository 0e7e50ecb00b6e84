#include "qakin/rates.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace qakin {

namespace {
constexpr double pi = std::numbers::pi;
}

double bose_occupation(double omega, double beta) {
    if (omega == 0.0) throw std::domain_error("bose_occupation: singular at omega = 0");
    return 1.0 / std::expm1(beta * omega);
}

double emission_weight(double omega, double beta) {
    const double x = beta * omega;
    if (std::abs(x) < 1e-12) return (1.0 + 0.5 * x) / beta;
    return omega / (-std::expm1(-x));
}

CouplingCoeffs coupling_coeffs(double g, double k, double kp) {
    const double half = 0.5 * (bogoliubov_angle(g, k) + bogoliubov_angle(g, kp));
    return {2.0 * std::cos(half), std::sin(half)};
}

double transition_rate(Band mu, Band nu, double g, double k, double q, const ModelParams& params) {
    const double m = static_cast<double>(mu);
    const double n = static_cast<double>(nu);
    const double omega = m * dispersion(g, k) + n * dispersion(g, q);
    const double angular = 1.0 - m * n * std::cos(m * bogoliubov_angle(g, k) - n * bogoliubov_angle(g, q));
    return (4.0 * pi * params.alpha / params.n_sites) * emission_weight(omega, params.beta) * angular;
}

RateTable build_rate_table(double g, const ModelParams& params, const MomentumGrid& grid) {
    const int n = grid.size();
    RateTable table;
    table.g = g;
    table.intra.resize(n, n);
    table.pair_gen.resize(n, n);
    table.pair_rec.resize(n, n);

    Eigen::VectorXd eps(n), cth(n), sth(n);
    for (int i = 0; i < n; ++i) {
        const double k = grid.momenta[i];
        eps[i] = dispersion(g, k);
        const double th = bogoliubov_angle(g, k);
        cth[i] = std::cos(th);
        sth[i] = std::sin(th);
    }
    const double pref = 4.0 * pi * params.alpha / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // cos(theta_i -+ theta_j) expanded to keep the +-k symmetry exact
            const double cos_sum = cth[i] * cth[j] - sth[i] * sth[j];
            const double cos_diff = cth[i] * cth[j] + sth[i] * sth[j];
            table.intra(i, j) = pref * emission_weight(eps[i] - eps[j], params.beta) * (1.0 + cos_sum);
            table.pair_rec(i, j) = pref * emission_weight(eps[i] + eps[j], params.beta) * (1.0 - cos_diff);
            table.pair_gen(i, j) = pref * emission_weight(-eps[i] - eps[j], params.beta) * (1.0 - cos_diff);
        }
    }
    return table;
}

double momentum_relaxation_rate(double g, const ModelParams& params) {
    if (!(g > 0.0 && g < 1.0))
        throw std::domain_error("momentum_relaxation_rate: requires 0 < g < 1");
    return (4.0 * params.alpha / params.beta) * std::sqrt((1.0 - g) / (params.beta * g));
}

double recombination_rate_exact(double g, const ModelParams& params, const MomentumGrid& grid) {
    const int n = grid.size();
    std::vector<double> eps(n), cth(n), sth(n), boltz(n);
    for (int i = 0; i < n; ++i) {
        const double k = grid.momenta[i];
        eps[i] = dispersion(g, k);
        const double th = bogoliubov_angle(g, k);
        cth[i] = std::cos(th);
        sth[i] = std::sin(th);
        boltz[i] = std::exp(-params.beta * eps[i]);
    }
    const double pref = 4.0 * pi * params.alpha / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double cos_diff = cth[i] * cth[j] + sth[i] * sth[j];
            row += emission_weight(eps[i] + eps[j], params.beta) * (1.0 - cos_diff) * boltz[j];
        }
        sum += pref * row * boltz[i];
    }
    const double n_th = thermal_density_exact(g, params.beta, grid);
    return sum / (n * n_th * n_th);
}

double recombination_rate_asymptotic(double g, const ModelParams& params) {
    if (!(g > 0.0)) throw std::domain_error("recombination_rate_asymptotic: requires g > 0");
    const double dg = std::abs(1.0 - g);
    if (params.beta * dg < thresholds::asym_beta_gap || params.beta * g < thresholds::asym_beta_gap)
        warn("recombination_rate_asymptotic: outside the regime beta >> 1-g, 1/g");
    return 8.0 * pi * params.alpha / (params.beta * g);
}

double diffusion_closed(double g, const ModelParams& params, double c_d) {
    if (!(g > 0.0 && g < 1.0))
        throw std::domain_error("diffusion_closed: requires 0 < g < 1");
    return c_d * (std::sqrt(params.beta) / params.alpha) * std::pow(g / (1.0 - g), 1.5);
}

namespace {

// Leading-order scattering rate density w0(k->q) = (4 alpha / beta) x/(1-e^{-x}),
// x = (K^2-Q^2)/2 in thermal-momentum units K = k/k_th.
double scale_free_rate(double x) {
    if (std::abs(x) < 1e-12) return 1.0 + 0.5 * x;
    if (x > 700.0) return x;
    return x / (-std::expm1(-x));
}

}  // namespace

DiffusionQuadrature diffusion_quadrature(double g, const ModelParams& params,
                                         double inner_tol, double outer_tol) {
    if (!(g > 0.0 && g < 1.0))
        throw std::domain_error("diffusion_quadrature: requires 0 < g < 1");
    using boost::math::quadrature::gauss_kronrod;

    const double k_th = std::sqrt((1.0 - g) / (params.beta * g));
    const double rate_unit = 4.0 * params.alpha / params.beta;  // prefactor of w0
    const double mass = effective_mass(g);
    // Integrands decay like exp(-K^2/2); +-10 thermal momenta is far past
    // double-precision support.
    const double k_lim = 10.0 * k_th;

    auto inv_tau_s = [&](double k) {
        const double cap_k = k / k_th;
        auto f = [&](double q) { return scale_free_rate(0.5 * (cap_k * cap_k - q * q / (k_th * k_th))); };
        double err = 0.0;
        // in q the kernel support extends a few k_th past |k|
        const double q_lim = std::max(std::abs(k), k_th) + 10.0 * k_th;
        const double val = gauss_kronrod<double, 15>::integrate(f, -q_lim, q_lim, 12, inner_tol, &err);
        if (!(err <= 10.0 * inner_tol * std::max(1.0, std::abs(val))))
            throw solver_error("diffusion_quadrature: inner quadrature did not converge (error " +
                               std::to_string(err) + ")");
        return rate_unit * val;  // w0 is already a density in q
    };

    const double norm = k_th * std::sqrt(2.0 * pi);  // int dk exp(-K^2/2)
    auto outer = [&](double k) {
        const double cap_k = k / k_th;
        const double velocity = k / mass;  // dE/dk in the parabolic band
        return std::exp(-0.5 * cap_k * cap_k) / norm * (velocity * velocity) / inv_tau_s(k);
    };
    double err = 0.0;
    const double d = gauss_kronrod<double, 31>::integrate(outer, -k_lim, k_lim, 12, outer_tol, &err);
    if (!(err <= 10.0 * outer_tol * std::max(1.0, std::abs(d))))
        throw solver_error("diffusion_quadrature: outer quadrature did not converge (error " +
                           std::to_string(err) + ")");

    DiffusionQuadrature result;
    result.d = d;
    result.c_d = d * params.alpha * std::pow((1.0 - g) / g, 1.5) / std::sqrt(params.beta);
    result.abs_error = err;
    return result;
}

}  // namespace qakin
