#include "qakin/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qakin {

namespace {
constexpr double pi = std::numbers::pi;
}

void ModelParams::validate() const {
    if (!(alpha > 0.0)) throw std::domain_error("ModelParams: alpha must be > 0");
    if (!(beta > 0.0)) throw std::domain_error("ModelParams: beta must be > 0");
    if (n_sites < 4 || n_sites % 2 != 0)
        throw std::domain_error("ModelParams: n_sites must be even and >= 4");
    if (omega_c > 1.0 && omega_cutoff > omega_c)
        throw std::domain_error("ModelParams: omega_cutoff must not exceed omega_c in the broadband regime");
    if (alpha >= thresholds::weak_coupling_alpha)
        warn("alpha = " + std::to_string(alpha) + " is not small; weak-coupling rates are unreliable");
}

MomentumGrid MomentumGrid::make(int n_sites) {
    if (n_sites < 4 || n_sites % 2 != 0)
        throw std::domain_error("MomentumGrid: n_sites must be even and >= 4");
    MomentumGrid grid;
    grid.momenta.resize(n_sites);
    for (int m = 0; m < n_sites; ++m)
        grid.momenta[m] = pi * (2.0 * m + 1.0 - n_sites) / n_sites;
    grid.weight = 1.0 / n_sites;
    return grid;
}

double dispersion(double g, double k) {
    // sqrt((g-cos k)^2 + sin^2 k) = sqrt(1 + g^2 - 2 g cos k)
    const double c = std::cos(k);
    return std::sqrt(std::fma(g, g, 1.0) - 2.0 * g * c);
}

double bogoliubov_angle(double g, double k) {
    const double s = std::sin(k);
    const double x = g - std::cos(k);
    if (s == 0.0 && x == 0.0)
        throw std::domain_error("bogoliubov_angle: singular at the critical point g=1, k=0");
    return std::atan2(s, x);
}

double gap(double g) {
    return 2.0 * std::abs(1.0 - g);
}

double effective_mass(double g) {
    if (!(g > 0.0 && g < 1.0))
        throw std::domain_error("effective_mass: requires 0 < g < 1");
    return (1.0 - g) / (2.0 * g);
}

double thermal_wavelength(double g, double beta) {
    if (!(g > 0.0 && g < 1.0) || !(beta > 0.0))
        throw std::domain_error("thermal_wavelength: requires 0 < g < 1 and beta > 0");
    return 2.0 * pi * std::sqrt(beta * g / (2.0 * (1.0 - g)));
}

double thermal_density_exact(double g, double beta, const MomentumGrid& grid) {
    double sum = 0.0;
    for (double k : grid.momenta) sum += std::exp(-beta * dispersion(g, k));
    return grid.weight * sum;
}

double thermal_density_asymptotic(double g, double beta) {
    const double dg = std::abs(1.0 - g);
    if (beta * dg < thresholds::asym_beta_gap)
        warn("thermal_density_asymptotic: beta|1-g| = " + std::to_string(beta * dg) +
             " < " + std::to_string(thresholds::asym_beta_gap) + ", outside the validity window");
    return detail::thermal_density_closed(g, beta);
}

namespace detail {
double thermal_density_closed(double g, double beta) {
    const double dg = std::abs(1.0 - g);
    return std::sqrt(dg / (2.0 * pi * beta * g)) * std::exp(-beta * dg);
}
}  // namespace detail

double kz_density(double v) {
    if (v < 0.0) throw std::domain_error("kz_density: v must be >= 0");
    return std::sqrt(v / (8.0 * pi));
}

}  // namespace qakin
