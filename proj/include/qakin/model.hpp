#pragma once

#include <vector>

#include "qakin/common.hpp"

namespace qakin {

/// Physical parameter bundle in reduced units (hbar = J = 1, beta = 2J/k_BT).
struct ModelParams {
    double alpha = 0.06;         ///< dimensionless Ohmic coupling strength
    double beta = 25.0;          ///< inverse temperature 2J/k_BT
    double omega_c = 10.0;       ///< bath cutoff frequency, units 2J/hbar
    double omega_cutoff = 10.0;  ///< polaron-transformation cutoff, units 2J/hbar
    int n_sites = 1024;          ///< momentum grid size N (even, >= 4)

    /// Throws std::domain_error on invariant violations; warns when the
    /// weak-coupling assumption (alpha << 1) is stretched.
    void validate() const;
};

/// Discrete fermion momenta k_m = pi(2m+1-N)/N, m = 0..N-1 (antiperiodic
/// sector: every +k is paired with -k, no k = 0 or k = pi mode).
struct MomentumGrid {
    std::vector<double> momenta;  // ascending in (-pi, pi)
    double weight = 0.0;          // band-sum normalization 1/N

    static MomentumGrid make(int n_sites);
    int size() const { return static_cast<int>(momenta.size()); }
};

/// Scaled dispersion eps_k = sqrt((g-cos k)^2 + sin^2 k); physical energy 2J eps_k.
double dispersion(double g, double k);

/// Rotation angle theta_k with tan(theta_k) = sin k / (g - cos k), taken as
/// atan2(sin k, g - cos k) so that cos(theta_k) = (g - cos k)/eps_k and
/// sin(theta_k) = sin k / eps_k hold exactly.  Singular at (g,k) = (1,0).
double bogoliubov_angle(double g, double k);

/// Spectral gap 2|1-g| in units of J.
double gap(double g);

/// Effective mass (1-g)/(2g) on the ferromagnetic side 0 < g < 1.
double effective_mass(double g);

/// Thermal de Broglie wavelength 2*pi*sqrt(beta*g / (2(1-g))), lattice units.
double thermal_wavelength(double g, double beta);

/// Thermal equilibrium density n_th = (1/N) sum_k exp(-beta eps_k).
double thermal_density_exact(double g, double beta, const MomentumGrid& grid);

/// Closed form sqrt(|1-g|/(2 pi beta g)) exp(-beta|1-g|).  Continued through
/// g = 1 via |1-g|; warns when beta|1-g| is below the validity threshold.
double thermal_density_asymptotic(double g, double beta);

/// Kibble-Zurek excitation density sqrt(v/(8 pi)) for a linear quench at rate v.
double kz_density(double v);

namespace detail {
/// thermal_density_asymptotic without the validity warning, for bulk
/// tabulation along trajectories.
double thermal_density_closed(double g, double beta);
}  // namespace detail

}  // namespace qakin
